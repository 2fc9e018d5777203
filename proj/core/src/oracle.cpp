#include "xwigner/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "xwigner/errors.hpp"
#include "xwigner/parallel.hpp"

namespace xwigner {

namespace {

constexpr double kPi = std::numbers::pi;

struct Support {
    std::size_t lo = 0, hi = 0; // inclusive index range of non-negligible samples
    double peak = 0.0;
};

Support support_of(const SampledWavefunction& wf) {
    Support s;
    for (const auto& v : wf.values) s.peak = std::max(s.peak, std::abs(v));
    const double cut = s.peak * 1e-18;
    std::size_t lo = 0, hi = wf.size() - 1;
    while (lo < hi && std::abs(wf.values[lo]) <= cut) ++lo;
    while (hi > lo && std::abs(wf.values[hi]) <= cut) --hi;
    s.lo = lo;
    s.hi = hi;
    return s;
}

void require_shared_axis(const SampledWavefunction& a, const SampledWavefunction& b) {
    if (a.size() != b.size() || a.size() < 4)
        throw config_error("oracle: operands must share one axis (size mismatch)");
    if (a.x_axis.front() != b.x_axis.front() || a.x_axis.back() != b.x_axis.back())
        throw config_error("oracle: operands must share one axis (range mismatch)");
}

void require_decay(const SampledWavefunction& wf, const Support& s, const char* name) {
    const double cut = 1e-12 * s.peak;
    if (std::abs(wf.values.front()) > cut || std::abs(wf.values.back()) > cut)
        throw numeric_error(std::string("oracle: ") + name +
                            " has not decayed below 1e-12 of its peak at the axis ends "
                            "(truncation)");
}

cdouble lerp(const SampledWavefunction& wf, double x) {
    const double h = wf.step();
    const double pos = (x - wf.x_axis.front()) / h;
    if (pos <= 0.0 || pos >= double(wf.size() - 1)) {
        // outside: treat as zero (operands are required to have decayed)
        return cdouble(0.0);
    }
    const std::size_t i = std::size_t(pos);
    const double f = pos - double(i);
    return wf.values[i] * (1.0 - f) + wf.values[i + 1] * f;
}

struct CwResult {
    cdouble value;
    double abs_scale; // (h/pi) * sum |terms|, natural magnitude of the sum
};

// (1/pi) Int du e^{-2iku} phi*(x+u) psi(x-u) on the shared lattice.
CwResult cw_point(const SampledWavefunction& phi, const SampledWavefunction& psi,
                  const Support& sphi, const Support& spsi, double x, double k) {
    const double h = phi.step();
    const std::size_t n = phi.size();

    cdouble acc = 0.0;
    double abs_acc = 0.0;

    std::size_t m = 0;
    const double mpos = (x - phi.x_axis.front()) / h;
    const double mround = std::round(mpos);
    const bool on_lattice =
        mround >= 0.0 && mround < double(n) && std::fabs(mpos - mround) <= 1e-6;

    if (on_lattice) {
        m = std::size_t(mround);
        // j limits: phi index m+j inside its support, psi index m-j inside its.
        const long jlo = std::max<long>(long(sphi.lo) - long(m), long(m) - long(spsi.hi));
        const long jhi = std::min<long>(long(sphi.hi) - long(m), long(m) - long(spsi.lo));
        if (jlo > jhi) return {cdouble(0.0), 0.0};
        const cdouble rot = std::polar(1.0, -2.0 * k * h);
        cdouble ph = std::polar(1.0, -2.0 * k * double(jlo) * h);
        for (long j = jlo; j <= jhi; ++j) {
            const cdouble term = std::conj(phi.values[std::size_t(long(m) + j)]) *
                                 psi.values[std::size_t(long(m) - j)] * ph;
            const double w = (j == jlo || j == jhi) ? 0.5 : 1.0;
            acc += w * term;
            abs_acc += w * (std::fabs(term.real()) + std::fabs(term.imag()));
            ph *= rot;
        }
    } else {
        // off-lattice: linear interpolation of both factors at x +- u
        const double lo = phi.x_axis.front(), hi = phi.x_axis.back();
        const double umax = std::min(hi - x, x - lo);
        if (!(umax > 0.0)) return {cdouble(0.0), 0.0};
        const long J = long(umax / h);
        const cdouble rot = std::polar(1.0, -2.0 * k * h);
        cdouble ph = std::polar(1.0, 2.0 * k * double(J) * h);
        for (long j = -J; j <= J; ++j) {
            const double u = double(j) * h;
            const cdouble term = std::conj(lerp(phi, x + u)) * lerp(psi, x - u) * ph;
            const double w = (j == -J || j == J) ? 0.5 : 1.0;
            acc += w * term;
            abs_acc += w * (std::fabs(term.real()) + std::fabs(term.imag()));
            ph *= rot;
        }
    }
    const double scale = h / kPi;
    return {acc * scale, abs_acc * scale};
}

} // namespace

double SampledWavefunction::norm() const {
    const double h = step();
    double acc = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        const double w = (i == 0 || i + 1 == size()) ? 0.5 : 1.0;
        acc += w * std::norm(values[i]);
    }
    return std::sqrt(acc * h);
}

SampledWavefunction sample(const GaussianState& s, const std::vector<double>& axis) {
    SampledWavefunction wf;
    wf.x_axis = axis;
    wf.values.resize(axis.size());
    for (std::size_t i = 0; i < axis.size(); ++i) wf.values[i] = s.eval(axis[i]);
    return wf;
}

SampledWavefunction sample(const std::function<cdouble(double)>& fn,
                           const std::vector<double>& axis) {
    SampledWavefunction wf;
    wf.x_axis = axis;
    wf.values.resize(axis.size());
    for (std::size_t i = 0; i < axis.size(); ++i) wf.values[i] = fn(axis[i]);
    return wf;
}

std::vector<double> commensurate_axis(double field_step, double half_span, double max_step) {
    if (!(field_step > 0.0 && half_span > 0.0 && max_step > 0.0))
        throw config_error("commensurate_axis: positive step and span required");
    const long q = std::max<long>(1, long(std::ceil(field_step / max_step)));
    const double h = field_step / double(q);
    const long half = long(std::ceil(half_span / h));
    std::vector<double> axis(std::size_t(2 * half + 1));
    for (long i = -half; i <= half; ++i) axis[std::size_t(i + half)] = double(i) * h;
    return axis;
}

cdouble cw_quadrature(const SampledWavefunction& phi, const SampledWavefunction& psi,
                      double x, double k) {
    require_shared_axis(phi, psi);
    const Support sphi = support_of(phi);
    const Support spsi = support_of(psi);
    require_decay(phi, sphi, "phi");
    require_decay(psi, spsi, "psi");
    return cw_point(phi, psi, sphi, spsi, x, k).value;
}

double wigner_quadrature(const SampledWavefunction& psi, double x, double k) {
    const Support s = support_of(psi);
    require_decay(psi, s, "psi");
    const CwResult r = cw_point(psi, psi, s, s, x, k);
    if (std::fabs(r.value.imag()) > 1e-12 * std::max(1e-300, r.abs_scale))
        throw numeric_error("wigner_quadrature: imaginary residue above 1e-12");
    return r.value.real();
}

cdouble overlap(const SampledWavefunction& phi, const SampledWavefunction& psi) {
    require_shared_axis(phi, psi);
    const double h = phi.step();
    cdouble acc = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        const double w = (i == 0 || i + 1 == phi.size()) ? 0.5 : 1.0;
        acc += w * std::conj(phi.values[i]) * psi.values[i];
    }
    return acc * h;
}

SampledWavefunction fourier_transform(const SampledWavefunction& psi,
                                      const std::vector<double>& k_axis) {
    const Support s = support_of(psi);
    require_decay(psi, s, "psi");
    const double h = psi.step();
    SampledWavefunction out;
    out.x_axis = k_axis;
    out.values.resize(k_axis.size());
    const double pref = h / std::sqrt(2.0 * kPi);
    parallel_for(k_axis.size(), [&](std::size_t ik) {
        const double k = k_axis[ik];
        const cdouble rot = std::polar(1.0, -k * h);
        cdouble ph = std::polar(1.0, -k * psi.x_axis[s.lo]);
        cdouble acc = 0.0;
        for (std::size_t i = s.lo; i <= s.hi; ++i) {
            const double w = (i == 0 || i + 1 == psi.size()) ? 0.5 : 1.0;
            acc += w * psi.values[i] * ph;
            ph *= rot;
        }
        out.values[ik] = acc * pref;
    });
    return out;
}

SampledWavefunction fourier_transform(const SampledWavefunction& psi) {
    const double kmax = kPi / (2.0 * psi.step());
    std::vector<double> k_axis(psi.size());
    const double step = 2.0 * kmax / double(psi.size() - 1);
    for (std::size_t i = 0; i < psi.size(); ++i) k_axis[i] = -kmax + step * double(i);
    return fourier_transform(psi, k_axis);
}

SampledWavefunction propagate_kernel(const PhysicalConfig& cfg,
                                     const SampledWavefunction& source, double dt,
                                     const std::vector<double>& target_axis,
                                     const PropagateOptions& opts) {
    cfg.validate();
    if (!(dt > 0.0)) throw config_error("invalid config: dt must be > 0");
    const double h = source.step();
    const double amp = std::sqrt(cfg.mass / (2.0 * kPi * cfg.hbar * dt));
    const double alpha = cfg.mass / (2.0 * cfg.hbar * dt);

    std::vector<double> window(source.size(), 1.0);
    if (opts.damp_edges) {
        const double half = 0.5 * (source.x_axis.back() - source.x_axis.front());
        const double mid = 0.5 * (source.x_axis.back() + source.x_axis.front());
        const double start = opts.window_start * half;
        const double width = opts.window_width * half;
        for (std::size_t i = 0; i < source.size(); ++i) {
            const double a = std::fabs(source.x_axis[i] - mid);
            if (a > start) {
                const double e = (a - start) / width;
                window[i] = std::exp(-e * e);
            }
        }
    }

    SampledWavefunction out;
    out.x_axis = target_axis;
    out.values.resize(target_axis.size());
    parallel_for(target_axis.size(), [&](std::size_t j) {
        const double x = target_axis[j];
        cdouble acc = 0.0;
        for (std::size_t i = 0; i < source.size(); ++i) {
            const double w = (i == 0 || i + 1 == source.size()) ? 0.5 : 1.0;
            const double u = x - source.x_axis[i];
            const double phase = alpha * u * u - kPi / 4.0;
            acc += (w * window[i]) * source.values[i] * std::exp(cdouble(0.0, phase));
        }
        out.values[j] = acc * amp * h;
    });
    return out;
}

namespace {

PhaseSpaceField quadrature_field(const SampledWavefunction& phi, const SampledWavefunction& psi,
                                 const std::vector<double>& x_axis,
                                 const std::vector<double>& k_axis) {
    require_shared_axis(phi, psi);
    const Support sphi = support_of(phi);
    const Support spsi = support_of(psi);
    require_decay(phi, sphi, "phi");
    require_decay(psi, spsi, "psi");

    PhaseSpaceField f;
    f.x_axis = x_axis;
    f.k_axis = k_axis;
    f.provenance = Provenance::oracle;
    f.values.resize(x_axis.size() * k_axis.size());
    f.check();
    parallel_for(x_axis.size(), [&](std::size_t ix) {
        cdouble* row = f.values.data() + ix * k_axis.size();
        for (std::size_t ik = 0; ik < k_axis.size(); ++ik)
            row[ik] = cw_point(phi, psi, sphi, spsi, x_axis[ix], k_axis[ik]).value;
    });
    return f;
}

} // namespace

PhaseSpaceField cw_field_quadrature(const SampledWavefunction& phi,
                                    const SampledWavefunction& psi,
                                    const std::vector<double>& x_axis,
                                    const std::vector<double>& k_axis) {
    return quadrature_field(phi, psi, x_axis, k_axis);
}

PhaseSpaceField wigner_field_quadrature(const SampledWavefunction& psi,
                                        const std::vector<double>& x_axis,
                                        const std::vector<double>& k_axis) {
    return quadrature_field(psi, psi, x_axis, k_axis);
}

} // namespace xwigner
