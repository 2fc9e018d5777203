#include "xwigner/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "xwigner/errors.hpp"
#include "xwigner/parallel.hpp"
#include "xwigner/propagation.hpp"

namespace xwigner {

namespace {

constexpr double kPi = std::numbers::pi;

void require_window(const std::vector<double>& tau_list) {
    if (tau_list.size() < 2) throw config_error("tau window needs >= 2 samples");
    for (std::size_t i = 0; i < tau_list.size(); ++i) {
        if (!(tau_list[i] > 0.0)) throw config_error("tau window must be positive");
        if (i > 0 && !(tau_list[i] > tau_list[i - 1]))
            throw config_error("tau window must be strictly increasing");
    }
}

double lerp_row(const std::vector<double>& axis, const double* row, double x) {
    const double h = axis[1] - axis[0];
    const double pos = (x - axis.front()) / h;
    if (pos <= 0.0 || pos >= double(axis.size() - 1)) return 0.0;
    const std::size_t i = std::size_t(pos);
    const double f = pos - double(i);
    return row[i] * (1.0 - f) + row[i + 1] * f;
}

Sinogram make_time_sinogram(const PhysicalConfig& cfg, const std::vector<double>& x_axis,
                            const std::vector<double>& tau_list, SinogramKind kind) {
    cfg.validate();
    require_window(tau_list);
    Sinogram s;
    s.x_axis = x_axis;
    s.row_axis = tau_list;
    s.row_kind = RowAxisKind::time;
    s.kind = kind;
    s.values.resize(tau_list.size() * x_axis.size());

    std::vector<std::string> row_error(tau_list.size());
    parallel_for(tau_list.size(), [&](std::size_t r) {
        PhysicalConfig row_cfg = cfg;
        row_cfg.tau = tau_list[r];
        const ScreenEvaluator ev(row_cfg);
        double* row = s.values.data() + r * x_axis.size();
        if (kind == SinogramKind::intensity) {
            for (std::size_t i = 0; i < x_axis.size(); ++i) row[i] = ev.intensity(x_axis[i]);
        } else {
            // The subtraction form carries rounding noise of order
            // eps * (I1 + I2) pointwise, so the 1e-8 agreement bound is taken
            // against the local single-slit magnitude plus the row peak.
            double worst_rel = 0.0;
            for (std::size_t i = 0; i < x_axis.size(); ++i) {
                const double x = x_axis[i];
                const double sub = ev.interference(x);
                const double closed = ev.interference_closed_form(x);
                row[i] = sub;
                const double scale = std::norm(ev.psi1(x)) + std::norm(ev.psi2(x));
                worst_rel =
                    std::max(worst_rel, std::fabs(sub - closed) / std::max(scale, 1e-300));
            }
            if (worst_rel > 1e-8) {
                std::ostringstream os;
                os << "interference row tau=" << tau_list[r]
                   << ": subtraction and closed form disagree by " << worst_rel
                   << " of local magnitude (> 1e-8)";
                row_error[r] = os.str();
            }
        }
    });
    for (const auto& e : row_error)
        if (!e.empty()) throw numeric_error("interference_term: " + e);
    return s;
}

} // namespace

Sinogram intensity_sinogram(const PhysicalConfig& cfg, const std::vector<double>& x_axis,
                            const std::vector<double>& tau_list) {
    return make_time_sinogram(cfg, x_axis, tau_list, SinogramKind::intensity);
}

Sinogram interference_term(const PhysicalConfig& cfg, const std::vector<double>& x_axis,
                           const std::vector<double>& tau_list) {
    return make_time_sinogram(cfg, x_axis, tau_list, SinogramKind::interference);
}

AngleMap angle_map(const PhysicalConfig& cfg, const std::vector<double>& tau_list,
                   double scale_x) {
    cfg.validate();
    require_window(tau_list);

    AngleMap map;
    if (scale_x > 0.0) {
        map.scale_x = scale_x;
    } else {
        PhysicalConfig mid = cfg;
        mid.tau = std::sqrt(tau_list.front() * tau_list.back());
        map.scale_x = slit_evolve(mid).width; // B(t, tau_mid)
    }
    map.scale_k = 1.0 / map.scale_x;
    map.chirp = free_evolve(cfg, cfg.t).chirp;

    const double s2 = map.scale_x * map.scale_x;
    map.rows.reserve(tau_list.size());
    for (double tau : tau_list) {
        AngleMap::Row row;
        row.tau = tau;
        row.theta = std::atan(cfg.hbar * tau / (cfg.mass * s2));
        row.stretch = map.scale_x / std::cos(row.theta);
        if (!map.rows.empty() && !(row.theta > map.rows.back().theta))
            throw numeric_error("angle_map: theta(tau) not strictly increasing over window");
        map.rows.push_back(row);
    }
    return map;
}

double default_tomography_scale(const PhysicalConfig& cfg) {
    return slit_plane_geometry(cfg).width;
}

std::vector<double> tau_window_for_coverage(const PhysicalConfig& cfg, double scale_x,
                                            double theta_lo, double theta_hi, std::size_t n) {
    cfg.validate();
    if (!(scale_x > 0.0)) throw config_error("tau_window_for_coverage: scale_x must be > 0");
    if (!(theta_lo > 0.0 && theta_hi > theta_lo && theta_hi < kPi / 2.0) || n < 2)
        throw config_error("tau_window_for_coverage: need 0 < theta_lo < theta_hi < pi/2, n >= 2");

    const double ms2_over_h = cfg.mass * scale_x * scale_x / cfg.hbar;
    std::vector<double> taus(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double theta = theta_lo + (theta_hi - theta_lo) * double(i) / double(n - 1);
        taus[i] = ms2_over_h * std::tan(theta);
    }
    return taus;
}

Sinogram map_to_projections(const Sinogram& sino, const AngleMap& map,
                            const std::vector<double>& rho_axis) {
    if (sino.row_kind != RowAxisKind::time)
        throw config_error("map_to_projections: sinogram rows must be indexed by tau");
    if (sino.rows() != map.rows.size())
        throw config_error("map_to_projections: sinogram and angle map row counts differ");
    for (std::size_t r = 0; r < sino.rows(); ++r)
        if (std::fabs(sino.row_axis[r] - map.rows[r].tau) >
            1e-12 * std::max(1.0, std::fabs(map.rows[r].tau)))
            throw config_error("map_to_projections: tau values disagree with the angle map");

    Sinogram out;
    out.x_axis = rho_axis;
    out.row_axis.resize(map.rows.size());
    out.row_kind = RowAxisKind::angle;
    out.kind = sino.kind;
    out.values.resize(map.rows.size() * rho_axis.size());
    for (std::size_t r = 0; r < map.rows.size(); ++r) {
        out.row_axis[r] = map.rows[r].theta;
        const double stretch = map.rows[r].stretch;
        const double* in = sino.values.data() + r * sino.cols();
        double* dst = out.values.data() + r * rho_axis.size();
        for (std::size_t i = 0; i < rho_axis.size(); ++i)
            dst[i] = stretch * lerp_row(sino.x_axis, in, stretch * rho_axis[i]);
    }
    return out;
}

Sinogram synthesize_projections(const PhysicalConfig& cfg, const AngleMap& map,
                                const std::vector<double>& rho_axis, SinogramKind kind) {
    cfg.validate();
    Sinogram out;
    out.x_axis = rho_axis;
    out.row_axis.resize(map.rows.size());
    out.row_kind = RowAxisKind::angle;
    out.kind = kind;
    out.values.resize(map.rows.size() * rho_axis.size());
    for (std::size_t r = 0; r < map.rows.size(); ++r) out.row_axis[r] = map.rows[r].theta;

    parallel_for(map.rows.size(), [&](std::size_t r) {
        PhysicalConfig row_cfg = cfg;
        row_cfg.tau = map.rows[r].tau;
        const ScreenEvaluator ev(row_cfg);
        const double stretch = map.rows[r].stretch;
        double* dst = out.values.data() + r * rho_axis.size();
        for (std::size_t i = 0; i < rho_axis.size(); ++i) {
            const double x = stretch * rho_axis[i];
            dst[i] = stretch * (kind == SinogramKind::intensity ? ev.intensity(x)
                                                                : ev.interference(x));
        }
    });
    return out;
}

namespace {

// Hann-windowed ramp kernel: H[l] = (1/pi) Int_0^{nyq} nu w(nu) cos(nu l drho) dnu.
std::vector<double> ramp_kernel(std::size_t n, double drho) {
    const double nyq = kPi / drho;
    const std::size_t quad_n = 4096;
    const double dnu = nyq / double(quad_n);
    std::vector<double> kernel(n, 0.0);
    for (std::size_t l = 0; l < n; ++l) {
        double acc = 0.0;
        for (std::size_t q = 0; q <= quad_n; ++q) {
            const double nu = dnu * double(q);
            const double w = (q == 0 || q == quad_n) ? 0.5 : 1.0;
            const double hann = 0.5 * (1.0 + std::cos(kPi * nu / nyq));
            acc += w * nu * hann * std::cos(nu * double(l) * drho);
        }
        kernel[l] = acc * dnu / kPi;
    }
    return kernel;
}

} // namespace

PhaseSpaceField inverse_radon(const Sinogram& sino, const std::vector<double>& x_axis,
                              const std::vector<double>& k_axis, const FbpOptions& opts) {
    if (sino.row_kind != RowAxisKind::angle)
        throw config_error("inverse_radon: sinogram must be theta-mapped first");
    if (sino.rows() < 2) throw config_error("inverse_radon: need >= 2 projections");

    const std::size_t nrho = sino.cols();
    const double drho = sino.x_axis[1] - sino.x_axis[0];
    const double rho0 = sino.x_axis.front();

    // Assemble the working set of (theta, row) pairs. Completion fills the
    // (pi/2, pi) half from the sheared-mirror symmetry
    // W(x, -k + 2 ct x) = W(x, k) (dimensionless frame), whose Radon form is
    //   R(pi + atan2(-sin a, cos a + 2 ct sin a), rho) = lambda R(a, -lambda rho),
    // lambda = |(cos a + 2 ct sin a, -sin a)|. ct = 0 is the plain mirror of
    // a real even object.
    std::vector<std::pair<double, const double*>> rows;
    std::vector<std::vector<double>> completed;
    rows.reserve(sino.rows() * 2);
    completed.reserve(sino.rows());
    for (std::size_t r = 0; r < sino.rows(); ++r)
        rows.emplace_back(sino.row_axis[r], sino.values.data() + r * nrho);
    if (opts.mirror_completion) {
        const double ct = opts.mirror_chirp;
        for (std::size_t r = 0; r < sino.rows(); ++r) {
            const double a = sino.row_axis[r];
            const double nx = std::cos(a) + 2.0 * ct * std::sin(a);
            const double nk = -std::sin(a);
            const double lambda = std::hypot(nx, nk);
            const double mirrored = kPi + std::atan2(nk, nx);
            const double* src = sino.values.data() + r * nrho;
            std::vector<double> vals(nrho);
            for (std::size_t i = 0; i < nrho; ++i)
                vals[i] = lambda * lerp_row(sino.x_axis, src, -lambda * sino.x_axis[i]);
            completed.push_back(std::move(vals));
            rows.emplace_back(mirrored, completed.back().data());
        }
    }
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    rows.erase(std::unique(rows.begin(), rows.end(),
                           [](const auto& a, const auto& b) {
                               return std::fabs(a.first - b.first) < 1e-12;
                           }),
               rows.end());

    // Circular coverage of [0, pi): the wrap gap joins the two ends.
    double max_gap = rows.front().first + kPi - rows.back().first;
    for (std::size_t r = 1; r < rows.size(); ++r)
        max_gap = std::max(max_gap, rows[r].first - rows[r - 1].first);
    if (max_gap > opts.max_gap) {
        std::ostringstream os;
        os << "inverse_radon: insufficient angular coverage: span ["
           << rows.front().first * 180.0 / kPi << " deg, " << rows.back().first * 180.0 / kPi
           << " deg] leaves a gap of " << max_gap * 180.0 / kPi << " deg (limit "
           << opts.max_gap * 180.0 / kPi << " deg)";
        throw numeric_error(os.str());
    }

    // Ramp-filter every projection.
    const std::vector<double> kernel = ramp_kernel(nrho, drho);
    std::vector<double> filtered(rows.size() * nrho);
    parallel_for(rows.size(), [&](std::size_t r) {
        const double* p = rows[r].second;
        double* q = filtered.data() + r * nrho;
        for (std::size_t j = 0; j < nrho; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < nrho; ++i)
                acc += p[i] * kernel[std::size_t(std::labs(long(j) - long(i)))];
            q[j] = acc * drho;
        }
    });

    // Trapezoid weights on the projective circle; the 1/(2pi) completes the
    // 1/(4 pi^2) of the inversion formula (the other half lives in the ramp
    // kernel).
    std::vector<double> weight(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const double prev = (r == 0) ? rows.back().first - kPi : rows[r - 1].first;
        const double next = (r + 1 == rows.size()) ? rows.front().first + kPi : rows[r + 1].first;
        weight[r] = 0.5 * (next - prev) / (2.0 * kPi);
    }

    PhaseSpaceField out;
    out.x_axis = x_axis;
    out.k_axis = k_axis;
    out.provenance = Provenance::reconstructed;
    out.values.resize(x_axis.size() * k_axis.size());
    out.check();

    std::vector<double> cos_t(rows.size()), sin_t(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        cos_t[r] = std::cos(rows[r].first);
        sin_t[r] = std::sin(rows[r].first);
    }

    parallel_for(x_axis.size(), [&](std::size_t ix) {
        const double x = x_axis[ix];
        cdouble* dst = out.values.data() + ix * k_axis.size();
        for (std::size_t ik = 0; ik < k_axis.size(); ++ik) {
            const double k = k_axis[ik];
            double acc = 0.0;
            for (std::size_t r = 0; r < rows.size(); ++r) {
                const double rho = x * cos_t[r] + k * sin_t[r];
                const double pos = (rho - rho0) / drho;
                if (pos <= 0.0 || pos >= double(nrho - 1)) continue;
                const std::size_t i = std::size_t(pos);
                const double f = pos - double(i);
                const double* q = filtered.data() + r * nrho;
                acc += weight[r] * (q[i] * (1.0 - f) + q[i + 1] * f);
            }
            dst[ik] = cdouble(acc, 0.0);
        }
    });
    return out;
}

namespace {

void require_symmetric(const std::vector<double>& axis, const char* name) {
    const std::size_t n = axis.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (std::fabs(axis[i] + axis[n - 1 - i]) > 1e-9 * (std::fabs(axis[i]) + 1e-30))
            throw config_error(std::string("reconstruct: ") + name +
                               " axis must be symmetric about 0");
    }
}

ReconstructionResult reconstruct_impl(const PhysicalConfig& cfg,
                                      const std::vector<double>& tau_list,
                                      const std::vector<double>& x_axis,
                                      const std::vector<double>& k_axis, double scale_x,
                                      SinogramKind kind) {
    require_symmetric(k_axis, "k");
    ReconstructionResult res;
    res.map = angle_map(cfg, tau_list, scale_x);
    res.theta_span = res.map.theta_max() - res.map.theta_min();
    const double s = res.map.scale_x;

    // rho grid: cover both the requested grid and the slit-plane object
    // (including its chirp shear), and resolve the interference oscillation.
    const SlitPlaneGeometry g = slit_plane_geometry(cfg);
    const double x_obj_m = 0.5 * g.separation + 6.0 * g.width;
    const double x_obj = x_obj_m / s;
    const double k_obj = (6.0 / g.width + std::fabs(res.map.chirp) * x_obj_m) * s;
    const double x_grid = std::max(std::fabs(x_axis.front()), std::fabs(x_axis.back())) / s;
    const double k_grid = std::max(std::fabs(k_axis.front()), std::fabs(k_axis.back())) * s;
    const double rho_max =
        1.05 * std::hypot(std::max(x_obj, x_grid), std::max(k_obj, k_grid));
    double feature = g.width / s; // dimensionless envelope width
    if (g.separation > 0.0)
        feature = std::min(feature, 2.0 * kPi * s / g.separation / 3.0);
    std::size_t nrho = std::size_t(std::ceil(2.0 * rho_max / (feature / 10.0))) + 1;
    nrho = std::max<std::size_t>(nrho, 129);
    const std::vector<double> rho_axis = make_axis(-rho_max, rho_max, nrho);

    const Sinogram proj = synthesize_projections(cfg, res.map, rho_axis, kind);

    std::vector<double> x_tilde(x_axis.size()), k_tilde(k_axis.size());
    for (std::size_t i = 0; i < x_axis.size(); ++i) x_tilde[i] = x_axis[i] / s;
    for (std::size_t i = 0; i < k_axis.size(); ++i) k_tilde[i] = k_axis[i] * s;
    FbpOptions opts;
    opts.mirror_chirp = res.map.mirror_chirp();
    PhaseSpaceField fbp = inverse_radon(proj, x_tilde, k_tilde, opts);

    // Undo the dimensionless relabeling: W_phys(x, k) = W_tilde(x/s, -k s).
    // The k sign flip pairs the e^{-iky} transform convention with the
    // positive-angle shear; implemented via the symmetric k grid.
    res.field.x_axis = x_axis;
    res.field.k_axis = k_axis;
    res.field.provenance = Provenance::reconstructed;
    res.field.values.resize(x_axis.size() * k_axis.size());
    const std::size_t nk = k_axis.size();
    const double post = (kind == SinogramKind::interference) ? 0.5 : 1.0;
    for (std::size_t ix = 0; ix < x_axis.size(); ++ix)
        for (std::size_t ik = 0; ik < nk; ++ik)
            res.field.at(ix, ik) = post * fbp.at(ix, nk - 1 - ik);
    return res;
}

} // namespace

ReconstructionResult reconstruct_wigner(const PhysicalConfig& cfg,
                                        const std::vector<double>& tau_list,
                                        const std::vector<double>& x_axis,
                                        const std::vector<double>& k_axis, double scale_x) {
    return reconstruct_impl(cfg, tau_list, x_axis, k_axis, scale_x, SinogramKind::intensity);
}

ReconstructionResult reconstruct_cw(const PhysicalConfig& cfg,
                                    const std::vector<double>& tau_list,
                                    const std::vector<double>& x_axis,
                                    const std::vector<double>& k_axis, double scale_x) {
    return reconstruct_impl(cfg, tau_list, x_axis, k_axis, scale_x,
                            SinogramKind::interference);
}

double l2_relative_error(const PhaseSpaceField& a, const PhaseSpaceField& b, double x_cut,
                         double k_cut) {
    if (a.nx() != b.nx() || a.nk() != b.nk())
        throw config_error("l2_relative_error: field shapes differ");
    double num = 0.0, den = 0.0;
    for (std::size_t ix = 0; ix < a.nx(); ++ix) {
        if (std::fabs(a.x_axis[ix]) > x_cut) continue;
        for (std::size_t ik = 0; ik < a.nk(); ++ik) {
            if (std::fabs(a.k_axis[ik]) > k_cut) continue;
            num += std::norm(a.at(ix, ik) - b.at(ix, ik));
            den += std::norm(b.at(ix, ik));
        }
    }
    if (den == 0.0) throw numeric_error("l2_relative_error: reference field is zero on region");
    return std::sqrt(num / den);
}

} // namespace xwigner
