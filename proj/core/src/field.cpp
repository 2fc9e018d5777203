#include "xwigner/field.hpp"

#include <algorithm>
#include <cmath>

#include "xwigner/errors.hpp"
#include "xwigner/parallel.hpp"

namespace xwigner {

const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::analytic: return "analytic";
        case Provenance::oracle: return "oracle";
        case Provenance::reconstructed: return "reconstructed";
    }
    return "unknown";
}

namespace {

void check_axis(const std::vector<double>& axis, const char* name) {
    if (axis.size() < 2) throw config_error(std::string("axis ") + name + " needs >= 2 points");
    const double step = axis[1] - axis[0];
    if (!(step > 0.0)) throw config_error(std::string("axis ") + name + " must increase");
    for (std::size_t i = 1; i < axis.size(); ++i) {
        const double s = axis[i] - axis[i - 1];
        if (std::fabs(s - step) > 1e-9 * std::fabs(step))
            throw config_error(std::string("axis ") + name + " must be uniform");
    }
}

double trap_weight(std::size_t i, std::size_t n, double h) {
    return (i == 0 || i + 1 == n) ? 0.5 * h : h;
}

} // namespace

void PhaseSpaceField::check() const {
    check_axis(x_axis, "x");
    check_axis(k_axis, "k");
    if (values.size() != nx() * nk())
        throw config_error("field values size does not match axes");
}

std::vector<double> make_axis(double lo, double hi, std::size_t n) {
    if (n < 2 || !(hi > lo)) throw config_error("axis needs n >= 2 and hi > lo");
    std::vector<double> axis(n);
    const double step = (hi - lo) / double(n - 1);
    for (std::size_t i = 0; i < n; ++i) axis[i] = lo + step * double(i);
    return axis;
}

bool lattice_index(const std::vector<double>& axis, double x, std::size_t& index) {
    const double h = axis[1] - axis[0];
    const double pos = (x - axis[0]) / h;
    const double rounded = std::round(pos);
    if (rounded < 0.0 || rounded >= double(axis.size())) return false;
    if (std::fabs(pos - rounded) > 1e-6) return false;
    index = std::size_t(rounded);
    return true;
}

PhaseSpaceField sample_field(const std::vector<double>& x_axis,
                             const std::vector<double>& k_axis,
                             const std::function<cdouble(double, double)>& fn,
                             Provenance provenance) {
    PhaseSpaceField f;
    f.x_axis = x_axis;
    f.k_axis = k_axis;
    f.provenance = provenance;
    f.values.resize(x_axis.size() * k_axis.size());
    f.check();
    parallel_for(x_axis.size(), [&](std::size_t ix) {
        const double x = x_axis[ix];
        cdouble* row = f.values.data() + ix * k_axis.size();
        for (std::size_t ik = 0; ik < k_axis.size(); ++ik) row[ik] = fn(x, k_axis[ik]);
    });
    return f;
}

double max_abs(const PhaseSpaceField& f) {
    double m = 0.0;
    for (const auto& v : f.values) m = std::max(m, std::abs(v));
    return m;
}

cdouble integrate_2d(const PhaseSpaceField& f) {
    const double hx = f.x_axis[1] - f.x_axis[0];
    const double hk = f.k_axis[1] - f.k_axis[0];
    cdouble total = 0.0;
    for (std::size_t ix = 0; ix < f.nx(); ++ix) {
        const double wx = trap_weight(ix, f.nx(), hx);
        cdouble row = 0.0;
        for (std::size_t ik = 0; ik < f.nk(); ++ik)
            row += trap_weight(ik, f.nk(), hk) * f.at(ix, ik);
        total += wx * row;
    }
    return total;
}

std::vector<cdouble> marginal_over_k(const PhaseSpaceField& f) {
    const double hk = f.k_axis[1] - f.k_axis[0];
    std::vector<cdouble> out(f.nx());
    for (std::size_t ix = 0; ix < f.nx(); ++ix) {
        cdouble acc = 0.0;
        for (std::size_t ik = 0; ik < f.nk(); ++ik)
            acc += trap_weight(ik, f.nk(), hk) * f.at(ix, ik);
        out[ix] = acc;
    }
    return out;
}

std::vector<cdouble> marginal_over_x(const PhaseSpaceField& f) {
    const double hx = f.x_axis[1] - f.x_axis[0];
    std::vector<cdouble> out(f.nk(), cdouble(0.0));
    for (std::size_t ix = 0; ix < f.nx(); ++ix) {
        const double wx = trap_weight(ix, f.nx(), hx);
        for (std::size_t ik = 0; ik < f.nk(); ++ik) out[ik] += wx * f.at(ix, ik);
    }
    return out;
}

PhaseSpaceField quasi_prob(const PhaseSpaceField& field, cdouble ov) {
    if (std::abs(ov) < 1e-12)
        throw numeric_error("quasi_prob: degenerate overlap (|<phi|psi>| < 1e-12); "
                            "rho is defined only for non-orthogonal states");
    PhaseSpaceField out = field;
    for (auto& v : out.values) v /= ov;
    return out;
}

} // namespace xwigner
