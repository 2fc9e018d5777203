#include "xwigner/states.hpp"

#include <cmath>
#include <numbers>

#include "xwigner/errors.hpp"

namespace xwigner {

namespace {
constexpr double kPi = std::numbers::pi;
}

cdouble GaussianState::eval(double x) const {
    const double u = x - center;
    const double re = -u * u / (2.0 * width * width);
    const double im = 0.5 * chirp * u * u + tilt * x + global_phase;
    return norm * std::exp(cdouble(re, im));
}

GaussianState make_initial_state(const PhysicalConfig& cfg) {
    cfg.validate();
    GaussianState s;
    s.norm = 1.0 / std::sqrt(cfg.sigma0 * std::sqrt(kPi));
    s.center = 0.0;
    s.width = cfg.sigma0;
    s.chirp = cfg.gamma / (cfg.sigma0 * cfg.sigma0);
    s.tilt = 0.0;
    s.global_phase = 0.0;
    return s;
}

CovarianceReport covariance(const PhysicalConfig& cfg) {
    cfg.validate();
    const double g = cfg.gamma;
    CovarianceReport r;
    r.sigma_xx = cfg.sigma0 / std::sqrt(2.0);
    r.sigma_pp = std::sqrt(1.0 + g * g) * cfg.hbar / (std::sqrt(2.0) * cfg.sigma0);
    r.sigma_xp = cfg.hbar * g / 2.0;
    r.corr_r = g / std::sqrt(1.0 + g * g);
    return r;
}

QuadratureVariances quadrature_variances(const PhysicalConfig& cfg, double theta_rot) {
    cfg.validate();
    const double g = cfg.gamma;
    const double s = std::sin(theta_rot);
    const double c = std::cos(theta_rot);
    QuadratureVariances v;
    v.var_x1 = 0.5 * (1.0 + g * 2.0 * s * c + g * g * s * s);
    v.var_x2 = 0.5 * (1.0 - g * 2.0 * s * c + g * g * c * c);
    return v;
}

double gamma_from_correlation(double corr_r) {
    if (!(std::fabs(corr_r) < 1.0))
        throw config_error("invalid config: corr_r must satisfy |r| < 1");
    return corr_r / std::sqrt(1.0 - corr_r * corr_r);
}

} // namespace xwigner
