#include "xwigner/propagation.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "xwigner/errors.hpp"

namespace xwigner {

namespace {

constexpr double kPi = std::numbers::pi;

double curvature_from_chirp(const PhysicalConfig& cfg, double chirp) {
    if (chirp == 0.0) return std::numeric_limits<double>::infinity();
    return cfg.mass / (cfg.hbar * chirp);
}

} // namespace

double aging_time(const PhysicalConfig& cfg) {
    cfg.validate();
    return cfg.mass * cfg.sigma0 * cfg.sigma0 / cfg.hbar;
}

double FreeEvolution::curvature_time(const PhysicalConfig& cfg) const {
    return curvature_from_chirp(cfg, chirp);
}

FreeEvolution free_evolve(const PhysicalConfig& cfg, double t) {
    cfg.validate();
    if (!(t >= 0.0)) throw config_error("invalid config: t must be >= 0");

    const double g = cfg.gamma;
    const double tau0 = aging_time(cfg);
    // T = t^2 + tau0^2 + 2 t tau0 g + t^2 g^2; positive for every real g.
    const double T = t * t + tau0 * tau0 + 2.0 * t * tau0 * g + t * t * g * g;
    const double spread = t * (1.0 + g * g) + g * tau0; // numerator of 1/r, s

    FreeEvolution fe;
    fe.tau0 = tau0;
    fe.width = cfg.sigma0 / tau0 * std::sqrt(T);
    fe.chirp = (cfg.mass / cfg.hbar) * spread / T; // m/(hbar r)
    fe.gouy = -0.5 * std::atan2(t, tau0 + g * t);
    if (!(fe.width > 1e-12))
        throw numeric_error("free evolution: beam width collapsed below 1e-12 m");
    return fe;
}

GaussianState free_state(const PhysicalConfig& cfg, double t) {
    const FreeEvolution fe = free_evolve(cfg, t);
    GaussianState s;
    s.norm = 1.0 / std::sqrt(fe.width * std::sqrt(kPi));
    s.center = 0.0;
    s.width = fe.width;
    s.chirp = fe.chirp;
    s.tilt = 0.0;
    s.global_phase = fe.gouy;
    return s;
}

cdouble kernel(const PhysicalConfig& cfg, double x, double xi, double dt) {
    cfg.validate();
    if (!(dt > 0.0)) throw config_error("invalid config: dt must be > 0");
    const double amp = std::sqrt(cfg.mass / (2.0 * kPi * cfg.hbar * dt));
    const double u = x - xi;
    const double phase = cfg.mass * u * u / (2.0 * cfg.hbar * dt) - kPi / 4.0;
    return amp * std::exp(cdouble(0.0, phase));
}

double SlitEvolution::curvature_time(const PhysicalConfig& cfg) const {
    return curvature_from_chirp(cfg, chirp);
}

SlitEvolution slit_evolve(const PhysicalConfig& cfg) {
    cfg.validate();
    if (!(cfg.t > 0.0)) throw config_error("invalid config: t must be > 0 for slit evolution");
    if (!(cfg.tau > 0.0)) throw config_error("invalid config: tau must be > 0 for slit evolution");

    const FreeEvolution fe = free_evolve(cfg, cfg.t);
    const double b = fe.width;
    const double inv_r = fe.chirp * cfg.hbar / cfg.mass; // 1/r(t), 1/s
    const double m_over_h = cfg.mass / cfg.hbar;
    const double beta2 = cfg.beta * cfg.beta;

    // Gaussian reduction of kernel * aperture * beam; ar - i ai is the
    // quadratic coefficient of the slit-plane integral.
    const double ar = 0.5 * (1.0 / beta2 + 1.0 / (b * b));
    const double ai = 0.5 * m_over_h * (1.0 / cfg.tau + inv_r);
    const double mod2 = ar * ar + ai * ai;

    SlitEvolution se;
    se.width = (cfg.hbar * cfg.tau / cfg.mass) * std::sqrt(2.0 * mod2 / ar);
    se.chirp = m_over_h / cfg.tau - m_over_h * m_over_h * ai / (2.0 * cfg.tau * cfg.tau * mod2);
    se.separation = cfg.hbar * cfg.tau * cfg.d * ai / (cfg.mass * ar * beta2);
    se.tilt = cfg.mass * cfg.d * ar / (4.0 * cfg.hbar * cfg.tau * beta2 * mod2);
    se.theta = cfg.d * cfg.d * ai / (16.0 * beta2 * beta2 * mod2);
    // Exact phase of the slit-path integral; stays continuous where the
    // single-branch arctan form wraps (contractive states).
    se.gouy = fe.gouy - kPi / 4.0 + 0.5 * std::atan2(ai, ar);

    const double g = cfg.gamma;
    const double tau0 = fe.tau0;
    const double spread = cfg.t * (1.0 + g * g) + g * tau0;
    se.c_param = tau0 * tau0 * (1.0 + g * g) + tau0 * tau0 * spread / cfg.tau +
                 2.0 * tau0 * tau0 * cfg.sigma0 * cfg.sigma0 / beta2;

    if (!(se.width > 1e-12))
        throw numeric_error("slit evolution: beam width collapsed below 1e-12 m");
    return se;
}

GaussianState slit_state(const PhysicalConfig& cfg, Slit which) {
    const SlitEvolution se = slit_evolve(cfg);
    const double sign = (which == Slit::plus) ? 1.0 : -1.0;
    const double c = -sign * se.separation / 2.0;

    GaussianState s;
    s.norm = 1.0 / std::sqrt(se.width * std::sqrt(kPi));
    s.center = c;
    s.width = se.width;
    s.chirp = se.chirp;
    // The quadratic phase is about x = 0, not the envelope center; fold the
    // shift into the linear and constant terms.
    s.tilt = sign * se.tilt + se.chirp * c;
    s.global_phase = se.theta + se.gouy - 0.5 * se.chirp * c * c;
    return s;
}

double screen_norm_denominator(const SlitEvolution& se) {
    const double B2 = se.width * se.width;
    const double expo = -se.separation * se.separation / (4.0 * B2) - se.tilt * se.tilt * B2;
    return std::sqrt(2.0 + 2.0 * std::exp(expo));
}

ScreenEvaluator::ScreenEvaluator(const PhysicalConfig& cfg)
    : se_(slit_evolve(cfg)),
      plus_(slit_state(cfg, Slit::plus)),
      minus_(slit_state(cfg, Slit::minus)),
      denom_(screen_norm_denominator(se_)) {}

cdouble ScreenEvaluator::superposition(double x) const {
    return (plus_.eval(x) + minus_.eval(x)) / denom_;
}

double ScreenEvaluator::intensity(double x) const {
    return std::norm(superposition(x));
}

double ScreenEvaluator::interference(double x) const {
    const cdouble p1 = plus_.eval(x);
    const cdouble p2 = minus_.eval(x);
    return std::norm(p1 + p2) - std::norm(p1) - std::norm(p2);
}

double ScreenEvaluator::interference_closed_form(double x) const {
    // 2 sqrt(I1 I2) cos(2 Delta x), via amplitudes so the product of two
    // far-tail intensities cannot underflow before the square root.
    const double a1 = std::abs(plus_.eval(x));
    const double a2 = std::abs(minus_.eval(x));
    return 2.0 * a1 * a2 * std::cos(2.0 * se_.tilt * x);
}

cdouble screen_state(const PhysicalConfig& cfg, double x) {
    return ScreenEvaluator(cfg).superposition(x);
}

SlitPlaneGeometry slit_plane_geometry(const PhysicalConfig& cfg) {
    const FreeEvolution fe = free_evolve(cfg, cfg.t);
    const double b2 = fe.width * fe.width;
    const double beta2 = cfg.beta * cfg.beta;
    SlitPlaneGeometry g;
    g.width = 1.0 / std::sqrt(1.0 / beta2 + 1.0 / b2);
    g.separation = cfg.d / (1.0 + beta2 / b2);
    g.chirp = fe.chirp;
    return g;
}

GaussianState slit_plane_packet(const PhysicalConfig& cfg, Slit which, bool dechirped) {
    const SlitPlaneGeometry g = slit_plane_geometry(cfg);
    const FreeEvolution fe = free_evolve(cfg, cfg.t);
    const double sign = (which == Slit::plus) ? 1.0 : -1.0;
    const double c = -sign * g.separation / 2.0;

    GaussianState s;
    s.norm = 1.0 / std::sqrt(g.width * std::sqrt(kPi));
    s.center = c;
    s.width = g.width;
    if (dechirped) {
        s.chirp = 0.0;
        s.tilt = 0.0;
        s.global_phase = 0.0;
    } else {
        s.chirp = g.chirp;
        s.tilt = g.chirp * c;
        s.global_phase = fe.gouy - 0.5 * g.chirp * c * c;
    }
    return s;
}

cdouble slit_plane_superposition(const PhysicalConfig& cfg, double x, bool dechirped) {
    const SlitPlaneGeometry g = slit_plane_geometry(cfg);
    const GaussianState p1 = slit_plane_packet(cfg, Slit::plus, dechirped);
    const GaussianState p2 = slit_plane_packet(cfg, Slit::minus, dechirped);
    const double ov = std::exp(-g.separation * g.separation / (4.0 * g.width * g.width));
    return (p1.eval(x) + p2.eval(x)) / std::sqrt(2.0 + 2.0 * ov);
}

} // namespace xwigner
