#include "xwigner/crosswigner.hpp"

#include <cmath>
#include <numbers>

#include "xwigner/errors.hpp"

namespace xwigner {

namespace {

constexpr double kPi = std::numbers::pi;

// Shared structure of the Gaussian-pair reduction. With phi* carrying the
// quadratic coefficient p = 1/(2 bphi^2) + i cphi/2 and psi carrying
// q = 1/(2 bpsi^2) - i cpsi/2, the y-integral is controlled by
// S = p + q = u + i v and Dx = p - q = w + i z.
struct PairCoeffs {
    double u, v, w, z, big_a;
};

PairCoeffs pair_coeffs(double width_phi, double chirp_phi, double width_psi, double chirp_psi) {
    PairCoeffs c{};
    const double iphi = 1.0 / (2.0 * width_phi * width_phi);
    const double ipsi = 1.0 / (2.0 * width_psi * width_psi);
    c.u = iphi + ipsi;
    c.v = 0.5 * chirp_phi - 0.5 * chirp_psi;
    c.w = iphi - ipsi;
    c.z = 0.5 * chirp_phi + 0.5 * chirp_psi;
    c.big_a = c.u * c.u + c.v * c.v;
    return c;
}

} // namespace

CwFreeParams cw_free_params(const PhysicalConfig& cfg, double t) {
    const FreeEvolution fe = free_evolve(cfg, t);
    const double s0 = cfg.sigma0;
    const double chirp0 = cfg.gamma / (s0 * s0);
    const PairCoeffs c = pair_coeffs(fe.width, fe.chirp, s0, chirp0);

    CwFreeParams p;
    p.big_a = c.big_a;
    p.norm = 1.0 / (kPi * std::sqrt(fe.width * s0) * std::pow(c.big_a, 0.25));
    p.a3 = c.u / c.big_a;
    p.a4 = c.v / c.big_a;
    p.a5 = 2.0 * (c.w * c.v - c.z * c.u) / c.big_a;
    p.a6 = 2.0 * (c.z * c.v + c.w * c.u) / c.big_a;
    p.a11 = ((c.w * c.w - c.z * c.z) * c.u + 2.0 * c.w * c.z * c.v) / c.big_a;
    p.a22 = (2.0 * c.w * c.z * c.u - (c.w * c.w - c.z * c.z) * c.v) / c.big_a;
    p.a1 = c.u - p.a11;
    p.a2 = -c.v + p.a22;
    p.xi = -0.5 * std::atan2(c.v, c.u);
    p.delta_mu = p.xi - fe.gouy;
    return p;
}

cdouble eval_cw_free(const CwFreeParams& p, double x, double k) {
    const double re = -p.a1 * x * x - p.a3 * k * k + p.a5 * k * x;
    const double im = p.a2 * x * x + p.a4 * k * k + p.a6 * k * x + p.delta_mu;
    return p.norm * std::exp(cdouble(re, im));
}

double gouy_delta_free(const PhysicalConfig& cfg, double t) {
    return cw_free_params(cfg, t).delta_mu;
}

CwSlitsParams cw_slits_params(const PhysicalConfig& cfg) {
    const SlitEvolution se = slit_evolve(cfg);
    return CwSlitsParams{se.width, se.chirp, se.separation, se.tilt};
}

cdouble eval_cw_slits(const CwSlitsParams& p, double x, double k) {
    const double kappa = k + p.chirp * x;
    const double B2 = p.width * p.width;
    const double re = -(x * x / B2 + kappa * kappa * B2);
    const double im = kappa * p.separation - 2.0 * p.tilt * x;
    return (1.0 / kPi) * std::exp(cdouble(re, im));
}

cdouble cw_slits(const PhysicalConfig& cfg, double x, double k) {
    return eval_cw_slits(cw_slits_params(cfg), x, k);
}

CwSlitsParams slit_plane_cw_params(const PhysicalConfig& cfg, bool dechirped) {
    const SlitPlaneGeometry g = slit_plane_geometry(cfg);
    return CwSlitsParams{g.width, dechirped ? 0.0 : g.chirp, g.separation, 0.0};
}

CwScreenParams cw_screen_params(const PhysicalConfig& cfg) {
    const SlitEvolution se = slit_evolve(cfg);
    const double s0 = cfg.sigma0;
    const double chirp0 = cfg.gamma / (s0 * s0);
    const PairCoeffs c = pair_coeffs(se.width, se.chirp, s0, chirp0);
    const double B2 = se.width * se.width;

    CwScreenParams p;
    p.big_a = c.big_a;
    p.norm = 1.0 / (kPi * std::sqrt(se.width * s0) * std::pow(c.big_a, 0.25) *
                    screen_norm_denominator(se));
    p.alpha1 = ((c.w * c.w - c.z * c.z) * c.u + 2.0 * c.w * c.z * c.v) / c.big_a;
    p.alpha2 = (2.0 * c.w * c.z * c.u - (c.w * c.w - c.z * c.z) * c.v) / c.big_a;
    p.b2 = c.u / c.big_a;
    p.b3 = c.u - p.alpha1;
    p.b4 = 2.0 * (c.z * c.u - c.w * c.v) / c.big_a;
    p.b7 = p.alpha2 - c.v;
    p.b8 = 2.0 * (c.w * c.u + c.z * c.v) / c.big_a;
    p.b10 = c.v / c.big_a;

    // Linear coefficient of the plus branch: lambda = D/(2B^2) + i Delta.
    const double lr = se.separation / (2.0 * B2);
    const double li = se.tilt;
    const double pp = c.w * c.u + c.z * c.v;
    const double qq = c.z * c.u - c.w * c.v;
    p.b1 = ((lr * lr - li * li) * c.u + 2.0 * lr * li * c.v) / (4.0 * c.big_a);
    p.b9 = (2.0 * lr * li * c.u - (lr * lr - li * li) * c.v) / (4.0 * c.big_a);
    p.b5 = (pp * lr - qq * li) / c.big_a - lr;
    p.b6 = (lr * c.v - li * c.u) / c.big_a;
    p.b11 = (pp * li + qq * lr) / c.big_a - li;
    p.b12 = (lr * c.u + li * c.v) / c.big_a;

    p.xi = -0.5 * std::atan2(c.v, c.u);
    p.delta_mu = p.xi - se.gouy;
    p.theta = se.theta;
    p.env_exponent = -se.separation * se.separation / (8.0 * B2);
    return p;
}

cdouble eval_cw_screen(const CwScreenParams& p, double x, double k) {
    const double phi1 =
        p.b7 * x * x + p.b8 * k * x + p.b9 + p.b10 * k * k - p.theta + p.delta_mu;
    const double phi2 = p.b11 * x + p.b12 * k;
    const double env = p.env_exponent + p.b1 - p.b2 * k * k - p.b3 * x * x - p.b4 * k * x;
    const double lin = p.b5 * x + p.b6 * k;
    const cdouble branch1 = std::exp(cdouble(env + lin, phi1 + phi2));
    const cdouble branch2 = std::exp(cdouble(env - lin, phi1 - phi2));
    return p.norm * (branch1 + branch2);
}

double gouy_delta_slit(const PhysicalConfig& cfg) {
    return cw_screen_params(cfg).delta_mu;
}

} // namespace xwigner
