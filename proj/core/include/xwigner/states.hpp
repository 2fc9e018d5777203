#pragma once

#include <complex>

#include "xwigner/config.hpp"

namespace xwigner {

using cdouble = std::complex<double>;

// Closed analytic form of a (chirped, tilted) Gaussian packet:
//
//   psi(x) = norm * exp[ -(x-center)^2 / (2 width^2)
//                        + i chirp (x-center)^2 / 2
//                        + i tilt x + i global_phase ]
//
// Every state this library produces (source, free-evolved, slit paths) is an
// instance; sampling onto arrays happens only in the oracle and I/O layers.
struct GaussianState {
    cdouble norm{};            // overall amplitude, m^(-1/2)
    double center = 0.0;       // m
    double width = 0.0;        // m
    double chirp = 0.0;        // 1/m^2, quadratic-phase coefficient
    double tilt = 0.0;         // 1/m, linear-phase coefficient
    double global_phase = 0.0; // rad

    cdouble eval(double x) const;
};

// Source packet: center 0, width sigma0, chirp gamma/sigma0^2,
// norm (sigma0 sqrt(pi))^(-1/2).
GaussianState make_initial_state(const PhysicalConfig& cfg);

inline cdouble eval_state(const GaussianState& s, double x) { return s.eval(x); }

struct CovarianceReport {
    double sigma_xx = 0.0; // m
    double sigma_pp = 0.0; // kg m/s
    double sigma_xp = 0.0; // J s
    double corr_r = 0.0;   // sigma_xp / (sigma_xx sigma_pp), in (-1, 1)
};

// sigma_xx = sigma0/sqrt(2), sigma_pp = sqrt(1+gamma^2) hbar/(sqrt(2) sigma0),
// sigma_xp = hbar gamma / 2.
CovarianceReport covariance(const PhysicalConfig& cfg);

struct QuadratureVariances {
    double var_x1 = 0.0;
    double var_x2 = 0.0;
};

// Variances of the rotated dimensionless quadratures
//   X1 = cos(theta) x + sin(theta) p,  X2 = -sin(theta) x + cos(theta) p
// on the correlated source state. var_x1 dips below 1/2 for contractive
// (gamma < 0) states: that is the squeezing the correlation buys.
QuadratureVariances quadrature_variances(const PhysicalConfig& cfg, double theta_rot);

// Inverse of corr_r = gamma/sqrt(1+gamma^2). Requires |r| < 1.
double gamma_from_correlation(double corr_r);

} // namespace xwigner
