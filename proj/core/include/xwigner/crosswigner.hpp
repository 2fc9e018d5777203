#pragma once

#include <complex>

#include "xwigner/config.hpp"
#include "xwigner/field.hpp"
#include "xwigner/propagation.hpp"

namespace xwigner {

// Closed form of CW_{psi(t), psi0}(x,k) = N exp(-a1 x^2 - a3 k^2 + a5 k x)
//                                         * exp[i(a2 x^2 + a4 k^2 + a6 k x + delta_mu)].
// delta_mu = xi - mu is the Gouy phase difference between the evolved and the
// source state; dropping it rotates the complex field by a constant angle and
// leaves |CW| untouched.
struct CwFreeParams {
    double norm = 0.0;     // N
    double big_a = 0.0;    // A
    double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0, a5 = 0.0, a6 = 0.0;
    double a11 = 0.0, a22 = 0.0;
    double xi = 0.0;       // rad
    double delta_mu = 0.0; // xi - mu, rad

    CwFreeParams without_gouy() const {
        CwFreeParams p = *this;
        p.delta_mu = 0.0;
        return p;
    }
};

CwFreeParams cw_free_params(const PhysicalConfig& cfg, double t);
cdouble eval_cw_free(const CwFreeParams& p, double x, double k);

double gouy_delta_free(const PhysicalConfig& cfg, double t); // delta_mu(t)

// CW between the two slit paths at the screen:
//   (1/pi) exp[-(x^2/B^2 + kappa^2 B^2)] exp[i(kappa D - 2 Delta x)],
// kappa = k + chirp x. Both paths share the Gouy phase mu', so none appears.
struct CwSlitsParams {
    double width = 0.0;      // B, m
    double chirp = 0.0;      // m/(hbar R), 1/m^2
    double separation = 0.0; // D, m
    double tilt = 0.0;       // Delta, 1/m
};

CwSlitsParams cw_slits_params(const PhysicalConfig& cfg);
cdouble eval_cw_slits(const CwSlitsParams& p, double x, double k);
cdouble cw_slits(const PhysicalConfig& cfg, double x, double k);

// Same bilinear form for the packets just behind the slits (tau -> 0+):
// width B0, chirp m/(hbar r(t)) (0 if dechirped), separation D0, no tilt.
CwSlitsParams slit_plane_cw_params(const PhysicalConfig& cfg, bool dechirped = false);

// Closed form of CW_{Psi, psi0} where Psi is the normalized screen
// superposition. Two branches, one per slit path:
//   N' e^{-D^2/8B^2} e^{b1} e^{-b2 k^2 - b3 x^2 - b4 k x}
//     [ e^{+b5 x + b6 k} e^{i(phi1+phi2)} + e^{-b5 x - b6 k} e^{i(phi1-phi2)} ]
// phi1 = b7 x^2 + b8 k x + b9 + b10 k^2 - theta + delta_mu', phi2 = b11 x + b12 k.
struct CwScreenParams {
    double norm = 0.0;  // N', includes the superposition normalization
    double big_a = 0.0; // A'
    double alpha1 = 0.0, alpha2 = 0.0;
    double b1 = 0.0, b2 = 0.0, b3 = 0.0, b4 = 0.0, b5 = 0.0, b6 = 0.0;
    double b7 = 0.0, b8 = 0.0, b9 = 0.0, b10 = 0.0, b11 = 0.0, b12 = 0.0;
    double xi = 0.0;           // xi', rad
    double delta_mu = 0.0;     // delta_mu' = xi' - mu', rad
    double theta = 0.0;        // slit phase entering phi1 with a minus sign
    double env_exponent = 0.0; // -D^2/(8 B^2)

    CwScreenParams without_gouy() const {
        CwScreenParams p = *this;
        p.delta_mu = 0.0;
        return p;
    }
};

CwScreenParams cw_screen_params(const PhysicalConfig& cfg);
cdouble eval_cw_screen(const CwScreenParams& p, double x, double k);

double gouy_delta_slit(const PhysicalConfig& cfg); // delta_mu'(t,tau)

} // namespace xwigner
