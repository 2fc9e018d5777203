#pragma once

#include <complex>

#include "xwigner/config.hpp"
#include "xwigner/states.hpp"

namespace xwigner {

// Aging time tau0 = m sigma0^2 / hbar: the scale on which the evolved packet
// becomes distinguishable from the source.
double aging_time(const PhysicalConfig& cfg);

// Free evolution of the correlated Gaussian source. The curvature is stored
// as the chirp m/(hbar r) so t = 0 (r = infinity) needs no special case.
struct FreeEvolution {
    double width = 0.0;  // b(t), m
    double chirp = 0.0;  // m/(hbar r(t)), 1/m^2
    double gouy = 0.0;   // mu(t), rad; continuous via atan2
    double tau0 = 0.0;   // s

    // r(t) in seconds; +-infinity when the wavefront is flat.
    double curvature_time(const PhysicalConfig& cfg) const;
};

FreeEvolution free_evolve(const PhysicalConfig& cfg, double t);

// psi(x,t) as a closed form; free_state(cfg,0) equals make_initial_state(cfg).
GaussianState free_state(const PhysicalConfig& cfg, double t);

inline cdouble eval_free(const PhysicalConfig& cfg, double t, double x) {
    return free_state(cfg, t).eval(x);
}

// Free nonrelativistic propagator sqrt(m/(2 pi i hbar dt)) exp[i m (x-xi)^2 / (2 hbar dt)].
cdouble kernel(const PhysicalConfig& cfg, double x, double xi, double dt);

enum class Slit { plus, minus };

// Parameters shared by the two slit paths at the screen (t then tau of flight,
// Gaussian aperture of width beta at +-d/2). D and Delta are quoted for the
// "plus" path; the "minus" path mirrors their sign.
struct SlitEvolution {
    double width = 0.0;      // B(t,tau), m
    double chirp = 0.0;      // m/(hbar R(t,tau)), 1/m^2
    double separation = 0.0; // D(t,tau), m, >= 0 for d >= 0
    double tilt = 0.0;       // Delta(t,tau), 1/m
    double theta = 0.0;      // rad, d^2-dependent phase
    double gouy = 0.0;       // mu'(t,tau), rad, continuous in (t,tau)
    double c_param = 0.0;    // C(t,tau), s^2, auxiliary combination

    double curvature_time(const PhysicalConfig& cfg) const; // R(t,tau), s
};

SlitEvolution slit_evolve(const PhysicalConfig& cfg);

// Path through one slit as a normalized Gaussian. Slit::plus is the packet
// centered at -D/2 carrying +Delta x; Slit::minus mirrors d -> -d.
GaussianState slit_state(const PhysicalConfig& cfg, Slit which);

inline cdouble eval_slit(const PhysicalConfig& cfg, Slit which, double x) {
    return slit_state(cfg, which).eval(x);
}

// sqrt(2 + 2 exp[-D^2/(4B^2) - Delta^2 B^2]), the normalization of the screen
// superposition.
double screen_norm_denominator(const SlitEvolution& se);

// Normalized two-slit wavefunction at the screen, (psi1 + psi2)/denominator.
cdouble screen_state(const PhysicalConfig& cfg, double x);

// Caches the slit bundle so sinogram rows can evaluate many x cheaply.
class ScreenEvaluator {
public:
    explicit ScreenEvaluator(const PhysicalConfig& cfg);

    cdouble psi1(double x) const { return plus_.eval(x); }
    cdouble psi2(double x) const { return minus_.eval(x); }
    cdouble superposition(double x) const;       // normalized
    double intensity(double x) const;            // |superposition|^2
    double interference(double x) const;         // |psi1+psi2|^2 - I1 - I2
    double interference_closed_form(double x) const; // 2 sqrt(I1 I2) cos(2 Delta x)

    const SlitEvolution& evolution() const { return se_; }
    double denominator() const { return denom_; }

private:
    SlitEvolution se_;
    GaussianState plus_, minus_;
    double denom_ = 0.0;
};

// State just behind the double slit (tau -> 0+): each path is a Gaussian of
// width B0 = (1/beta^2 + 1/b^2)^(-1/2) centered at -+D0/2 with
// D0 = d/(1 + beta^2/b^2), carrying the incoming chirp m/(hbar r(t)) and no
// tilt. This is the plane the tomography module reconstructs.
struct SlitPlaneGeometry {
    double width = 0.0;      // B0, m
    double separation = 0.0; // D0, m
    double chirp = 0.0;      // m/(hbar r(t)), 1/m^2, common to both paths
};

SlitPlaneGeometry slit_plane_geometry(const PhysicalConfig& cfg);

// Unit-norm single path at the slit plane. dechirped drops the common
// quadratic phase and the global Gouy phase, leaving a real Gaussian.
GaussianState slit_plane_packet(const PhysicalConfig& cfg, Slit which, bool dechirped = false);

// Normalized superposition at the slit plane, optionally de-chirped.
cdouble slit_plane_superposition(const PhysicalConfig& cfg, double x, bool dechirped = false);

} // namespace xwigner
