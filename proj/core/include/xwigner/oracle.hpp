#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "xwigner/config.hpp"
#include "xwigner/field.hpp"
#include "xwigner/states.hpp"

namespace xwigner {

// Brute-force ground truth: direct quadrature of the defining integrals.
// Nothing here depends on the closed forms it certifies.

struct SampledWavefunction {
    std::vector<double> x_axis;  // uniform, shared between operands
    std::vector<cdouble> values; // m^(-1/2)

    std::size_t size() const { return x_axis.size(); }
    double step() const { return x_axis[1] - x_axis[0]; }
    double norm() const; // trapezoid L2 norm
};

SampledWavefunction sample(const GaussianState& s, const std::vector<double>& axis);
SampledWavefunction sample(const std::function<cdouble(double)>& fn,
                           const std::vector<double>& axis);

// Symmetric axis whose lattice contains every multiple of field_step, with
// spacing <= max_step and half-extent >= half_span. Evaluating cw_quadrature
// at field points of a commensurate grid then uses exact samples only.
std::vector<double> commensurate_axis(double field_step, double half_span, double max_step);

// (1/2pi) Int dy e^{-iky} phi*(x+y/2) psi(x-y/2), trapezoid on the shared
// lattice. When x sits on the lattice the half-shifted arguments are exact
// samples; otherwise both factors are linearly interpolated. Requires the
// operands to have decayed below 1e-12 of their peak at the axis ends.
cdouble cw_quadrature(const SampledWavefunction& phi, const SampledWavefunction& psi,
                      double x, double k);

// cw_quadrature(psi, psi); rejects any spurious imaginary residue.
double wigner_quadrature(const SampledWavefunction& psi, double x, double k);

// Trapezoid <phi|psi> = Int phi* psi dx.
cdouble overlap(const SampledWavefunction& phi, const SampledWavefunction& psi);

// Quadrature Fourier transform F psi(k) = (1/sqrt(2pi)) Int dx e^{-ikx} psi(x)
// on an explicit k grid (default: conjugate lattice of the input axis).
SampledWavefunction fourier_transform(const SampledWavefunction& psi,
                                      const std::vector<double>& k_axis);
SampledWavefunction fourier_transform(const SampledWavefunction& psi);

struct PropagateOptions {
    // Smooth Gaussian window near the axis ends; needed when the source does
    // not decay (pure-kernel integrands), harmless otherwise.
    bool damp_edges = false;
    double window_start = 0.75; // fraction of half-span where damping begins
    double window_width = 0.10; // fraction of half-span
};

// Int kernel(x, xi, dt) psi(xi) dxi over the source axis, for every x in
// target_axis.
SampledWavefunction propagate_kernel(const PhysicalConfig& cfg,
                                     const SampledWavefunction& source, double dt,
                                     const std::vector<double>& target_axis,
                                     const PropagateOptions& opts = {});

// Full grids of the defining integrals, parallel over rows.
PhaseSpaceField cw_field_quadrature(const SampledWavefunction& phi,
                                    const SampledWavefunction& psi,
                                    const std::vector<double>& x_axis,
                                    const std::vector<double>& k_axis);
PhaseSpaceField wigner_field_quadrature(const SampledWavefunction& psi,
                                        const std::vector<double>& x_axis,
                                        const std::vector<double>& k_axis);

} // namespace xwigner
