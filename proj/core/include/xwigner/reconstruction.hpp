#pragma once

#include <string>
#include <vector>

#include "xwigner/config.hpp"
#include "xwigner/field.hpp"

namespace xwigner {

enum class SinogramKind { intensity, interference };
enum class RowAxisKind { time, angle };

// Stack of 1D detector profiles. Rows are indexed by slit->screen time tau
// (x_axis in meters), or by phase-space angle theta after mapping (x_axis is
// then the dimensionless radial coordinate rho).
struct Sinogram {
    std::vector<double> x_axis;
    std::vector<double> row_axis;
    RowAxisKind row_kind = RowAxisKind::time;
    SinogramKind kind = SinogramKind::intensity;
    std::vector<double> values; // row-major [row][x]

    std::size_t rows() const { return row_axis.size(); }
    std::size_t cols() const { return x_axis.size(); }
    double& at(std::size_t r, std::size_t c) { return values[r * cols() + c]; }
    double at(std::size_t r, std::size_t c) const { return values[r * cols() + c]; }
};

// Rows of |Psi(x; t, tau)|^2, the normalized screen intensity.
Sinogram intensity_sinogram(const PhysicalConfig& cfg, const std::vector<double>& x_axis,
                            const std::vector<double>& tau_list);

// Rows of I - (I1 + I2) computed from the unnormalized superposition
// |psi1 + psi2|^2, so the subtraction is exactly the cross term. Each row is
// checked against the closed form 2 sqrt(I1 I2) cos(2 Delta x).
Sinogram interference_term(const PhysicalConfig& cfg, const std::vector<double>& x_axis,
                           const std::vector<double>& tau_list);

// In dimensionless coordinates (x/s, k s) the free flight from the slit acts
// on the slit-plane Wigner function as a shear, equivalent to a rotation by
// theta(tau) = arctan(hbar tau / (m s^2)) after the per-row rescaling
//   P_theta(rho) = stretch * I(x = stretch * rho, tau),  stretch = s / cos(theta).
// The slit-plane chirp m/(hbar r(t)) is recorded: the object obeys the exact
// sheared-mirror symmetry W(x, -k - 2 c x) = W(x, k), which supplies the
// (pi/2, pi) half of the projection circle from the measured rows.
struct AngleMap {
    double scale_x = 0.0; // s, m
    double scale_k = 0.0; // 1/s, 1/m
    double chirp = 0.0;   // m/(hbar r(t)), 1/m^2, slit-plane curvature

    struct Row {
        double tau = 0.0;     // s
        double theta = 0.0;   // rad, in (0, pi/2)
        double stretch = 0.0; // s / cos(theta), m
    };
    std::vector<Row> rows;

    double theta_min() const { return rows.front().theta; }
    double theta_max() const { return rows.back().theta; }
    // Dimensionless shear rate entering the mirror completion.
    double mirror_chirp() const { return chirp * scale_x * scale_x; }
};

// scale_x <= 0 picks B(t, tau_mid) with tau_mid the geometric mean of the
// window. Rejects non-monotone tau lists.
AngleMap angle_map(const PhysicalConfig& cfg, const std::vector<double>& tau_list,
                   double scale_x = 0.0);

// Natural tomography scale: the single-path beam width at the slit plane.
double default_tomography_scale(const PhysicalConfig& cfg);

// tau samples hitting n uniformly spaced angles in [theta_lo, theta_hi] for
// the given scale: tau(theta) = (m s^2/hbar) tan(theta).
std::vector<double> tau_window_for_coverage(const PhysicalConfig& cfg, double scale_x,
                                            double theta_lo, double theta_hi, std::size_t n);

// Resamples time rows onto a fixed rho grid (linear interpolation, zero
// outside the detector range) and applies the per-row stretch factors.
Sinogram map_to_projections(const Sinogram& sino, const AngleMap& map,
                            const std::vector<double>& rho_axis);

// Same projections with rows evaluated exactly at the pulled-back detector
// positions (the analytic screen state exists everywhere, so no resampling
// error enters the pipeline).
Sinogram synthesize_projections(const PhysicalConfig& cfg, const AngleMap& map,
                                const std::vector<double>& rho_axis, SinogramKind kind);

struct FbpOptions {
    // Largest tolerated gap in the completed angle set, radians.
    double max_gap = 0.45;
    // Complete (0, pi/2) rows into (pi/2, pi) using the object symmetry
    // W(x, -k - 2 c x) = W(x, k). mirror_chirp is the dimensionless shear
    // rate c s^2; zero reduces to the plain even-object mirror.
    bool mirror_completion = true;
    double mirror_chirp = 0.0;
};

// Filtered backprojection of a theta-mapped sinogram: Hann-windowed ramp
// filter per row, then trapezoid backprojection over the completed angle set.
// Output axes are in the same dimensionless units as rho.
PhaseSpaceField inverse_radon(const Sinogram& sino, const std::vector<double>& x_axis,
                              const std::vector<double>& k_axis, const FbpOptions& opts = {});

struct ReconstructionResult {
    PhaseSpaceField field; // physical axes, slit-plane frame
    AngleMap map;
    double theta_span = 0.0; // rad, before mirror completion
};

// Full pipeline, Wigner flavour: intensity projections -> FBP. The result is
// the Wigner function of the slit-plane superposition on physical (x, k)
// axes.
ReconstructionResult reconstruct_wigner(const PhysicalConfig& cfg,
                                        const std::vector<double>& tau_list,
                                        const std::vector<double>& x_axis,
                                        const std::vector<double>& k_axis,
                                        double scale_x = 0.0);

// Cross-Wigner flavour: interference projections -> FBP -> divide by 2, since
// the interference term integrates to twice the real part of the cross-Wigner.
ReconstructionResult reconstruct_cw(const PhysicalConfig& cfg,
                                    const std::vector<double>& tau_list,
                                    const std::vector<double>& x_axis,
                                    const std::vector<double>& k_axis,
                                    double scale_x = 0.0);

// ||a - b||_2 / ||b||_2 over the sub-rectangle |x| <= x_cut, |k| <= k_cut.
double l2_relative_error(const PhaseSpaceField& a, const PhaseSpaceField& b,
                         double x_cut, double k_cut);

} // namespace xwigner
