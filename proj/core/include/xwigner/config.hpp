#pragma once

namespace xwigner {

// Physical parameters of a run, all SI. Unit conversion (um/ms at the CLI
// boundary) happens outside the core library.
struct PhysicalConfig {
    double mass   = 0.0; // kg
    double hbar   = 0.0; // J s
    double sigma0 = 0.0; // m, transverse width of the source packet
    double gamma  = 0.0; // dimensionless position-momentum correlation
    double beta   = 0.0; // m, Gaussian slit width
    double d      = 0.0; // m, slit separation
    double t      = 0.0; // s, source -> slit flight time
    double tau    = 0.0; // s, slit -> screen flight time

    // Throws config_error naming the offending field.
    void validate() const;
};

// Neutron parameters used throughout: m = 1.67e-27 kg, sigma0 = beta = 7.8 um,
// d = 100 um, t = tau = 50 ms, gamma = 0.
PhysicalConfig neutron_reference_config();

inline constexpr double kHbarSI = 1.054571817e-34; // J s (CODATA 2018)

} // namespace xwigner
