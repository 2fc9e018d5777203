#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "xwigner/states.hpp"

namespace xwigner {

enum class Provenance { analytic, oracle, reconstructed };

const char* to_string(Provenance p);

// Complex samples on a rectangular, uniform (x, k) grid. Row-major with x as
// the slow index: values[ix * nk + ik].
struct PhaseSpaceField {
    std::vector<double> x_axis; // m (or dimensionless in the tomography frame)
    std::vector<double> k_axis; // 1/m
    std::vector<cdouble> values;
    Provenance provenance = Provenance::analytic;

    std::size_t nx() const { return x_axis.size(); }
    std::size_t nk() const { return k_axis.size(); }
    cdouble& at(std::size_t ix, std::size_t ik) { return values[ix * nk() + ik]; }
    const cdouble& at(std::size_t ix, std::size_t ik) const { return values[ix * nk() + ik]; }

    void check() const; // axes uniform, strictly increasing, sizes match
};

// Uniform axis with inclusive endpoints; n >= 2.
std::vector<double> make_axis(double lo, double hi, std::size_t n);

// True if x lies on the axis lattice (within 1e-6 steps); writes the index.
bool lattice_index(const std::vector<double>& axis, double x, std::size_t& index);

// Evaluates fn over the grid, parallel over x rows.
PhaseSpaceField sample_field(const std::vector<double>& x_axis,
                             const std::vector<double>& k_axis,
                             const std::function<cdouble(double, double)>& fn,
                             Provenance provenance);

double max_abs(const PhaseSpaceField& f);

// Trapezoid integrals on the grid.
cdouble integrate_2d(const PhaseSpaceField& f);
std::vector<cdouble> marginal_over_k(const PhaseSpaceField& f); // one value per x
std::vector<cdouble> marginal_over_x(const PhaseSpaceField& f); // one value per k

// Divides by the overlap <phi|psi>; the quasi-probability rho is defined only
// for non-orthogonal states, so |overlap| < 1e-12 is rejected.
PhaseSpaceField quasi_prob(const PhaseSpaceField& field, cdouble overlap);

} // namespace xwigner
