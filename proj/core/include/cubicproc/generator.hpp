#pragma once

#include <cstddef>
#include <vector>

#include "cubicproc/closed_form.hpp"
#include "cubicproc/richardson.hpp"
#include "cubicproc/simplex.hpp"

namespace cubic {

/// Right derivative of the transition family at unit gap,
///   a(m,g,d,l)(t) = lim_{D->0+} (p^[t-1,t+D](m,g,d,l) - p(m,g,d,l)) / D,
/// where p is the unit-gap law. Entries may be negative; rows sum to zero
/// up to estimation error because unit mass is differentiated away.
struct GeneratorTensor {
    int n = 0;
    double time = 0.0;
    std::vector<double> entries;          // flat, row-major like CubicTensor
    std::vector<double> estimated_error;  // per-entry extrapolation discrepancy

    std::size_t index(int m, int g, int d, int l) const {
        return ((static_cast<std::size_t>(m) * n + g) * n + d) * n + l;
    }
    double operator()(int m, int g, int d, int l) const { return entries[index(m, g, d, l)]; }
};

/// One-sided Richardson-extrapolated estimate of the generator of a
/// closed-form family at time t >= 1.
GeneratorTensor estimate_generator(const ClosedFormFamily& f, double t,
                                   const SimplexVector& x0,
                                   const std::vector<double>& deltas = default_deltas());

/// max |sum_l a(m,g,d,l)| over parent triples.
double generator_row_sum_defect(const GeneratorTensor& a);

/// max |a(m,g,d,l) - a(perm(m,g,d),l)| over entries and permutations.
double generator_symmetry_defect(const GeneratorTensor& a);

/// Largest per-entry extrapolation error bound.
double generator_max_error(const GeneratorTensor& a);

}  // namespace cubic
