#pragma once

#include <vector>

#include "cubicproc/cubic_tensor.hpp"
#include "cubicproc/simplex.hpp"

namespace cubic {

struct Trajectory {
    int start_time = 0;
    std::vector<SimplexVector> states;  // states[k] is the distribution at start_time + k
};

/// One generation of the population dynamics:
///   y_l = sum_{i,j,k} p(i,j,k,l) x_i x_j x_k.
/// Contracted one parent slot at a time, so the cost is O(n^4).
SimplexVector evolve(const CubicTensor& law, const SimplexVector& x);

/// Repeated application of `evolve`; states[0] = x0, length horizon + 1.
Trajectory iterate(const CubicTensor& law, const SimplexVector& x0, int horizon,
                   int start_time = 0);

/// Contraction of an arbitrary rank-4 array with x in all three parent slots.
/// Used for transition tensors and (signed) generator tensors alike.
std::vector<double> contract_parents(const std::vector<double>& entries, int n,
                                     const std::vector<double>& x);

/// q[m,l] = sum_{g,d} entries(m,g,d,l) y_g y_d: contraction over the second
/// and third parent slots, shared by composition and residual evaluators.
std::vector<double> contract_pair(const std::vector<double>& entries, int n,
                                  const std::vector<double>& y);

}  // namespace cubic
