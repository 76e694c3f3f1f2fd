#pragma once

#include <cstdint>
#include <vector>

#include "cubicproc/cubic_tensor.hpp"
#include "cubicproc/simplex.hpp"

namespace cubic {

/// Finite-population sampler for the mean-field dynamics.
///
/// Generation 0 is drawn i.i.d. from x0. To form generation g+1, each of the
/// `population` offspring independently draws a parent triple (i,j,k) i.i.d.
/// from generation g's empirical frequencies (sampling with replacement) and
/// then an offspring state l from the categorical row p(i,j,k,.).
///
/// Returns the empirical frequencies of generations 0..horizon. The stream of
/// random numbers is a fixed function of `seed`, so results are reproducible
/// across runs and platforms.
std::vector<SimplexVector> monte_carlo_trajectory(const CubicTensor& law,
                                                  const SimplexVector& x0, int horizon,
                                                  long population, std::uint64_t seed);

}  // namespace cubic
