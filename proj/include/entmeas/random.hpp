#pragma once

#include <cstdint>
#include <random>

#include "entmeas/state.hpp"

namespace entmeas {

using Rng = std::mt19937_64;

/// Independent, reproducible stream for restart `index` of a run seeded with
/// `seed`. Streams do not depend on thread scheduling.
Rng make_stream(std::uint64_t seed, std::uint64_t index);

CVector random_complex_gaussian(Rng& rng, int n);
CMatrix random_complex_gaussian(Rng& rng, int rows, int cols);

PureState random_pure_state(Rng& rng, Dims dims);
/// Ginibre-induced mixed state of the given rank (rank <= 0 means full).
DensityOperator random_density(Rng& rng, Dims dims, int rank = 0);
/// Haar-random unitary via QR of a Ginibre matrix with phase correction.
CMatrix random_unitary(Rng& rng, int d);

}  // namespace entmeas
