#pragma once

#include "sdph/grid.hpp"

namespace sdph {

// Exact Euclidean signed distance between voxel centers. Negative strictly
// inside the occupied set, positive strictly outside; the volume is treated
// as surrounded by an infinite empty exterior. Throws EmptyVolume.
//
// Separable lower-envelope transform; scan lines are processed in parallel
// and the result is identical for any thread count.
ScalarField signed_distance(const BinaryVolume& vol);

// Exhaustive all-pairs reference with the identical contract. Serial per
// output voxel (voxels are scanned in parallel); used as the test oracle
// and in the kernel benchmark.
ScalarField signed_distance_bruteforce(const BinaryVolume& vol);

}  // namespace sdph
