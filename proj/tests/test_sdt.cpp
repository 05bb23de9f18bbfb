#include <cmath>
#include <cstring>

#include "doctest.h"
#include "sdph/phantom.hpp"
#include "sdph/rng.hpp"
#include "sdph/sdt.hpp"

using namespace sdph;

namespace {

BinaryVolume random_volume(GridDims dims, std::uint64_t seed,
                           double density = 0.5, Spacing sp = {}) {
  BinaryVolume vol(dims, sp);
  Rng rng(seed);
  for (auto& v : vol.voxels) v = rng.uniform() < density ? 1 : 0;
  if (vol.occupied_count() == 0) vol.voxels[0] = 1;
  return vol;
}

bool bitwise_equal(const ScalarField& a, const ScalarField& b) {
  return a.values.size() == b.values.size() &&
         std::memcmp(a.values.data(), b.values.data(),
                     a.values.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("single occupied voxel") {
  BinaryVolume vol({11, 11, 11});
  vol.set(5, 5, 5, true);
  const auto field = signed_distance(vol);
  CHECK(field.at(5, 5, 5) == -1.0);
  CHECK(field.at(5, 5, 7) == 2.0);
  const auto ref = signed_distance_bruteforce(vol);
  CHECK(bitwise_equal(field, ref));
}

TEST_CASE("fully occupied volume measures distance to the exterior") {
  BinaryVolume vol({3, 3, 3});
  for (auto& v : vol.voxels) v = 1;
  const auto ref = signed_distance_bruteforce(vol);
  CHECK(ref.at(1, 1, 1) == -2.0);
  CHECK(ref.at(0, 0, 0) == -1.0);
  const auto field = signed_distance(vol);
  CHECK(bitwise_equal(field, ref));
}

TEST_CASE("empty volume throws") {
  BinaryVolume vol({4, 4, 4});
  CHECK_THROWS_AS(signed_distance(vol), EmptyVolume);
  CHECK_THROWS_AS(signed_distance_bruteforce(vol), EmptyVolume);
}

TEST_CASE("transform equals the oracle bitwise on random volumes") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto vol = random_volume({20, 20, 20}, seed);
    CHECK(bitwise_equal(signed_distance(vol),
                        signed_distance_bruteforce(vol)));
  }
}

TEST_CASE("oracle self-consistency on 10^3 volumes") {
  for (std::uint64_t seed = 100; seed < 150; ++seed) {
    const auto vol = random_volume({10, 10, 10}, seed, 0.3);
    CHECK(bitwise_equal(signed_distance(vol),
                        signed_distance_bruteforce(vol)));
  }
}

TEST_CASE("sparse and dense volumes agree with the oracle") {
  for (double density : {0.02, 0.98}) {
    const auto vol = random_volume({14, 9, 17}, 42, density);
    CHECK(bitwise_equal(signed_distance(vol),
                        signed_distance_bruteforce(vol)));
  }
}

TEST_CASE("sign partitions occupancy with no zeros") {
  const auto vol = random_volume({12, 12, 12}, 5);
  const auto field = signed_distance(vol);
  for (std::size_t i = 0; i < vol.voxels.size(); ++i) {
    if (vol.voxels[i])
      CHECK(field.values[i] < 0.0);
    else
      CHECK(field.values[i] > 0.0);
  }
}

TEST_CASE("field is 1-Lipschitz in the voxel metric") {
  const auto vol = random_volume({12, 12, 12}, 9);
  const auto field = signed_distance(vol);
  Rng rng(17);
  const GridDims d = vol.dims;
  for (int trial = 0; trial < 2000; ++trial) {
    const int x0 = static_cast<int>(rng.index(d.nx));
    const int y0 = static_cast<int>(rng.index(d.ny));
    const int z0 = static_cast<int>(rng.index(d.nz));
    const int x1 = static_cast<int>(rng.index(d.nx));
    const int y1 = static_cast<int>(rng.index(d.ny));
    const int z1 = static_cast<int>(rng.index(d.nz));
    const double dist = std::sqrt(double((x0 - x1) * (x0 - x1) +
                                         (y0 - y1) * (y0 - y1) +
                                         (z0 - z1) * (z0 - z1)));
    const double diff = std::abs(field.at(x0, y0, z0) - field.at(x1, y1, z1));
    CHECK(diff <= dist + 1e-9);
  }
}

TEST_CASE("anisotropic spacing agrees with the oracle") {
  const Spacing sp{1.0, 2.0, 0.5};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto vol = random_volume({9, 8, 10}, seed, 0.4, sp);
    const auto a = signed_distance(vol);
    const auto b = signed_distance_bruteforce(vol);
    for (std::size_t i = 0; i < a.values.size(); ++i)
      CHECK(a.values[i] ==
            doctest::Approx(b.values[i]).epsilon(1e-12));
  }
}

TEST_CASE("ball phantom: deepest point sits at the center") {
  const auto vol = make_ball({21, 21, 21}, {10, 10, 10}, 6.0);
  const auto field = signed_distance(vol);
  // The nearest empty lattice point to the center has squared norm 37
  // (= 6^2 + 1^2, the smallest integer above 36).
  double deepest = 0.0;
  for (double v : field.values) deepest = std::min(deepest, v);
  CHECK(field.at(10, 10, 10) == deepest);
  CHECK(deepest == doctest::Approx(-std::sqrt(37.0)).epsilon(1e-12));
  CHECK(bitwise_equal(field, signed_distance_bruteforce(vol)));
}
