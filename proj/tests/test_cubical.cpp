#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "sdph/cubical.hpp"
#include "sdph/phantom.hpp"
#include "sdph/rng.hpp"
#include "sdph/sdt.hpp"

using namespace sdph;

namespace {

ScalarField random_int_field(GridDims dims, std::uint64_t seed, int lo = -5,
                             int hi = 5) {
  ScalarField f(dims);
  Rng rng(seed);
  for (auto& v : f.values)
    v = static_cast<double>(lo + static_cast<int>(rng.index(hi - lo + 1)));
  return f;
}

using Triple = std::tuple<int, double, double>;  // degree, birth, death

std::vector<Triple> multiset(const Diagram& dg) {
  std::vector<Triple> out;
  for (const auto& p : dg.points)
    out.emplace_back(p.degree, p.birth, p.death);
  std::sort(out.begin(), out.end());
  return out;
}

// Independent Euler characteristic of the sublevel complex at t: the
// alternating cell count over the Khalimsky grid, with each cell valued at
// the min of its incident voxels.
long euler_characteristic(const ScalarField& f, double t) {
  const int nx = f.dims.nx, ny = f.dims.ny, nz = f.dims.nz;
  long chi = 0;
  for (int kz = 0; kz <= 2 * nz; ++kz)
    for (int ky = 0; ky <= 2 * ny; ++ky)
      for (int kx = 0; kx <= 2 * nx; ++kx) {
        double value = kInfDeath;
        const int xs = kx & 1 ? kx / 2 : std::max(0, kx / 2 - 1);
        const int xe = kx & 1 ? kx / 2 : std::min(nx - 1, kx / 2);
        const int ys = ky & 1 ? ky / 2 : std::max(0, ky / 2 - 1);
        const int ye = ky & 1 ? ky / 2 : std::min(ny - 1, ky / 2);
        const int zs = kz & 1 ? kz / 2 : std::max(0, kz / 2 - 1);
        const int ze = kz & 1 ? kz / 2 : std::min(nz - 1, kz / 2);
        for (int z = zs; z <= ze; ++z)
          for (int y = ys; y <= ye; ++y)
            for (int x = xs; x <= xe; ++x)
              value = std::min(value, f.at(x, y, z));
        if (value <= t) {
          const int dim = (kx & 1) + (ky & 1) + (kz & 1);
          chi += (dim % 2 == 0) ? 1 : -1;
        }
      }
  return chi;
}

// Betti alternating sum implied by the diagram at threshold t.
long diagram_euler(const Diagram& dg, double t) {
  long chi = 0;
  for (const auto& p : dg.points) {
    if (p.birth > t) continue;
    if (!p.essential && p.death <= t) continue;
    chi += (p.degree % 2 == 0) ? 1 : -1;
  }
  return chi;
}

}  // namespace

TEST_CASE("constant field: one essential component, nothing else") {
  ScalarField f({3, 3, 3});
  for (auto dg : {persistence(f), persistence_bruteforce(f)}) {
    REQUIRE(dg.points.size() == 1);
    CHECK(dg.points[0].degree == 0);
    CHECK(dg.points[0].birth == 0.0);
    CHECK(dg.points[0].essential);
  }
}

TEST_CASE("1x1x3 field [0,5,1]: hand-reduced degree-0 pairs") {
  ScalarField f({1, 1, 3});
  f.at(0, 0, 0) = 0.0;
  f.at(0, 0, 1) = 5.0;
  f.at(0, 0, 2) = 1.0;
  for (auto dg : {persistence(f), persistence_bruteforce(f)}) {
    const auto ms = multiset(dg);
    REQUIRE(ms.size() == 2);
    CHECK(ms[0] == Triple{0, 0.0, kInfDeath});
    CHECK(ms[1] == Triple{0, 1.0, 5.0});
  }
}

TEST_CASE("2x2x1 field: single component, no cycles") {
  ScalarField f({2, 2, 1});
  f.at(0, 0, 0) = -1.0;
  f.at(1, 0, 0) = 2.0;
  f.at(0, 1, 0) = 3.0;
  f.at(1, 1, 0) = 4.0;
  for (auto dg : {persistence(f), persistence_bruteforce(f)}) {
    const auto ms = multiset(dg);
    REQUIRE(ms.size() == 1);
    CHECK(ms[0] == Triple{0, -1.0, kInfDeath});
  }
}

TEST_CASE("oracle equivalence and Euler identity on random 5^3 fields") {
  Rng trng(2024);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto f = random_int_field({5, 5, 5}, seed);
    const auto fast = persistence(f);
    const auto slow = persistence_bruteforce(f);
    REQUIRE(multiset(fast) == multiset(slow));
    for (int i = 0; i < 10; ++i) {
      const double t = trng.uniform(-5.5, 5.5);
      CHECK(euler_characteristic(f, t) == diagram_euler(fast, t));
    }
  }
}

TEST_CASE("exactly one essential point per connected computation") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto f = random_int_field({4, 4, 4}, 500 + seed);
    const auto dg = persistence(f);
    int essentials = 0;
    for (const auto& p : dg.points) essentials += p.essential ? 1 : 0;
    CHECK(essentials == 1);
    CHECK(dg.points.front().degree == 0);
  }
}

TEST_CASE("anchors carry the birth and death values") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto f = random_int_field({5, 4, 6}, 900 + seed);
    const auto dg = persistence(f);
    for (const auto& p : dg.points) {
      CHECK(f.at(p.birth_cell.x, p.birth_cell.y, p.birth_cell.z) == p.birth);
      if (!p.essential)
        CHECK(f.at(p.death_cell.x, p.death_cell.y, p.death_cell.z) ==
              p.death);
    }
  }
}

TEST_CASE("torus phantom: one dominant PH1 loop near (-3, 7)") {
  const auto vol = make_torus({31, 31, 11}, {15, 15, 5}, 10.0, 3.0, Axis::Z);
  const auto field = signed_distance(vol);
  const auto dg = persistence(field);

  std::vector<PersistencePoint> dominant;
  for (const auto& p : dg.points)
    if (p.degree == 1 && !p.essential && p.persistence() > 5.0)
      dominant.push_back(p);
  REQUIRE(dominant.size() == 1);
  CHECK(std::abs(dominant[0].birth - (-3.0)) <= 1.5);
  CHECK(std::abs(dominant[0].death - 7.0) <= 1.5);

  // The naive reduction fits (63*63*23 cells) and must agree exactly.
  const auto slow = persistence_bruteforce(field);
  CHECK(multiset(dg) == multiset(slow));
}

TEST_CASE("perturbation stability: matched points move by at most epsilon") {
  const double eps = 0.01;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto base = random_int_field({5, 5, 5}, 3000 + seed);
    ScalarField noisy = base;
    Rng rng(4000 + seed);
    for (auto& v : noisy.values) v += rng.uniform(-eps, eps);

    const auto a = persistence(base);
    const auto b = persistence(noisy);
    // Points born from zero-length integer pairs can re-appear with
    // persistence <= 2 eps; these match the diagonal within eps. Every
    // other point must round back onto the integer diagram, which bounds
    // the bottleneck matching by eps.
    std::vector<Triple> rounded;
    for (const auto& p : b.points) {
      if (!p.essential && p.persistence() <= 2 * eps) continue;
      const double rb = std::round(p.birth);
      CHECK(std::abs(p.birth - rb) <= eps);
      double rd = kInfDeath;
      if (!p.essential) {
        rd = std::round(p.death);
        CHECK(std::abs(p.death - rd) <= eps);
      }
      rounded.emplace_back(p.degree, rb, rd);
    }
    std::sort(rounded.begin(), rounded.end());
    CHECK(rounded == multiset(a));
  }
}

TEST_CASE("chunking with a 1x1x1 grid is the identity") {
  const auto f = random_int_field({6, 5, 4}, 77);
  const auto whole = persistence(f);
  const auto chunks = persistence_chunked(f, {1, 1, 1});
  REQUIRE(chunks.size() == 1);
  CHECK(!chunks[0].chunk_boundary_artifacts);
  CHECK(chunks[0].chunk_origin == Voxel{0, 0, 0});
  CHECK(multiset(chunks[0]) == multiset(whole));
}

TEST_CASE("constant field split in two: one essential point per chunk") {
  ScalarField f({6, 3, 3});
  const auto chunks = persistence_chunked(f, {2, 1, 1});
  REQUIRE(chunks.size() == 2);
  for (const auto& dg : chunks) {
    CHECK(dg.chunk_boundary_artifacts);
    REQUIRE(dg.points.size() == 1);
    CHECK(dg.points[0].essential);
    CHECK(dg.points[0].degree == 0);
  }
}

TEST_CASE("cutting the torus destroys the dominant loop") {
  const auto vol = make_torus({31, 31, 11}, {15, 15, 5}, 10.0, 3.0, Axis::Z);
  const auto field = signed_distance(vol);
  const auto chunks = persistence_chunked(field, {2, 1, 1});
  REQUIRE(chunks.size() == 2);
  for (const auto& dg : chunks) {
    for (const auto& p : dg.points)
      if (p.degree == 1 && !p.essential) CHECK(p.persistence() <= 5.0);
  }
}

TEST_CASE("chunk anchors are translated to global coordinates") {
  const auto f = random_int_field({8, 6, 5}, 1234);
  const auto chunks = persistence_chunked(f, {2, 2, 1});
  for (const auto& dg : chunks) {
    for (const auto& p : dg.points) {
      CHECK(f.at(p.birth_cell.x, p.birth_cell.y, p.birth_cell.z) == p.birth);
      if (!p.essential)
        CHECK(f.at(p.death_cell.x, p.death_cell.y, p.death_cell.z) ==
              p.death);
    }
  }
}

TEST_CASE("diagram output is deterministic") {
  const auto f = random_int_field({6, 6, 6}, 31337);
  const auto a = persistence(f);
  const auto b = persistence(f);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].birth == b.points[i].birth);
    CHECK(a.points[i].death == b.points[i].death);
    CHECK(a.points[i].birth_cell == b.points[i].birth_cell);
  }
}

TEST_CASE("bruteforce refuses oversized complexes") {
  ScalarField f({40, 40, 40});
  CHECK_THROWS_AS(persistence_bruteforce(f), TooLarge);
}
