#pragma once

#include <limits>
#include <string>
#include <vector>

#include "sdph/grid.hpp"

namespace sdph {

constexpr double kInfDeath = std::numeric_limits<double>::infinity();

struct PersistencePoint {
  int degree = 0;  // 0, 1, or 2
  double birth = 0.0;
  double death = kInfDeath;  // +inf for essential classes
  Voxel birth_cell{-1, -1, -1};  // {-1,-1,-1} when no anchor is attached
  Voxel death_cell{-1, -1, -1};  // meaningful only when finite
  bool essential = false;

  double persistence() const { return death - birth; }
};

struct Diagram {
  std::vector<PersistencePoint> points;
  std::string source_id;
  GridDims dims;
  Spacing spacing;
  Voxel chunk_origin{0, 0, 0};
  // Set on chunked runs: cutting planes create spurious PH0 NW points.
  bool chunk_boundary_artifacts = false;
};

// Sublevel-set cubical persistence of the field in degrees 0..2. Voxels are
// the top cells and carry the field values; every lower cell takes the min
// of its incident top cells, so the sublevel complex at r is the union of
// the closed cubes of voxels with value <= r. Zero-length intervals are not
// reported. Each finite point is anchored to the top cells that set its
// birth and death values.
Diagram persistence(const ScalarField& field);

// Naive full boundary-matrix reduction with the identical contract.
// Throws TooLarge when the complex exceeds 1e5 cells.
Diagram persistence_bruteforce(const ScalarField& field);

struct ChunkGrid {
  int cx = 1, cy = 1, cz = 1;
};

// Splits the field into near-equal axis-aligned chunks and runs
// `persistence` on each, in parallel. Anchors are translated to global
// voxel coordinates; diagrams are ordered by chunk index regardless of
// scheduling and carry their chunk origin.
std::vector<Diagram> persistence_chunked(const ScalarField& field,
                                         ChunkGrid grid);

}  // namespace sdph
