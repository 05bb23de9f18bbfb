#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sdph/errors.hpp"

namespace sdph {

struct GridDims {
  int nx = 0, ny = 0, nz = 0;

  std::size_t size() const {
    return static_cast<std::size_t>(nx) * ny * nz;
  }
  bool valid() const { return nx >= 1 && ny >= 1 && nz >= 1; }
  bool operator==(const GridDims&) const = default;
};

struct Spacing {
  double sx = 1.0, sy = 1.0, sz = 1.0;

  bool valid() const { return sx > 0 && sy > 0 && sz > 0; }
  bool isotropic() const { return sx == sy && sy == sz; }
  bool operator==(const Spacing&) const = default;
};

// Integer voxel coordinate.
struct Voxel {
  int x = 0, y = 0, z = 0;

  bool operator==(const Voxel&) const = default;
};

inline std::size_t voxel_index(const GridDims& d, int x, int y, int z) {
  return static_cast<std::size_t>(x) +
         static_cast<std::size_t>(d.nx) *
             (static_cast<std::size_t>(y) +
              static_cast<std::size_t>(d.ny) * static_cast<std::size_t>(z));
}

// 3D occupancy grid, x-fastest row-major.
struct BinaryVolume {
  GridDims dims;
  Spacing spacing;
  std::vector<std::uint8_t> voxels;

  BinaryVolume() = default;
  BinaryVolume(GridDims d, Spacing s = {})
      : dims(d), spacing(s), voxels(d.size(), 0) {}

  bool at(int x, int y, int z) const {
    return voxels[voxel_index(dims, x, y, z)] != 0;
  }
  void set(int x, int y, int z, bool v) {
    voxels[voxel_index(dims, x, y, z)] = v ? 1 : 0;
  }
  std::size_t occupied_count() const {
    std::size_t n = 0;
    for (auto v : voxels) n += v != 0;
    return n;
  }
};

// 3D real-valued grid, x-fastest row-major.
struct ScalarField {
  GridDims dims;
  Spacing spacing;
  std::vector<double> values;

  ScalarField() = default;
  ScalarField(GridDims d, Spacing s = {})
      : dims(d), spacing(s), values(d.size(), 0.0) {}

  double at(int x, int y, int z) const {
    return values[voxel_index(dims, x, y, z)];
  }
  double& at(int x, int y, int z) {
    return values[voxel_index(dims, x, y, z)];
  }
};

}  // namespace sdph
