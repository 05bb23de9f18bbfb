#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "sdph/grid.hpp"

namespace sdph {

enum class PhantomClass { ThickSparse, ThinDense, ThinDilated };

std::string to_string(PhantomClass c);
PhantomClass phantom_class_from_string(const std::string& s);

// Parameters for the random vessel-network generator.
struct PhantomSpec {
  PhantomClass klass = PhantomClass::ThickSparse;
  double tube_radius_min = 2.0;  // voxels
  double tube_radius_max = 3.0;
  double gap_min = 4.0;  // surface-to-surface separation, voxels
  double gap_max = 8.0;
  int n_tubes = 10;
  std::uint64_t seed = 0;
  GridDims dims{48, 48, 48};

  void validate() const;  // throws DegenerateSpec
};

// Calibrated preset for one of the three synthetic morphology classes.
PhantomSpec default_phantom_spec(PhantomClass klass, GridDims dims,
                                 std::uint64_t seed);

enum class Axis { X, Y, Z };

// Solid ball: voxel occupied iff lattice distance from its center to
// `center` is <= radius. Throws BallOutOfBounds unless the ball keeps at
// least one empty voxel of margin to every face.
BinaryVolume make_ball(GridDims dims, std::array<double, 3> center,
                       double radius, Spacing spacing = {});

// Solid torus around `axis`: occupied iff sqrt((rho - ring_radius)^2 + h^2)
// <= tube_radius, rho the in-plane radial distance and h the axial offset.
BinaryVolume make_torus(GridDims dims, std::array<double, 3> center,
                        double ring_radius, double tube_radius, Axis axis,
                        Spacing spacing = {});

// Union of randomly placed capsules (cylinders with spherical caps) along
// axis or diagonal lattice directions. Pure function of the spec.
BinaryVolume make_vessel_network(const PhantomSpec& spec);

// Segment length used for capsules, exposed so tests can compute the
// analytic capsule volume.
double capsule_segment_length(const GridDims& dims);

}  // namespace sdph
