#include "sdph/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "sdph/rng.hpp"

namespace sdph {

std::string to_string(PhantomClass c) {
  switch (c) {
    case PhantomClass::ThickSparse: return "thick-sparse";
    case PhantomClass::ThinDense: return "thin-dense";
    case PhantomClass::ThinDilated: return "thin-dilated";
  }
  return "?";
}

PhantomClass phantom_class_from_string(const std::string& s) {
  if (s == "thick-sparse") return PhantomClass::ThickSparse;
  if (s == "thin-dense") return PhantomClass::ThinDense;
  if (s == "thin-dilated") return PhantomClass::ThinDilated;
  throw DegenerateSpec("unknown phantom class: " + s);
}

void PhantomSpec::validate() const {
  if (!dims.valid()) throw DegenerateSpec("phantom dims must be positive");
  if (!(tube_radius_min > 0 && tube_radius_min <= tube_radius_max))
    throw DegenerateSpec("tube radius range must satisfy 0 < min <= max");
  if (!(gap_min > 0 && gap_min <= gap_max))
    throw DegenerateSpec("gap range must satisfy 0 < min <= max");
  if (n_tubes < 1) throw DegenerateSpec("n_tubes must be >= 1");
}

PhantomSpec default_phantom_spec(PhantomClass klass, GridDims dims,
                                 std::uint64_t seed) {
  PhantomSpec s;
  s.klass = klass;
  s.dims = dims;
  s.seed = seed;
  const double scale =
      static_cast<double>(std::min({dims.nx, dims.ny, dims.nz})) / 48.0;
  const int base = static_cast<int>(std::lround(scale * scale * scale * 10));
  switch (klass) {
    case PhantomClass::ThickSparse:
      // Thick vessels, wide interstitial gaps.
      s.tube_radius_min = 3.5;
      s.tube_radius_max = 4.5;
      s.gap_min = 10.0;
      s.gap_max = 16.0;
      s.n_tubes = std::max(1, base);
      break;
    case PhantomClass::ThinDense:
      // Thin vessels, tight gaps.
      s.tube_radius_min = 1.4;
      s.tube_radius_max = 2.0;
      s.gap_min = 2.0;
      s.gap_max = 4.5;
      s.n_tubes = std::max(1, base * 2 + 2);
      break;
    case PhantomClass::ThinDilated:
      // Thin vessels, dilated gaps.
      s.tube_radius_min = 1.4;
      s.tube_radius_max = 2.0;
      s.gap_min = 9.0;
      s.gap_max = 15.0;
      s.n_tubes = std::max(1, base + 4);
      break;
  }
  return s;
}

BinaryVolume make_ball(GridDims dims, std::array<double, 3> center,
                       double radius, Spacing spacing) {
  if (!dims.valid() || radius <= 0)
    throw BallOutOfBounds("invalid dims or radius");
  const double n[3] = {static_cast<double>(dims.nx),
                       static_cast<double>(dims.ny),
                       static_cast<double>(dims.nz)};
  for (int a = 0; a < 3; ++a) {
    if (center[a] - radius < 1.0 || center[a] + radius > n[a] - 2.0)
      throw BallOutOfBounds("ball must keep a one-voxel margin to every face");
  }
  BinaryVolume vol(dims, spacing);
  const double r2 = radius * radius;
  for (int z = 0; z < dims.nz; ++z)
    for (int y = 0; y < dims.ny; ++y)
      for (int x = 0; x < dims.nx; ++x) {
        const double dx = x - center[0];
        const double dy = y - center[1];
        const double dz = z - center[2];
        if (dx * dx + dy * dy + dz * dz <= r2) vol.set(x, y, z, true);
      }
  return vol;
}

BinaryVolume make_torus(GridDims dims, std::array<double, 3> center,
                        double ring_radius, double tube_radius, Axis axis,
                        Spacing spacing) {
  if (!(tube_radius > 0) || ring_radius <= tube_radius)
    throw InvalidGeometry("torus requires ring_radius > tube_radius > 0");
  const int ax = static_cast<int>(axis);
  const int p0 = (ax + 1) % 3, p1 = (ax + 2) % 3;  // in-plane axes
  const double n[3] = {static_cast<double>(dims.nx),
                       static_cast<double>(dims.ny),
                       static_cast<double>(dims.nz)};
  const double reach = ring_radius + tube_radius;
  if (center[p0] - reach < 1.0 || center[p0] + reach > n[p0] - 2.0 ||
      center[p1] - reach < 1.0 || center[p1] + reach > n[p1] - 2.0 ||
      center[ax] - tube_radius < 1.0 ||
      center[ax] + tube_radius > n[ax] - 2.0)
    throw TorusOutOfBounds("torus must keep a one-voxel margin to every face");

  BinaryVolume vol(dims, spacing);
  const double r2 = tube_radius * tube_radius;
  for (int z = 0; z < dims.nz; ++z)
    for (int y = 0; y < dims.ny; ++y)
      for (int x = 0; x < dims.nx; ++x) {
        const double p[3] = {x - center[0], y - center[1], z - center[2]};
        const double rho = std::sqrt(p[p0] * p[p0] + p[p1] * p[p1]);
        const double dr = rho - ring_radius;
        const double h = p[ax];
        if (dr * dr + h * h <= r2) vol.set(x, y, z, true);
      }
  return vol;
}

double capsule_segment_length(const GridDims& dims) {
  return 0.6 * std::min({dims.nx, dims.ny, dims.nz});
}

namespace {

struct Capsule {
  double ax, ay, az;  // segment endpoint A
  double bx, by, bz;  // segment endpoint B
  double radius;
};

// One of 13 axis or diagonal lattice directions, unit length.
std::array<double, 3> lattice_direction(std::uint64_t pick) {
  static const int dirs[13][3] = {
      {1, 0, 0},  {0, 1, 0},  {0, 0, 1},   {1, 1, 0},  {1, -1, 0},
      {1, 0, 1},  {1, 0, -1}, {0, 1, 1},   {0, 1, -1}, {1, 1, 1},
      {1, -1, 1}, {1, 1, -1}, {1, -1, -1},
  };
  const int* d = dirs[pick % 13];
  const double norm = std::sqrt(
      static_cast<double>(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]));
  return {d[0] / norm, d[1] / norm, d[2] / norm};
}

bool capsule_in_bounds(const Capsule& c, const GridDims& dims) {
  const double lo[3] = {std::min(c.ax, c.bx), std::min(c.ay, c.by),
                        std::min(c.az, c.bz)};
  const double hi[3] = {std::max(c.ax, c.bx), std::max(c.ay, c.by),
                        std::max(c.az, c.bz)};
  const double n[3] = {static_cast<double>(dims.nx),
                       static_cast<double>(dims.ny),
                       static_cast<double>(dims.nz)};
  for (int a = 0; a < 3; ++a) {
    if (lo[a] - c.radius < 1.0 || hi[a] + c.radius > n[a] - 2.0) return false;
  }
  return true;
}

void rasterize_capsule(const Capsule& c, BinaryVolume& vol) {
  const GridDims& d = vol.dims;
  const double ux = c.bx - c.ax, uy = c.by - c.ay, uz = c.bz - c.az;
  const double len2 = ux * ux + uy * uy + uz * uz;
  const int x0 = std::max(0, static_cast<int>(std::floor(
                                 std::min(c.ax, c.bx) - c.radius)));
  const int x1 = std::min(d.nx - 1, static_cast<int>(std::ceil(
                                        std::max(c.ax, c.bx) + c.radius)));
  const int y0 = std::max(0, static_cast<int>(std::floor(
                                 std::min(c.ay, c.by) - c.radius)));
  const int y1 = std::min(d.ny - 1, static_cast<int>(std::ceil(
                                        std::max(c.ay, c.by) + c.radius)));
  const int z0 = std::max(0, static_cast<int>(std::floor(
                                 std::min(c.az, c.bz) - c.radius)));
  const int z1 = std::min(d.nz - 1, static_cast<int>(std::ceil(
                                        std::max(c.az, c.bz) + c.radius)));
  const double r2 = c.radius * c.radius;
  for (int z = z0; z <= z1; ++z)
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x) {
        const double px = x - c.ax, py = y - c.ay, pz = z - c.az;
        double t = len2 > 0 ? (px * ux + py * uy + pz * uz) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        const double qx = px - t * ux, qy = py - t * uy, qz = pz - t * uz;
        if (qx * qx + qy * qy + qz * qz <= r2) vol.set(x, y, z, true);
      }
}

}  // namespace

BinaryVolume make_vessel_network(const PhantomSpec& spec) {
  spec.validate();
  const GridDims dims = spec.dims;
  Rng rng(spec.seed);

  const double half_len = 0.5 * capsule_segment_length(dims);
  std::vector<Capsule> placed;
  placed.reserve(spec.n_tubes);

  auto make_candidate = [&](double cx, double cy, double cz,
                            double radius) -> Capsule {
    const auto dir = lattice_direction(rng.bits());
    Capsule c;
    c.ax = cx - half_len * dir[0];
    c.ay = cy - half_len * dir[1];
    c.az = cz - half_len * dir[2];
    c.bx = cx + half_len * dir[0];
    c.by = cy + half_len * dir[1];
    c.bz = cz + half_len * dir[2];
    c.radius = radius;
    return c;
  };

  for (int t = 0; t < spec.n_tubes; ++t) {
    const double radius = rng.uniform(spec.tube_radius_min,
                                      spec.tube_radius_max);
    bool ok = false;
    for (int attempt = 0; attempt < 64 && !ok; ++attempt) {
      double cx, cy, cz;
      if (placed.empty()) {
        cx = 0.5 * dims.nx + rng.uniform(-2.0, 2.0);
        cy = 0.5 * dims.ny + rng.uniform(-2.0, 2.0);
        cz = 0.5 * dims.nz + rng.uniform(-2.0, 2.0);
      } else {
        // Offset from a previously placed tube so that the surface gap is
        // drawn from gap_range.
        const Capsule& prev = placed[rng.index(placed.size())];
        const double gap = rng.uniform(spec.gap_min, spec.gap_max);
        const double dist = prev.radius + gap + radius;
        double dx = rng.normal(), dy = rng.normal(), dz = rng.normal();
        const double norm = std::sqrt(dx * dx + dy * dy + dz * dz);
        if (norm < 1e-12) continue;
        const double mx = 0.5 * (prev.ax + prev.bx);
        const double my = 0.5 * (prev.ay + prev.by);
        const double mz = 0.5 * (prev.az + prev.bz);
        cx = mx + dist * dx / norm;
        cy = my + dist * dy / norm;
        cz = mz + dist * dz / norm;
      }
      const Capsule cand = make_candidate(cx, cy, cz, radius);
      if (capsule_in_bounds(cand, dims)) {
        placed.push_back(cand);
        ok = true;
      }
    }
    // A tube that cannot be placed after 64 attempts is skipped.
  }
  if (placed.empty())
    throw DegenerateSpec("no tube fits inside the requested dims");

  BinaryVolume vol(dims);
  for (const Capsule& c : placed) rasterize_capsule(c, vol);

  const std::size_t occ = vol.occupied_count();
  if (occ == 0 || occ == vol.dims.size())
    throw DegenerateSpec("vessel network must contain occupied and empty voxels");
  return vol;
}

}  // namespace sdph
