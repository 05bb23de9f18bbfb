#include "sdph/sdt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <vector>

#include "sdph/threads.hpp"

namespace sdph {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1D lower-envelope transform: out[q] = min_v (((q - v) * w)^2 + f[v]).
// Sites with f = +inf never contribute. v/z are caller scratch of size n
// and n + 1.
void envelope_1d(const double* f, int n, double w, double* out, int* v,
                 double* z) {
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] == kInf) continue;
    double s;
    while (true) {
      if (k < 0) {
        s = -kInf;
        break;
      }
      const int p = v[k];
      s = ((f[q] - f[p]) / (w * w) + static_cast<double>(q) * q -
           static_cast<double>(p) * p) /
          (2.0 * (q - p));
      if (s > z[k]) break;
      --k;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  if (k < 0) {
    std::fill(out, out + n, kInf);
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    const double dq = (q - v[j]) * w;
    out[q] = dq * dq + f[v[j]];
  }
}

// One separable pass along `axis` over every scan line. Lines are
// independent, so the parallel schedule cannot change the result.
void transform_axis(std::vector<double>& grid, const GridDims& d, int axis,
                    double w) {
  const int n[3] = {d.nx, d.ny, d.nz};
  const std::ptrdiff_t strides[3] = {
      1, d.nx, static_cast<std::ptrdiff_t>(d.nx) * d.ny};
  const int len = n[axis];
  const std::ptrdiff_t stride = strides[axis];
  const int u_axis = axis == 0 ? 1 : 0;
  const int v_axis = axis == 2 ? 1 : 2;
  const std::ptrdiff_t nu = n[u_axis], nv = n[v_axis];
  const std::ptrdiff_t su = strides[u_axis], sv = strides[v_axis];
  const std::ptrdiff_t n_lines = nu * nv;

#ifdef _OPENMP
#pragma omp parallel num_threads(effective_threads())
#endif
  {
    std::vector<double> f(len), out(len);
    std::vector<int> vbuf(len);
    std::vector<double> zbuf(len + 1);
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
    for (std::ptrdiff_t line = 0; line < n_lines; ++line) {
      const std::ptrdiff_t base = (line % nu) * su + (line / nu) * sv;
      double* g = grid.data() + base;
      for (int i = 0; i < len; ++i) f[i] = g[i * stride];
      envelope_1d(f.data(), len, w, out.data(), vbuf.data(), zbuf.data());
      for (int i = 0; i < len; ++i) g[i * stride] = out[i];
    }
  }
}

// Squared Euclidean distance from every voxel to the nearest site.
std::vector<double> squared_edt(const std::vector<std::uint8_t>& is_site,
                                const GridDims& d, const Spacing& sp) {
  std::vector<double> grid(d.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    grid[i] = is_site[i] ? 0.0 : kInf;
  transform_axis(grid, d, 0, sp.sx);
  transform_axis(grid, d, 1, sp.sy);
  transform_axis(grid, d, 2, sp.sz);
  return grid;
}

}  // namespace

ScalarField signed_distance(const BinaryVolume& vol) {
  const GridDims d = vol.dims;
  if (vol.occupied_count() == 0)
    throw EmptyVolume("signed_distance requires an occupied voxel");

  // Outside: distance from empty voxels to the occupied set.
  const std::vector<double> outside = squared_edt(vol.voxels, d, vol.spacing);

  // Inside: distance from occupied voxels to the nearest empty center. A
  // one-voxel empty padding layer realizes the infinite empty exterior
  // exactly (the nearest exterior lattice point is always in that layer).
  const GridDims pd{d.nx + 2, d.ny + 2, d.nz + 2};
  std::vector<std::uint8_t> pad_site(pd.size(), 1);
  for (int z = 0; z < d.nz; ++z)
    for (int y = 0; y < d.ny; ++y)
      for (int x = 0; x < d.nx; ++x)
        pad_site[voxel_index(pd, x + 1, y + 1, z + 1)] =
            vol.at(x, y, z) ? 0 : 1;
  const std::vector<double> inside = squared_edt(pad_site, pd, vol.spacing);

  ScalarField field(d, vol.spacing);
  for (int z = 0; z < d.nz; ++z)
    for (int y = 0; y < d.ny; ++y)
      for (int x = 0; x < d.nx; ++x) {
        const std::size_t i = voxel_index(d, x, y, z);
        field.values[i] =
            vol.voxels[i]
                ? -std::sqrt(inside[voxel_index(pd, x + 1, y + 1, z + 1)])
                : std::sqrt(outside[i]);
      }
  return field;
}

ScalarField signed_distance_bruteforce(const BinaryVolume& vol) {
  const GridDims d = vol.dims;
  if (vol.occupied_count() == 0)
    throw EmptyVolume("signed_distance requires an occupied voxel");
  const Spacing sp = vol.spacing;
  const double smin = std::min({sp.sx, sp.sy, sp.sz});

  ScalarField field(d, sp);

  // Exhaustive nearest-opposite-voxel search in expanding Chebyshev shells.
  // A shell at radius k can only contain candidates with squared distance
  // >= (k * smin)^2, which bounds the scan exactly.
  auto nearest_sq = [&](int px, int py, int pz, bool from_occupied) {
    // Occupied voxels may find their nearest empty center in the one-voxel
    // exterior padding layer.
    const int lo = from_occupied ? -1 : 0;
    const int hix = from_occupied ? d.nx : d.nx - 1;
    const int hiy = from_occupied ? d.ny : d.ny - 1;
    const int hiz = from_occupied ? d.nz : d.nz - 1;
    const int kmax = std::max({px - lo, hix - px, py - lo, hiy - py, pz - lo,
                               hiz - pz});
    double best = kInf;
    for (int k = 1; k <= kmax; ++k) {
      const double bound = k * smin;
      if (bound * bound > best) break;
      for (int dz = -k; dz <= k; ++dz) {
        const int z = pz + dz;
        if (z < lo || z > hiz) continue;
        for (int dy = -k; dy <= k; ++dy) {
          const int y = py + dy;
          if (y < lo || y > hiy) continue;
          const bool face = std::abs(dz) == k || std::abs(dy) == k;
          const int step = face ? 1 : 2 * k;
          for (int dx = -k; dx <= k; dx += step) {
            const int x = px + dx;
            if (x < lo || x > hix) continue;
            bool candidate;
            if (x < 0 || y < 0 || z < 0 || x >= d.nx || y >= d.ny ||
                z >= d.nz) {
              candidate = from_occupied;  // exterior is empty
            } else {
              candidate = vol.at(x, y, z) != from_occupied;
            }
            if (!candidate) continue;
            const double ex = dx * sp.sx, ey = dy * sp.sy, ez = dz * sp.sz;
            const double sq = ex * ex + ey * ey + ez * ez;
            if (sq < best) best = sq;
          }
        }
      }
    }
    return best;
  };

#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(effective_threads())
#endif
  for (int z = 0; z < d.nz; ++z)
    for (int y = 0; y < d.ny; ++y)
      for (int x = 0; x < d.nx; ++x) {
        const bool occ = vol.at(x, y, z);
        const double sq = nearest_sq(x, y, z, occ);
        field.at(x, y, z) = occ ? -std::sqrt(sq) : std::sqrt(sq);
      }
  return field;
}

}  // namespace sdph
