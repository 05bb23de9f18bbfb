#include "sdph/cubical.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>

#include "sdph/threads.hpp"

namespace sdph {

namespace {

// Khalimsky-coordinate cubical complex: cell (kx, ky, kz) with
// kx in [0, 2nx], odd coordinates carrying extent. Voxel (x, y, z) is the
// top cell (2x+1, 2y+1, 2z+1); the cell dimension is the number of odd
// coordinates.
struct Complex {
  const ScalarField* field;
  int nx, ny, nz;    // voxel dims
  int kx, ky, kz;    // Khalimsky dims (2n+1)
  std::vector<double> value;  // per cell, min over incident voxels
  std::vector<std::uint8_t> dim;

  explicit Complex(const ScalarField& f)
      : field(&f),
        nx(f.dims.nx),
        ny(f.dims.ny),
        nz(f.dims.nz),
        kx(2 * f.dims.nx + 1),
        ky(2 * f.dims.ny + 1),
        kz(2 * f.dims.nz + 1) {
    const std::size_t n_cells = size();
    value.resize(n_cells);
    dim.resize(n_cells);
    for (int z = 0; z < kz; ++z)
      for (int y = 0; y < ky; ++y)
        for (int x = 0; x < kx; ++x) {
          const std::size_t id = index(x, y, z);
          dim[id] = static_cast<std::uint8_t>((x & 1) + (y & 1) + (z & 1));
          value[id] = min_incident_value(x, y, z);
        }
  }

  std::size_t size() const {
    return static_cast<std::size_t>(kx) * ky * kz;
  }
  std::size_t index(int x, int y, int z) const {
    return static_cast<std::size_t>(x) +
           static_cast<std::size_t>(kx) *
               (static_cast<std::size_t>(y) +
                static_cast<std::size_t>(ky) * static_cast<std::size_t>(z));
  }
  std::array<int, 3> coords(std::size_t id) const {
    const int x = static_cast<int>(id % kx);
    const int y = static_cast<int>((id / kx) % ky);
    const int z = static_cast<int>(id / (static_cast<std::size_t>(kx) * ky));
    return {x, y, z};
  }

  // Candidate voxel indices along one axis for Khalimsky coordinate k.
  static void axis_candidates(int k, int n, int out[2], int& count) {
    if (k & 1) {
      out[0] = (k - 1) / 2;
      count = 1;
    } else {
      count = 0;
      if (k / 2 - 1 >= 0) out[count++] = k / 2 - 1;
      if (k / 2 <= n - 1) out[count++] = k / 2;
    }
  }

  double min_incident_value(int x, int y, int z) const {
    int cx[2], cy[2], cz[2];
    int ncx, ncy, ncz;
    axis_candidates(x, nx, cx, ncx);
    axis_candidates(y, ny, cy, ncy);
    axis_candidates(z, nz, cz, ncz);
    double best = kInfDeath;
    for (int a = 0; a < ncx; ++a)
      for (int b = 0; b < ncy; ++b)
        for (int c = 0; c < ncz; ++c)
          best = std::min(best, field->at(cx[a], cy[b], cz[c]));
    return best;
  }

  // The incident voxel realizing the cell value; ties resolved toward the
  // smallest voxel linear index.
  Voxel anchor_voxel(std::size_t id) const {
    const auto [x, y, z] = coords(id);
    int cx[2], cy[2], cz[2];
    int ncx, ncy, ncz;
    axis_candidates(x, nx, cx, ncx);
    axis_candidates(y, ny, cy, ncy);
    axis_candidates(z, nz, cz, ncz);
    Voxel best{-1, -1, -1};
    double best_val = kInfDeath;
    std::size_t best_idx = ~std::size_t{0};
    for (int c = 0; c < ncz; ++c)
      for (int b = 0; b < ncy; ++b)
        for (int a = 0; a < ncx; ++a) {
          const double v = field->at(cx[a], cy[b], cz[c]);
          const std::size_t vi =
              voxel_index(field->dims, cx[a], cy[b], cz[c]);
          if (v < best_val || (v == best_val && vi < best_idx)) {
            best_val = v;
            best_idx = vi;
            best = Voxel{cx[a], cy[b], cz[c]};
          }
        }
    return best;
  }

  // Faces of a cell: drop one odd coordinate in each direction.
  int boundary(std::size_t id, std::size_t out[6]) const {
    const auto [x, y, z] = coords(id);
    int n = 0;
    if (x & 1) {
      out[n++] = index(x - 1, y, z);
      out[n++] = index(x + 1, y, z);
    }
    if (y & 1) {
      out[n++] = index(x, y - 1, z);
      out[n++] = index(x, y + 1, z);
    }
    if (z & 1) {
      out[n++] = index(x, y, z - 1);
      out[n++] = index(x, y, z + 1);
    }
    return n;
  }
};

using Column = std::vector<std::uint32_t>;

// Symmetric difference of two sorted pivot-rank columns (Z/2 addition).
void add_column(Column& target, const Column& other, Column& scratch) {
  scratch.clear();
  std::set_symmetric_difference(target.begin(), target.end(), other.begin(),
                                other.end(), std::back_inserter(scratch));
  target.swap(scratch);
}

struct RawPair {
  std::size_t birth_cell;
  std::size_t death_cell;  // ~0 for essential
  int degree;
};

// Column reduction with the twist/clearing optimization, degree-descending.
// Emits all persistence pairs and essential birth cells.
std::vector<RawPair> reduce(const Complex& cx) {
  const std::size_t n_cells = cx.size();

  // Per-dimension filtration order: by (value, cell id).
  std::array<std::vector<std::uint32_t>, 4> cells_of_dim;
  std::vector<std::uint32_t> rank(n_cells);
  for (std::size_t id = 0; id < n_cells; ++id)
    cells_of_dim[cx.dim[id]].push_back(static_cast<std::uint32_t>(id));
  for (int d = 0; d <= 3; ++d) {
    auto& cells = cells_of_dim[d];
    std::sort(cells.begin(), cells.end(),
              [&](std::uint32_t a, std::uint32_t b) {
                if (cx.value[a] != cx.value[b])
                  return cx.value[a] < cx.value[b];
                return a < b;
              });
    for (std::size_t r = 0; r < cells.size(); ++r)
      rank[cells[r]] = static_cast<std::uint32_t>(r);
  }

  std::vector<RawPair> pairs;
  std::vector<std::uint8_t> cleared;  // in dim d, set from dim d+1 pivots
  std::vector<std::uint8_t> next_cleared;

  for (int d = 3; d >= 1; --d) {
    const auto& cols = cells_of_dim[d];
    const auto& rows = cells_of_dim[d - 1];
    next_cleared.assign(rows.size(), 0);

    std::vector<std::int64_t> owner(rows.size(), -1);
    std::vector<Column> stored;
    Column col, scratch;
    std::size_t bd[6];

    for (std::size_t cj = 0; cj < cols.size(); ++cj) {
      if (!cleared.empty() && cleared[cj]) continue;
      const std::uint32_t j = cols[cj];
      const int nb = cx.boundary(j, bd);
      col.clear();
      for (int i = 0; i < nb; ++i)
        col.push_back(rank[bd[i]]);
      std::sort(col.begin(), col.end());

      while (!col.empty()) {
        const std::uint32_t piv = col.back();
        if (owner[piv] >= 0) {
          add_column(col, stored[static_cast<std::size_t>(owner[piv])],
                     scratch);
          continue;
        }
        owner[piv] = static_cast<std::int64_t>(stored.size());
        stored.push_back(col);
        next_cleared[piv] = 1;
        pairs.push_back(RawPair{rows[piv], j, d - 1});
        break;
      }
      if (col.empty() && d <= 2) {
        // d-cell creating a d-cycle and not cleared: essential candidate.
        // It can never be killed later because dims d+1..3 are already
        // reduced, so no pivot points at it.
        pairs.push_back(RawPair{j, ~std::size_t{0}, d});
      }
    }
    cleared.swap(next_cleared);
  }

  // Essential degree-0 classes: vertices never appearing as a pivot row.
  for (std::size_t r = 0; r < cells_of_dim[0].size(); ++r)
    if (cleared.empty() || !cleared[r])
      pairs.push_back(RawPair{cells_of_dim[0][r], ~std::size_t{0}, 0});

  return pairs;
}

// Naive reduction over the single global filtration order, no clearing.
std::vector<RawPair> reduce_bruteforce(const Complex& cx) {
  const std::size_t n_cells = cx.size();
  std::vector<std::uint32_t> order(n_cells);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t a, std::uint32_t b) {
              if (cx.value[a] != cx.value[b]) return cx.value[a] < cx.value[b];
              if (cx.dim[a] != cx.dim[b]) return cx.dim[a] < cx.dim[b];
              return a < b;
            });
  std::vector<std::uint32_t> rank(n_cells);
  for (std::size_t r = 0; r < n_cells; ++r) rank[order[r]] = r;

  std::vector<Column> matrix(n_cells);
  std::size_t bd[6];
  for (std::size_t r = 0; r < n_cells; ++r) {
    const int nb = cx.boundary(order[r], bd);
    for (int i = 0; i < nb; ++i) matrix[r].push_back(rank[bd[i]]);
    std::sort(matrix[r].begin(), matrix[r].end());
  }

  std::vector<std::int64_t> owner(n_cells, -1);
  std::vector<std::uint8_t> is_pivot_row(n_cells, 0);
  std::vector<RawPair> pairs;
  Column scratch;
  for (std::size_t r = 0; r < n_cells; ++r) {
    Column& col = matrix[r];
    while (!col.empty()) {
      const std::uint32_t piv = col.back();
      if (owner[piv] >= 0) {
        add_column(col, matrix[static_cast<std::size_t>(owner[piv])],
                   scratch);
        continue;
      }
      owner[piv] = static_cast<std::int64_t>(r);
      is_pivot_row[piv] = 1;
      pairs.push_back(
          RawPair{order[piv], order[r], cx.dim[order[piv]]});
      break;
    }
  }
  for (std::size_t r = 0; r < n_cells; ++r) {
    if (!matrix[r].empty() || is_pivot_row[r]) continue;
    const std::uint32_t cell = order[r];
    if (cx.dim[cell] <= 2)
      pairs.push_back(RawPair{cell, ~std::size_t{0}, cx.dim[cell]});
  }
  return pairs;
}

Diagram pairs_to_diagram(const Complex& cx, const std::vector<RawPair>& pairs,
                         const ScalarField& field) {
  Diagram dg;
  dg.dims = field.dims;
  dg.spacing = field.spacing;
  for (const RawPair& p : pairs) {
    if (p.degree > 2) continue;
    PersistencePoint pt;
    pt.degree = p.degree;
    pt.birth = cx.value[p.birth_cell];
    pt.birth_cell = cx.anchor_voxel(p.birth_cell);
    if (p.death_cell == ~std::size_t{0}) {
      pt.death = kInfDeath;
      pt.essential = true;
    } else {
      pt.death = cx.value[p.death_cell];
      if (pt.death == pt.birth) continue;  // zero-length interval
      pt.death_cell = cx.anchor_voxel(p.death_cell);
    }
    dg.points.push_back(pt);
  }
  std::sort(dg.points.begin(), dg.points.end(),
            [](const PersistencePoint& a, const PersistencePoint& b) {
              if (a.degree != b.degree) return a.degree < b.degree;
              if (a.birth != b.birth) return a.birth < b.birth;
              if (a.death != b.death) return a.death < b.death;
              const auto ka = std::array<int, 3>{a.birth_cell.z,
                                                 a.birth_cell.y,
                                                 a.birth_cell.x};
              const auto kb = std::array<int, 3>{b.birth_cell.z,
                                                 b.birth_cell.y,
                                                 b.birth_cell.x};
              return ka < kb;
            });
  return dg;
}

}  // namespace

Diagram persistence(const ScalarField& field) {
  if (!field.dims.valid() || field.values.size() != field.dims.size())
    throw Error("persistence: invalid field");
  Complex cx(field);
  Diagram dg = pairs_to_diagram(cx, reduce(cx), field);
  dg.source_id = "full";
  return dg;
}

Diagram persistence_bruteforce(const ScalarField& field) {
  if (!field.dims.valid() || field.values.size() != field.dims.size())
    throw Error("persistence: invalid field");
  Complex cx(field);
  if (cx.size() > 100000)
    throw TooLarge("persistence_bruteforce is limited to 1e5 cells");
  Diagram dg = pairs_to_diagram(cx, reduce_bruteforce(cx), field);
  dg.source_id = "bruteforce";
  return dg;
}

std::vector<Diagram> persistence_chunked(const ScalarField& field,
                                         ChunkGrid grid) {
  const GridDims d = field.dims;
  if (grid.cx < 1 || grid.cy < 1 || grid.cz < 1 || grid.cx > d.nx ||
      grid.cy > d.ny || grid.cz > d.nz)
    throw InvalidChunking("chunk counts must be >= 1 and <= dims");

  const int n_chunks = grid.cx * grid.cy * grid.cz;
  const bool multi = n_chunks > 1;
  auto lo = [](int n, int c, int i) { return (i * n) / c; };

  std::vector<Diagram> out(n_chunks);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(effective_threads())
#endif
  for (int ci = 0; ci < n_chunks; ++ci) {
    const int ix = ci % grid.cx;
    const int iy = (ci / grid.cx) % grid.cy;
    const int iz = ci / (grid.cx * grid.cy);
    const int x0 = lo(d.nx, grid.cx, ix), x1 = lo(d.nx, grid.cx, ix + 1);
    const int y0 = lo(d.ny, grid.cy, iy), y1 = lo(d.ny, grid.cy, iy + 1);
    const int z0 = lo(d.nz, grid.cz, iz), z1 = lo(d.nz, grid.cz, iz + 1);

    ScalarField sub(GridDims{x1 - x0, y1 - y0, z1 - z0}, field.spacing);
    for (int z = z0; z < z1; ++z)
      for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x)
          sub.at(x - x0, y - y0, z - z0) = field.at(x, y, z);

    Diagram dg = persistence(sub);
    dg.chunk_origin = Voxel{x0, y0, z0};
    dg.chunk_boundary_artifacts = multi;
    dg.source_id = "chunk_" + std::to_string(ix) + "_" + std::to_string(iy) +
                   "_" + std::to_string(iz);
    for (PersistencePoint& pt : dg.points) {
      pt.birth_cell.x += x0;
      pt.birth_cell.y += y0;
      pt.birth_cell.z += z0;
      if (!pt.essential) {
        pt.death_cell.x += x0;
        pt.death_cell.y += y0;
        pt.death_cell.z += z0;
      }
    }
    out[ci] = std::move(dg);
  }
  return out;
}

}  // namespace sdph
