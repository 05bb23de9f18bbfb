#include "sdph/texture_global.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "sdph/threads.hpp"

namespace sdph {

double DensityGrid::mass() const {
  return std::accumulate(values.begin(), values.end(), 0.0) * cell_area();
}

DensityGrid kde(const std::vector<WeightedPoint>& points,
                DensityBounds bounds, DensityResolution res, double sigma) {
  if (points.empty()) throw EmptyPointSet("kde requires at least one point");
  if (sigma <= 0.0) throw Error("kde sigma must be > 0");
  if (res.nb < 2 || res.nd < 2) throw Error("kde resolution must be >= 2x2");

  DensityGrid grid;
  grid.bounds = bounds;
  grid.res = res;
  grid.values.assign(static_cast<std::size_t>(res.nb) * res.nd, 0.0);

  const double norm = 1.0 / (2.0 * M_PI * sigma * sigma);
  const double inv2s2 = 1.0 / (2.0 * sigma * sigma);

#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(effective_threads())
#endif
  for (int j = 0; j < res.nd; ++j) {
    const double uy = grid.node_y(j);
    for (int i = 0; i < res.nb; ++i) {
      const double ux = grid.node_x(i);
      double v = 0.0;
      for (const WeightedPoint& p : points) {
        const double dx = ux - p.x;
        const double dy = uy - p.y;
        v += p.w * norm * std::exp(-(dx * dx + dy * dy) * inv2s2);
      }
      grid.values[static_cast<std::size_t>(j) * res.nb + i] = v;
    }
  }
  return grid;
}

DensityBounds kde_default_bounds(const std::vector<WeightedPoint>& points,
                                 double sigma, double pad_sigmas) {
  if (points.empty()) throw EmptyPointSet("no points to bound");
  DensityBounds b{points[0].x, points[0].x, points[0].y, points[0].y};
  for (const WeightedPoint& p : points) {
    b.bmin = std::min(b.bmin, p.x);
    b.bmax = std::max(b.bmax, p.x);
    b.dmin = std::min(b.dmin, p.y);
    b.dmax = std::max(b.dmax, p.y);
  }
  const double pad = pad_sigmas * sigma;
  b.bmin -= pad;
  b.bmax += pad;
  b.dmin -= pad;
  b.dmax += pad;
  return b;
}

double l2_distance(const DensityGrid& a, const DensityGrid& b) {
  if (!(a.bounds == b.bounds) || !(a.res == b.res))
    throw GridMismatch("density grids must share bounds and resolution");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double d = a.values[i] - b.values[i];
    acc += d * d;
  }
  return std::sqrt(acc * a.cell_area());
}

Dendrogram upgma(const std::vector<std::vector<double>>& dist,
                 const std::vector<std::string>& labels) {
  const std::size_t n = dist.size();
  if (n == 0 || labels.size() != n)
    throw Error("upgma requires a nonempty matrix with matching labels");
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i].size() != n) throw Error("upgma matrix must be square");
    if (dist[i][i] != 0.0) throw Error("upgma matrix diagonal must be zero");
    for (std::size_t j = 0; j < n; ++j) {
      if (dist[i][j] < 0.0)
        throw NegativeDistance("upgma distances must be nonnegative");
      if (std::abs(dist[i][j] - dist[j][i]) >
          1e-12 * std::max(1.0, std::abs(dist[i][j])))
        throw NotSymmetric("upgma matrix must be symmetric");
    }
  }

  struct Cluster {
    int id;
    int size;
  };
  std::vector<Cluster> active;
  for (std::size_t i = 0; i < n; ++i)
    active.push_back({static_cast<int>(i), 1});
  std::vector<std::vector<double>> d = dist;

  Dendrogram tree;
  tree.labels = labels;
  int next_id = static_cast<int>(n);

  while (active.size() > 1) {
    std::size_t bi = 0, bj = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < active.size(); ++i)
      for (std::size_t j = i + 1; j < active.size(); ++j)
        if (d[i][j] < best) {
          best = d[i][j];
          bi = i;
          bj = j;
        }

    DendrogramMerge m;
    m.left = active[bi].id;
    m.right = active[bj].id;
    m.height = best / 2.0;
    m.id = next_id++;
    tree.merges.push_back(m);

    // Size-weighted arithmetic-mean update of intergroup distances.
    const double wi = active[bi].size, wj = active[bj].size;
    std::vector<double> merged_row;
    for (std::size_t k = 0; k < active.size(); ++k) {
      if (k == bi || k == bj) continue;
      merged_row.push_back((wi * d[bi][k] + wj * d[bj][k]) / (wi + wj));
    }

    const Cluster merged{m.id, active[bi].size + active[bj].size};
    // Rebuild the active list and matrix without rows bi, bj.
    std::vector<Cluster> next_active;
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < active.size(); ++k)
      if (k != bi && k != bj) {
        next_active.push_back(active[k]);
        keep.push_back(k);
      }
    std::vector<std::vector<double>> nd(next_active.size() + 1,
                                        std::vector<double>(
                                            next_active.size() + 1, 0.0));
    for (std::size_t a = 0; a < keep.size(); ++a)
      for (std::size_t b = 0; b < keep.size(); ++b)
        nd[a][b] = d[keep[a]][keep[b]];
    for (std::size_t a = 0; a < keep.size(); ++a) {
      nd[a][next_active.size()] = merged_row[a];
      nd[next_active.size()][a] = merged_row[a];
    }
    next_active.push_back(merged);
    active = std::move(next_active);
    d = std::move(nd);
  }
  return tree;
}

std::vector<std::vector<int>> cut(const Dendrogram& tree, double height) {
  const int n = static_cast<int>(tree.labels.size());
  std::vector<int> parent(n + tree.merges.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const DendrogramMerge& m : tree.merges) {
    if (m.height > height) continue;
    const int a = find(m.left), b = find(m.right);
    parent[a] = m.id;
    parent[b] = m.id;
  }
  std::vector<std::vector<int>> groups;
  std::vector<int> group_of(parent.size(), -1);
  for (int leaf = 0; leaf < n; ++leaf) {
    const int root = find(leaf);
    if (group_of[root] < 0) {
      group_of[root] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[group_of[root]].push_back(leaf);
  }
  return groups;
}

std::string Dendrogram::to_newick() const {
  const int n = static_cast<int>(labels.size());
  std::vector<double> height(n + merges.size(), 0.0);
  std::vector<std::string> repr(n + merges.size());
  for (int i = 0; i < n; ++i) repr[i] = labels[i];
  std::ostringstream os;
  os.precision(17);
  for (const DendrogramMerge& m : merges) {
    std::ostringstream node;
    node.precision(17);
    node << "(" << repr[m.left] << ":" << (m.height - height[m.left]) << ","
         << repr[m.right] << ":" << (m.height - height[m.right]) << ")";
    repr[m.id] = node.str();
    height[m.id] = m.height;
  }
  if (merges.empty() && n == 1) return labels[0] + ";";
  return repr.empty() ? std::string(";")
                      : repr[merges.empty() ? 0 : merges.back().id] + ";";
}

}  // namespace sdph
