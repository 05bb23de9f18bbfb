#pragma once

#include <string>
#include <vector>

#include "sdph/errors.hpp"
#include "sdph/points.hpp"

namespace sdph {

struct DensityBounds {
  double bmin = 0.0, bmax = 1.0;
  double dmin = 0.0, dmax = 1.0;

  bool operator==(const DensityBounds&) const = default;
};

struct DensityResolution {
  int nb = 2, nd = 2;

  bool operator==(const DensityResolution&) const = default;
};

// Persistence-weighted kernel density estimate sampled on a cell-centered
// grid. values[j * nb + i] is the density at the center of cell (i, j).
struct DensityGrid {
  DensityBounds bounds;
  DensityResolution res;
  std::vector<double> values;

  double cell_width() const { return (bounds.bmax - bounds.bmin) / res.nb; }
  double cell_height() const { return (bounds.dmax - bounds.dmin) / res.nd; }
  double cell_area() const { return cell_width() * cell_height(); }
  double node_x(int i) const { return bounds.bmin + (i + 0.5) * cell_width(); }
  double node_y(int j) const {
    return bounds.dmin + (j + 0.5) * cell_height();
  }
  double mass() const;
};

// Sum over points of w * (1/(2 pi sigma^2)) exp(-|u - y|^2 / (2 sigma^2)),
// evaluated at every grid node; not normalized. Grid nodes are evaluated in
// parallel. Throws EmptyPointSet.
DensityGrid kde(const std::vector<WeightedPoint>& points,
                DensityBounds bounds, DensityResolution res,
                double sigma = 0.5);

// Bounding box of the points expanded by `pad_sigmas` * sigma on each side.
DensityBounds kde_default_bounds(const std::vector<WeightedPoint>& points,
                                 double sigma, double pad_sigmas = 3.0);

// sqrt(sum over cells of (a - b)^2 * cell_area). Throws GridMismatch.
double l2_distance(const DensityGrid& a, const DensityGrid& b);

struct DendrogramMerge {
  int left = 0;
  int right = 0;
  double height = 0.0;
  int id = 0;  // node id assigned to the merged cluster
};

struct Dendrogram {
  std::vector<std::string> labels;       // leaves 0..n-1
  std::vector<DendrogramMerge> merges;   // n-1 entries, heights non-decreasing

  std::string to_newick() const;
};

// Average-linkage (UPGMA) agglomerative clustering of a symmetric,
// zero-diagonal, nonnegative distance matrix; merge height is half the
// merging distance, ties break toward the smallest (i, j).
Dendrogram upgma(const std::vector<std::vector<double>>& dist,
                 const std::vector<std::string>& labels);

// Leaf clusters after removing merges above `height`.
std::vector<std::vector<int>> cut(const Dendrogram& tree, double height);

}  // namespace sdph
