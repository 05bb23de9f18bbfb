#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sdph/diagram.hpp"

namespace sdph {

// Row-major n x d matrix of feature rows.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  const double* row(std::size_t r) const { return data.data() + r * cols; }
};

inline constexpr int kFeatureCount = 15;

// The 15 local texture features, in fixed order:
//   0..7   mean/std of r0, r1, g2, g3
//   8..13  mean/std of undulation, loop, waviness aspect ratios
//   14     sqrt(Var r1 + Var g2) over the PH1 NW pair set
// Standard deviations are population (1/n); empty categories impute 0.
using FeatureVector = std::array<double, kFeatureCount>;

FeatureVector features15(const Diagram& local);

// Ellipsoid sampling grid of the local analysis: centers every `spacing`
// voxels strictly inside dims, horizontal radius r_xy, vertical radius
// rz_fraction * nz; ordered z, y, x ascending.
std::vector<Ellipsoid> sample_grid(const GridDims& dims, int spacing = 5,
                                   double r_xy = 40.0,
                                   double rz_fraction = 0.2);

// Per-column z-score; constant columns map to zero. Throws TooFewRows.
Matrix normalize(const Matrix& features);

struct KMeansResult {
  std::vector<int> labels;
  Matrix centroids;
  double inertia = 0.0;  // within-cluster sum of squared distances
  int iterations = 0;
};

// Lloyd iterations from a k-means++ seeding; deterministic per seed.
KMeansResult kmeans(const Matrix& features, int k, std::uint64_t seed,
                    int max_iter = 300, double tol = 1e-6);

// Unweighted full-covariance Gaussian mixture clustering; each row is
// assigned to its maximum-responsibility component.
std::vector<int> cluster_gmm(const Matrix& features, int k,
                             std::uint64_t seed);

struct ClaraResult {
  std::vector<int> labels;
  std::vector<std::size_t> medoids;  // row indices into the input
  double total_dissimilarity = 0.0;
};

// PAM (build + swap) on random subsamples; the medoid set with the lowest
// total dissimilarity over the full data wins. subsample_size == 0 uses
// min(n, 40 + 2k).
ClaraResult cluster_clara(const Matrix& features, int k, int n_subsamples,
                          std::size_t subsample_size, std::uint64_t seed);

// PAM on the full matrix (exposed for CLARA and for the optimality tests).
ClaraResult pam(const Matrix& features, int k);

struct TextureComposition {
  std::string sample_id;
  std::vector<double> percentages;  // per cluster, sums to 100
};

TextureComposition composition(const std::vector<int>& labels, int k,
                               const std::string& sample_id = {});

struct Pca2Result {
  Matrix embedding;    // n x 2
  Matrix components;   // 2 x d, orthonormal rows
  std::array<double, 2> explained_variance{0.0, 0.0};
};

// Projection onto the top-2 principal axes of the mean-centered data; the
// first nonzero loading of each component is made positive.
Pca2Result pca2(const Matrix& compositions);

}  // namespace sdph
