#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sdph/errors.hpp"
#include "sdph/points.hpp"

namespace sdph {

enum class Phase { O, I, II };

std::string to_string(Phase p);
Phase phase_from_string(const std::string& s);

struct Vec2 {
  double x = 0.0, y = 0.0;
};

// Symmetric 2x2 covariance.
struct Cov2 {
  double xx = 1.0, xy = 0.0, yy = 1.0;

  double det() const { return xx * yy - xy * xy; }
  bool spd() const { return xx > 0.0 && det() > 0.0; }
};

struct MixtureComponent {
  double alpha = 1.0;
  Vec2 mu;
  Cov2 sigma;
};

struct FitReport {
  double loglik = 0.0;
  double bic = 0.0;
  int iters = 0;
  std::uint64_t seed = 0;
  bool monotone = true;  // log-likelihood never decreased during the fit
  int reinits = 0;       // starved components reinitialized
  bool floored = false;  // a covariance hit the SPD eigenvalue floor
};

// Persistence-weighted phase GMM. During fitting each point y with weight w
// sees component densities Phi(y | mu, Sigma / w); as a density over the
// plane the model is the plain mixture sum alpha * Phi(y | mu, Sigma).
struct MixtureModel {
  std::vector<MixtureComponent> components;
  std::optional<Phase> phase;
  std::string quadrant;
  FitReport fit;

  int size() const { return static_cast<int>(components.size()); }
  double density(double x, double y) const;
};

struct Responsibilities {
  std::size_t n = 0;
  std::size_t c = 0;
  std::vector<double> r;  // row-major n x c, rows sum to 1

  double at(std::size_t i, std::size_t m) const { return r[i * c + m]; }
  double& at(std::size_t i, std::size_t m) { return r[i * c + m]; }
};

// Bivariate normal density. Throws NotSPD.
double gaussian_pdf(Vec2 y, Vec2 mu, const Cov2& sigma);

// Posterior membership probabilities with per-point Sigma/w scaling,
// computed in log space with max subtraction.
Responsibilities e_step(const MixtureModel& model,
                        const std::vector<WeightedPoint>& points);

struct MStepInfo {
  int reinitialized = 0;
  bool floored = false;
};

// Exact maximizer of the expected complete log-likelihood:
//   alpha_m = (1/n) sum_j r_jm
//   mu_m    = sum_j r_jm w_j y_j / sum_j r_jm w_j
//   Sigma_m = sum_j r_jm w_j (y_j - mu_m)(y_j - mu_m)^T / sum_j r_jm
// followed by an SPD eigenvalue floor. Starved components are
// reinitialized at the worst-fit point and reported.
MStepInfo m_step(const std::vector<WeightedPoint>& points,
                 const Responsibilities& resp, MixtureModel& model);

// Observed-data weighted log-likelihood sum_j log sum_m alpha_m
// Phi(y_j | mu_m, Sigma_m / w_j).
double log_likelihood(const MixtureModel& model,
                      const std::vector<WeightedPoint>& points);

MixtureModel em_fit(const std::vector<WeightedPoint>& points, int c,
                    std::uint64_t seed, double tol = 1e-6,
                    int max_iter = 500);

// p ln(n) - 2 logL with p = 6c - 1 free parameters.
double bic(const MixtureModel& model,
           const std::vector<WeightedPoint>& points);

struct SizeSelection {
  int c = 0;
  std::vector<std::pair<int, double>> bic_curve;  // (c, BIC) per size
};

// argmin-BIC sweep over [c_min, c_max]; ties go to the smaller size.
SizeSelection select_size(const std::vector<WeightedPoint>& points,
                          int c_min, int c_max, std::uint64_t seed);

// Element-wise mean of EM fits over B bootstrap resamples, components
// aligned to the first fit by greedy nearest-mean matching.
MixtureModel bootstrap_fit(const std::vector<WeightedPoint>& points, int c,
                           int B, std::uint64_t seed);

// Cell-centered midpoint quadrature grid.
struct QuadratureGrid {
  double xmin = 0.0, xmax = 1.0;
  double ymin = 0.0, ymax = 1.0;
  int nx = 2, ny = 2;

  double cell_w() const { return (xmax - xmin) / nx; }
  double cell_h() const { return (ymax - ymin) / ny; }
  double cell_area() const { return cell_w() * cell_h(); }
  double node_x(int i) const { return xmin + (i + 0.5) * cell_w(); }
  double node_y(int j) const { return ymin + (j + 0.5) * cell_h(); }
};

// Grid covering every component mean +- pad_sigmas * largest std.
QuadratureGrid integration_grid(const std::vector<const MixtureModel*>& models,
                                int resolution = 256, double pad_sigmas = 5.0);

// Hellinger distance sqrt(1/2 int (sqrt f - sqrt g)^2), clamped to [0, 1].
// Throws GridTooCoarse when either density has grid mass below 0.99.
double hellinger(const MixtureModel& f, const MixtureModel& g,
                 const QuadratureGrid& grid);

// int f log(f/g); g floored at 1e-300 pointwise.
double kl_divergence(const MixtureModel& f, const MixtureModel& g,
                     const QuadratureGrid& grid);

struct Classification {
  Phase phase = Phase::O;
  std::vector<std::pair<Phase, double>> distances;  // ordered O, I, II
  int c_sample = 0;
};

// Fits a GMM to the sample points (BIC-selected size in [2, 6] unless
// c_sample > 0) and returns the phase whose model is nearest in Hellinger
// distance; ties resolve toward the lower phase. PH0NW/PH2NW inputs are
// rejected.
Classification classify(const std::vector<WeightedPoint>& sample_points,
                        const std::map<Phase, MixtureModel>& phase_models,
                        const std::string& quadrant, int c_sample,
                        std::uint64_t seed);

// Deterministic 50/50 split of one sample's points (shuffled halves).
std::pair<std::vector<WeightedPoint>, std::vector<WeightedPoint>>
split_train_test(const std::vector<WeightedPoint>& points,
                 std::uint64_t seed);

}  // namespace sdph
