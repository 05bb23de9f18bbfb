#include "sdph/texture_local.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "seeding.hpp"

namespace sdph {

namespace {

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

double pop_var(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / v.size();
}

double pop_std(const std::vector<double>& v) { return std::sqrt(pop_var(v)); }

}  // namespace

FeatureVector features15(const Diagram& local) {
  // Per critical size, pooled from every quadrant where it appears.
  std::vector<double> r0, r1, g2, g3;
  std::vector<double> und, loop, wav;
  std::vector<double> nw_r1, nw_g2;  // PH1 NW pair set

  for (const PersistencePoint& p : local.points) {
    if (p.essential) continue;
    const QuadrantPoint qp = quadrant_of(p);
    switch (qp.quadrant) {
      case Quadrant::PH0SW:
        r0.push_back(qp.size1);
        r1.push_back(qp.size2);
        und.push_back(aspect_ratio(qp, AspectRatioKind::Undulation));
        break;
      case Quadrant::PH0NW:
        r0.push_back(qp.size1);
        break;
      case Quadrant::PH1SW:
        r1.push_back(qp.size1);
        break;
      case Quadrant::PH1NW:
        r1.push_back(qp.size1);
        g2.push_back(qp.size2);
        nw_r1.push_back(qp.size1);
        nw_g2.push_back(qp.size2);
        loop.push_back(aspect_ratio(qp, AspectRatioKind::Loop));
        break;
      case Quadrant::PH1NE:
        g2.push_back(qp.size2);
        wav.push_back(aspect_ratio(qp, AspectRatioKind::Waviness));
        break;
      case Quadrant::PH2NW:
        break;  // (-r2, g3) points never enter the 15 features
      case Quadrant::PH2NE:
        g2.push_back(qp.size1);
        g3.push_back(qp.size2);
        break;
    }
  }

  FeatureVector f{};
  f[0] = mean_of(r0);
  f[1] = pop_std(r0);
  f[2] = mean_of(r1);
  f[3] = pop_std(r1);
  f[4] = mean_of(g2);
  f[5] = pop_std(g2);
  f[6] = mean_of(g3);
  f[7] = pop_std(g3);
  f[8] = mean_of(und);
  f[9] = pop_std(und);
  f[10] = mean_of(loop);
  f[11] = pop_std(loop);
  f[12] = mean_of(wav);
  f[13] = pop_std(wav);
  f[14] = std::sqrt(pop_var(nw_r1) + pop_var(nw_g2));
  return f;
}

std::vector<Ellipsoid> sample_grid(const GridDims& dims, int spacing,
                                   double r_xy, double rz_fraction) {
  if (!dims.valid() || spacing < 1)
    throw Error("sample_grid requires positive dims and spacing");
  std::vector<Ellipsoid> out;
  const double r_z = rz_fraction * dims.nz;
  for (int z = 0; z < dims.nz; z += spacing)
    for (int y = 0; y < dims.ny; y += spacing)
      for (int x = 0; x < dims.nx; x += spacing) {
        Ellipsoid e;
        e.cx = x;
        e.cy = y;
        e.cz = z;
        e.r_xy = r_xy;
        e.r_z = r_z;
        out.push_back(e);
      }
  return out;
}

Matrix normalize(const Matrix& features) {
  if (features.rows < 2)
    throw TooFewRows("normalize requires at least 2 rows");
  Matrix out(features.rows, features.cols);
  for (std::size_t c = 0; c < features.cols; ++c) {
    double m = 0.0;
    for (std::size_t r = 0; r < features.rows; ++r) m += features.at(r, c);
    m /= features.rows;
    double var = 0.0;
    for (std::size_t r = 0; r < features.rows; ++r) {
      const double d = features.at(r, c) - m;
      var += d * d;
    }
    const double s = std::sqrt(var / features.rows);
    for (std::size_t r = 0; r < features.rows; ++r)
      out.at(r, c) = s > 0.0 ? (features.at(r, c) - m) / s : 0.0;
  }
  return out;
}

namespace {

double sq_dist(const double* a, const double* b, std::size_t d) {
  double s = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    const double diff = a[j] - b[j];
    s += diff * diff;
  }
  return s;
}

}  // namespace

KMeansResult kmeans(const Matrix& features, int k, std::uint64_t seed,
                    int max_iter, double tol) {
  const std::size_t n = features.rows, d = features.cols;
  if (k < 1 || n < static_cast<std::size_t>(k))
    throw InvalidK("kmeans requires 1 <= k <= rows");

  Rng rng(seed);
  const auto seeds = detail::kmeanspp_indices(
      n, d, [&](std::size_t i) { return features.row(i); }, k, rng);

  Matrix centroids(k, d);
  for (int c = 0; c < k; ++c)
    for (std::size_t j = 0; j < d; ++j)
      centroids.at(c, j) = features.at(seeds[c], j);

  KMeansResult res;
  res.labels.assign(n, 0);
  std::vector<double> counts(k);
  Matrix next(k, d);

  int iter = 0;
  for (; iter < max_iter; ++iter) {
    // Assign to the nearest centroid; ties go to the lowest index.
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d = sq_dist(features.row(i), centroids.row(0), d);
      for (int c = 1; c < k; ++c) {
        const double dd = sq_dist(features.row(i), centroids.row(c), d);
        if (dd < best_d) {
          best_d = dd;
          best = c;
        }
      }
      res.labels[i] = best;
    }
    std::fill(next.data.begin(), next.data.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      counts[res.labels[i]] += 1.0;
      for (std::size_t j = 0; j < d; ++j)
        next.at(res.labels[i], j) += features.at(i, j);
    }
    double shift = 0.0;
    for (int c = 0; c < k; ++c) {
      if (counts[c] == 0.0) {
        // Empty cluster keeps its centroid.
        for (std::size_t j = 0; j < d; ++j) next.at(c, j) = centroids.at(c, j);
        continue;
      }
      for (std::size_t j = 0; j < d; ++j) {
        next.at(c, j) /= counts[c];
        shift = std::max(shift, std::abs(next.at(c, j) - centroids.at(c, j)));
      }
    }
    centroids.data.swap(next.data);
    if (shift < tol) {
      ++iter;
      break;
    }
  }

  res.centroids = centroids;
  res.iterations = iter;
  res.inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double best_d = std::numeric_limits<double>::infinity();
    int best = 0;
    for (int c = 0; c < k; ++c) {
      const double dd = sq_dist(features.row(i), centroids.row(c), d);
      if (dd < best_d) {
        best_d = dd;
        best = c;
      }
    }
    res.labels[i] = best;
    res.inertia += best_d;
  }
  return res;
}

std::vector<int> cluster_gmm(const Matrix& features, int k,
                             std::uint64_t seed) {
  const std::size_t n = features.rows, d = features.cols;
  if (k < 1 || n < static_cast<std::size_t>(k))
    throw InvalidK("cluster_gmm requires 1 <= k <= rows");

  using Eigen::MatrixXd;
  using Eigen::VectorXd;

  MatrixXd X(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) X(i, j) = features.at(i, j);

  const VectorXd mean = X.colwise().mean();
  const MatrixXd centered = X.rowwise() - mean.transpose();
  MatrixXd base_cov = centered.transpose() * centered / double(n);

  auto floor_spd = [](MatrixXd& S) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(S);
    VectorXd ev = es.eigenvalues().cwiseMax(1e-6);
    S = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
  };
  floor_spd(base_cov);

  Rng rng(seed);
  const auto seeds = detail::kmeanspp_indices(
      n, d, [&](std::size_t i) { return features.row(i); }, k, rng);

  std::vector<VectorXd> mu(k);
  std::vector<MatrixXd> cov(k, base_cov);
  std::vector<double> alpha(k, 1.0 / k);
  for (int c = 0; c < k; ++c) mu[c] = X.row(seeds[c]).transpose();

  MatrixXd log_resp(n, k);
  double prev_ll = -std::numeric_limits<double>::infinity();
  const double log2pi = std::log(2.0 * M_PI);

  for (int iter = 0; iter < 200; ++iter) {
    // E-step in log space.
    std::vector<Eigen::LLT<MatrixXd>> llt(k);
    std::vector<double> logdet(k);
    for (int c = 0; c < k; ++c) {
      llt[c].compute(cov[c]);
      logdet[c] = 0.0;
      for (std::size_t j = 0; j < d; ++j)
        logdet[c] += 2.0 * std::log(llt[c].matrixL()(j, j));
    }
    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double row_max = -std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const VectorXd diff = X.row(i).transpose() - mu[c];
        const VectorXd sol = llt[c].matrixL().solve(diff);
        const double q = sol.squaredNorm();
        log_resp(i, c) = std::log(alpha[c]) -
                         0.5 * (d * log2pi + logdet[c] + q);
        row_max = std::max(row_max, log_resp(i, c));
      }
      double sum = 0.0;
      for (int c = 0; c < k; ++c) sum += std::exp(log_resp(i, c) - row_max);
      const double log_norm = row_max + std::log(sum);
      ll += log_norm;
      for (int c = 0; c < k; ++c)
        log_resp(i, c) = std::exp(log_resp(i, c) - log_norm);
    }
    // M-step (log_resp now holds plain responsibilities).
    for (int c = 0; c < k; ++c) {
      const double nk = log_resp.col(c).sum();
      if (nk < 1e-12) continue;  // leave a starved component in place
      alpha[c] = nk / n;
      VectorXd m = VectorXd::Zero(d);
      for (std::size_t i = 0; i < n; ++i)
        m += log_resp(i, c) * X.row(i).transpose();
      mu[c] = m / nk;
      MatrixXd S = MatrixXd::Zero(d, d);
      for (std::size_t i = 0; i < n; ++i) {
        const VectorXd diff = X.row(i).transpose() - mu[c];
        S += log_resp(i, c) * diff * diff.transpose();
      }
      S /= nk;
      floor_spd(S);
      cov[c] = S;
    }
    const double norm = std::accumulate(alpha.begin(), alpha.end(), 0.0);
    for (double& a : alpha) a /= norm;

    if (iter > 0 &&
        std::abs(ll - prev_ll) < 1e-8 * (1.0 + std::abs(prev_ll)))
      break;
    prev_ll = ll;
  }

  std::vector<int> labels(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    int best = 0;
    for (int c = 1; c < k; ++c)
      if (log_resp(i, c) > log_resp(i, best)) best = c;
    labels[i] = best;
  }
  return labels;
}

namespace {

// Total dissimilarity of assigning every row to its nearest medoid.
double total_cost(const Matrix& m, const std::vector<std::size_t>& medoids) {
  double total = 0.0;
  for (std::size_t i = 0; i < m.rows; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t mi : medoids)
      best = std::min(best, std::sqrt(sq_dist(m.row(i), m.row(mi), m.cols)));
    total += best;
  }
  return total;
}

std::vector<int> assign_to_medoids(const Matrix& m,
                                   const std::vector<std::size_t>& medoids) {
  std::vector<int> labels(m.rows, 0);
  for (std::size_t i = 0; i < m.rows; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < medoids.size(); ++c) {
      const double dd =
          std::sqrt(sq_dist(m.row(i), m.row(medoids[c]), m.cols));
      if (dd < best) {
        best = dd;
        labels[i] = static_cast<int>(c);
      }
    }
  }
  return labels;
}

}  // namespace

ClaraResult pam(const Matrix& features, int k) {
  const std::size_t n = features.rows;
  if (k < 1 || n < static_cast<std::size_t>(k))
    throw InvalidK("pam requires 1 <= k <= rows");

  // BUILD: greedy seeding minimizing total dissimilarity.
  std::vector<std::size_t> medoids;
  std::vector<std::uint8_t> is_medoid(n, 0);
  for (int c = 0; c < k; ++c) {
    std::size_t best_row = 0;
    double best_total = std::numeric_limits<double>::infinity();
    for (std::size_t cand = 0; cand < n; ++cand) {
      if (is_medoid[cand]) continue;
      medoids.push_back(cand);
      const double t = total_cost(features, medoids);
      medoids.pop_back();
      if (t < best_total) {
        best_total = t;
        best_row = cand;
      }
    }
    medoids.push_back(best_row);
    is_medoid[best_row] = 1;
  }

  // SWAP: steepest-descent swaps until no improvement.
  double current = total_cost(features, medoids);
  while (true) {
    double best_total = current;
    std::size_t best_m = 0, best_h = 0;
    bool found = false;
    for (std::size_t mi = 0; mi < medoids.size(); ++mi) {
      const std::size_t saved = medoids[mi];
      for (std::size_t h = 0; h < n; ++h) {
        if (is_medoid[h]) continue;
        medoids[mi] = h;
        const double t = total_cost(features, medoids);
        if (t < best_total - 1e-15) {
          best_total = t;
          best_m = mi;
          best_h = h;
          found = true;
        }
      }
      medoids[mi] = saved;
    }
    if (!found) break;
    is_medoid[medoids[best_m]] = 0;
    is_medoid[best_h] = 1;
    medoids[best_m] = best_h;
    current = best_total;
  }

  std::sort(medoids.begin(), medoids.end());
  ClaraResult res;
  res.medoids = medoids;
  res.labels = assign_to_medoids(features, medoids);
  res.total_dissimilarity = current;
  return res;
}

ClaraResult cluster_clara(const Matrix& features, int k, int n_subsamples,
                          std::size_t subsample_size, std::uint64_t seed) {
  const std::size_t n = features.rows;
  if (k < 1 || n < static_cast<std::size_t>(k))
    throw InvalidK("clara requires 1 <= k <= rows");
  if (n_subsamples < 1) throw Error("clara requires n_subsamples >= 1");
  if (subsample_size == 0)
    subsample_size = std::min(n, static_cast<std::size_t>(40 + 2 * k));
  subsample_size = std::min(subsample_size, n);
  if (subsample_size < static_cast<std::size_t>(k))
    throw InvalidK("clara subsample smaller than k");

  Rng rng(seed);
  ClaraResult best;
  best.total_dissimilarity = std::numeric_limits<double>::infinity();

  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);

  for (int s = 0; s < n_subsamples; ++s) {
    // Partial Fisher-Yates draw of subsample_size distinct rows.
    std::vector<std::size_t> pool = all;
    for (std::size_t i = 0; i < subsample_size; ++i) {
      const std::size_t j = i + rng.index(pool.size() - i);
      std::swap(pool[i], pool[j]);
    }
    pool.resize(subsample_size);
    std::sort(pool.begin(), pool.end());

    Matrix sub(subsample_size, features.cols);
    for (std::size_t i = 0; i < subsample_size; ++i)
      for (std::size_t j = 0; j < features.cols; ++j)
        sub.at(i, j) = features.at(pool[i], j);

    const ClaraResult local = pam(sub, k);
    std::vector<std::size_t> medoids;
    for (std::size_t mi : local.medoids) medoids.push_back(pool[mi]);
    std::sort(medoids.begin(), medoids.end());

    const double total = total_cost(features, medoids);
    if (total < best.total_dissimilarity) {
      best.total_dissimilarity = total;
      best.medoids = medoids;
    }
  }

  best.labels = assign_to_medoids(features, best.medoids);
  return best;
}

TextureComposition composition(const std::vector<int>& labels, int k,
                               const std::string& sample_id) {
  if (labels.empty()) throw Error("composition requires nonempty labels");
  if (k < 1) throw InvalidK("composition requires k >= 1");
  TextureComposition tc;
  tc.sample_id = sample_id;
  tc.percentages.assign(k, 0.0);
  for (int l : labels) {
    if (l < 0 || l >= k) throw Error("label outside [0, k)");
    tc.percentages[l] += 1.0;
  }
  for (double& p : tc.percentages) p = p * 100.0 / labels.size();
  return tc;
}

Pca2Result pca2(const Matrix& compositions) {
  if (compositions.rows < 3) throw TooFewRows("pca2 requires >= 3 rows");
  const std::size_t n = compositions.rows, d = compositions.cols;

  Eigen::MatrixXd X(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) X(i, j) = compositions.at(i, j);
  const Eigen::VectorXd mean = X.colwise().mean();
  X.rowwise() -= mean.transpose();

  const Eigen::MatrixXd cov = X.transpose() * X / double(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);

  Pca2Result res;
  res.components = Matrix(2, d);
  res.embedding = Matrix(n, 2);
  for (int comp = 0; comp < 2; ++comp) {
    const int col = static_cast<int>(d) - 1 - comp;  // Eigen sorts ascending
    if (col < 0) break;  // fewer input columns than components
    Eigen::VectorXd v = es.eigenvectors().col(col);
    for (std::size_t j = 0; j < d; ++j) {
      if (std::abs(v(j)) > 1e-12) {
        if (v(j) < 0) v = -v;
        break;
      }
    }
    res.explained_variance[comp] = std::max(0.0, es.eigenvalues()(col));
    for (std::size_t j = 0; j < d; ++j) res.components.at(comp, j) = v(j);
    const Eigen::VectorXd proj = X * v;
    for (std::size_t i = 0; i < n; ++i) res.embedding.at(i, comp) = proj(i);
  }
  return res;
}

}  // namespace sdph
