#include "sdph/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sdph/rng.hpp"
#include "sdph/threads.hpp"
#include "seeding.hpp"

namespace sdph {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kEigenFloor = 1e-6;
const double kLog2Pi = std::log(2.0 * M_PI);

// Clamp both eigenvalues of a symmetric 2x2 matrix to >= kEigenFloor.
bool floor_spd(Cov2& s) {
  const double half_tr = 0.5 * (s.xx + s.yy);
  const double half_diff = 0.5 * (s.xx - s.yy);
  const double disc = std::sqrt(half_diff * half_diff + s.xy * s.xy);
  const double lo = half_tr - disc;
  if (lo >= kEigenFloor) return false;
  const double l1 = std::max(half_tr + disc, kEigenFloor);
  const double l2 = kEigenFloor;
  // Eigenvector for the larger eigenvalue.
  double vx, vy;
  if (std::abs(s.xy) > 1e-300) {
    vx = l1 - s.yy;
    vy = s.xy;
  } else {
    vx = s.xx >= s.yy ? 1.0 : 0.0;
    vy = s.xx >= s.yy ? 0.0 : 1.0;
  }
  const double norm = std::sqrt(vx * vx + vy * vy);
  if (norm < 1e-300) {
    s = Cov2{l1, 0.0, l2};
    return true;
  }
  vx /= norm;
  vy /= norm;
  // S = l1 v v^T + l2 (I - v v^T)
  s.xx = l1 * vx * vx + l2 * vy * vy;
  s.xy = (l1 - l2) * vx * vy;
  s.yy = l1 * vy * vy + l2 * vx * vx;
  return true;
}

// log Phi(y | mu, Sigma / w) = -log(2 pi) - 0.5 log|Sigma| + log w
//                              - 0.5 w (y-mu)^T Sigma^{-1} (y-mu)
double log_gauss_scaled(const Vec2& y, const Vec2& mu, const Cov2& s,
                        double w) {
  const double det = s.det();
  const double dx = y.x - mu.x;
  const double dy = y.y - mu.y;
  const double q = (s.yy * dx * dx - 2.0 * s.xy * dx * dy + s.xx * dy * dy) /
                   det;
  return -kLog2Pi - 0.5 * std::log(det) + std::log(w) - 0.5 * w * q;
}

Cov2 population_covariance(const std::vector<WeightedPoint>& pts) {
  double mx = 0.0, my = 0.0;
  for (const auto& p : pts) {
    mx += p.x;
    my += p.y;
  }
  mx /= pts.size();
  my /= pts.size();
  Cov2 s{0.0, 0.0, 0.0};
  for (const auto& p : pts) {
    const double dx = p.x - mx, dy = p.y - my;
    s.xx += dx * dx;
    s.xy += dx * dy;
    s.yy += dy * dy;
  }
  s.xx /= pts.size();
  s.xy /= pts.size();
  s.yy /= pts.size();
  floor_spd(s);
  return s;
}

}  // namespace

std::string to_string(Phase p) {
  switch (p) {
    case Phase::O: return "O";
    case Phase::I: return "I";
    case Phase::II: return "II";
  }
  return "?";
}

Phase phase_from_string(const std::string& s) {
  if (s == "O" || s == "0") return Phase::O;
  if (s == "I") return Phase::I;
  if (s == "II") return Phase::II;
  throw Error("unknown phase: " + s);
}

double MixtureModel::density(double x, double y) const {
  double v = 0.0;
  for (const MixtureComponent& c : components)
    v += c.alpha * gaussian_pdf(Vec2{x, y}, c.mu, c.sigma);
  return v;
}

double gaussian_pdf(Vec2 y, Vec2 mu, const Cov2& sigma) {
  if (!sigma.spd()) throw NotSPD("covariance must be positive definite");
  return std::exp(log_gauss_scaled(y, mu, sigma, 1.0));
}

Responsibilities e_step(const MixtureModel& model,
                        const std::vector<WeightedPoint>& points) {
  const std::size_t n = points.size();
  const std::size_t c = model.components.size();
  Responsibilities resp;
  resp.n = n;
  resp.c = c;
  resp.r.assign(n * c, 0.0);

  std::vector<double> lr(c);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 y{points[i].x, points[i].y};
    double mx = kNegInf;
    for (std::size_t m = 0; m < c; ++m) {
      const MixtureComponent& comp = model.components[m];
      lr[m] = std::log(comp.alpha) +
              log_gauss_scaled(y, comp.mu, comp.sigma, points[i].w);
      mx = std::max(mx, lr[m]);
    }
    if (mx == kNegInf)
      throw NumericalUnderflow("all component densities vanished");
    double sum = 0.0;
    for (std::size_t m = 0; m < c; ++m) sum += std::exp(lr[m] - mx);
    for (std::size_t m = 0; m < c; ++m)
      resp.at(i, m) = std::exp(lr[m] - mx) / sum;
  }
  return resp;
}

MStepInfo m_step(const std::vector<WeightedPoint>& points,
                 const Responsibilities& resp, MixtureModel& model) {
  const std::size_t n = points.size();
  const std::size_t c = model.components.size();
  MStepInfo info;

  std::vector<std::size_t> starved;
  for (std::size_t m = 0; m < c; ++m) {
    double rm = 0.0, rw = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      rm += resp.at(i, m);
      rw += resp.at(i, m) * points[i].w;
    }
    if (rm < 1e-12) {
      starved.push_back(m);
      continue;
    }
    MixtureComponent& comp = model.components[m];
    comp.alpha = rm / static_cast<double>(n);
    Vec2 mu{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      const double rwi = resp.at(i, m) * points[i].w;
      mu.x += rwi * points[i].x;
      mu.y += rwi * points[i].y;
    }
    mu.x /= rw;
    mu.y /= rw;
    comp.mu = mu;
    Cov2 s{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      const double rwi = resp.at(i, m) * points[i].w;
      const double dx = points[i].x - mu.x;
      const double dy = points[i].y - mu.y;
      s.xx += rwi * dx * dx;
      s.xy += rwi * dx * dy;
      s.yy += rwi * dy * dy;
    }
    s.xx /= rm;
    s.xy /= rm;
    s.yy /= rm;
    info.floored |= floor_spd(s);
    comp.sigma = s;
  }

  if (!starved.empty()) {
    // Reinitialize each starved component at the worst-fit point (the one
    // with the lowest maximum responsibility).
    const Cov2 base = population_covariance(points);
    for (std::size_t m : starved) {
      std::size_t worst = 0;
      double worst_max = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) {
        double mr = 0.0;
        for (std::size_t mm = 0; mm < c; ++mm)
          mr = std::max(mr, resp.at(i, mm));
        if (mr < worst_max) {
          worst_max = mr;
          worst = i;
        }
      }
      model.components[m].mu = Vec2{points[worst].x, points[worst].y};
      model.components[m].sigma = base;
      model.components[m].alpha = 1.0 / static_cast<double>(n);
      ++info.reinitialized;
    }
  }

  double total = 0.0;
  for (const MixtureComponent& comp : model.components) total += comp.alpha;
  for (MixtureComponent& comp : model.components) comp.alpha /= total;
  return info;
}

double log_likelihood(const MixtureModel& model,
                      const std::vector<WeightedPoint>& points) {
  const std::size_t c = model.components.size();
  std::vector<double> lr(c);
  double ll = 0.0;
  for (const WeightedPoint& p : points) {
    const Vec2 y{p.x, p.y};
    double mx = kNegInf;
    for (std::size_t m = 0; m < c; ++m) {
      const MixtureComponent& comp = model.components[m];
      lr[m] = std::log(comp.alpha) +
              log_gauss_scaled(y, comp.mu, comp.sigma, p.w);
      mx = std::max(mx, lr[m]);
    }
    double sum = 0.0;
    for (std::size_t m = 0; m < c; ++m) sum += std::exp(lr[m] - mx);
    ll += mx + std::log(sum);
  }
  return ll;
}

MixtureModel em_fit(const std::vector<WeightedPoint>& points, int c,
                    std::uint64_t seed, double tol, int max_iter) {
  const std::size_t n = points.size();
  if (c < 1 || n < static_cast<std::size_t>(c))
    throw TooFewPoints("em_fit requires n >= c >= 1");
  for (const WeightedPoint& p : points)
    if (!(p.w > 0.0) || !std::isfinite(p.x) || !std::isfinite(p.y))
      throw Error("points must be finite with positive weights");

  MixtureModel model;
  model.fit.seed = seed;
  Rng rng(seed);
  std::vector<double> coords(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    coords[2 * i] = points[i].x;
    coords[2 * i + 1] = points[i].y;
  }
  const auto seeds = detail::kmeanspp_indices(
      n, 2, [&](std::size_t i) { return coords.data() + 2 * i; }, c, rng);
  const Cov2 base = population_covariance(points);
  model.components.resize(c);
  for (int m = 0; m < c; ++m) {
    model.components[m].alpha = 1.0 / c;
    model.components[m].mu = Vec2{points[seeds[m]].x, points[seeds[m]].y};
    model.components[m].sigma = base;
  }

  double prev_ll = kNegInf;
  bool prev_valid = false;
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    const Responsibilities resp = e_step(model, points);
    const MStepInfo info = m_step(points, resp, model);
    model.fit.reinits += info.reinitialized;
    model.fit.floored |= info.floored;

    const double ll = log_likelihood(model, points);
    if (prev_valid && ll < prev_ll - 1e-9 * (1.0 + std::abs(prev_ll)))
      model.fit.monotone = false;
    const bool converged =
        prev_valid && std::abs(ll - prev_ll) < tol * (1.0 + std::abs(prev_ll));
    // A reinit moves the objective discontinuously; restart the baseline.
    prev_valid = info.reinitialized == 0;
    prev_ll = ll;
    model.fit.loglik = ll;
    if (converged) {
      ++iter;
      break;
    }
  }
  model.fit.iters = iter;
  model.fit.bic = bic(model, points);
  return model;
}

double bic(const MixtureModel& model,
           const std::vector<WeightedPoint>& points) {
  const double c = model.size();
  const double p = 6.0 * c - 1.0;  // (c-1) weights + 2c means + 3c covariances
  return p * std::log(static_cast<double>(points.size())) -
         2.0 * log_likelihood(model, points);
}

SizeSelection select_size(const std::vector<WeightedPoint>& points, int c_min,
                          int c_max, std::uint64_t seed) {
  if (c_min < 1 || c_max < c_min) throw Error("invalid size range");
  const int count = c_max - c_min + 1;
  std::vector<double> bics(count);
  std::vector<std::string> errors(count);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(effective_threads())
#endif
  for (int idx = 0; idx < count; ++idx) {
    const int c = c_min + idx;
    try {
      const MixtureModel m = em_fit(points, c, derive_seed(seed, c));
      bics[idx] = m.fit.bic;
    } catch (const Error& e) {
      bics[idx] = std::numeric_limits<double>::quiet_NaN();
      errors[idx] = e.what();
    }
  }

  SizeSelection sel;
  double best = std::numeric_limits<double>::infinity();
  for (int idx = 0; idx < count; ++idx) {
    const int c = c_min + idx;
    if (std::isnan(bics[idx])) continue;
    sel.bic_curve.emplace_back(c, bics[idx]);
    if (bics[idx] < best) {
      best = bics[idx];
      sel.c = c;
    }
  }
  if (sel.bic_curve.empty())
    throw TooFewPoints("no mixture size in range could be fitted: " +
                       errors[0]);
  return sel;
}

MixtureModel bootstrap_fit(const std::vector<WeightedPoint>& points, int c,
                           int B, std::uint64_t seed) {
  const std::size_t n = points.size();
  if (c < 1 || n < static_cast<std::size_t>(c))
    throw TooFewPoints("bootstrap_fit requires n >= c >= 1");
  if (B < 1) throw Error("bootstrap_fit requires B >= 1");

  std::vector<MixtureModel> fits(B);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(effective_threads())
#endif
  for (int b = 0; b < B; ++b) {
    Rng resample_rng(derive_seed(seed, 2 * b));
    std::vector<WeightedPoint> sample(n);
    for (std::size_t i = 0; i < n; ++i)
      sample[i] = points[resample_rng.index(n)];
    fits[b] = em_fit(sample, c, derive_seed(seed, 2 * b + 1));
  }

  // Align every fit's components to the first fit by greedy nearest-mean
  // matching, then average parameters element-wise.
  MixtureModel avg = fits[0];
  std::vector<MixtureComponent> acc(c);
  for (int m = 0; m < c; ++m) acc[m] = fits[0].components[m];

  for (int b = 1; b < B; ++b) {
    std::vector<int> match(c, -1);
    std::vector<bool> used_ref(c, false), used_fit(c, false);
    for (int step = 0; step < c; ++step) {
      double best = std::numeric_limits<double>::infinity();
      int br = -1, bf = -1;
      for (int r = 0; r < c; ++r) {
        if (used_ref[r]) continue;
        for (int f = 0; f < c; ++f) {
          if (used_fit[f]) continue;
          const double dx =
              fits[0].components[r].mu.x - fits[b].components[f].mu.x;
          const double dy =
              fits[0].components[r].mu.y - fits[b].components[f].mu.y;
          const double dd = dx * dx + dy * dy;
          if (dd < best) {
            best = dd;
            br = r;
            bf = f;
          }
        }
      }
      used_ref[br] = true;
      used_fit[bf] = true;
      match[br] = bf;
    }
    for (int r = 0; r < c; ++r) {
      const MixtureComponent& src = fits[b].components[match[r]];
      acc[r].alpha += src.alpha;
      acc[r].mu.x += src.mu.x;
      acc[r].mu.y += src.mu.y;
      acc[r].sigma.xx += src.sigma.xx;
      acc[r].sigma.xy += src.sigma.xy;
      acc[r].sigma.yy += src.sigma.yy;
    }
  }

  double alpha_total = 0.0;
  for (int m = 0; m < c; ++m) {
    acc[m].alpha /= B;
    acc[m].mu.x /= B;
    acc[m].mu.y /= B;
    acc[m].sigma.xx /= B;
    acc[m].sigma.xy /= B;
    acc[m].sigma.yy /= B;
    floor_spd(acc[m].sigma);
    alpha_total += acc[m].alpha;
  }
  for (int m = 0; m < c; ++m) acc[m].alpha /= alpha_total;

  avg.components = acc;
  avg.fit.seed = seed;
  avg.fit.loglik = log_likelihood(avg, points);
  avg.fit.bic = bic(avg, points);
  return avg;
}

QuadratureGrid integration_grid(const std::vector<const MixtureModel*>& models,
                                int resolution, double pad_sigmas) {
  if (models.empty()) throw Error("integration_grid requires a model");
  QuadratureGrid g;
  bool first = true;
  for (const MixtureModel* m : models) {
    for (const MixtureComponent& comp : m->components) {
      const double half_tr = 0.5 * (comp.sigma.xx + comp.sigma.yy);
      const double half_diff = 0.5 * (comp.sigma.xx - comp.sigma.yy);
      const double disc =
          std::sqrt(half_diff * half_diff + comp.sigma.xy * comp.sigma.xy);
      const double pad = pad_sigmas * std::sqrt(half_tr + disc);
      if (first) {
        g.xmin = comp.mu.x - pad;
        g.xmax = comp.mu.x + pad;
        g.ymin = comp.mu.y - pad;
        g.ymax = comp.mu.y + pad;
        first = false;
      } else {
        g.xmin = std::min(g.xmin, comp.mu.x - pad);
        g.xmax = std::max(g.xmax, comp.mu.x + pad);
        g.ymin = std::min(g.ymin, comp.mu.y - pad);
        g.ymax = std::max(g.ymax, comp.mu.y + pad);
      }
    }
  }
  g.nx = resolution;
  g.ny = resolution;
  return g;
}

namespace {

// Midpoint-rule functional of two mixture densities over the grid. Rows
// accumulate independently and are summed in index order, so the result
// does not depend on the thread count.
template <typename F>
double quadrature(const MixtureModel& f, const MixtureModel& g,
                  const QuadratureGrid& grid, F&& term, const char* op) {
  const double area = grid.cell_area();
  std::vector<double> row_acc(grid.ny, 0.0), row_f(grid.ny, 0.0),
      row_g(grid.ny, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(effective_threads())
#endif
  for (int j = 0; j < grid.ny; ++j) {
    const double y = grid.node_y(j);
    double acc = 0.0, mf = 0.0, mg = 0.0;
    for (int i = 0; i < grid.nx; ++i) {
      const double x = grid.node_x(i);
      const double fv = f.density(x, y);
      const double gv = g.density(x, y);
      mf += fv;
      mg += gv;
      acc += term(fv, gv);
    }
    row_acc[j] = acc;
    row_f[j] = mf;
    row_g[j] = mg;
  }
  double acc = 0.0, mass_f = 0.0, mass_g = 0.0;
  for (int j = 0; j < grid.ny; ++j) {
    acc += row_acc[j];
    mass_f += row_f[j];
    mass_g += row_g[j];
  }
  if (mass_f * area < 0.99 || mass_g * area < 0.99)
    throw GridTooCoarse(std::string(op) +
                        ": integration grid captures < 99% of a density");
  return acc * area;
}

}  // namespace

double hellinger(const MixtureModel& f, const MixtureModel& g,
                 const QuadratureGrid& grid) {
  const double h2 =
      0.5 * quadrature(f, g, grid,
                       [](double fv, double gv) {
                         const double d = std::sqrt(fv) - std::sqrt(gv);
                         return d * d;
                       },
                       "hellinger");
  return std::sqrt(std::clamp(h2, 0.0, 1.0));
}

double kl_divergence(const MixtureModel& f, const MixtureModel& g,
                     const QuadratureGrid& grid) {
  return quadrature(f, g, grid,
                    [](double fv, double gv) {
                      if (fv <= 0.0) return 0.0;
                      return fv * std::log(fv / std::max(gv, 1e-300));
                    },
                    "kl_divergence");
}

Classification classify(const std::vector<WeightedPoint>& sample_points,
                        const std::map<Phase, MixtureModel>& phase_models,
                        const std::string& quadrant, int c_sample,
                        std::uint64_t seed) {
  if (quadrant == "PH0NW" || quadrant == "PH2NW")
    throw ExcludedQuadrant(quadrant +
                           " carries chunking or noise artifacts only");
  if (phase_models.empty()) throw Error("classify requires a phase model");
  if (sample_points.empty())
    throw TooFewPoints("classify requires sample points");

  int c = c_sample;
  if (c <= 0) {
    const int c_hi =
        std::min<std::size_t>(6, sample_points.size());
    const int c_lo = std::min(2, c_hi);
    c = select_size(sample_points, c_lo, c_hi, seed).c;
  }
  const MixtureModel approx = em_fit(sample_points, c, derive_seed(seed, 99));

  std::vector<const MixtureModel*> all{&approx};
  for (const auto& [phase, model] : phase_models) all.push_back(&model);
  const QuadratureGrid grid = integration_grid(all);

  Classification out;
  out.c_sample = c;
  double best = std::numeric_limits<double>::infinity();
  bool first = true;
  for (const auto& [phase, model] : phase_models) {  // map order: O < I < II
    const double h = hellinger(approx, model, grid);
    out.distances.emplace_back(phase, h);
    if (first || h < best) {
      best = h;
      out.phase = phase;
      first = false;
    }
  }
  return out;
}

std::pair<std::vector<WeightedPoint>, std::vector<WeightedPoint>>
split_train_test(const std::vector<WeightedPoint>& points,
                 std::uint64_t seed) {
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    const std::size_t j = i + rng.index(order.size() - i);
    std::swap(order[i], order[j]);
  }
  std::pair<std::vector<WeightedPoint>, std::vector<WeightedPoint>> out;
  const std::size_t half = (points.size() + 1) / 2;
  for (std::size_t i = 0; i < order.size(); ++i)
    (i < half ? out.first : out.second).push_back(points[order[i]]);
  return out;
}

}  // namespace sdph
