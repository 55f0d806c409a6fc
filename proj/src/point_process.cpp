#include "ttessel/point_process.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "ttessel/errors.hpp"

namespace ttessel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double dot_theta(const std::vector<double>& theta, const std::vector<double>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (std::isinf(v[i])) return -kInf;
    s += theta[i] * v[i];
  }
  return s;
}

std::pair<Point, Point> bounding_box(const ConvexPolygon& poly) {
  Point lo = poly.vertices()[0];
  Point hi = lo;
  for (const Point& v : poly.vertices()) {
    lo.x = std::min(lo.x, v.x);
    lo.y = std::min(lo.y, v.y);
    hi.x = std::max(hi.x, v.x);
    hi.y = std::max(hi.y, v.y);
  }
  return {lo, hi};
}

Point sample_in_window(const ConvexPolygon& window, Rng& rng) {
  const auto [lo, hi] = bounding_box(window);
  std::uniform_real_distribution<double> ux(lo.x, hi.x);
  std::uniform_real_distribution<double> uy(lo.y, hi.y);
  for (;;) {
    const Point q{ux(rng), uy(rng)};
    if (window.contains(q)) return q;
  }
}

}  // namespace

PointPattern::PointPattern(ConvexPolygon window_, std::vector<Point> points_)
    : window(std::move(window_)), points(std::move(points_)) {
  const double tol = eps();
  for (const Point& q : points) {
    if (!window.contains(q, tol)) throw ValidationError("point outside the window");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (distance(points[i], points[j]) <= tol) {
        throw ValidationError("duplicate points in the pattern");
      }
    }
  }
}

double PointPattern::eps() const { return 1e-9 * window.diameter(); }

namespace {

class CountStat final : public PpStatComponent {
 public:
  std::string name() const override { return "n"; }
  double value(const PointPattern& x) const override { return x.size(); }
  double add_delta(const std::vector<Point>&, Point) const override { return 1.0; }
};

class NegClosePairsStat final : public PpStatComponent {
 public:
  explicit NegClosePairsStat(double radius) : radius_(radius) {}
  std::string name() const override { return "-s_R"; }
  double value(const PointPattern& x) const override {
    double pairs = 0.0;
    for (std::size_t i = 0; i < x.points.size(); ++i) {
      for (std::size_t j = i + 1; j < x.points.size(); ++j) {
        if (distance(x.points[i], x.points[j]) <= radius_) pairs += 1.0;
      }
    }
    return -pairs;
  }
  double add_delta(const std::vector<Point>& x, Point q) const override {
    double neighbors = 0.0;
    for (const Point& p : x) {
      if (distance(p, q) <= radius_) neighbors += 1.0;
    }
    return -neighbors;
  }

 private:
  double radius_;
};

}  // namespace

std::shared_ptr<PpStatComponent> pp_stat_count() { return std::make_shared<CountStat>(); }
std::shared_ptr<PpStatComponent> pp_stat_neg_close_pairs(double radius) {
  if (radius <= 0.0) throw ValidationError("interaction radius must be positive");
  return std::make_shared<NegClosePairsStat>(radius);
}

PpModel::PpModel(std::vector<std::shared_ptr<PpStatComponent>> components,
                 std::vector<double> theta)
    : components_(std::move(components)), theta_(std::move(theta)) {
  if (components_.empty()) throw ValidationError("model needs at least one statistic");
  if (theta_.size() != components_.size()) {
    throw ValidationError("theta dimension does not match the statistic vector");
  }
}

PpModel PpModel::poisson(double theta) { return PpModel({pp_stat_count()}, {theta}); }

PpModel PpModel::strauss(double theta1, double theta2, double radius) {
  return PpModel({pp_stat_count(), pp_stat_neg_close_pairs(radius)}, {theta1, theta2});
}

void PpModel::set_theta(std::vector<double> theta) {
  if (theta.size() != components_.size()) {
    throw ValidationError("theta dimension does not match the statistic vector");
  }
  theta_ = std::move(theta);
}

std::vector<double> PpModel::statistics(const PointPattern& x) const {
  std::vector<double> out(components_.size());
  for (std::size_t i = 0; i < components_.size(); ++i) out[i] = components_[i]->value(x);
  return out;
}

std::vector<double> PpModel::add_increment(const std::vector<Point>& x, Point q) const {
  std::vector<double> out(components_.size());
  for (std::size_t i = 0; i < components_.size(); ++i) out[i] = components_[i]->add_delta(x, q);
  return out;
}

double PpModel::papangelou(Point q, const std::vector<Point>& x,
                           const std::vector<double>& theta) const {
  const double e = dot_theta(theta, add_increment(x, q));
  return std::isinf(e) && e < 0.0 ? 0.0 : std::exp(e);
}

double PpModel::papangelou(Point q, const std::vector<Point>& x) const {
  return papangelou(q, x, theta_);
}

Quadrature grid_quadrature(const ConvexPolygon& window, int resolution) {
  if (resolution < 2) throw ValidationError("grid resolution too small");
  const auto [lo, hi] = bounding_box(window);
  Quadrature q;
  const double dx = (hi.x - lo.x) / resolution;
  const double dy = (hi.y - lo.y) / resolution;
  for (int i = 0; i < resolution; ++i) {
    for (int j = 0; j < resolution; ++j) {
      const Point c{lo.x + (i + 0.5) * dx, lo.y + (j + 0.5) * dy};
      if (window.contains(c)) q.nodes.push_back(c);
    }
  }
  if (q.nodes.empty()) throw ValidationError("no quadrature nodes inside the window");
  q.weight = window.area() / static_cast<double>(q.nodes.size());
  return q;
}

namespace {

/// Leave-one-out increments t(x, X\{x}) for every data point.
std::vector<std::vector<double>> loo_increments(const PpModel& model, const PointPattern& x) {
  std::vector<std::vector<double>> out;
  out.reserve(x.points.size());
  std::vector<Point> rest(x.points.begin(), x.points.end());
  for (std::size_t i = 0; i < x.points.size(); ++i) {
    std::swap(rest[i], rest.back());
    const Point q = rest.back();
    rest.pop_back();
    out.push_back(model.add_increment(rest, q));
    rest.push_back(q);
    std::swap(rest[i], rest.back());
  }
  return out;
}

}  // namespace

double lpl_pp(const PpModel& model, const PointPattern& x, const std::vector<double>& theta,
              int grid_resolution) {
  double value = 0.0;
  for (const auto& inc : loo_increments(model, x)) {
    const double e = dot_theta(theta, inc);
    if (std::isinf(e) && e < 0.0) return -kInf;  // vanishing intensity at a data point
    value += e;
  }
  const Quadrature quad = grid_quadrature(x.window, grid_resolution);
  for (const Point& u : quad.nodes) {
    value -= quad.weight * model.papangelou(u, x.points, theta);
  }
  return value;
}

std::vector<double> lpl_pp_gradient(const PpModel& model, const PointPattern& x,
                                    const std::vector<double>& theta, int grid_resolution) {
  const int d = model.dimension();
  std::vector<double> g(d, 0.0);
  for (const auto& inc : loo_increments(model, x)) {
    for (int i = 0; i < d; ++i) g[i] += inc[i];
  }
  const Quadrature quad = grid_quadrature(x.window, grid_resolution);
  for (const Point& u : quad.nodes) {
    const auto inc = model.add_increment(x.points, u);
    const double lambda = model.papangelou(u, x.points, theta);
    for (int i = 0; i < d; ++i) g[i] -= quad.weight * inc[i] * lambda;
  }
  return g;
}

std::vector<double> lpl_pp_hessian(const PpModel& model, const PointPattern& x,
                                   const std::vector<double>& theta, int grid_resolution) {
  const int d = model.dimension();
  std::vector<double> h(d * d, 0.0);
  const Quadrature quad = grid_quadrature(x.window, grid_resolution);
  for (const Point& u : quad.nodes) {
    const auto inc = model.add_increment(x.points, u);
    const double lambda = model.papangelou(u, x.points, theta);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) h[i * d + j] -= quad.weight * inc[i] * inc[j] * lambda;
    }
  }
  return h;
}

namespace {

PpFit newton_maximize(int d, const std::function<double(const std::vector<double>&)>& value,
                      const std::function<std::vector<double>(const std::vector<double>&)>& grad,
                      const std::function<std::vector<double>(const std::vector<double>&)>& hess,
                      std::vector<double> theta, double theta_cap) {
  PpFit fit;
  for (int it = 1; it <= 100; ++it) {
    const auto g = grad(theta);
    const auto h = hess(theta);
    Eigen::MatrixXd a(d, d);
    Eigen::VectorXd b(d);
    for (int i = 0; i < d; ++i) {
      b(i) = g[i];
      for (int j = 0; j < d; ++j) a(i, j) = -h[i * d + j];
    }
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
    if (ldlt.info() != Eigen::Success) {
      throw NumericError("singular Hessian in Newton maximization");
    }
    Eigen::VectorXd step = ldlt.solve(b);
    if (!step.allFinite()) throw NumericError("singular Hessian in Newton maximization");

    const double before = value(theta);
    double scale = 1.0;
    std::vector<double> candidate(d);
    for (int halvings = 0;; ++halvings) {
      for (int i = 0; i < d; ++i) candidate[i] = theta[i] + scale * step(i);
      if (value(candidate) >= before || halvings >= 40) break;
      scale *= 0.5;
    }
    theta = candidate;
    fit.iterations = it;

    double theta_norm = 0.0, g_norm = 0.0;
    for (int i = 0; i < d; ++i) {
      theta_norm = std::max(theta_norm, std::abs(theta[i]));
      g_norm = std::max(g_norm, std::abs(g[i]));
    }
    if (theta_norm > theta_cap) {
      throw NumericError("estimate diverges (separation: no finite maximizer)");
    }
    if (g_norm <= 1e-10 * std::max(1.0, theta_norm) || step.norm() <= 1e-12) {
      fit.converged = true;
      break;
    }
  }
  fit.theta = theta;
  if (!fit.converged) throw NumericError("Newton maximization did not converge");
  return fit;
}

}  // namespace

PpFit fit_mple(const PpModel& model, const PointPattern& x, int grid_resolution) {
  if (x.size() == 0) throw ValidationError("cannot fit an empty pattern");
  const int d = model.dimension();
  return newton_maximize(
      d, [&](const std::vector<double>& th) { return lpl_pp(model, x, th, grid_resolution); },
      [&](const std::vector<double>& th) { return lpl_pp_gradient(model, x, th, grid_resolution); },
      [&](const std::vector<double>& th) { return lpl_pp_hessian(model, x, th, grid_resolution); },
      std::vector<double>(d, 0.0), 1e3);
}

double logistic_criterion(const PpModel& model, const PointPattern& x, const PointPattern& y,
                          const std::function<double(Point)>& rho,
                          const std::vector<double>& theta) {
  const double tol = x.eps();
  for (const Point& q : y.points) {
    for (const Point& p : x.points) {
      if (distance(p, q) <= tol) {
        throw ValidationError("data and dummy patterns share a point");
      }
    }
  }
  // log(lambda/(lambda+rho)) = eta - log(1 + exp(eta)) with
  // eta = theta.t - log(rho).
  double value = 0.0;
  auto log1pexp = [](double v) { return v > 35.0 ? v : std::log1p(std::exp(v)); };
  {
    std::size_t i = 0;
    for (const auto& inc : loo_increments(model, x)) {
      const double r = rho(x.points[i++]);
      if (!(r > 0.0)) throw ValidationError("dummy intensity must be positive on data points");
      const double eta = dot_theta(theta, inc) - std::log(r);
      value += eta - log1pexp(eta);
    }
  }
  for (const Point& q : y.points) {
    const double r = rho(q);
    if (!(r > 0.0)) throw ValidationError("dummy intensity must be positive on dummy points");
    const double eta = dot_theta(theta, model.add_increment(x.points, q)) - std::log(r);
    value += -log1pexp(eta);
  }
  return value;
}

double logistic_criterion(const PpModel& model, const PointPattern& x, const PointPattern& y,
                          double rho, const std::vector<double>& theta) {
  return logistic_criterion(model, x, y, [rho](Point) { return rho; }, theta);
}

PpFit fit_logistic(const PpModel& model, const PointPattern& x, double rho, Rng& rng) {
  if (x.size() == 0) throw ValidationError("cannot fit an empty pattern (no successes)");
  if (!(rho > 0.0)) throw ValidationError("dummy intensity rho must be positive");
  const PointPattern y = sample_poisson(x.window, rho, rng);
  const int d = model.dimension();
  const double log_rho = std::log(rho);

  // Binomial regression with logistic link: responses 1 on X, 0 on Y,
  // linear predictor theta.t(z, X\{z}) - log(rho).
  std::vector<std::vector<double>> covariates = loo_increments(model, x);
  std::vector<int> response(covariates.size(), 1);
  for (const Point& q : y.points) {
    covariates.push_back(model.add_increment(x.points, q));
    response.push_back(0);
  }

  auto value = [&](const std::vector<double>& th) {
    auto log1pexp = [](double v) { return v > 35.0 ? v : std::log1p(std::exp(v)); };
    double s = 0.0;
    for (std::size_t k = 0; k < covariates.size(); ++k) {
      const double eta = dot_theta(th, covariates[k]) - log_rho;
      s += response[k] ? eta - log1pexp(eta) : -log1pexp(eta);
    }
    return s;
  };
  auto grad = [&](const std::vector<double>& th) {
    std::vector<double> g(d, 0.0);
    for (std::size_t k = 0; k < covariates.size(); ++k) {
      const double eta = dot_theta(th, covariates[k]) - log_rho;
      const double p = 1.0 / (1.0 + std::exp(-eta));
      for (int i = 0; i < d; ++i) g[i] += (response[k] - p) * covariates[k][i];
    }
    return g;
  };
  auto hess = [&](const std::vector<double>& th) {
    std::vector<double> h(d * d, 0.0);
    for (std::size_t k = 0; k < covariates.size(); ++k) {
      const double eta = dot_theta(th, covariates[k]) - log_rho;
      const double p = 1.0 / (1.0 + std::exp(-eta));
      const double w = p * (1.0 - p);
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) h[i * d + j] -= w * covariates[k][i] * covariates[k][j];
      }
    }
    return h;
  };
  return newton_maximize(d, value, grad, hess, std::vector<double>(d, 0.0), 1e3);
}

PointPattern sample_poisson(const ConvexPolygon& window, double intensity, Rng& rng) {
  if (intensity < 0.0) throw ValidationError("intensity must be non-negative");
  std::poisson_distribution<int> count(intensity * window.area());
  const int n = count(rng);
  std::vector<Point> pts;
  pts.reserve(n);
  for (int i = 0; i < n; ++i) pts.push_back(sample_in_window(window, rng));
  return PointPattern(window, std::move(pts));
}

PointPattern sample_strauss(const ConvexPolygon& window, double theta1, double theta2,
                            double radius, int steps, Rng& rng) {
  const PpModel model = PpModel::strauss(theta1, theta2, radius);
  const double area = window.area();
  std::vector<Point> x;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int it = 0; it < steps; ++it) {
    if (unit(rng) < 0.5) {  // birth
      const Point q = sample_in_window(window, rng);
      const double lambda = model.papangelou(q, x);
      const double ratio = lambda * area / (static_cast<double>(x.size()) + 1.0);
      if (unit(rng) < ratio) x.push_back(q);
    } else if (!x.empty()) {  // death
      std::uniform_int_distribution<std::size_t> pick(0, x.size() - 1);
      const std::size_t k = pick(rng);
      std::swap(x[k], x.back());
      const Point q = x.back();
      x.pop_back();
      const double lambda = model.papangelou(q, x);
      const double ratio = static_cast<double>(x.size() + 1) / (lambda * area);
      if (!(unit(rng) < ratio)) x.push_back(q);  // death rejected
    }
  }
  return PointPattern(window, std::move(x));
}

SubconfigCheck subconfig_mean_check(double nu_total,
                                    const std::function<double(const std::vector<Point>&)>& phi,
                                    int n_mc, Rng& rng) {
  if (nu_total <= 0.0) throw ValidationError("intensity mass must be positive");
  if (n_mc < 2) throw ValidationError("need at least two Monte-Carlo draws");
  const ConvexPolygon window({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}});
  std::poisson_distribution<int> count(nu_total);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto draw = [&]() {
    const int n = count(rng);
    if (n > 20) throw ValidationError("pattern too large for subset enumeration");
    std::vector<Point> pts(n);
    for (int i = 0; i < n; ++i) pts[i] = Point{unit(rng), unit(rng)};
    return pts;
  };

  double lhs_sum = 0.0, lhs_sq = 0.0;
  for (int k = 0; k < n_mc; ++k) {
    const auto x = draw();
    const int n = static_cast<int>(x.size());
    double s = 0.0;
    std::vector<Point> subset;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      subset.clear();
      for (int i = 0; i < n; ++i) {
        if (mask & (1u << i)) subset.push_back(x[i]);
      }
      s += phi(subset);
    }
    lhs_sum += s;
    lhs_sq += s * s;
  }
  double rhs_sum = 0.0, rhs_sq = 0.0;
  const double scale = std::exp(nu_total);
  for (int k = 0; k < n_mc; ++k) {
    const double v = scale * phi(draw());
    rhs_sum += v;
    rhs_sq += v * v;
  }

  SubconfigCheck out;
  out.lhs = lhs_sum / n_mc;
  out.rhs = rhs_sum / n_mc;
  const double var_l = (lhs_sq / n_mc - out.lhs * out.lhs) / (n_mc - 1);
  const double var_r = (rhs_sq / n_mc - out.rhs * out.rhs) / (n_mc - 1);
  const double se = std::sqrt(std::max(var_l + var_r, 1e-300));
  out.z = (out.lhs - out.rhs) / se;
  return out;
}

}  // namespace ttessel
