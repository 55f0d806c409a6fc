#ifndef TTESSEL_POINT_PROCESS_HPP
#define TTESSEL_POINT_PROCESS_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ttessel/geometry.hpp"

namespace ttessel {

/// Finite point pattern in a convex compact window. Points must lie inside
/// the window and be pairwise distinct within tolerance.
struct PointPattern {
  ConvexPolygon window;
  std::vector<Point> points;

  PointPattern(ConvexPolygon window_, std::vector<Point> points_);
  int size() const { return static_cast<int>(points.size()); }
  double eps() const;
};

/// One component of the point-process statistic vector t(X).
class PpStatComponent {
 public:
  virtual ~PpStatComponent() = default;
  virtual std::string name() const = 0;
  virtual double value(const PointPattern& x) const = 0;
  /// t(X u {q}) - t(X) for q not in X.
  virtual double add_delta(const std::vector<Point>& x, Point q) const = 0;
};

std::shared_ptr<PpStatComponent> pp_stat_count();
std::shared_ptr<PpStatComponent> pp_stat_neg_close_pairs(double radius);

/// Exponential-family point process h_theta(X) proportional to
/// exp(theta . t(X)) with respect to the unit Poisson process. Built-ins:
///   poisson: t = (n(X))
///   strauss: t = (n(X), -s_R(X)) with s_R the number of R-close pairs
class PpModel {
 public:
  PpModel(std::vector<std::shared_ptr<PpStatComponent>> components, std::vector<double> theta);

  static PpModel poisson(double theta);
  static PpModel strauss(double theta1, double theta2, double radius);

  int dimension() const { return static_cast<int>(components_.size()); }
  const std::vector<double>& theta() const { return theta_; }
  void set_theta(std::vector<double> theta);
  bool hereditary() const { return true; }

  std::vector<double> statistics(const PointPattern& x) const;
  std::vector<double> add_increment(const std::vector<Point>& x, Point q) const;

  /// Papangelou conditional intensity lambda(q; X) = h(X u {q})/h(X).
  double papangelou(Point q, const std::vector<Point>& x) const;
  double papangelou(Point q, const std::vector<Point>& x, const std::vector<double>& theta) const;

 private:
  std::vector<std::shared_ptr<PpStatComponent>> components_;
  std::vector<double> theta_;
};

/// Midpoint-rule quadrature over the window, with weights normalized so a
/// constant integrates exactly to the window area.
struct Quadrature {
  std::vector<Point> nodes;
  double weight{0.0};
};

Quadrature grid_quadrature(const ConvexPolygon& window, int resolution = 128);

/// Besag log-pseudolikelihood
///   sum_x log lambda_theta(x, X\{x}) - int_D lambda_theta(u, X) du,
/// the integral evaluated by grid quadrature. Returns -infinity when the
/// intensity vanishes at a data point.
double lpl_pp(const PpModel& model, const PointPattern& x, const std::vector<double>& theta,
              int grid_resolution = 128);
std::vector<double> lpl_pp_gradient(const PpModel& model, const PointPattern& x,
                                    const std::vector<double>& theta, int grid_resolution = 128);
std::vector<double> lpl_pp_hessian(const PpModel& model, const PointPattern& x,
                                   const std::vector<double>& theta, int grid_resolution = 128);

struct PpFit {
  std::vector<double> theta;
  int iterations{0};
  bool converged{false};
};

/// Newton maximizer of the Besag log-pseudolikelihood.
PpFit fit_mple(const PpModel& model, const PointPattern& x, int grid_resolution = 128);

/// Logistic estimation criterion of the dummy-point method:
///   sum_x log[lambda/(lambda+rho(x))] + sum_y log[rho(y)/(lambda+rho(y))].
/// X and Y must be disjoint within tolerance.
double logistic_criterion(const PpModel& model, const PointPattern& x, const PointPattern& y,
                          const std::function<double(Point)>& rho,
                          const std::vector<double>& theta);
double logistic_criterion(const PpModel& model, const PointPattern& x, const PointPattern& y,
                          double rho, const std::vector<double>& theta);

/// Fits theta by the logistic dummy-point method: draws a Poisson dummy
/// pattern Y with intensity rho on the window and maximizes the binomial
/// log-likelihood with logistic link by Newton-Raphson. Throws NumericError
/// on separation and ValidationError on an empty data pattern.
PpFit fit_logistic(const PpModel& model, const PointPattern& x, double rho, Rng& rng);

/// Homogeneous Poisson pattern with the given intensity.
PointPattern sample_poisson(const ConvexPolygon& window, double intensity, Rng& rng);
/// Strauss pattern via a birth-death Metropolis chain of `steps` proposals.
PointPattern sample_strauss(const ConvexPolygon& window, double theta1, double theta2,
                            double radius, int steps, Rng& rng);

struct SubconfigCheck {
  double lhs{0.0};
  double rhs{0.0};
  double z{0.0};
};

/// Monte-Carlo check of the subconfiguration identity for a Poisson process
/// with total intensity mass nu_total on the unit square:
///   E sum_{Y subset X} phi(Y) = exp(nu_total) E phi(X).
/// Rejects draws with more than 20 points (2^|X| enumeration).
SubconfigCheck subconfig_mean_check(double nu_total,
                                    const std::function<double(const std::vector<Point>&)>& phi,
                                    int n_mc, Rng& rng);

}  // namespace ttessel

#endif
