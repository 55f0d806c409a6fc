#ifndef TTESSEL_GIBBS_MODEL_HPP
#define TTESSEL_GIBBS_MODEL_HPP

#include <memory>
#include <string>
#include <vector>

#include "ttessel/tessellation.hpp"

namespace ttessel {

/// View of a local operation handed to statistic components: the per-summary
/// deltas plus the fully resolved effect for components that need geometry.
struct OpEffect {
  enum class Type { split, merge, flip };
  Type type;
  const StatDelta* delta;
  const SplitEffect* split{nullptr};
  const MergeEffect* merge{nullptr};
  const FlipEffect* flip{nullptr};
};

/// One component of the statistic vector t(T). Both a full evaluation and an
/// incremental one must be provided; the incremental route is checked against
/// the full recomputation by the test suite.
class StatComponent {
 public:
  virtual ~StatComponent() = default;
  virtual std::string name() const = 0;
  virtual double value(const TTessellation& t) const = 0;
  virtual double delta(const TTessellation& t, const OpEffect& eff) const = 0;
};

std::shared_ptr<StatComponent> stat_nseint();
std::shared_ptr<StatComponent> stat_neg_squared_areas();
std::shared_ptr<StatComponent> stat_neg_angle_sum();

/// Exponential-family Gibbs density h_theta(T) proportional to
/// exp(theta . t(T)) with respect to the completely random T-tessellation.
/// Statistic signs are baked into the components, so built-in models are
/// literally theta . t:
///   crtt:  t = (nseint)
///   area:  t = (nseint, -a2)
///   angle: t = (nseint, -angle_sum)
class ExponentialModel {
 public:
  ExponentialModel(std::vector<std::shared_ptr<StatComponent>> components,
                   std::vector<double> theta, bool hereditary = true);

  static ExponentialModel crtt(double theta);
  static ExponentialModel area(double theta1, double theta2);
  static ExponentialModel angle(double theta1, double theta2);

  int dimension() const { return static_cast<int>(components_.size()); }
  const std::vector<double>& theta() const { return theta_; }
  void set_theta(std::vector<double> theta);
  bool hereditary() const { return hereditary_; }
  const std::vector<std::shared_ptr<StatComponent>>& components() const { return components_; }

  /// The statistic vector t(T).
  std::vector<double> statistics(const TTessellation& t) const;
  /// t(oT) - t(T) for a local operation, computed from local data only.
  /// Components may be -infinity when the model forbids the move.
  std::vector<double> increment(const TTessellation& t, const OpEffect& eff) const;
  std::vector<double> increment(const TTessellation& t, const LocalOp& op) const;

  double energy(const TTessellation& t) const;  // theta . t(T)

  /// Papangelou conditional intensities h(oT)/h(T) = exp(theta . t(o,T));
  /// zero when any increment component is -infinity.
  double papangelou_split(const TTessellation& t, const Split& s) const;
  double papangelou_merge(const TTessellation& t, const Merge& m) const;
  double papangelou_flip(const TTessellation& t, const Flip& f) const;
  double papangelou(const std::vector<double>& increment) const;
  /// log of the above; -infinity encodes a forbidden move.
  double log_papangelou(const std::vector<double>& increment) const;

 private:
  std::vector<std::shared_ptr<StatComponent>> components_;
  std::vector<double> theta_;
  bool hereditary_;
};

}  // namespace ttessel

#endif
