#include "ttessel/gibbs_model.hpp"

#include <cmath>
#include <limits>

#include "ttessel/errors.hpp"

namespace ttessel {

namespace {

class NseintStat final : public StatComponent {
 public:
  std::string name() const override { return "nseint"; }
  double value(const TTessellation& t) const override { return t.nseint(); }
  double delta(const TTessellation&, const OpEffect& eff) const override {
    return eff.delta->nseint;
  }
};

class NegSquaredAreasStat final : public StatComponent {
 public:
  std::string name() const override { return "-a2"; }
  double value(const TTessellation& t) const override { return -t.statistics_basic().a2; }
  double delta(const TTessellation&, const OpEffect& eff) const override {
    return -eff.delta->a2;
  }
};

class NegAngleSumStat final : public StatComponent {
 public:
  std::string name() const override { return "-angle_sum"; }
  double value(const TTessellation& t) const override { return -t.statistics_basic().angle_sum; }
  double delta(const TTessellation&, const OpEffect& eff) const override {
    return -eff.delta->angle_sum;
  }
};

}  // namespace

std::shared_ptr<StatComponent> stat_nseint() { return std::make_shared<NseintStat>(); }
std::shared_ptr<StatComponent> stat_neg_squared_areas() {
  return std::make_shared<NegSquaredAreasStat>();
}
std::shared_ptr<StatComponent> stat_neg_angle_sum() { return std::make_shared<NegAngleSumStat>(); }

ExponentialModel::ExponentialModel(std::vector<std::shared_ptr<StatComponent>> components,
                                   std::vector<double> theta, bool hereditary)
    : components_(std::move(components)), theta_(std::move(theta)), hereditary_(hereditary) {
  if (components_.empty()) throw ValidationError("model needs at least one statistic");
  if (theta_.size() != components_.size()) {
    throw ValidationError("theta dimension does not match the statistic vector");
  }
  for (double v : theta_) {
    if (!std::isfinite(v)) throw ValidationError("theta must be finite");
  }
}

ExponentialModel ExponentialModel::crtt(double theta) {
  return ExponentialModel({stat_nseint()}, {theta});
}

ExponentialModel ExponentialModel::area(double theta1, double theta2) {
  return ExponentialModel({stat_nseint(), stat_neg_squared_areas()}, {theta1, theta2});
}

ExponentialModel ExponentialModel::angle(double theta1, double theta2) {
  return ExponentialModel({stat_nseint(), stat_neg_angle_sum()}, {theta1, theta2});
}

void ExponentialModel::set_theta(std::vector<double> theta) {
  if (theta.size() != components_.size()) {
    throw ValidationError("theta dimension does not match the statistic vector");
  }
  theta_ = std::move(theta);
}

std::vector<double> ExponentialModel::statistics(const TTessellation& t) const {
  std::vector<double> out(components_.size());
  for (std::size_t i = 0; i < components_.size(); ++i) out[i] = components_[i]->value(t);
  return out;
}

std::vector<double> ExponentialModel::increment(const TTessellation& t,
                                                const OpEffect& eff) const {
  std::vector<double> out(components_.size());
  for (std::size_t i = 0; i < components_.size(); ++i) out[i] = components_[i]->delta(t, eff);
  return out;
}

std::vector<double> ExponentialModel::increment(const TTessellation& t, const LocalOp& op) const {
  if (const Split* s = std::get_if<Split>(&op)) {
    const auto eff = t.split_effect(*s);
    if (!eff) throw GeometryError("increment of an invalid split");
    return increment(t, OpEffect{OpEffect::Type::split, &eff->delta, &*eff, nullptr, nullptr});
  }
  if (const Merge* m = std::get_if<Merge>(&op)) {
    const auto eff = t.merge_effect(*m);
    if (!eff) throw ValidationError("increment of an invalid merge");
    return increment(t, OpEffect{OpEffect::Type::merge, &eff->delta, nullptr, &*eff, nullptr});
  }
  const Flip& f = std::get<Flip>(op);
  const auto eff = t.flip_effect(f);
  if (!eff) throw ValidationError("increment of an invalid flip");
  return increment(t, OpEffect{OpEffect::Type::flip, &eff->delta, nullptr, nullptr, &*eff});
}

double ExponentialModel::energy(const TTessellation& t) const {
  const auto stats = statistics(t);
  double e = 0.0;
  for (std::size_t i = 0; i < stats.size(); ++i) e += theta_[i] * stats[i];
  return e;
}

double ExponentialModel::log_papangelou(const std::vector<double>& increment) const {
  double s = 0.0;
  for (std::size_t i = 0; i < increment.size(); ++i) {
    if (std::isinf(increment[i])) return -std::numeric_limits<double>::infinity();
    s += theta_[i] * increment[i];
  }
  return s;
}

double ExponentialModel::papangelou(const std::vector<double>& increment) const {
  const double lp = log_papangelou(increment);
  return std::isinf(lp) && lp < 0.0 ? 0.0 : std::exp(lp);
}

double ExponentialModel::papangelou_split(const TTessellation& t, const Split& s) const {
  return papangelou(increment(t, LocalOp{s}));
}

double ExponentialModel::papangelou_merge(const TTessellation& t, const Merge& m) const {
  return papangelou(increment(t, LocalOp{m}));
}

double ExponentialModel::papangelou_flip(const TTessellation& t, const Flip& f) const {
  return papangelou(increment(t, LocalOp{f}));
}

}  // namespace ttessel
