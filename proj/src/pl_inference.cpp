#include "ttessel/pl_inference.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "ttessel/errors.hpp"

namespace ttessel {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMaxExponent = 700.0;  // exp() overflows just above this

double dot_theta(const std::vector<double>& theta, const std::vector<double>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) s += theta[i] * v[i];
  return s;
}

double checked_exp(double x) {
  if (!std::isfinite(x) || x > kMaxExponent) {
    throw NumericError("pseudolikelihood exponent overflow");
  }
  return std::exp(x);
}

}  // namespace

DummySplitSet sample_dummy_splits(const ExponentialModel& model, const TTessellation& t,
                                  int count, Rng& rng) {
  DummySplitSet set;
  add_dummy_splits(set, model, t, count, rng);
  return set;
}

void add_dummy_splits(DummySplitSet& set, const ExponentialModel& model, const TTessellation& t,
                      int count, Rng& rng) {
  for (int i = 0; i < count; ++i) {
    const SplitEffect eff = t.sample_split_effect(rng);
    const OpEffect view{OpEffect::Type::split, &eff.delta, &eff, nullptr, nullptr};
    set.splits.push_back(eff.op);
    set.increments.push_back(model.increment(t, view));
  }
}

PlTerms pl_terms(const ExponentialModel& model, const TTessellation& t) {
  PlTerms terms;
  terms.d = model.dimension();
  terms.u = t.u();
  terms.merge_sum.assign(terms.d, 0.0);
  for (const Merge& m : t.enumerate_merges()) {
    const auto inc = model.increment(t, LocalOp{m});
    for (int i = 0; i < terms.d; ++i) terms.merge_sum[i] += inc[i];
  }
  for (const Flip& f : t.enumerate_flips()) {
    terms.flip_increments.push_back(model.increment(t, LocalOp{f}));
  }
  return terms;
}

double lpl_discrete(const PlTerms& terms, const DummySplitSet& S,
                    const std::vector<double>& theta) {
  if (S.size() == 0) throw ValidationError("empty dummy-split set");
  double value = -dot_theta(theta, terms.merge_sum);
  double split_sum = 0.0;
  for (const auto& inc : S.increments) split_sum += checked_exp(dot_theta(theta, inc));
  value -= terms.u / (kPi * static_cast<double>(S.size())) * split_sum;
  for (const auto& inc : terms.flip_increments) {
    const double e = dot_theta(theta, inc);
    value -= e;
    value -= checked_exp(e);
  }
  return value;
}

std::vector<double> lpl_gradient_discrete(const PlTerms& terms, const DummySplitSet& S,
                                          const std::vector<double>& theta) {
  if (S.size() == 0) throw ValidationError("empty dummy-split set");
  const int d = terms.d;
  std::vector<double> g(d, 0.0);
  for (int i = 0; i < d; ++i) g[i] = -terms.merge_sum[i];
  const double w = terms.u / (kPi * static_cast<double>(S.size()));
  for (const auto& inc : S.increments) {
    const double e = checked_exp(dot_theta(theta, inc));
    for (int i = 0; i < d; ++i) g[i] -= w * inc[i] * e;
  }
  for (const auto& inc : terms.flip_increments) {
    const double e = checked_exp(dot_theta(theta, inc));
    for (int i = 0; i < d; ++i) g[i] -= inc[i] * (1.0 + e);
  }
  return g;
}

std::vector<double> lpl_hessian_discrete(const PlTerms& terms, const DummySplitSet& S,
                                         const std::vector<double>& theta) {
  if (S.size() == 0) throw ValidationError("empty dummy-split set");
  const int d = terms.d;
  std::vector<double> h(d * d, 0.0);
  const double w = terms.u / (kPi * static_cast<double>(S.size()));
  auto accumulate = [&](const std::vector<double>& inc, double weight) {
    const double e = weight * checked_exp(dot_theta(theta, inc));
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) h[i * d + j] -= inc[i] * inc[j] * e;
    }
  };
  for (const auto& inc : S.increments) accumulate(inc, w);
  for (const auto& inc : terms.flip_increments) accumulate(inc, 1.0);
  return h;
}

double lpl_discrete(const ExponentialModel& model, const TTessellation& t, const DummySplitSet& S,
                    const std::vector<double>& theta) {
  return lpl_discrete(pl_terms(model, t), S, theta);
}

std::vector<double> lpl_gradient_discrete(const ExponentialModel& model, const TTessellation& t,
                                          const DummySplitSet& S,
                                          const std::vector<double>& theta) {
  return lpl_gradient_discrete(pl_terms(model, t), S, theta);
}

std::vector<double> lpl_hessian_discrete(const ExponentialModel& model, const TTessellation& t,
                                         const DummySplitSet& S,
                                         const std::vector<double>& theta) {
  return lpl_hessian_discrete(pl_terms(model, t), S, theta);
}

double crtt_mple(double nnbseint, double u) {
  if (nnbseint < 1.0) throw ValidationError("crtt_mple needs at least one non-blocking segment");
  if (u <= 0.0) throw ValidationError("crtt_mple needs a positive perimeter sum");
  return std::log(nnbseint * kPi / u);
}

double crtt_mple(const TTessellation& t) {
  return crtt_mple(static_cast<double>(t.nnbseint()), t.u());
}

namespace {

/// Ascent direction (-H)^{-1} G with a tiny ridge if the Hessian is
/// numerically singular; hard error when the ridge would exceed 1e-6 of the
/// diagonal scale.
std::vector<double> newton_direction(const std::vector<double>& hessian,
                                     const std::vector<double>& gradient, int d) {
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) a(i, j) = -hessian[i * d + j];
  }
  Eigen::VectorXd b(d);
  for (int i = 0; i < d; ++i) b(i) = gradient[i];

  double scale = 0.0;
  for (int i = 0; i < d; ++i) scale = std::max(scale, std::abs(a(i, i)));
  if (scale == 0.0) throw NumericError("singular pseudolikelihood Hessian (zero curvature)");

  double ridge = 0.0;
  for (;;) {
    Eigen::MatrixXd m = a;
    for (int i = 0; i < d; ++i) m(i, i) += ridge;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
      const Eigen::VectorXd x = ldlt.solve(b);
      if ((m * x - b).norm() <= 1e-8 * std::max(1.0, b.norm())) {
        return std::vector<double>(x.data(), x.data() + d);
      }
    }
    ridge = ridge == 0.0 ? 1e-12 * scale : 10.0 * ridge;
    if (ridge > 1e-6 * scale) {
      throw NumericError("singular pseudolikelihood Hessian");
    }
  }
}

}  // namespace

NoisResult nois(const ExponentialModel& model, const TTessellation& t, const NoisConfig& config,
                Rng& rng) {
  const int d = model.dimension();
  const int m = t.nnbseint();
  if (m < 1) throw ValidationError("NOIS needs at least one non-blocking segment");
  if (config.epsilon <= 0.0) throw ValidationError("NOIS step size must be positive");
  if (config.max_iterations < 0) throw ValidationError("negative iteration cap");

  std::vector<double> theta(d, 0.0);
  if (config.initial_theta) {
    if (static_cast<int>(config.initial_theta->size()) != d) {
      throw ValidationError("initial theta has the wrong dimension");
    }
    theta = *config.initial_theta;
  } else if (config.crtt_start) {
    theta[0] = crtt_mple(t);
  }

  const PlTerms terms = pl_terms(model, t);
  DummySplitSet S = sample_dummy_splits(model, t, m, rng);

  NoisResult result;
  result.theta = theta;
  if (config.max_iterations == 0) {
    result.trace.push_back(NoisIterate{theta, lpl_discrete(terms, S, theta)});
    return result;
  }

  double prev_lpl = 0.0;
  bool have_prev = false;
  for (int it = 1; it <= config.max_iterations; ++it) {
    const auto gradient = lpl_gradient_discrete(terms, S, theta);
    const auto hessian = lpl_hessian_discrete(terms, S, theta);
    const auto direction = newton_direction(hessian, gradient, d);

    // Safeguarded ascent on the current S: halve the step while it lowers
    // the objective.
    const double before = lpl_discrete(terms, S, theta);
    double step = config.epsilon;
    std::vector<double> candidate(d);
    for (int halvings = 0;; ++halvings) {
      for (int i = 0; i < d; ++i) candidate[i] = theta[i] + step * direction[i];
      if (lpl_discrete(terms, S, candidate) >= before || halvings >= 40) break;
      step *= 0.5;
    }
    theta = candidate;

    add_dummy_splits(S, model, t, m, rng);
    const double lpl = lpl_discrete(terms, S, theta);
    if (!std::isfinite(lpl)) throw NumericError("non-finite pseudolikelihood");
    if (!have_prev) {
      // First variation: against the starting point evaluated on the same S.
      std::vector<double> start(d, 0.0);
      if (config.initial_theta) {
        start = *config.initial_theta;
      } else if (config.crtt_start) {
        start[0] = crtt_mple(t);
      }
      prev_lpl = lpl_discrete(terms, S, start);
      have_prev = true;
    }
    const double variation = lpl - prev_lpl;
    prev_lpl = lpl;
    result.trace.push_back(NoisIterate{theta, lpl});
    result.theta = theta;
    result.iterations = it;
    if (std::abs(variation) <= config.delta * (std::abs(lpl) + config.delta)) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace ttessel
