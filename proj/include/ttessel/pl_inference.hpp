#ifndef TTESSEL_PL_INFERENCE_HPP
#define TTESSEL_PL_INFERENCE_HPP

#include <optional>
#include <vector>

#include "ttessel/gibbs_model.hpp"
#include "ttessel/tessellation.hpp"

namespace ttessel {

/// Dummy splits discretizing the split integral of the log-pseudolikelihood:
/// uniform draws from the split measure with their statistic increments
/// t(s,T) cached.
struct DummySplitSet {
  std::vector<Split> splits;
  std::vector<std::vector<double>> increments;

  std::size_t size() const { return splits.size(); }
};

DummySplitSet sample_dummy_splits(const ExponentialModel& model, const TTessellation& t,
                                  int count, Rng& rng);
void add_dummy_splits(DummySplitSet& set, const ExponentialModel& model, const TTessellation& t,
                      int count, Rng& rng);

/// Exact merge and flip terms of the discrete log-pseudolikelihood; only the
/// split integral is approximated by dummy splits.
struct PlTerms {
  int d{0};
  double u{0.0};
  std::vector<double> merge_sum;                    // sum of t(m,T) over merges
  std::vector<std::vector<double>> flip_increments; // t(f,T) per flip
};

PlTerms pl_terms(const ExponentialModel& model, const TTessellation& t);

/// Discrete log-pseudolikelihood
///   -theta . sum_m t(m,T) - u/(pi |S|) sum_S exp(theta . t(s,T))
///   -theta . sum_f t(f,T) - sum_f exp(theta . t(f,T)).
/// Unbiased for lpl(theta|T) when S is uniform; exact for the CRTT model.
double lpl_discrete(const PlTerms& terms, const DummySplitSet& S, const std::vector<double>& theta);
std::vector<double> lpl_gradient_discrete(const PlTerms& terms, const DummySplitSet& S,
                                          const std::vector<double>& theta);
/// Row-major d x d Hessian; negative semidefinite by construction.
std::vector<double> lpl_hessian_discrete(const PlTerms& terms, const DummySplitSet& S,
                                         const std::vector<double>& theta);

double lpl_discrete(const ExponentialModel& model, const TTessellation& t, const DummySplitSet& S,
                    const std::vector<double>& theta);
std::vector<double> lpl_gradient_discrete(const ExponentialModel& model, const TTessellation& t,
                                          const DummySplitSet& S,
                                          const std::vector<double>& theta);
std::vector<double> lpl_hessian_discrete(const ExponentialModel& model, const TTessellation& t,
                                         const DummySplitSet& S,
                                         const std::vector<double>& theta);

/// Closed-form maximum pseudolikelihood estimate of the CRTT parameter:
/// log(nnbseint(T) pi / u(T)). Requires at least one non-blocking segment.
double crtt_mple(double nnbseint, double u);
double crtt_mple(const TTessellation& t);

struct NoisConfig {
  double epsilon{1.0};       // Newton step size; halved while the step decreases lpl
  double delta{1e-6};        // stopping tolerance; negative disables the criterion
  int max_iterations{100};
  std::optional<std::vector<double>> initial_theta;
  bool crtt_start{false};    // start from (crtt_mple, 0, ..., 0) when unset
};

struct NoisIterate {
  std::vector<double> theta;
  double lpl{0.0};
};

struct NoisResult {
  std::vector<double> theta;
  int iterations{0};
  bool converged{false};
  std::vector<NoisIterate> trace;
};

/// Newton optimization and increasing splitting: alternates a safeguarded
/// Newton ascent step on the discrete log-pseudolikelihood with the addition
/// of m = nnbseint(T) dummy splits, until |L_k - L_{k-1}| <= delta (|L_k| +
/// delta) or the iteration cap. Throws NumericError on a singular Hessian or
/// overflowing exponents.
NoisResult nois(const ExponentialModel& model, const TTessellation& t, const NoisConfig& config,
                Rng& rng);

}  // namespace ttessel

#endif
