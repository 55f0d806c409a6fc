#ifndef TTESSEL_SMF_CHAIN_HPP
#define TTESSEL_SMF_CHAIN_HPP

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "ttessel/gibbs_model.hpp"
#include "ttessel/tessellation.hpp"

namespace ttessel {

enum class MoveType : std::uint8_t { none = 0, split = 1, merge = 2, flip = 3 };
const char* move_name(MoveType m);

struct ProposalMix {
  double p_split{1.0 / 3.0};
  double p_merge{1.0 / 3.0};
  double p_flip{1.0 / 3.0};
};

struct StepResult {
  MoveType proposed{MoveType::none};
  bool accepted{false};
  double log_ratio{0.0};
  bool valid_proposal{false};  // false for no-op proposals (empty move space)
};

struct TraceRow {
  std::int64_t iteration{0};
  double energy{0.0};
  int nseint{0};
  int nnbseint{0};
  int nbseint{0};
  MoveType accepted_move{MoveType::none};
};

struct SamplingPeriodOptions {
  std::int64_t probe{100};           // snapshot spacing, iterations
  int windows{10};                   // disjoint windows required
  std::int64_t max_period{200000};   // give up beyond this period
};

/// Metropolis-Hastings-Green chain over T-tessellations with split, merge and
/// flip proposals. Splits are drawn from the normalized split measure
/// pi ds / u(T), merges and flips uniformly from their finite spaces; the
/// Green ratios correct for the proposal asymmetry:
///   r_split = lambda_s (p_merge/|M_sT|) / (p_split pi/u(T)),
///   r_merge = lambda_m (p_split pi/u(mT)) / (p_merge/|M_T|),
///   r_flip  = lambda_f |F_T| / |F_fT|.
/// Proposals on an empty move space count as rejected no-ops.
class SmfChain {
 public:
  SmfChain(ExponentialModel model, TTessellation initial, std::uint64_t seed,
           ProposalMix mix = {});

  const TTessellation& state() const { return state_; }
  const ExponentialModel& model() const { return model_; }
  std::int64_t iteration() const { return iteration_; }
  double energy() const { return energy_; }
  Rng& rng() { return rng_; }

  StepResult step();
  void run(std::int64_t n);

  /// Snapshots at iterations burnin + k * period, k = 0..n_samples-1 (the
  /// first sample is taken at the end of the burn-in stage).
  std::vector<TTessellation> sample(int n_samples, std::int64_t burnin, std::int64_t period);

  /// Smallest period such that at least `renewal_fraction` of the segments
  /// alive at a window start are dead at its end, averaged over at least
  /// `windows` disjoint windows of a pilot run. Throws ChainError when no
  /// period up to the cap renews enough.
  std::int64_t sampling_period(double renewal_fraction, SamplingPeriodOptions opts = {});

  const std::vector<TraceRow>& trace() const { return trace_; }
  void set_trace_enabled(bool on) { trace_enabled_ = on; }
  void clear_trace() { trace_.clear(); }

  /// Iteration at which each currently alive segment was created.
  const std::unordered_map<SegId, std::int64_t>& birth_registry() const { return births_; }

  /// Re-checks all tessellation invariants after every accepted move.
  void set_debug_checks(bool on) { debug_checks_ = on; }

 private:
  TTessellation state_;
  ExponentialModel model_;
  ProposalMix mix_;
  Rng rng_;
  std::int64_t iteration_{0};
  double energy_{0.0};
  std::vector<TraceRow> trace_;
  bool trace_enabled_{true};
  bool debug_checks_{false};
  std::unordered_map<SegId, std::int64_t> births_;

  void record(MoveType accepted);
};

/// Deterministic per-replicate seed stream (splitmix64 of seed and index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace ttessel

#endif
