#include "ttessel/smf_chain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_set>

#include "ttessel/errors.hpp"

namespace ttessel {

namespace {
constexpr double kPi = std::numbers::pi;
}

const char* move_name(MoveType m) {
  switch (m) {
    case MoveType::split: return "split";
    case MoveType::merge: return "merge";
    case MoveType::flip: return "flip";
    default: return "none";
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

SmfChain::SmfChain(ExponentialModel model, TTessellation initial, std::uint64_t seed,
                   ProposalMix mix)
    : state_(std::move(initial)), model_(std::move(model)), mix_(mix), rng_(seed) {
  if (!(mix_.p_split > 0.0 && mix_.p_merge > 0.0 && mix_.p_flip > 0.0)) {
    throw ValidationError("proposal probabilities must be positive");
  }
  const double total = mix_.p_split + mix_.p_merge + mix_.p_flip;
  if (std::abs(total - 1.0) > 1e-12) {
    mix_.p_split /= total;
    mix_.p_merge /= total;
    mix_.p_flip /= total;
  }
  energy_ = model_.energy(state_);
  for (SegId id : state_.internal_segments()) births_[id] = 0;
}

void SmfChain::record(MoveType accepted) {
  if (!trace_enabled_) return;
  const BasicStats st = state_.cached_stats();
  trace_.push_back(TraceRow{iteration_, energy_, static_cast<int>(st.nseint),
                            static_cast<int>(st.nnbseint), static_cast<int>(st.nbseint),
                            accepted});
}

StepResult SmfChain::step() {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double pick = unit(rng_);
  StepResult res;
  const double u = state_.u();

  if (pick < mix_.p_split) {
    res.proposed = MoveType::split;
    res.valid_proposal = true;
    const SplitEffect eff = state_.sample_split_effect(rng_);
    const OpEffect view{OpEffect::Type::split, &eff.delta, &eff, nullptr, nullptr};
    const double log_lambda = model_.log_papangelou(model_.increment(state_, view));
    const double merges_after = state_.nnbseint() + eff.delta.nnbseint;
    res.log_ratio = log_lambda + std::log(mix_.p_merge / merges_after) -
                    std::log(mix_.p_split * kPi / u);
    if (std::log(unit(rng_)) < res.log_ratio) {
      const SegId id = state_.apply_split(eff);
      births_[id] = iteration_;
      energy_ += log_lambda;
      res.accepted = true;
    }
  } else if (pick < mix_.p_split + mix_.p_merge) {
    res.proposed = MoveType::merge;
    if (state_.nnbseint() > 0) {
      res.valid_proposal = true;
      std::uniform_int_distribution<int> pick_merge(0, state_.nnbseint() - 1);
      const Merge m{state_.nonblocking_segments()[pick_merge(rng_)]};
      const auto eff = state_.merge_effect(m);
      if (eff) {
        const OpEffect view{OpEffect::Type::merge, &eff->delta, nullptr, &*eff, nullptr};
        const double log_lambda = model_.log_papangelou(model_.increment(state_, view));
        const double u_after = u + eff->delta.u;
        res.log_ratio = log_lambda + std::log(mix_.p_split * kPi / u_after) -
                        std::log(mix_.p_merge / state_.nnbseint());
        if (std::log(unit(rng_)) < res.log_ratio) {
          births_.erase(m.seg);
          state_.apply_merge(*eff);
          energy_ += log_lambda;
          res.accepted = true;
        }
      }
    }
  } else {
    res.proposed = MoveType::flip;
    if (state_.nbseint() > 0) {
      res.valid_proposal = true;
      std::uniform_int_distribution<int> pick_flip(0, 2 * state_.nbseint() - 1);
      const int k = pick_flip(rng_);
      const Flip f{state_.blocking_segments()[k / 2], static_cast<std::uint8_t>(k % 2)};
      const auto eff = state_.flip_effect(f);
      if (eff) {  // degenerate extensions count as rejections
        const OpEffect view{OpEffect::Type::flip, &eff->delta, nullptr, nullptr, &*eff};
        const double log_lambda = model_.log_papangelou(model_.increment(state_, view));
        const double flips_after = 2.0 * (state_.nbseint() + eff->delta.nbseint);
        res.log_ratio =
            log_lambda + std::log(2.0 * state_.nbseint()) - std::log(flips_after);
        if (std::log(unit(rng_)) < res.log_ratio) {
          state_.apply_flip(*eff);
          energy_ += log_lambda;
          res.accepted = true;
        }
      }
    }
  }

  ++iteration_;
  if (debug_checks_ && res.accepted) state_.validate();
  record(res.accepted ? res.proposed : MoveType::none);
  return res;
}

void SmfChain::run(std::int64_t n) {
  for (std::int64_t i = 0; i < n; ++i) step();
}

std::vector<TTessellation> SmfChain::sample(int n_samples, std::int64_t burnin,
                                            std::int64_t period) {
  std::vector<TTessellation> out;
  out.reserve(n_samples);
  run(burnin);
  for (int k = 0; k < n_samples; ++k) {
    if (k > 0) run(period);
    out.push_back(state_);
  }
  return out;
}

std::int64_t SmfChain::sampling_period(double renewal_fraction, SamplingPeriodOptions opts) {
  if (!(renewal_fraction > 0.0 && renewal_fraction < 1.0)) {
    throw ValidationError("renewal fraction must lie in (0, 1)");
  }
  // Segment ids are never reused, so the segments of a start snapshot that
  // died by the window end are exactly those missing from the end snapshot.
  std::vector<std::unordered_set<SegId>> snaps;
  auto snapshot = [&]() {
    std::unordered_set<SegId> s;
    for (SegId id : state_.internal_segments()) s.insert(id);
    snaps.push_back(std::move(s));
  };
  snapshot();
  const std::int64_t max_steps_in_period = opts.max_period / opts.probe;
  for (std::int64_t candidate = 1; candidate <= max_steps_in_period; ++candidate) {
    // Extend the pilot run so `windows` disjoint windows of this length exist.
    const std::int64_t need = candidate * opts.windows + 1;
    while (static_cast<std::int64_t>(snaps.size()) < need) {
      run(opts.probe);
      snapshot();
    }
    double fraction_sum = 0.0;
    int used = 0;
    for (int w = 0; w < opts.windows; ++w) {
      const auto& start = snaps[w * candidate];
      const auto& end = snaps[(w + 1) * candidate];
      if (start.empty()) continue;
      int dead = 0;
      for (SegId id : start) {
        if (!end.contains(id)) ++dead;
      }
      fraction_sum += static_cast<double>(dead) / static_cast<double>(start.size());
      ++used;
    }
    if (used == opts.windows && fraction_sum / used >= renewal_fraction) {
      return candidate * opts.probe;
    }
  }
  throw ChainError("segment renewal did not reach the requested fraction within the cap");
}

}  // namespace ttessel
