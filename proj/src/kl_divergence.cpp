#include "ttessel/kl_divergence.hpp"

#include <cmath>
#include <limits>

#include "ttessel/errors.hpp"

namespace ttessel {

double extended_kl(const FiniteMeasure& alpha, const FiniteMeasure& beta) {
  if (alpha.weights.size() != beta.weights.size()) {
    throw ValidationError("measures need a common support indexing");
  }
  double div = 0.0;
  for (std::size_t i = 0; i < alpha.weights.size(); ++i) {
    const double a = alpha.weights[i];
    const double b = beta.weights[i];
    if (a < 0.0 || b < 0.0) throw ValidationError("measure weights must be non-negative");
    if (b == 0.0) {
      if (a > 0.0) return std::numeric_limits<double>::infinity();
      continue;  // both vanish: null atom
    }
    const double r = a / b;
    const double rlogr = r > 0.0 ? r * std::log(r) : 0.0;
    div += b * (rlogr + 1.0 - r);
  }
  return div;
}

ShiftLemmaCheck check_shift_lemma(const FiniteMeasure& alpha, const FiniteMeasure& beta,
                                  const FiniteMeasure& gamma) {
  if (gamma.weights.size() != alpha.weights.size()) {
    throw ValidationError("measures need a common support indexing");
  }
  FiniteMeasure ag{alpha.weights}, bg{beta.weights};
  for (std::size_t i = 0; i < gamma.weights.size(); ++i) {
    if (gamma.weights[i] < 0.0) throw ValidationError("measure weights must be non-negative");
    ag.weights[i] += gamma.weights[i];
    bg.weights[i] += gamma.weights[i];
  }
  ShiftLemmaCheck out;
  out.lhs = extended_kl(alpha, beta);
  out.rhs = extended_kl(ag, bg);
  out.holds = std::isinf(out.lhs) || out.lhs >= out.rhs - 1e-12;
  return out;
}

}  // namespace ttessel
