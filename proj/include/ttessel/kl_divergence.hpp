#ifndef TTESSEL_KL_DIVERGENCE_HPP
#define TTESSEL_KL_DIVERGENCE_HPP

#include <vector>

namespace ttessel {

/// Finite non-negative measure in discrete form: weights of atoms indexed
/// against a shared support.
struct FiniteMeasure {
  std::vector<double> weights;
};

/// Extended Kullback-Leibler divergence of beta from alpha:
///   sum_z beta_z (r log r + 1 - r), r = alpha_z / beta_z, 0 log 0 = 0;
/// +infinity when beta does not dominate alpha.
double extended_kl(const FiniteMeasure& alpha, const FiniteMeasure& beta);

struct ShiftLemmaCheck {
  double lhs{0.0};  // D(alpha, beta)
  double rhs{0.0};  // D(alpha + gamma, beta + gamma)
  bool holds{false};
};

/// Evaluates both sides of the divergence-shift inequality
/// D(alpha, beta) >= D(alpha + gamma, beta + gamma).
ShiftLemmaCheck check_shift_lemma(const FiniteMeasure& alpha, const FiniteMeasure& beta,
                                  const FiniteMeasure& gamma);

}  // namespace ttessel

#endif
