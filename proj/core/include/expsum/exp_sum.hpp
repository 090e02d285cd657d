#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "expsum/errors.hpp"

namespace expsum {

/// One addend C * T^k of a finite exponential sum. The coefficient is any
/// nonzero real, the base any positive real (base 1 encodes a constant).
struct ExpTerm {
  double coefficient = 0.0;
  double base = 1.0;

  friend bool operator==(const ExpTerm&, const ExpTerm&) = default;
};

/// An addend C * T^(k - a); the shift collapses into the coefficient as
/// C * T^(-a).
struct ShiftedTerm {
  double coefficient = 0.0;
  double base = 1.0;
  double shift = 0.0;
};

/// A finite sum S(k) = sum_j C_j * T_j^k held in canonical form: terms sorted
/// by strictly descending base, equal bases merged, zero coefficients
/// dropped. The empty sum is legal and evaluates to zero everywhere.
class ExpSum {
public:
  ExpSum() = default;
  explicit ExpSum(std::vector<ExpTerm> terms);
  ExpSum(std::initializer_list<ExpTerm> terms);

  const std::vector<ExpTerm>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  ExpSum operator-() const;
  ExpSum scaled(double factor) const;

  friend ExpSum operator+(const ExpSum& a, const ExpSum& b);
  friend ExpSum operator-(const ExpSum& a, const ExpSum& b);
  friend bool operator==(const ExpSum&, const ExpSum&) = default;

private:
  std::vector<ExpTerm> terms_;
};

/// Canonical form of an arbitrary term list: sorted by descending base with
/// exact base comparison, equal bases merged, vanishing coefficients dropped.
ExpSum merge_terms(std::span<const ExpTerm> terms);

/// S(k) under compensated summation; synchronized term sets cancel almost
/// completely, so naive accumulation is not good enough here. Throws
/// evaluation_overflow (with the term index) when a power overflows.
double evaluate(const ExpSum& sum, double k);

/// sum_j |C_j| * T_j^k, the natural magnitude scale at k for relative
/// residual tests.
double term_scale(const ExpSum& sum, double k);

/// Largest single-term magnitude max_j |C_j| * T_j^k.
double max_term_magnitude(const ExpSum& sum, double k);

/// The order-th derivative: every coefficient picks up a factor ln(T_j) per
/// order, the bases are unchanged, and base-1 terms vanish for order >= 1.
/// The ln powers are built by iterated multiplication, so
/// derivative(derivative(s, m), n) == derivative(s, m + n) exactly.
ExpSum derivative(const ExpSum& sum, unsigned order);

struct Normalization {
  double divisor_base = 1.0;
  ExpSum normalized;
};

/// Rescale every base by t0 + delta (t0 the largest base) so that all bases
/// drop strictly below one. Identity (divisor 1) when t0 < 1 already. The
/// original is recovered pointwise as divisor_base^k * normalized(k).
Normalization normalize_bases(const ExpSum& sum, double delta);

/// normalize_bases with the default margin delta = 0.01 * t0.
Normalization normalize_bases(const ExpSum& sum);

/// Fold shifts into coefficients, (C, T, a) -> (C * T^(-a), T), and merge.
ExpSum collapse_shifts(std::span<const ShiftedTerm> terms);

/// The constant sum_j C_j / ln(a_j). Bases must be positive and distinct
/// from 1.
double collapse_log_sum(std::span<const double> coefficients,
                        std::span<const double> bases);

/// (ln base)^order by iterated multiplication; order 0 yields exactly 1.
double ln_power(double base, unsigned order);

}  // namespace expsum
