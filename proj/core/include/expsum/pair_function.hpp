#pragma once

#include "expsum/exp_sum.hpp"

namespace expsum {

/// Orientation of a pair function: high-pass when the positively signed base
/// dominates (t_p > t_m), low-pass otherwise.
enum class PairKind { high, low };

/// P(k) = c_p * t_p^k - c_m * t_m^k with positive coefficients and bases in
/// (0, 1). The bases must be distinct; |ln(t_p / t_m)| < 1e-12 is rejected
/// because every characteristic point degenerates there.
class PairFunction {
public:
  PairFunction(double pi_coefficient, double pi_base, double mi_coefficient,
               double mi_base);

  double pi_coefficient() const noexcept { return c_p_; }
  double pi_base() const noexcept { return t_p_; }
  double mi_coefficient() const noexcept { return c_m_; }
  double mi_base() const noexcept { return t_m_; }
  PairKind kind() const noexcept { return kind_; }

  /// The two-term sum {(c_p, t_p), (-c_m, t_m)}.
  ExpSum as_expsum() const;

  friend bool operator==(const PairFunction&, const PairFunction&) = default;

private:
  double c_p_;
  double t_p_;
  double c_m_;
  double t_m_;
  PairKind kind_;
};

/// The unique zero ln(c_m / c_p) / ln(t_p / t_m).
double zero_point(const PairFunction& pf);

/// The unique stationary point ln((c_m ln t_m) / (c_p ln t_p)) /
/// ln(t_p / t_m); a maximum for high pairs, a minimum for low pairs.
double extremum_point(const PairFunction& pf);

/// The unique inflection ln((c_m ln^2 t_m) / (c_p ln^2 t_p)) /
/// ln(t_p / t_m).
double inflection_point(const PairFunction& pf);

/// Zero of the j-th derivative,
/// [ln(c_m / c_p) + j ln(ln t_m / ln t_p)] / ln(t_p / t_m).
/// Orders 0, 1, 2 coincide with the three dedicated points; the points
/// strictly increase with j. Orders above 64 are rejected.
double characteristic_point(const PairFunction& pf, unsigned derivative_order);

struct CharacteristicPoints {
  double zero = 0.0;
  double extremum = 0.0;
  double inflection = 0.0;
};

CharacteristicPoints characteristic_points(const PairFunction& pf);

/// The first derivative rewritten with positive coefficients: a valid pair
/// function of the opposite kind with the roles of the two terms swapped.
PairFunction derivative_pair(const PairFunction& pf);

}  // namespace expsum
