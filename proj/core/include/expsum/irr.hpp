#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "expsum/roots.hpp"

namespace expsum {

struct CashFlow {
  double amount = 0.0;          // signed
  double time_remaining = 0.0;  // within [0, horizon]

  friend bool operator==(const CashFlow&, const CashFlow&) = default;
};

/// A valuation schedule: begin value compounding over the full horizon,
/// intermediate flows compounding over their remaining time, and the end
/// value the schedule should reach.
class CashFlowSchedule {
public:
  CashFlowSchedule(double begin_value, double end_value, double horizon,
                   std::vector<CashFlow> flows = {});

  double begin_value() const noexcept { return begin_value_; }
  double end_value() const noexcept { return end_value_; }
  double horizon() const noexcept { return horizon_; }
  const std::vector<CashFlow>& flows() const noexcept { return flows_; }

  friend bool operator==(const CashFlowSchedule&,
                         const CashFlowSchedule&) = default;

private:
  double begin_value_;
  double end_value_;
  double horizon_;
  std::vector<CashFlow> flows_;
};

/// The rate equation as an exponential sum in x = ln(1 + R): the begin value
/// becomes a flow over the horizon, every flow a term with base e^T, and the
/// end value the constant term (-E, 1).
ExpSum schedule_to_expsum(const CashFlowSchedule& schedule);

/// End value reached at the given rate,
/// B (1+R)^T0 + sum_j amount_j (1+R)^T_j, computed directly from the
/// schedule. Rates at or below -1 are rejected.
double irr_evaluate(const CashFlowSchedule& schedule, double rate);

struct IrrSolution {
  std::vector<double> rates;      // sorted ascending
  std::vector<double> residuals;  // |irr_evaluate(rate) - end value|
  std::size_t multiplicity_bound = 3;
  bool exceeds_bound = false;
  /// Middle rate when exactly three exist; the conventionally quoted one.
  std::optional<std::size_t> conventional_index;
};

/// The default search window (-0.999999, 10) in rate space.
Window default_rate_window();

/// All rates in the window solving irr_evaluate(schedule, R) = end value,
/// found through the substitution x = ln(1 + R). The window must lie
/// strictly above -1.
IrrSolution irr_solve(const CashFlowSchedule& schedule,
                      Window rate_window = default_rate_window(),
                      double tol = 1e-10);

/// Taylor coefficients a_k = sum_j C_j T_j^k / k! of the rate equation
/// around R = 0 (begin value folded in, end value excluded), k = 0..k_max.
std::vector<double> taylor_coefficients(const CashFlowSchedule& schedule,
                                        unsigned k_max);

struct SignSequence {
  std::vector<int> signs;  // of {-E + a'_0, a'_1, ..., a'_k_max}
  std::size_t change_count = 0;
};

/// Signs of the power-series numerators a'_k = sum_j C_j T_j^k with the end
/// value folded into the constant entry; zero entries are skipped when
/// counting changes.
SignSequence sign_sequence(const CashFlowSchedule& schedule, unsigned k_max);

}  // namespace expsum
