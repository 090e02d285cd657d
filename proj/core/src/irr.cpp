#include "expsum/irr.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace expsum {

CashFlowSchedule::CashFlowSchedule(double begin_value, double end_value,
                                   double horizon, std::vector<CashFlow> flows)
    : begin_value_(begin_value),
      end_value_(end_value),
      horizon_(horizon),
      flows_(std::move(flows)) {
  if (!(begin_value_ >= 0.0) || !std::isfinite(begin_value_)) {
    throw domain_error(
        "cash flow schedule: begin_value must be nonnegative and finite");
  }
  if (!(end_value_ >= 0.0) || !std::isfinite(end_value_)) {
    throw domain_error(
        "cash flow schedule: end_value must be nonnegative and finite");
  }
  if (!(horizon_ >= 0.0) || !std::isfinite(horizon_)) {
    throw domain_error(
        "cash flow schedule: horizon must be nonnegative and finite");
  }
  for (std::size_t i = 0; i < flows_.size(); ++i) {
    if (!std::isfinite(flows_[i].amount)) {
      throw domain_error("cash flow schedule: flow " + std::to_string(i) +
                         " amount must be finite");
    }
    if (!(flows_[i].time_remaining >= 0.0) ||
        !(flows_[i].time_remaining <= horizon_)) {
      throw domain_error("cash flow schedule: flow " + std::to_string(i) +
                         " time_remaining must lie within [0, horizon]");
    }
  }
}

ExpSum schedule_to_expsum(const CashFlowSchedule& schedule) {
  std::vector<ExpTerm> terms;
  terms.reserve(schedule.flows().size() + 2);
  if (schedule.begin_value() != 0.0) {
    terms.push_back({schedule.begin_value(), std::exp(schedule.horizon())});
  }
  for (const CashFlow& flow : schedule.flows()) {
    if (flow.amount != 0.0) {
      terms.push_back({flow.amount, std::exp(flow.time_remaining)});
    }
  }
  if (schedule.end_value() != 0.0) {
    terms.push_back({-schedule.end_value(), 1.0});
  }
  return ExpSum(std::move(terms));
}

double irr_evaluate(const CashFlowSchedule& schedule, double rate) {
  if (!(rate > -1.0) || !std::isfinite(rate)) {
    throw domain_error("irr_evaluate: rate must be finite and above -1");
  }
  const double growth = 1.0 + rate;
  double acc = 0.0;
  double compensation = 0.0;
  const auto add = [&](double value) {
    const double next = acc + value;
    if (std::fabs(acc) >= std::fabs(value)) {
      compensation += (acc - next) + value;
    } else {
      compensation += (value - next) + acc;
    }
    acc = next;
  };
  add(schedule.begin_value() * std::pow(growth, schedule.horizon()));
  for (const CashFlow& flow : schedule.flows()) {
    add(flow.amount * std::pow(growth, flow.time_remaining));
  }
  return acc + compensation;
}

Window default_rate_window() { return {-0.999999, 10.0}; }

IrrSolution irr_solve(const CashFlowSchedule& schedule, Window rate_window,
                      double tol) {
  if (!(rate_window.lo > -1.0) || !(rate_window.lo < rate_window.hi) ||
      !std::isfinite(rate_window.hi)) {
    throw domain_error(
        "irr_solve: rate window must lie strictly above -1 with lo < hi");
  }
  const ExpSum equation = schedule_to_expsum(schedule);
  const Window x_window{std::log1p(rate_window.lo),
                        std::log1p(rate_window.hi)};
  IrrSolution solution;
  if (!equation.empty()) {
    for (const double x : find_roots(equation, x_window, tol)) {
      solution.rates.push_back(std::expm1(x));
    }
  }
  for (const double rate : solution.rates) {
    solution.residuals.push_back(
        std::fabs(irr_evaluate(schedule, rate) - schedule.end_value()));
  }
  solution.exceeds_bound = solution.rates.size() > solution.multiplicity_bound;
  if (solution.rates.size() == 3) solution.conventional_index = 1;
  return solution;
}

std::vector<double> taylor_coefficients(const CashFlowSchedule& schedule,
                                        unsigned k_max) {
  // Folded terms (C_j, T_j): the begin value over the horizon plus every
  // flow over its remaining time; the end value is excluded.
  std::vector<std::pair<double, double>> folded;
  if (schedule.begin_value() != 0.0) {
    folded.emplace_back(schedule.begin_value(), schedule.horizon());
  }
  for (const CashFlow& flow : schedule.flows()) {
    if (flow.amount != 0.0) {
      folded.emplace_back(flow.amount, flow.time_remaining);
    }
  }
  std::vector<double> coefficients(k_max + 1, 0.0);
  // Per-term recurrence p_k = p_{k-1} * T / k keeps C T^k / k! stable
  // without ever forming the factorial.
  std::vector<double> powers;
  powers.reserve(folded.size());
  for (const auto& [c, t] : folded) powers.push_back(c);
  for (unsigned k = 0; k <= k_max; ++k) {
    double sum = 0.0;
    for (std::size_t j = 0; j < folded.size(); ++j) sum += powers[j];
    coefficients[k] = sum;
    for (std::size_t j = 0; j < folded.size(); ++j) {
      powers[j] *= folded[j].second / static_cast<double>(k + 1);
    }
  }
  return coefficients;
}

SignSequence sign_sequence(const CashFlowSchedule& schedule, unsigned k_max) {
  if (k_max < 1) {
    throw domain_error("sign_sequence: k_max must be at least 1");
  }
  std::vector<std::pair<double, double>> folded;
  if (schedule.begin_value() != 0.0) {
    folded.emplace_back(schedule.begin_value(), schedule.horizon());
  }
  for (const CashFlow& flow : schedule.flows()) {
    if (flow.amount != 0.0) {
      folded.emplace_back(flow.amount, flow.time_remaining);
    }
  }
  SignSequence sequence;
  sequence.signs.reserve(k_max + 1);
  std::vector<double> powers;
  powers.reserve(folded.size());
  for (const auto& [c, t] : folded) powers.push_back(c);
  int last_sign = 0;
  for (unsigned k = 0; k <= k_max; ++k) {
    double numerator = 0.0;
    for (const double p : powers) numerator += p;
    if (k == 0) numerator -= schedule.end_value();
    const int sign = numerator > 0.0 ? 1 : (numerator < 0.0 ? -1 : 0);
    sequence.signs.push_back(sign);
    if (sign != 0) {
      if (last_sign != 0 && sign != last_sign) ++sequence.change_count;
      last_sign = sign;
    }
    for (std::size_t j = 0; j < folded.size(); ++j) {
      powers[j] *= folded[j].second;
    }
  }
  return sequence;
}

}  // namespace expsum
