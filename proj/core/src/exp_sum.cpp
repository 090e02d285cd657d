#include "expsum/exp_sum.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace expsum {

namespace {

void validate_term(const ExpTerm& term, std::size_t index) {
  if (!std::isfinite(term.coefficient)) {
    throw domain_error("term " + std::to_string(index) +
                       ": coefficient must be finite");
  }
  if (!(term.base > 0.0) || !std::isfinite(term.base)) {
    throw domain_error("term " + std::to_string(index) +
                       ": base must be positive and finite");
  }
}

std::vector<ExpTerm> canonicalize(std::vector<ExpTerm> terms) {
  for (std::size_t i = 0; i < terms.size(); ++i) validate_term(terms[i], i);
  std::sort(terms.begin(), terms.end(),
            [](const ExpTerm& a, const ExpTerm& b) { return a.base > b.base; });
  std::vector<ExpTerm> merged;
  merged.reserve(terms.size());
  for (const ExpTerm& term : terms) {
    if (!merged.empty() && merged.back().base == term.base) {
      merged.back().coefficient += term.coefficient;
    } else {
      merged.push_back(term);
    }
  }
  std::erase_if(merged,
                [](const ExpTerm& t) { return t.coefficient == 0.0; });
  return merged;
}

}  // namespace

ExpSum::ExpSum(std::vector<ExpTerm> terms)
    : terms_(canonicalize(std::move(terms))) {}

ExpSum::ExpSum(std::initializer_list<ExpTerm> terms)
    : ExpSum(std::vector<ExpTerm>(terms)) {}

ExpSum ExpSum::operator-() const { return scaled(-1.0); }

ExpSum ExpSum::scaled(double factor) const {
  if (!std::isfinite(factor)) throw domain_error("scale factor must be finite");
  std::vector<ExpTerm> terms = terms_;
  for (ExpTerm& term : terms) term.coefficient *= factor;
  return ExpSum(std::move(terms));
}

ExpSum operator+(const ExpSum& a, const ExpSum& b) {
  std::vector<ExpTerm> terms = a.terms_;
  terms.insert(terms.end(), b.terms_.begin(), b.terms_.end());
  return ExpSum(std::move(terms));
}

ExpSum operator-(const ExpSum& a, const ExpSum& b) { return a + (-b); }

ExpSum merge_terms(std::span<const ExpTerm> terms) {
  return ExpSum(std::vector<ExpTerm>(terms.begin(), terms.end()));
}

double evaluate(const ExpSum& sum, double k) {
  double acc = 0.0;
  double compensation = 0.0;
  const auto& terms = sum.terms();
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const double value = terms[i].coefficient * std::pow(terms[i].base, k);
    if (!std::isfinite(value)) {
      throw evaluation_overflow(
          "term " + std::to_string(i) + " overflows at k = " +
              std::to_string(k),
          i);
    }
    const double next = acc + value;
    if (std::fabs(acc) >= std::fabs(value)) {
      compensation += (acc - next) + value;
    } else {
      compensation += (value - next) + acc;
    }
    acc = next;
  }
  return acc + compensation;
}

double term_scale(const ExpSum& sum, double k) {
  double scale = 0.0;
  for (const ExpTerm& term : sum.terms()) {
    scale += std::fabs(term.coefficient) * std::pow(term.base, k);
  }
  return scale;
}

double max_term_magnitude(const ExpSum& sum, double k) {
  double largest = 0.0;
  for (const ExpTerm& term : sum.terms()) {
    largest = std::max(largest,
                       std::fabs(term.coefficient) * std::pow(term.base, k));
  }
  return largest;
}

double ln_power(double base, unsigned order) {
  const double ln = std::log(base);
  double power = 1.0;
  for (unsigned i = 0; i < order; ++i) power *= ln;
  return power;
}

ExpSum derivative(const ExpSum& sum, unsigned order) {
  if (order == 0) return sum;
  std::vector<ExpTerm> terms;
  terms.reserve(sum.size());
  for (const ExpTerm& term : sum.terms()) {
    // Iterated multiplication keeps repeated differentiation exact:
    // scaling by ln(T) m times and then n more equals scaling m + n times.
    double coefficient = term.coefficient;
    const double factor = std::log(term.base);
    for (unsigned j = 0; j < order; ++j) coefficient *= factor;
    terms.push_back({coefficient, term.base});
  }
  return ExpSum(std::move(terms));
}

Normalization normalize_bases(const ExpSum& sum, double delta) {
  if (sum.empty()) throw domain_error("normalize_bases: sum must be nonempty");
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw domain_error("normalize_bases: delta must be positive and finite");
  }
  const double t0 = sum.terms().front().base;
  if (t0 < 1.0) return {1.0, sum};
  const double divisor = t0 + delta;
  std::vector<ExpTerm> terms = sum.terms();
  for (ExpTerm& term : terms) term.base /= divisor;
  return {divisor, ExpSum(std::move(terms))};
}

Normalization normalize_bases(const ExpSum& sum) {
  if (sum.empty()) throw domain_error("normalize_bases: sum must be nonempty");
  return normalize_bases(sum, 0.01 * sum.terms().front().base);
}

ExpSum collapse_shifts(std::span<const ShiftedTerm> terms) {
  std::vector<ExpTerm> collapsed;
  collapsed.reserve(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const ShiftedTerm& term = terms[i];
    if (!std::isfinite(term.coefficient) || !std::isfinite(term.shift)) {
      throw domain_error("shifted term " + std::to_string(i) +
                         ": coefficient and shift must be finite");
    }
    if (!(term.base > 0.0) || !std::isfinite(term.base)) {
      throw domain_error("shifted term " + std::to_string(i) +
                         ": base must be positive and finite");
    }
    const double coefficient =
        term.coefficient * std::pow(term.base, -term.shift);
    if (!std::isfinite(coefficient)) {
      throw evaluation_overflow(
          "shifted term " + std::to_string(i) + " overflows while collapsing",
          i);
    }
    collapsed.push_back({coefficient, term.base});
  }
  return ExpSum(std::move(collapsed));
}

double collapse_log_sum(std::span<const double> coefficients,
                        std::span<const double> bases) {
  if (coefficients.size() != bases.size()) {
    throw domain_error(
        "collapse_log_sum: coefficient and base lists must match in length");
  }
  double acc = 0.0;
  double compensation = 0.0;
  for (std::size_t i = 0; i < bases.size(); ++i) {
    if (!(bases[i] > 0.0) || !std::isfinite(bases[i])) {
      throw domain_error("collapse_log_sum: base " + std::to_string(i) +
                         " must be positive and finite");
    }
    if (bases[i] == 1.0) {
      throw domain_error("collapse_log_sum: base " + std::to_string(i) +
                         " equals 1, whose logarithm vanishes");
    }
    if (!std::isfinite(coefficients[i])) {
      throw domain_error("collapse_log_sum: coefficient " + std::to_string(i) +
                         " must be finite");
    }
    const double value = coefficients[i] / std::log(bases[i]);
    const double next = acc + value;
    if (std::fabs(acc) >= std::fabs(value)) {
      compensation += (acc - next) + value;
    } else {
      compensation += (value - next) + acc;
    }
    acc = next;
  }
  return acc + compensation;
}

}  // namespace expsum
