#include "expsum/sync.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "internal.hpp"

namespace expsum {

namespace {

constexpr unsigned kMaxDerivativeOrder = 64;
constexpr unsigned kBracketLadderSteps = 21;  // half-widths 2^0 .. 2^20
constexpr int kShareIterations = 200;
constexpr double kShareRelTolerance = 1e-12;

// Coefficients equal up to a few ulp collapse onto each other, so that
// synchronizing a pair at its own characteristic point is an exact identity.
double snap(double adjusted, double original) {
  const double spread = 32.0 * std::numeric_limits<double>::epsilon() *
                        std::max(std::fabs(adjusted), std::fabs(original));
  return std::fabs(adjusted - original) <= spread ? original : adjusted;
}

double ratio_power(double numerator_base, double denominator_base,
                   unsigned order) {
  const double ratio =
      std::log(numerator_base) / std::log(denominator_base);
  double power = 1.0;
  for (unsigned i = 0; i < order; ++i) power *= ratio;
  return power;
}

void require_same_kind(std::span<const PairFunction> pairs,
                       const char* operation) {
  if (pairs.empty()) {
    throw domain_error(std::string(operation) +
                       ": at least one pair is required");
  }
  for (const PairFunction& pf : pairs) {
    if (pf.kind() != pairs.front().kind()) {
      throw domain_error(std::string(operation) +
                         ": pairs must all be of one kind");
    }
  }
}

void require_supported_order(PointKind kind, const char* operation) {
  if (kind.derivative_order > kMaxDerivativeOrder) {
    throw domain_error(std::string(operation) +
                       ": derivative order above 64 is not supported");
  }
}

}  // namespace

std::vector<double> proportional_split(double pi_coefficient,
                                       std::span<const double> mi_coefficients,
                                       double d) {
  if (!(pi_coefficient > 0.0) || !std::isfinite(pi_coefficient)) {
    throw domain_error(
        "proportional_split: pi coefficient must be positive and finite");
  }
  if (mi_coefficients.empty()) {
    throw domain_error(
        "proportional_split: at least one mi coefficient is required");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < mi_coefficients.size(); ++i) {
    if (!(mi_coefficients[i] > 0.0) || !std::isfinite(mi_coefficients[i])) {
      throw domain_error("proportional_split: mi coefficient " +
                         std::to_string(i) +
                         " must be positive and finite");
    }
    total += mi_coefficients[i];
  }
  const double cap = std::min(pi_coefficient, total);
  if (!(d >= 0.0) || !(d < cap)) {
    throw domain_error(
        "proportional_split: reserve d must satisfy 0 <= d < min(c_p, sum of "
        "mi coefficients)");
  }
  std::vector<double> shares;
  shares.reserve(mi_coefficients.size());
  const double distributed = cap - d;
  for (const double c : mi_coefficients) shares.push_back(distributed * c / total);
  return shares;
}

double pick_sync_point(std::span<const PairFunction> pairs, PointKind kind,
                       ResidualSide residual_side) {
  require_same_kind(pairs, "pick_sync_point");
  require_supported_order(kind, "pick_sync_point");
  // High pairs push pi residuals out to the right of every characteristic
  // point and mi residuals to the left; low pairs mirror this. The rule does
  // not depend on which side is later adjusted.
  const bool use_max = (pairs.front().kind() == PairKind::high) ==
                       (residual_side == ResidualSide::pi);
  double point = characteristic_point(pairs.front(), kind.derivative_order);
  for (const PairFunction& pf : pairs.subspan(1)) {
    const double candidate = characteristic_point(pf, kind.derivative_order);
    point = use_max ? std::max(point, candidate) : std::min(point, candidate);
  }
  return point;
}

SyncResult sync_at_point(std::span<const PairFunction> pairs, PointKind kind,
                         double point, AdjustSide side) {
  require_same_kind(pairs, "sync_at_point");
  require_supported_order(kind, "sync_at_point");
  if (!std::isfinite(point)) {
    throw domain_error("sync_at_point: point must be finite");
  }
  const unsigned order = kind.derivative_order;
  SyncResult result;
  result.sync_point = point;
  result.point_kind = kind;
  result.synchronized.reserve(pairs.size());
  std::vector<ExpTerm> residuals;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const PairFunction& pf = pairs[i];
    if (side == AdjustSide::pi) {
      double adjusted = pf.mi_coefficient() *
                        ratio_power(pf.mi_base(), pf.pi_base(), order) *
                        std::pow(pf.mi_base() / pf.pi_base(), point);
      adjusted = snap(adjusted, pf.pi_coefficient());
      if (!(adjusted > 0.0) || !std::isfinite(adjusted)) {
        throw infeasible_error("sync_at_point: adjusted pi coefficient of "
                               "pair " +
                               std::to_string(i) +
                               " is not positive at the requested point");
      }
      result.synchronized.emplace_back(adjusted, pf.pi_base(),
                                       pf.mi_coefficient(), pf.mi_base());
      const double residual = pf.pi_coefficient() - adjusted;
      if (residual != 0.0) residuals.push_back({residual, pf.pi_base()});
    } else {
      double adjusted = pf.pi_coefficient() *
                        ratio_power(pf.pi_base(), pf.mi_base(), order) *
                        std::pow(pf.pi_base() / pf.mi_base(), point);
      adjusted = snap(adjusted, pf.mi_coefficient());
      if (!(adjusted > 0.0) || !std::isfinite(adjusted)) {
        throw infeasible_error("sync_at_point: adjusted mi coefficient of "
                               "pair " +
                               std::to_string(i) +
                               " is not positive at the requested point");
      }
      result.synchronized.emplace_back(pf.pi_coefficient(), pf.pi_base(),
                                       adjusted, pf.mi_base());
      const double residual = adjusted - pf.mi_coefficient();
      if (residual != 0.0) residuals.push_back({residual, pf.mi_base()});
    }
  }
  result.residuals = merge_terms(residuals).terms();
  return result;
}

ExpSum SyncResult::total() const {
  ExpSum acc{};
  for (const PairFunction& pf : synchronized) acc = acc + pf.as_expsum();
  return acc + ExpSum(residuals);
}

ExpSum SplitResult::composite(std::size_t index) const {
  ExpSum acc = pairs.at(index).as_expsum();
  if (index < shares.size()) acc = acc + ExpSum(shares[index]);
  return acc;
}

ExpSum SplitResult::total() const {
  ExpSum acc{};
  for (std::size_t i = 0; i < pairs.size(); ++i) acc = acc + composite(i);
  return acc;
}

SplitResult split_shared_mi(std::span<const ExpTerm> pi_terms, ExpTerm mi_term,
                            PointKind kind) {
  require_supported_order(kind, "split_shared_mi");
  if (pi_terms.empty()) {
    throw domain_error("split_shared_mi: at least one pi term is required");
  }
  if (mi_term.coefficient == 0.0 || !std::isfinite(mi_term.coefficient)) {
    throw domain_error(
        "split_shared_mi: mi term needs a nonzero finite coefficient");
  }
  const double mi_total = std::fabs(mi_term.coefficient);
  const double t_m = mi_term.base;
  if (!(t_m > 0.0) || !(t_m < 1.0)) {
    throw domain_error(
        "split_shared_mi: mi base must lie strictly inside (0, 1)");
  }
  bool any_above = false;
  bool any_below = false;
  for (std::size_t i = 0; i < pi_terms.size(); ++i) {
    const ExpTerm& term = pi_terms[i];
    if (!(term.coefficient > 0.0) || !std::isfinite(term.coefficient)) {
      throw domain_error("split_shared_mi: pi term " + std::to_string(i) +
                         " must have a positive finite coefficient");
    }
    if (!(term.base > 0.0) || !(term.base < 1.0)) {
      throw domain_error("split_shared_mi: pi term " + std::to_string(i) +
                         " must have a base strictly inside (0, 1)");
    }
    if (term.base > t_m) any_above = true;
    if (term.base < t_m) any_below = true;
    if (term.base == t_m) {
      throw domain_error("split_shared_mi: pi term " + std::to_string(i) +
                         " shares the mi base");
    }
  }
  if (any_above && any_below) {
    throw domain_error(
        "split_shared_mi: pi bases must lie all above or all below the mi "
        "base");
  }

  const unsigned order = kind.derivative_order;
  SplitResult result;
  result.point_kind = kind;

  if (pi_terms.size() == 1) {
    // Nothing to distribute: the pair takes the whole mi coefficient and the
    // common point is its own characteristic point.
    PairFunction pair(pi_terms[0].coefficient, pi_terms[0].base, mi_total,
                      t_m);
    result.common_point = characteristic_point(pair, order);
    result.pairs.push_back(pair);
    result.shares.emplace_back();
    return result;
  }

  // Share of pair i as a function of the common point k.
  struct Share {
    double factor;
    double ratio;
  };
  std::vector<Share> share_terms;
  share_terms.reserve(pi_terms.size());
  double center = 0.0;
  for (const ExpTerm& term : pi_terms) {
    share_terms.push_back({term.coefficient *
                               ratio_power(term.base, t_m, order),
                           term.base / t_m});
    center += characteristic_point(
        PairFunction(term.coefficient, term.base, mi_total, t_m), order);
  }
  center /= static_cast<double>(pi_terms.size());

  const auto imbalance = [&](double k) {
    double sum = 0.0;
    for (const Share& share : share_terms)
      sum += share.factor * std::pow(share.ratio, k);
    return sum - mi_total;
  };

  // The share sum is strictly monotone (increasing when the pi bases sit
  // above the mi base), so a doubling ladder away from the mean of the
  // individual characteristic points always brackets the solution.
  const bool increasing = any_above;
  double solution;
  double previous_k = center;
  double previous_f = imbalance(center);
  if (previous_f == 0.0) {
    solution = center;
  } else {
    const double direction = ((previous_f < 0.0) == increasing) ? 1.0 : -1.0;
    bool bracketed = false;
    solution = center;
    for (unsigned step = 0; step < kBracketLadderSteps; ++step) {
      const double k = center + direction * std::ldexp(1.0, step);
      const double f = imbalance(k);
      if (detail::sign_of(f) == 0 && !(f == 0.0)) continue;  // dead sample
      if (f == 0.0) {
        solution = k;
        bracketed = true;
        break;
      }
      if ((f > 0.0) != (previous_f > 0.0)) {
        result.share_brackets.push_back(
            {std::min(previous_k, k), std::max(previous_k, k)});
        solution = detail::bisect(imbalance, previous_k, previous_f, k,
                                  kShareRelTolerance * mi_total,
                                  kShareIterations);
        bracketed = true;
        break;
      }
      previous_k = k;
      previous_f = f;
    }
    if (!bracketed) {
      throw infeasible_error(
          "split_shared_mi: no bracket for the share equation within the "
          "search ladder");
    }
  }

  result.common_point = solution;
  for (std::size_t i = 0; i < pi_terms.size(); ++i) {
    const double share =
        share_terms[i].factor * std::pow(share_terms[i].ratio, solution);
    if (!(share > 0.0) || !std::isfinite(share)) {
      throw infeasible_error("split_shared_mi: share of pi term " +
                             std::to_string(i) +
                             " is not positive at the common point");
    }
    result.pairs.emplace_back(pi_terms[i].coefficient, pi_terms[i].base, share,
                              t_m);
    result.shares.emplace_back();
  }
  return result;
}

SplitResult add_strong_terms(const SplitResult& split,
                             std::span<const ExpTerm> strong_terms,
                             PointKind kind) {
  require_supported_order(kind, "add_strong_terms");
  if (kind != split.point_kind) {
    throw domain_error(
        "add_strong_terms: point kind must match the split's point kind");
  }
  require_same_kind(split.pairs, "add_strong_terms");
  const PairKind orientation = split.pairs.front().kind();
  const unsigned order = kind.derivative_order;

  SplitResult result = split;
  if (result.shares.size() < result.pairs.size()) {
    result.shares.resize(result.pairs.size());
  }
  if (strong_terms.empty()) return result;

  // The weak side that every strong base must dominate.
  double weak_limit = 0.0;
  for (const PairFunction& pf : split.pairs) {
    weak_limit = std::max(weak_limit, orientation == PairKind::high
                                          ? pf.mi_base()
                                          : pf.pi_base());
  }

  const ExpSum canonical_strong =
      merge_terms(std::vector<ExpTerm>(strong_terms.begin(),
                                       strong_terms.end()));

  // Ascending base order: the weakest strong term joins first.
  std::vector<ExpTerm> ordered(canonical_strong.terms().rbegin(),
                               canonical_strong.terms().rend());

  for (const ExpTerm& strong : ordered) {
    if (orientation == PairKind::high ? !(strong.coefficient > 0.0)
                                      : !(strong.coefficient < 0.0)) {
      throw domain_error(
          "add_strong_terms: strong coefficients must be positive for high "
          "splits and negative for low splits");
    }
    if (!(strong.base > 0.0) || !(strong.base < 1.0)) {
      throw domain_error(
          "add_strong_terms: strong bases must lie strictly inside (0, 1)");
    }
    if (!(strong.base > weak_limit)) {
      throw domain_error(
          "add_strong_terms: strong bases must exceed every weak-side base of "
          "the split");
    }
    for (std::size_t i = 0; i < result.pairs.size(); ++i) {
      const ExpSum composite = result.composite(i);
      for (const ExpTerm& existing : composite.terms()) {
        if (existing.base == strong.base) {
          throw domain_error(
              "add_strong_terms: strong base collides with a base already "
              "present in the split");
        }
      }
    }

    const double quota = std::fabs(strong.coefficient);
    const double share_sign =
        orientation == PairKind::high ? -1.0 : 1.0;
    std::vector<ExpSum> numerators;
    numerators.reserve(result.pairs.size());
    for (std::size_t i = 0; i < result.pairs.size(); ++i) {
      numerators.push_back(derivative(result.composite(i), order));
    }
    const double ln_strong_power = ln_power(strong.base, order);
    const auto share_at = [&](const ExpSum& numerator, double k) {
      return share_sign * detail::evaluate_unchecked(numerator, k) /
             (std::pow(strong.base, k) * ln_strong_power);
    };
    const auto imbalance = [&](double k) {
      double sum = 0.0;
      for (const ExpSum& numerator : numerators) sum += share_at(numerator, k);
      return sum - quota;
    };

    // Shares are positive strictly left of the current common point, so the
    // ladder walks leftward. All alternations are kept: if the share curve
    // is hump shaped and offers two brackets, the leftmost root wins.
    const double k_prev = result.common_point;
    std::vector<std::array<double, 2>> brackets;
    double exact_hit = std::numeric_limits<double>::quiet_NaN();
    double last_k = k_prev;
    double last_f = imbalance(k_prev);
    for (unsigned step = 0; step < kBracketLadderSteps; ++step) {
      const double k = k_prev - std::ldexp(1.0, step);
      const double f = imbalance(k);
      if (f == 0.0) {
        exact_hit = k;
        break;
      }
      if (detail::sign_of(f) == 0) continue;  // dead sample
      if (detail::sign_of(last_f) != 0 && (f > 0.0) != (last_f > 0.0)) {
        brackets.push_back({k, last_k});
      }
      last_k = k;
      last_f = f;
    }

    double solution;
    if (!std::isnan(exact_hit)) {
      solution = exact_hit;
    } else {
      if (brackets.empty()) {
        throw infeasible_error(
            "add_strong_terms: share equation for the strong term with base " +
            std::to_string(strong.base) +
            " has no bracket in the positive-share region");
      }
      // Brackets were found walking leftward, so the last one is leftmost.
      const auto chosen = brackets.back();
      solution = detail::bisect(imbalance, chosen[0], imbalance(chosen[0]),
                                chosen[1], kShareRelTolerance * quota,
                                kShareIterations);
    }
    result.share_brackets.insert(result.share_brackets.end(), brackets.begin(),
                                 brackets.end());

    if (!(solution < k_prev)) {
      throw infeasible_error(
          "add_strong_terms: the common point did not move left; the strong "
          "term cannot be absorbed");
    }
    for (std::size_t i = 0; i < result.pairs.size(); ++i) {
      const double share = share_at(numerators[i], solution);
      if (!(share > 0.0) || !std::isfinite(share)) {
        throw infeasible_error(
            "add_strong_terms: share of composite " + std::to_string(i) +
            " is not positive at the displaced common point");
      }
      result.shares[i].push_back({share_sign < 0.0 ? share : -share,
                                  strong.base});
    }
    result.common_point = solution;
  }
  return result;
}

PairDecomposition pair_up_proportional(const ExpSum& sum, double d) {
  if (sum.empty()) {
    throw domain_error("pair_up_proportional: sum must be nonempty");
  }
  std::vector<ExpTerm> positives;
  std::vector<ExpTerm> negatives;
  for (const ExpTerm& term : sum.terms()) {
    (term.coefficient > 0.0 ? positives : negatives).push_back(term);
  }
  if (positives.empty()) {
    throw domain_error(
        "pair_up_proportional: no positive term to pair from");
  }
  if (negatives.empty()) {
    throw domain_error(
        "pair_up_proportional: no negative terms to pair with");
  }
  const ExpTerm source = positives.front();  // strongest positive base
  if (!(source.base > negatives.front().base)) {
    throw domain_error(
        "pair_up_proportional: the strongest positive base must exceed every "
        "negative base");
  }

  std::vector<double> magnitudes;
  magnitudes.reserve(negatives.size());
  for (const ExpTerm& term : negatives)
    magnitudes.push_back(-term.coefficient);
  const std::vector<double> shares =
      proportional_split(source.coefficient, magnitudes, d);

  PairDecomposition decomposition;
  double distributed = 0.0;
  for (std::size_t i = 0; i < negatives.size(); ++i) {
    decomposition.pairs.emplace_back(shares[i], source.base, magnitudes[i],
                                     negatives[i].base);
    distributed += shares[i];
  }
  const double remainder = source.coefficient - distributed;
  if (std::fabs(remainder) > 32.0 * std::numeric_limits<double>::epsilon() *
                                 source.coefficient) {
    decomposition.leftovers.push_back({remainder, source.base});
  }
  decomposition.leftovers.insert(decomposition.leftovers.end(),
                                 positives.begin() + 1, positives.end());
  return decomposition;
}

ExpSum decomposition_total(const PairDecomposition& decomposition) {
  ExpSum acc{};
  for (const PairFunction& pf : decomposition.pairs) acc = acc + pf.as_expsum();
  return acc + ExpSum(decomposition.leftovers);
}

}  // namespace expsum
