#pragma once

#include <array>
#include <span>
#include <vector>

#include "expsum/pair_function.hpp"

namespace expsum {

/// Which characteristic point a synchronization or split works at: the zero
/// (derivative order 0), the extremum (order 1), the inflection (order 2),
/// or the zero of a higher derivative.
struct PointKind {
  unsigned derivative_order = 0;

  static constexpr PointKind zero() { return {0}; }
  static constexpr PointKind extremum() { return {1}; }
  static constexpr PointKind inflection() { return {2}; }
  static constexpr PointKind derivative_zero(unsigned order) {
    return {order};
  }

  friend bool operator==(const PointKind&, const PointKind&) = default;
};

/// Side of a pair whose coefficient is rewritten during synchronization.
enum class AdjustSide { pi, mi };

/// Sign family the synchronization residuals should fall into.
enum class ResidualSide { pi, mi };

/// Proportional shares of a single pi coefficient over several mi
/// coefficients: share_n = (min(c_p, sum) - d) * c_mn / sum, with reserve
/// 0 <= d < min(c_p, sum). Shares sum to min(c_p, sum) - d.
std::vector<double> proportional_split(double pi_coefficient,
                                       std::span<const double> mi_coefficients,
                                       double d = 0.0);

/// The abscissa at which pairs of one kind can be synchronized so that every
/// residual lands on the requested side: the extreme of the pairs'
/// characteristic points (max or min depending on kind and side).
double pick_sync_point(std::span<const PairFunction> pairs, PointKind kind,
                       ResidualSide residual_side);

struct SyncResult {
  std::vector<PairFunction> synchronized;  // input order preserved
  std::vector<ExpTerm> residuals;          // canonical, signed
  double sync_point = 0.0;
  PointKind point_kind;

  /// Synchronized pairs plus residuals; reproduces the input pointwise.
  ExpSum total() const;
};

/// Rewrite one coefficient of every pair so that all characteristic points
/// of the given kind coincide at `point`. The difference between old and new
/// coefficient is emitted as a residual term on the adjusted base. Pairs
/// must be of one kind; an adjusted coefficient that is not positive and
/// finite raises infeasible_error naming the pair.
SyncResult sync_at_point(std::span<const PairFunction> pairs, PointKind kind,
                         double point, AdjustSide side);

struct SplitResult {
  std::vector<PairFunction> pairs;
  /// Extra signed terms attached to each pair by add_strong_terms; empty for
  /// a fresh split.
  std::vector<std::vector<ExpTerm>> shares;
  double common_point = 0.0;
  PointKind point_kind;
  /// Brackets examined by the share-equation solver, for diagnostics; when a
  /// share curve offers several brackets the leftmost root is taken.
  std::vector<std::array<double, 2>> share_brackets;

  ExpSum composite(std::size_t index) const;
  ExpSum total() const;

  friend bool operator==(const SplitResult&, const SplitResult&) = default;
};

/// Split one mi term across several pi terms without residuals: the shares
/// c_mi(k) = c_pi (t_pi / t_m)^k (ln t_pi / ln t_m)^j all share the
/// characteristic point k solving sum_i c_mi(k) = c_m. The pi bases must lie
/// all above the mi base (high orientation) or all below (low orientation).
SplitResult split_shared_mi(std::span<const ExpTerm> pi_terms, ExpTerm mi_term,
                            PointKind kind);

/// Attach strong terms (stronger base than every weak-side base) to a split,
/// one at a time in ascending base order, distributing each coefficient so
/// the common characteristic point is preserved; the point moves strictly
/// left with every addition. High splits take positive terms, low splits
/// negative ones.
SplitResult add_strong_terms(const SplitResult& split,
                             std::span<const ExpTerm> strong_terms,
                             PointKind kind);

/// Decomposition of a sum into pair functions plus unpaired leftovers, the
/// workflow behind the sync command: the strongest positive term is split
/// proportionally over all negative terms.
struct PairDecomposition {
  std::vector<PairFunction> pairs;
  std::vector<ExpTerm> leftovers;
};

/// Build pairs from a sum with one dominant positive term: its coefficient
/// is shared over the negative terms proportionally (reserve d withheld);
/// other positive terms and any withheld remainder pass through unchanged.
PairDecomposition pair_up_proportional(const ExpSum& sum, double d = 0.0);

/// Pairs and leftovers recombined, for preservation checks.
ExpSum decomposition_total(const PairDecomposition& decomposition);

}  // namespace expsum
