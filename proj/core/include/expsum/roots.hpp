#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "expsum/exp_sum.hpp"

namespace expsum {

struct Window {
  double lo = 0.0;
  double hi = 0.0;

  friend bool operator==(const Window&, const Window&) = default;
};

/// A window that covers all pairwise term crossovers plus a margin of 10 on
/// each side; [-10, 10] when fewer than two terms.
Window default_window(const ExpSum& sum);

/// Behaviour at the window edges, read off the dominant term: the weakest
/// base rules k -> -inf, the strongest k -> +inf.
enum class Asymptote {
  to_zero_above,
  to_zero_below,
  to_plus_infinity,
  to_minus_infinity,
  constant,
};

/// Isolated roots inside the window, sorted. Sign changes are located on an
/// adaptive grid and certified by bisection; tangential (double) roots are
/// recovered from derivative roots where the sum itself vanishes within
/// tolerance without changing sign. Every reported root r satisfies
/// |S(r)| <= tol * term_scale(S, r).
std::vector<double> find_roots(const ExpSum& sum, Window window,
                               double tol = 1e-10);

/// Number of sign alternations of the coefficients in descending base order;
/// an upper bound for the number of real roots.
std::size_t sign_change_bound(const ExpSum& sum);

struct RootReport {
  std::vector<double> roots;
  std::vector<double> tangential_roots;  // subset of roots
  std::vector<double> extrema;           // roots of the first derivative
  std::vector<double> inflections;       // roots of the second derivative
  std::size_t sign_change_bound = 0;
  Window window;
  Asymptote left_asymptote = Asymptote::constant;
  Asymptote right_asymptote = Asymptote::constant;
};

RootReport analyze(const ExpSum& sum, Window window, double tol = 1e-10);

struct IntersectionResult {
  /// The two sums have an empty difference and agree everywhere.
  bool identical = false;
  std::vector<double> points;
};

/// Abscissae where the two sums agree: roots of their merged difference.
IntersectionResult intersections(const ExpSum& a, const ExpSum& b,
                                 Window window, double tol = 1e-10);

/// Solutions of S(k) = level: roots of S with (-level, 1) appended.
std::vector<double> solve_level(const ExpSum& sum, double level, Window window,
                                double tol = 1e-10);

struct SeriesReport {
  std::size_t sign_changes = 0;
  std::size_t extrema = 0;  // discrete local extrema of the sample sequence
  bool converging = false;
  /// Minus-to-plus transitions counted from k = 1 on.
  std::size_t minus_to_plus_from_k1 = 0;
};

/// Integer-argument scan S_k for k = 0..k_max. Requires every base in
/// (0, 1) and a positive leading coefficient. Zero samples are skipped when
/// counting alternations; the convergence flag records whether |S_k| is
/// monotonically non-increasing over the final quarter of the scan.
SeriesReport series_scan(const ExpSum& sum, unsigned k_max);

/// The sum with bases e^n whose roots sit at the logarithms of the given
/// polynomial roots: scale * prod_i (t - r_i) expanded and lifted through
/// t = e^k. Roots must be positive and distinct.
ExpSum polynomial_lift(std::span<const double> positive_roots, double scale);

enum class ClaimId {
  theorem,
  corollary3,
  corollary5,
  corollary6,
  corollary7,
  series_conjecture,
};

const char* claim_name(ClaimId id);

struct ClaimReport {
  ExpSum instance;
  std::optional<ExpSum> second_instance;  // corollary6 pairs two sums
  ClaimId claim = ClaimId::theorem;
  std::vector<std::pair<std::string, std::size_t>> measured;
  std::size_t claimed_bound = 0;
  bool violated = false;

  friend bool operator==(const ClaimReport&, const ClaimReport&) = default;
};

struct ClaimCheckConfig {
  unsigned trials = 100;
  std::uint64_t seed = 0;
  unsigned max_terms = 6;
  double coefficient_min = 1e-2;  // log-uniform magnitude range
  double coefficient_max = 1e2;
  double base_min = 0.05;  // uniform, pairwise separation >= 1e-3
  double base_max = 0.95;
  std::optional<Window> window;  // default: per-instance default_window
  double tol = 1e-10;
  unsigned series_k_max = 200;
  /// Explicit instances checked before any generated trials.
  std::vector<ExpSum> instances;
};

/// Measure the claimed count bounds on explicit and randomly generated
/// instances. Reports, never asserts: violations are recorded, not thrown.
/// A fixed seed yields an identical report list.
std::vector<ClaimReport> claim_check(const ClaimCheckConfig& config);

}  // namespace expsum
