#include "expsum/roots.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <utility>

#include "internal.hpp"

namespace expsum {

namespace {

constexpr std::size_t kInitialCells = 512;
constexpr std::size_t kRefineFactor = 8;
constexpr std::size_t kEvalBudget = std::size_t{1} << 20;
constexpr int kMaxRefineDepth = 5;

double merge_tolerance(double x) { return 1e-9 * (1.0 + std::fabs(x)); }

void require_window(Window window, const char* operation) {
  if (!std::isfinite(window.lo) || !std::isfinite(window.hi) ||
      !(window.lo < window.hi)) {
    throw domain_error(std::string(operation) +
                       ": window must be finite with lo < hi");
  }
}

/// Value, magnitude scale, and sign in one pass; the sign is zero both for
/// exact zeros and for dead samples where every term has underflowed (the
/// scale tells the two apart).
struct Probe {
  double value = 0.0;
  double scale = 0.0;
  int sign = 0;
};

Probe probe(const ExpSum& sum, double x) {
  Probe p;
  double acc = 0.0;
  double compensation = 0.0;
  for (const ExpTerm& term : sum.terms()) {
    const double value = term.coefficient * std::pow(term.base, x);
    p.scale += std::fabs(value);
    const double next = acc + value;
    if (std::fabs(acc) >= std::fabs(value)) {
      compensation += (acc - next) + value;
    } else {
      compensation += (value - next) + acc;
    }
    acc = next;
  }
  p.value = acc + compensation;
  p.sign = (p.scale > 0.0 && !std::isnan(p.value))
               ? detail::sign_of(p.value)
               : 0;
  return p;
}

struct RootCandidate {
  double x = 0.0;
  bool tangential = false;
};

/// Sign-change roots only: adaptive grid over the window, refined where the
/// sign flips or the magnitude dips below 1e-3 of the local term scale, then
/// bisection on every surviving bracket.
std::vector<double> bracketed_roots(const ExpSum& sum, Window window,
                                    std::size_t& budget) {
  std::vector<double> roots;
  if (sign_change_bound(sum) == 0) return roots;

  struct Cell {
    double a;
    Probe pa;
    double b;
    Probe pb;
    int depth;
  };

  const auto dips = [](const Probe& p) {
    return p.sign != 0 && std::fabs(p.value) < 1e-3 * p.scale;
  };

  std::vector<Cell> stack;
  std::vector<std::array<double, 2>> brackets;

  std::vector<std::pair<double, Probe>> grid(kInitialCells + 1);
  for (std::size_t i = 0; i <= kInitialCells; ++i) {
    const double x =
        window.lo + (window.hi - window.lo) *
                        (static_cast<double>(i) / kInitialCells);
    if (budget > 0) --budget;
    grid[i] = {x, probe(sum, x)};
    if (grid[i].second.value == 0.0 && grid[i].second.scale > 0.0) {
      roots.push_back(x);
    }
  }
  for (std::size_t i = 0; i < kInitialCells; ++i) {
    stack.push_back({grid[i].first, grid[i].second, grid[i + 1].first,
                     grid[i + 1].second, 0});
  }

  while (!stack.empty()) {
    const Cell cell = stack.back();
    stack.pop_back();
    const bool sign_change = cell.pa.sign != 0 && cell.pb.sign != 0 &&
                             cell.pa.sign != cell.pb.sign;
    if (!sign_change && !dips(cell.pa) && !dips(cell.pb)) continue;
    if (cell.depth >= kMaxRefineDepth ||
        budget < kRefineFactor - 1) {
      if (sign_change) brackets.push_back({cell.a, cell.b});
      continue;
    }
    double previous_x = cell.a;
    Probe previous = cell.pa;
    for (std::size_t j = 1; j <= kRefineFactor; ++j) {
      double x = cell.b;
      Probe p = cell.pb;
      if (j < kRefineFactor) {
        x = cell.a + (cell.b - cell.a) *
                         (static_cast<double>(j) / kRefineFactor);
        --budget;
        p = probe(sum, x);
        if (p.value == 0.0 && p.scale > 0.0) roots.push_back(x);
      }
      stack.push_back({previous_x, previous, x, p, cell.depth + 1});
      previous_x = x;
      previous = p;
    }
  }

  for (const auto& bracket : brackets) {
    const auto f = [&](double x) {
      return detail::evaluate_unchecked(sum, x);
    };
    roots.push_back(
        detail::bisect(f, bracket[0], f(bracket[0]), bracket[1], 0.0));
  }
  std::sort(roots.begin(), roots.end());
  std::vector<double> unique;
  for (double r : roots) {
    if (unique.empty() || r - unique.back() > merge_tolerance(r)) {
      unique.push_back(r);
    }
  }
  return unique;
}

/// Full root location: bracketed sign changes, a Rolle pass that re-checks
/// every monotone interval between derivative roots, and tangential roots
/// where the sum vanishes within tolerance at a stationary point without
/// changing sign.
std::vector<RootCandidate> locate_roots(const ExpSum& sum, Window window,
                                        double tol) {
  require_window(window, "find_roots");
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw domain_error("find_roots: tol must be positive and finite");
  }
  std::vector<RootCandidate> result;
  if (sum.empty()) return result;

  std::size_t budget = kEvalBudget;
  for (double r : bracketed_roots(sum, window, budget)) {
    result.push_back({r, false});
  }

  const ExpSum first = derivative(sum, 1);
  std::vector<double> stationary = bracketed_roots(first, window, budget);

  const auto known = [&](double x) {
    for (const RootCandidate& c : result) {
      if (std::fabs(c.x - x) <= merge_tolerance(x)) return true;
    }
    return false;
  };

  // Rolle pass: the sum is monotone between consecutive stationary points,
  // so any sign change there holds exactly one root.
  std::vector<double> boundaries;
  boundaries.push_back(window.lo);
  boundaries.insert(boundaries.end(), stationary.begin(), stationary.end());
  boundaries.push_back(window.hi);
  for (std::size_t i = 0; i + 1 < boundaries.size(); ++i) {
    const Probe pa = probe(sum, boundaries[i]);
    const Probe pb = probe(sum, boundaries[i + 1]);
    if (pa.sign == 0 || pb.sign == 0 || pa.sign == pb.sign) continue;
    const auto f = [&](double x) {
      return detail::evaluate_unchecked(sum, x);
    };
    const double r =
        detail::bisect(f, boundaries[i], pa.value, boundaries[i + 1], 0.0);
    if (!known(r)) result.push_back({r, false});
  }

  // Tangential roots: stationary points where the sum is zero to within the
  // certification tolerance and keeps its sign on both sides.
  for (double d : stationary) {
    if (known(d)) continue;
    const Probe pd = probe(sum, d);
    if (pd.scale <= 0.0 || std::fabs(pd.value) > tol * pd.scale) continue;
    const double h = 1e-7 * (1.0 + std::fabs(d));
    const Probe left = probe(sum, d - h);
    const Probe right = probe(sum, d + h);
    if (left.sign != 0 && left.sign == right.sign) {
      result.push_back({d, true});
    }
  }

  std::sort(result.begin(), result.end(),
            [](const RootCandidate& a, const RootCandidate& b) {
              return a.x < b.x;
            });
  return result;
}

Asymptote edge_label(const ExpTerm& term, bool left_edge) {
  if (term.base == 1.0) return Asymptote::constant;
  const bool grows = left_edge ? term.base < 1.0 : term.base > 1.0;
  if (grows) {
    return term.coefficient > 0.0 ? Asymptote::to_plus_infinity
                                  : Asymptote::to_minus_infinity;
  }
  return term.coefficient > 0.0 ? Asymptote::to_zero_above
                                : Asymptote::to_zero_below;
}

}  // namespace

Window default_window(const ExpSum& sum) {
  const auto& terms = sum.terms();
  if (terms.size() < 2) return {-10.0, 10.0};
  double lo = 0.0;
  double hi = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
      // |C_i| T_i^k = |C_j| T_j^k
      double crossover =
          std::log(std::fabs(terms[i].coefficient / terms[j].coefficient)) /
          std::log(terms[j].base / terms[i].base);
      if (!std::isfinite(crossover)) continue;
      crossover = std::clamp(crossover, -1e4, 1e4);
      if (!any) {
        lo = hi = crossover;
        any = true;
      } else {
        lo = std::min(lo, crossover);
        hi = std::max(hi, crossover);
      }
    }
  }
  if (!any) return {-10.0, 10.0};
  return {lo - 10.0, hi + 10.0};
}

std::vector<double> find_roots(const ExpSum& sum, Window window, double tol) {
  std::vector<double> roots;
  for (const RootCandidate& c : locate_roots(sum, window, tol)) {
    roots.push_back(c.x);
  }
  return roots;
}

std::size_t sign_change_bound(const ExpSum& sum) {
  std::size_t changes = 0;
  int previous = 0;
  for (const ExpTerm& term : sum.terms()) {
    const int sign = term.coefficient > 0.0 ? 1 : -1;
    if (previous != 0 && sign != previous) ++changes;
    previous = sign;
  }
  return changes;
}

RootReport analyze(const ExpSum& sum, Window window, double tol) {
  require_window(window, "analyze");
  RootReport report;
  report.window = window;
  for (const RootCandidate& c : locate_roots(sum, window, tol)) {
    report.roots.push_back(c.x);
    if (c.tangential) report.tangential_roots.push_back(c.x);
  }
  report.extrema = find_roots(derivative(sum, 1), window, tol);
  report.inflections = find_roots(derivative(sum, 2), window, tol);
  report.sign_change_bound = sign_change_bound(sum);
  if (!sum.empty()) {
    report.left_asymptote = edge_label(sum.terms().back(), true);
    report.right_asymptote = edge_label(sum.terms().front(), false);
  }
  return report;
}

IntersectionResult intersections(const ExpSum& a, const ExpSum& b,
                                 Window window, double tol) {
  require_window(window, "intersections");
  const ExpSum difference = a - b;
  if (difference.empty()) return {true, {}};
  return {false, find_roots(difference, window, tol)};
}

std::vector<double> solve_level(const ExpSum& sum, double level, Window window,
                                double tol) {
  if (!std::isfinite(level)) {
    throw domain_error("solve_level: level must be finite");
  }
  return find_roots(sum + ExpSum{{-level, 1.0}}, window, tol);
}

SeriesReport series_scan(const ExpSum& sum, unsigned k_max) {
  if (sum.empty()) {
    throw domain_error("series_scan: sum must be nonempty");
  }
  for (const ExpTerm& term : sum.terms()) {
    if (!(term.base < 1.0)) {
      throw domain_error(
          "series_scan: every base must lie strictly below 1");
    }
  }
  if (!(sum.terms().front().coefficient > 0.0)) {
    throw domain_error(
        "series_scan: the leading coefficient must be positive");
  }
  if (k_max < 1) {
    throw domain_error("series_scan: k_max must be at least 1");
  }

  std::vector<double> values(k_max + 1);
  for (unsigned k = 0; k <= k_max; ++k) {
    values[k] = evaluate(sum, static_cast<double>(k));
  }

  SeriesReport report;
  int last_sign = 0;
  for (unsigned k = 0; k <= k_max; ++k) {
    const int sign = detail::sign_of(values[k]);
    if (sign == 0) continue;  // zero samples are skipped
    if (last_sign != 0 && sign != last_sign) ++report.sign_changes;
    last_sign = sign;
  }
  for (unsigned k = 1; k + 1 <= k_max; ++k) {
    const int before = detail::sign_of(values[k] - values[k - 1]);
    const int after = detail::sign_of(values[k + 1] - values[k]);
    if (before != 0 && after != 0 && before != after) ++report.extrema;
  }
  report.converging = true;
  for (unsigned k = (3 * k_max) / 4; k < k_max; ++k) {
    if (std::fabs(values[k + 1]) > std::fabs(values[k])) {
      report.converging = false;
      break;
    }
  }
  last_sign = 0;
  for (unsigned k = 1; k <= k_max; ++k) {
    const int sign = detail::sign_of(values[k]);
    if (sign == 0) continue;
    if (last_sign == -1 && sign == 1) ++report.minus_to_plus_from_k1;
    last_sign = sign;
  }
  return report;
}

ExpSum polynomial_lift(std::span<const double> positive_roots, double scale) {
  if (!std::isfinite(scale)) {
    throw domain_error("polynomial_lift: scale must be finite");
  }
  for (std::size_t i = 0; i < positive_roots.size(); ++i) {
    if (!(positive_roots[i] > 0.0) || !std::isfinite(positive_roots[i])) {
      throw domain_error("polynomial_lift: root " + std::to_string(i) +
                         " must be positive and finite");
    }
    for (std::size_t j = i + 1; j < positive_roots.size(); ++j) {
      if (positive_roots[i] == positive_roots[j]) {
        throw domain_error("polynomial_lift: roots must be distinct");
      }
    }
  }
  std::vector<double> coefficients{scale};
  for (const double root : positive_roots) {
    coefficients.push_back(0.0);
    for (std::size_t i = coefficients.size(); i-- > 1;) {
      coefficients[i] = coefficients[i - 1] - root * coefficients[i];
    }
    coefficients[0] *= -root;
  }
  std::vector<ExpTerm> terms;
  for (std::size_t n = 0; n < coefficients.size(); ++n) {
    terms.push_back(
        {coefficients[n], std::exp(static_cast<double>(n))});
  }
  return ExpSum(std::move(terms));
}

const char* claim_name(ClaimId id) {
  switch (id) {
    case ClaimId::theorem:
      return "theorem";
    case ClaimId::corollary3:
      return "corollary3";
    case ClaimId::corollary5:
      return "corollary5";
    case ClaimId::corollary6:
      return "corollary6";
    case ClaimId::corollary7:
      return "corollary7";
    case ClaimId::series_conjecture:
      return "series_conjecture";
  }
  return "unknown";
}

namespace {

/// Deterministic uniform doubles straight off the engine's 64-bit output;
/// the standard distributions are implementation-defined, these are not.
class Sampler {
public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  double unit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double uniform(double a, double b) { return a + (b - a) * unit(); }
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

private:
  std::mt19937_64 engine_;
};

ExpSum random_instance(Sampler& sampler, const ClaimCheckConfig& config) {
  const unsigned count =
      2 + static_cast<unsigned>(sampler.below(config.max_terms - 1));
  std::vector<double> bases;
  while (bases.size() < count) {
    const double candidate =
        sampler.uniform(config.base_min, config.base_max);
    bool separated = true;
    for (const double existing : bases) {
      if (std::fabs(existing - candidate) < 1e-3) {
        separated = false;
        break;
      }
    }
    if (separated) bases.push_back(candidate);
  }
  std::vector<ExpTerm> terms;
  const double log_lo = std::log(config.coefficient_min);
  const double log_hi = std::log(config.coefficient_max);
  for (const double base : bases) {
    const double magnitude = std::exp(sampler.uniform(log_lo, log_hi));
    const double sign = sampler.below(2) == 0 ? 1.0 : -1.0;
    terms.push_back({sign * magnitude, base});
  }
  return ExpSum(std::move(terms));
}

void check_instance(const ExpSum& instance,
                    const std::optional<ExpSum>& partner,
                    const ClaimCheckConfig& config,
                    std::vector<ClaimReport>& out) {
  const Window window =
      config.window ? *config.window : default_window(instance);
  const RootReport report = analyze(instance, window, config.tol);

  {
    ClaimReport claim;
    claim.instance = instance;
    claim.claim = ClaimId::theorem;
    claim.measured = {{"roots", report.roots.size()},
                      {"extrema", report.extrema.size()},
                      {"inflections", report.inflections.size()}};
    claim.claimed_bound = 2;
    claim.violated = report.roots.size() > 2 || report.extrema.size() > 2 ||
                     report.inflections.size() > 2;
    out.push_back(std::move(claim));
  }

  {
    double level = 0.0;
    if (report.extrema.size() >= 2) {
      level = 0.5 * (detail::evaluate_unchecked(instance, report.extrema[0]) +
                     detail::evaluate_unchecked(instance, report.extrema[1]));
    } else if (report.extrema.size() == 1) {
      level = 0.5 * detail::evaluate_unchecked(instance, report.extrema[0]);
    } else {
      level = 0.5 * detail::evaluate_unchecked(
                        instance, 0.5 * (window.lo + window.hi));
    }
    if (!std::isfinite(level)) level = 0.0;
    const std::size_t solutions =
        solve_level(instance, level, window, config.tol).size();
    ClaimReport claim;
    claim.instance = instance;
    claim.claim = ClaimId::corollary3;
    claim.measured = {{"solutions", solutions}};
    claim.claimed_bound = 3;
    claim.violated = solutions > 3;
    out.push_back(std::move(claim));
  }

  {
    ClaimReport claim;
    claim.instance = instance;
    claim.claim = ClaimId::corollary5;
    claim.measured = {{"roots", report.roots.size()}};
    claim.claimed_bound = 2;
    claim.violated = report.roots.size() > 2;
    out.push_back(std::move(claim));
  }

  if (partner) {
    const ExpSum difference = instance - *partner;
    const Window pair_window =
        config.window ? *config.window : default_window(difference);
    const IntersectionResult crossings =
        intersections(instance, *partner, pair_window, config.tol);
    ClaimReport claim;
    claim.instance = instance;
    claim.second_instance = partner;
    claim.claim = ClaimId::corollary6;
    claim.measured = {{"intersections", crossings.points.size()}};
    claim.claimed_bound = 2;
    claim.violated = crossings.points.size() > 2;
    out.push_back(std::move(claim));
  }

  bool series_applicable = !instance.empty();
  for (const ExpTerm& term : instance.terms()) {
    if (!(term.base < 1.0)) series_applicable = false;
  }
  if (series_applicable) {
    const ExpSum series_instance =
        instance.terms().front().coefficient > 0.0 ? instance : -instance;
    const SeriesReport series =
        series_scan(series_instance, config.series_k_max);
    {
      ClaimReport claim;
      claim.instance = series_instance;
      claim.claim = ClaimId::corollary7;
      claim.measured = {{"sign_changes", series.sign_changes},
                        {"extrema", series.extrema}};
      claim.claimed_bound = 2;
      claim.violated = series.sign_changes > 2 || series.extrema > 2;
      out.push_back(std::move(claim));
    }
    {
      ClaimReport claim;
      claim.instance = series_instance;
      claim.claim = ClaimId::series_conjecture;
      claim.measured = {{"minus_to_plus", series.minus_to_plus_from_k1}};
      claim.claimed_bound = 1;
      claim.violated = series.minus_to_plus_from_k1 > 1;
      out.push_back(std::move(claim));
    }
  }
}

}  // namespace

std::vector<ClaimReport> claim_check(const ClaimCheckConfig& config) {
  if (config.trials == 0 && config.instances.empty()) {
    throw domain_error(
        "claim_check: need at least one trial or one explicit instance");
  }
  if (config.max_terms < 2) {
    throw domain_error("claim_check: max_terms must be at least 2");
  }
  if (!(config.coefficient_min > 0.0) ||
      !(config.coefficient_max >= config.coefficient_min)) {
    throw domain_error("claim_check: bad coefficient magnitude range");
  }
  if (!(config.base_min > 0.0) || !(config.base_max < 1.0) ||
      !(config.base_min < config.base_max)) {
    throw domain_error(
        "claim_check: base range must sit strictly inside (0, 1)");
  }
  if ((config.base_max - config.base_min) <=
      1e-3 * static_cast<double>(config.max_terms)) {
    throw domain_error(
        "claim_check: base range too narrow for the separation requirement");
  }
  if (config.window) require_window(*config.window, "claim_check");
  if (!(config.tol > 0.0)) {
    throw domain_error("claim_check: tol must be positive");
  }
  if (config.series_k_max < 1) {
    throw domain_error("claim_check: series_k_max must be at least 1");
  }

  std::vector<ClaimReport> reports;
  for (const ExpSum& instance : config.instances) {
    check_instance(instance, std::nullopt, config, reports);
  }
  Sampler sampler(config.seed);
  for (unsigned trial = 0; trial < config.trials; ++trial) {
    const ExpSum instance = random_instance(sampler, config);
    const ExpSum partner = random_instance(sampler, config);
    check_instance(instance, partner, config, reports);
  }
  return reports;
}

}  // namespace expsum
