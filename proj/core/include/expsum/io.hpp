#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "expsum/irr.hpp"
#include "expsum/roots.hpp"
#include "expsum/sync.hpp"

namespace expsum::io {

/// Malformed or schema-invalid input text; the message carries position or
/// field information.
class parse_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct DocumentOptions {
  std::optional<Window> window;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;

  friend bool operator==(const DocumentOptions&,
                         const DocumentOptions&) = default;
};

/// Either a term list ({"terms": [{"c", "t"}, ...]}) or a cash-flow schedule
/// ({"begin_value", "end_value", "horizon", "flows": [...]}), plus optional
/// window/tol/seed hints.
struct InputDocument {
  std::variant<ExpSum, CashFlowSchedule> payload;
  DocumentOptions options;

  bool holds_terms() const noexcept {
    return std::holds_alternative<ExpSum>(payload);
  }
  const ExpSum& terms() const { return std::get<ExpSum>(payload); }
  const CashFlowSchedule& schedule() const {
    return std::get<CashFlowSchedule>(payload);
  }

  friend bool operator==(const InputDocument&, const InputDocument&) = default;
};

InputDocument parse_input_document(std::string_view text);

/// Canonical serialization of a parsed document; parsing it back yields an
/// equal document.
std::string serialize_input_document(const InputDocument& document);

/// Echo object used in reports produced without an input file (claimcheck):
/// the effective generator configuration plus the optional explicit
/// instance.
struct ClaimCheckEcho {
  unsigned trials = 0;
  std::uint64_t seed = 0;
  unsigned max_terms = 0;
  std::optional<InputDocument> instance;
};

/// Report documents: {"version", "command", "input", "report"} with a fixed
/// field order, serialized with shortest round-trip numbers.
std::string serialize_report(std::string_view command,
                             const InputDocument& input,
                             const RootReport& report);

/// Sync reports carry the pair list, the per-pair adjusted coefficients, the
/// merged residual terms, and any unpaired passthrough terms.
std::string serialize_report(std::string_view command,
                             const InputDocument& input,
                             const SyncResult& result, AdjustSide side,
                             std::span<const ExpTerm> passthrough_terms);

std::string serialize_report(std::string_view command,
                             const InputDocument& input,
                             const SplitResult& result);

std::string serialize_report(std::string_view command,
                             const InputDocument& input,
                             const IrrSolution& solution);

std::string serialize_report(std::string_view command,
                             const ClaimCheckEcho& echo,
                             std::span<const ClaimReport> reports);

/// CSV rows "k,value" with a header line; numbers use the shortest
/// representation that parses back to the same double.
std::string serialize_csv(std::span<const std::array<double, 2>> samples);

/// Shortest round-trip decimal form of one double.
std::string format_double(double value);

}  // namespace expsum::io
