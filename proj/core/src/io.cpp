#include "expsum/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "expsum/version.hpp"
#include "json.hpp"

namespace expsum::io {

namespace {

using ojson = nlohmann::ordered_json;

double finite_number(const ojson& value, const std::string& where) {
  if (!value.is_number()) {
    throw parse_error(where + " must be a number");
  }
  const double number = value.get<double>();
  if (!std::isfinite(number)) {
    throw parse_error(where + " must be finite");
  }
  return number;
}

void reject_unknown_keys(const ojson& object,
                         std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (const auto& [key, value] : object.items()) {
    bool known = false;
    for (const char* name : allowed) {
      if (key == name) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw parse_error(where + ": unknown field \"" + key + "\"");
    }
  }
}

DocumentOptions parse_options(const ojson& doc) {
  DocumentOptions options;
  if (doc.contains("window")) {
    const ojson& w = doc.at("window");
    if (!w.is_array() || w.size() != 2) {
      throw parse_error("window must be an array [lo, hi]");
    }
    Window window{finite_number(w[0], "window lo"),
                  finite_number(w[1], "window hi")};
    if (!(window.lo < window.hi)) {
      throw parse_error("window must satisfy lo < hi");
    }
    options.window = window;
  }
  if (doc.contains("tol")) {
    const double tol = finite_number(doc.at("tol"), "tol");
    if (!(tol > 0.0)) throw parse_error("tol must be positive");
    options.tol = tol;
  }
  if (doc.contains("seed")) {
    const ojson& seed = doc.at("seed");
    if (!seed.is_number_integer() && !seed.is_number_unsigned()) {
      throw parse_error("seed must be a nonnegative integer");
    }
    if (seed.is_number_integer() && seed.get<std::int64_t>() < 0) {
      throw parse_error("seed must be a nonnegative integer");
    }
    options.seed = seed.get<std::uint64_t>();
  }
  return options;
}

ExpSum parse_terms(const ojson& doc) {
  const ojson& terms = doc.at("terms");
  if (!terms.is_array()) throw parse_error("terms must be an array");
  std::vector<ExpTerm> parsed;
  parsed.reserve(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const ojson& entry = terms[i];
    const std::string where = "terms[" + std::to_string(i) + "]";
    if (!entry.is_object()) throw parse_error(where + " must be an object");
    reject_unknown_keys(entry, {"c", "t"}, where);
    if (!entry.contains("c") || !entry.contains("t")) {
      throw parse_error(where + " needs fields \"c\" and \"t\"");
    }
    parsed.push_back({finite_number(entry.at("c"), where + ".c"),
                      finite_number(entry.at("t"), where + ".t")});
  }
  try {
    return ExpSum(std::move(parsed));
  } catch (const domain_error& error) {
    throw parse_error(std::string("terms: ") + error.what());
  }
}

CashFlowSchedule parse_schedule(const ojson& doc) {
  for (const char* required : {"begin_value", "end_value", "horizon"}) {
    if (!doc.contains(required)) {
      throw parse_error(std::string("schedule document needs field \"") +
                        required + "\"");
    }
  }
  std::vector<CashFlow> flows;
  if (doc.contains("flows")) {
    const ojson& entries = doc.at("flows");
    if (!entries.is_array()) throw parse_error("flows must be an array");
    flows.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const ojson& entry = entries[i];
      const std::string where = "flows[" + std::to_string(i) + "]";
      if (!entry.is_object()) throw parse_error(where + " must be an object");
      reject_unknown_keys(entry, {"amount", "time_remaining"}, where);
      if (!entry.contains("amount") || !entry.contains("time_remaining")) {
        throw parse_error(where +
                          " needs fields \"amount\" and \"time_remaining\"");
      }
      flows.push_back(
          {finite_number(entry.at("amount"), where + ".amount"),
           finite_number(entry.at("time_remaining"),
                         where + ".time_remaining")});
    }
  }
  try {
    return CashFlowSchedule(finite_number(doc.at("begin_value"), "begin_value"),
                            finite_number(doc.at("end_value"), "end_value"),
                            finite_number(doc.at("horizon"), "horizon"),
                            std::move(flows));
  } catch (const domain_error& error) {
    throw parse_error(error.what());
  }
}

ojson term_list_json(std::span<const ExpTerm> terms) {
  ojson list = ojson::array();
  for (const ExpTerm& term : terms) {
    ojson entry;
    entry["c"] = term.coefficient;
    entry["t"] = term.base;
    list.push_back(std::move(entry));
  }
  return list;
}

ojson input_to_json(const InputDocument& document) {
  ojson doc;
  if (document.holds_terms()) {
    doc["terms"] = term_list_json(document.terms().terms());
  } else {
    const CashFlowSchedule& schedule = document.schedule();
    doc["begin_value"] = schedule.begin_value();
    doc["end_value"] = schedule.end_value();
    doc["horizon"] = schedule.horizon();
    ojson flows = ojson::array();
    for (const CashFlow& flow : schedule.flows()) {
      ojson entry;
      entry["amount"] = flow.amount;
      entry["time_remaining"] = flow.time_remaining;
      flows.push_back(std::move(entry));
    }
    doc["flows"] = std::move(flows);
  }
  if (document.options.window) {
    doc["window"] = {document.options.window->lo, document.options.window->hi};
  }
  if (document.options.tol) doc["tol"] = *document.options.tol;
  if (document.options.seed) doc["seed"] = *document.options.seed;
  return doc;
}

ojson pair_json(const PairFunction& pf) {
  ojson entry;
  entry["c_p"] = pf.pi_coefficient();
  entry["t_p"] = pf.pi_base();
  entry["c_m"] = pf.mi_coefficient();
  entry["t_m"] = pf.mi_base();
  entry["kind"] = pf.kind() == PairKind::high ? "hpf" : "lpf";
  return entry;
}

std::string point_kind_name(PointKind kind) {
  switch (kind.derivative_order) {
    case 0:
      return "zero";
    case 1:
      return "extremum";
    case 2:
      return "inflection";
    default:
      return "derivative_zero_" + std::to_string(kind.derivative_order);
  }
}

const char* asymptote_name(Asymptote label) {
  switch (label) {
    case Asymptote::to_zero_above:
      return "to_zero_above";
    case Asymptote::to_zero_below:
      return "to_zero_below";
    case Asymptote::to_plus_infinity:
      return "to_plus_infinity";
    case Asymptote::to_minus_infinity:
      return "to_minus_infinity";
    case Asymptote::constant:
      return "constant";
  }
  return "constant";
}

std::string wrap(std::string_view command, ojson input, ojson report) {
  ojson document;
  document["version"] = expsum::version;
  document["command"] = std::string(command);
  document["input"] = std::move(input);
  document["report"] = std::move(report);
  return document.dump(2) + "\n";
}

}  // namespace

InputDocument parse_input_document(std::string_view text) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const nlohmann::json::parse_error& error) {
    throw parse_error(error.what());
  }
  if (!doc.is_object()) {
    throw parse_error("input document must be a JSON object");
  }
  const bool has_terms = doc.contains("terms");
  const bool has_schedule = doc.contains("begin_value") ||
                            doc.contains("end_value") ||
                            doc.contains("horizon") || doc.contains("flows");
  if (has_terms && has_schedule) {
    throw parse_error(
        "input document mixes term-list and schedule fields; use exactly one "
        "form");
  }
  if (!has_terms && !has_schedule) {
    throw parse_error(
        "input document needs either \"terms\" or the schedule fields "
        "\"begin_value\"/\"end_value\"/\"horizon\"");
  }
  InputDocument document;
  if (has_terms) {
    reject_unknown_keys(doc, {"terms", "window", "tol", "seed"},
                        "input document");
    document.payload = parse_terms(doc);
  } else {
    reject_unknown_keys(
        doc,
        {"begin_value", "end_value", "horizon", "flows", "window", "tol",
         "seed"},
        "input document");
    document.payload = parse_schedule(doc);
  }
  document.options = parse_options(doc);
  return document;
}

std::string serialize_input_document(const InputDocument& document) {
  return input_to_json(document).dump(2) + "\n";
}

std::string serialize_report(std::string_view command,
                             const InputDocument& input,
                             const RootReport& report) {
  ojson r;
  r["roots"] = report.roots;
  r["tangential_roots"] = report.tangential_roots;
  r["extrema"] = report.extrema;
  r["inflections"] = report.inflections;
  r["sign_change_bound"] = report.sign_change_bound;
  r["window"] = {report.window.lo, report.window.hi};
  r["left_asymptote"] = asymptote_name(report.left_asymptote);
  r["right_asymptote"] = asymptote_name(report.right_asymptote);
  return wrap(command, input_to_json(input), std::move(r));
}

std::string serialize_report(std::string_view command,
                             const InputDocument& input,
                             const SyncResult& result, AdjustSide side,
                             std::span<const ExpTerm> passthrough_terms) {
  ojson r;
  r["point_kind"] = point_kind_name(result.point_kind);
  r["sync_point"] = result.sync_point;
  r["adjusted_side"] = side == AdjustSide::pi ? "pi" : "mi";
  ojson pairs = ojson::array();
  ojson adjusted = ojson::array();
  for (const PairFunction& pf : result.synchronized) {
    pairs.push_back(pair_json(pf));
    adjusted.push_back(side == AdjustSide::pi ? pf.pi_coefficient()
                                              : pf.mi_coefficient());
  }
  r["synchronized"] = std::move(pairs);
  r["adjusted_coefficients"] = std::move(adjusted);
  r["residuals"] = term_list_json(result.residuals);
  r["passthrough_terms"] = term_list_json(passthrough_terms);
  return wrap(command, input_to_json(input), std::move(r));
}

std::string serialize_report(std::string_view command,
                             const InputDocument& input,
                             const SplitResult& result) {
  ojson r;
  r["point_kind"] = point_kind_name(result.point_kind);
  r["common_point"] = result.common_point;
  ojson pairs = ojson::array();
  ojson mi_coefficients = ojson::array();
  double mi_total = 0.0;
  for (const PairFunction& pf : result.pairs) {
    pairs.push_back(pair_json(pf));
    mi_coefficients.push_back(pf.mi_coefficient());
    mi_total += pf.mi_coefficient();
  }
  r["pairs"] = std::move(pairs);
  r["mi_coefficients"] = std::move(mi_coefficients);
  r["mi_total"] = mi_total;
  ojson shares = ojson::array();
  for (const std::vector<ExpTerm>& share : result.shares) {
    shares.push_back(term_list_json(share));
  }
  r["shares"] = std::move(shares);
  ojson brackets = ojson::array();
  for (const auto& bracket : result.share_brackets) {
    brackets.push_back({bracket[0], bracket[1]});
  }
  r["share_brackets"] = std::move(brackets);
  return wrap(command, input_to_json(input), std::move(r));
}

std::string serialize_report(std::string_view command,
                             const InputDocument& input,
                             const IrrSolution& solution) {
  ojson r;
  r["rates"] = solution.rates;
  r["residuals"] = solution.residuals;
  r["count"] = solution.rates.size();
  r["multiplicity_bound"] = solution.multiplicity_bound;
  r["exceeds_bound"] = solution.exceeds_bound;
  if (solution.conventional_index) {
    r["conventional_rate_index"] = *solution.conventional_index;
  } else {
    r["conventional_rate_index"] = nullptr;
  }
  return wrap(command, input_to_json(input), std::move(r));
}

std::string serialize_report(std::string_view command,
                             const ClaimCheckEcho& echo,
                             std::span<const ClaimReport> reports) {
  ojson input;
  input["trials"] = echo.trials;
  input["seed"] = echo.seed;
  input["max_terms"] = echo.max_terms;
  if (echo.instance) input["instance"] = input_to_json(*echo.instance);
  ojson list = ojson::array();
  for (const ClaimReport& report : reports) {
    ojson entry;
    entry["claim"] = claim_name(report.claim);
    ojson instance;
    instance["terms"] = term_list_json(report.instance.terms());
    entry["instance"] = std::move(instance);
    if (report.second_instance) {
      ojson second;
      second["terms"] = term_list_json(report.second_instance->terms());
      entry["second_instance"] = std::move(second);
    }
    ojson measured;
    for (const auto& [name, count] : report.measured) measured[name] = count;
    entry["measured"] = std::move(measured);
    entry["bound"] = report.claimed_bound;
    entry["violated"] = report.violated;
    list.push_back(std::move(entry));
  }
  return wrap(command, std::move(input), std::move(list));
}

std::string format_double(double value) {
  std::array<char, 32> buffer{};
  const auto result =
      std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), result.ptr);
}

std::string serialize_csv(std::span<const std::array<double, 2>> samples) {
  std::string csv = "k,value\n";
  for (const auto& row : samples) {
    csv += format_double(row[0]);
    csv += ',';
    csv += format_double(row[1]);
    csv += '\n';
  }
  return csv;
}

}  // namespace expsum::io
