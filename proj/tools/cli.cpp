#include "cli.hpp"

#include <array>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "expsum/errors.hpp"
#include "expsum/exp_sum.hpp"
#include "expsum/io.hpp"
#include "expsum/irr.hpp"
#include "expsum/roots.hpp"
#include "expsum/sync.hpp"

namespace expsumcli {
namespace {

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    return buffer.str();
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    throw expsum::io::parse_error("cannot open input file: " + path);
  }
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

double parse_number(const std::string& text, const std::string& flag) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw expsum::io::parse_error(flag + " expects a finite number, got '" +
                                  text + "'");
  }
  return value;
}

expsum::Window parse_window_flag(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw expsum::io::parse_error("--window expects the form lo:hi, got '" +
                                  text + "'");
  }
  expsum::Window window{parse_number(text.substr(0, colon), "--window"),
                        parse_number(text.substr(colon + 1), "--window")};
  if (window.lo >= window.hi) {
    throw expsum::io::parse_error("--window requires lo < hi, got '" + text +
                                  "'");
  }
  return window;
}

expsum::PointKind parse_point_flag(const std::string& text) {
  if (text == "zero") return expsum::PointKind::zero();
  if (text == "extremum") return expsum::PointKind::extremum();
  if (text == "inflection") return expsum::PointKind::inflection();
  throw expsum::io::parse_error(
      "--point expects zero, extremum or inflection, got '" + text + "'");
}

std::uint64_t parse_seed_text(const std::string& text,
                              const std::string& source) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw expsum::io::parse_error(source + " must be a nonnegative integer, " +
                                  "got '" + text + "'");
  }
  return value;
}

const expsum::ExpSum& require_terms(const expsum::io::InputDocument& doc,
                                    const char* command) {
  if (!doc.holds_terms()) {
    throw expsum::io::parse_error(std::string(command) +
                                  " expects a terms document");
  }
  return doc.terms();
}

struct CommonFlags {
  std::string input;
  std::string window_text;
  double tol = 0.0;
  bool has_window = false;
  bool has_tol = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags* flags, bool with_window,
                      bool with_tol) {
  cmd->add_option("input", flags->input,
                  "input document path, or - for stdin")
      ->required();
  if (with_window) {
    cmd->add_option("--window", flags->window_text, "analysis window lo:hi")
        ->each([flags](const std::string&) { flags->has_window = true; });
  }
  if (with_tol) {
    cmd->add_option("--tol", flags->tol, "root tolerance")
        ->each([flags](const std::string&) { flags->has_tol = true; });
  }
}

double pick_tolerance(const CommonFlags& flags,
                      const expsum::io::DocumentOptions& options) {
  if (flags.has_tol) {
    if (!(flags.tol > 0.0) || !std::isfinite(flags.tol)) {
      throw expsum::io::parse_error("--tol expects a positive number");
    }
    return flags.tol;
  }
  return options.tol.value_or(1e-10);
}

int dispatch(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"exponential sum analysis toolkit"};
  app.require_subcommand(1);

  CommonFlags analyze_flags;
  auto* analyze_cmd = app.add_subcommand(
      "analyze", "report roots, extrema, inflections and asymptotes");
  add_common_flags(analyze_cmd, &analyze_flags, true, true);

  CommonFlags sync_flags;
  std::string sync_point_text;
  std::string sync_side_text = "pi";
  double sync_at = 0.0;
  bool sync_has_at = false;
  auto* sync_cmd = app.add_subcommand(
      "sync", "synchronize the pair decomposition at a characteristic point");
  add_common_flags(sync_cmd, &sync_flags, false, false);
  sync_cmd->add_option("--point", sync_point_text,
                       "characteristic point: zero, extremum or inflection")
      ->required();
  sync_cmd->add_option("--at", sync_at, "explicit synchronization abscissa")
      ->each([&sync_has_at](const std::string&) { sync_has_at = true; });
  sync_cmd->add_option("--side", sync_side_text,
                       "side whose coefficients are adjusted: pi or mi");

  CommonFlags split_flags;
  std::string split_point_text;
  auto* split_cmd = app.add_subcommand(
      "split", "split one shared negative term across the positive terms");
  add_common_flags(split_cmd, &split_flags, false, false);
  split_cmd->add_option("--point", split_point_text,
                        "characteristic point: zero, extremum or inflection")
      ->required();

  CommonFlags irr_flags;
  auto* irr_cmd =
      app.add_subcommand("irr", "internal rates of return of a schedule");
  add_common_flags(irr_cmd, &irr_flags, true, true);

  std::string claim_in;
  unsigned claim_trials = 0;
  bool claim_has_trials = false;
  std::uint64_t claim_seed = 0;
  bool claim_has_seed = false;
  unsigned claim_max_terms = 6;
  auto* claim_cmd = app.add_subcommand(
      "claimcheck", "measure root and sign-change bounds on random sums");
  claim_cmd->add_option("--in", claim_in, "explicit instance document");
  claim_cmd->add_option("--trials", claim_trials, "number of random trials")
      ->each([&claim_has_trials](const std::string&) {
        claim_has_trials = true;
      });
  claim_cmd->add_option("--seed", claim_seed, "random seed")
      ->each([&claim_has_seed](const std::string&) { claim_has_seed = true; });
  claim_cmd->add_option("--max-terms", claim_max_terms,
                        "maximum terms per random instance");

  CommonFlags sample_flags;
  double sample_from = 0.0;
  double sample_to = 0.0;
  double sample_step = 0.0;
  unsigned sample_derivative = 0;
  bool sample_has_derivative = false;
  auto* sample_cmd =
      app.add_subcommand("sample", "tabulate values over a uniform grid");
  add_common_flags(sample_cmd, &sample_flags, false, false);
  sample_cmd->add_option("--from", sample_from, "first abscissa")->required();
  sample_cmd->add_option("--to", sample_to, "last abscissa")->required();
  sample_cmd->add_option("--step", sample_step, "grid spacing")->required();
  sample_cmd->add_option("--derivative", sample_derivative,
                         "differentiate a terms document this many times")
      ->each([&sample_has_derivative](const std::string&) {
        sample_has_derivative = true;
      });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  if (*analyze_cmd) {
    auto doc = expsum::io::parse_input_document(read_input(analyze_flags.input));
    const auto& sum = require_terms(doc, "analyze");
    expsum::Window window = analyze_flags.has_window
                                ? parse_window_flag(analyze_flags.window_text)
                                : doc.options.window.value_or(
                                      expsum::default_window(sum));
    auto report =
        expsum::analyze(sum, window, pick_tolerance(analyze_flags, doc.options));
    out << expsum::io::serialize_report("analyze", doc, report);
    return 0;
  }

  if (*sync_cmd) {
    auto doc = expsum::io::parse_input_document(read_input(sync_flags.input));
    const auto& sum = require_terms(doc, "sync");
    auto kind = parse_point_flag(sync_point_text);
    expsum::AdjustSide side;
    if (sync_side_text == "pi") {
      side = expsum::AdjustSide::pi;
    } else if (sync_side_text == "mi") {
      side = expsum::AdjustSide::mi;
    } else {
      throw expsum::io::parse_error("--side expects pi or mi, got '" +
                                    sync_side_text + "'");
    }
    auto decomposition = expsum::pair_up_proportional(sum);
    double at = sync_has_at
                    ? sync_at
                    : expsum::pick_sync_point(decomposition.pairs, kind,
                                              expsum::ResidualSide::pi);
    auto result = expsum::sync_at_point(decomposition.pairs, kind, at, side);
    out << expsum::io::serialize_report("sync", doc, result, side,
                                        decomposition.leftovers);
    return 0;
  }

  if (*split_cmd) {
    auto doc = expsum::io::parse_input_document(read_input(split_flags.input));
    const auto& sum = require_terms(doc, "split");
    auto kind = parse_point_flag(split_point_text);
    std::vector<expsum::ExpTerm> positives;
    std::vector<expsum::ExpTerm> negatives;
    for (const auto& term : sum.terms()) {
      (term.coefficient > 0.0 ? positives : negatives).push_back(term);
    }
    if (negatives.size() != 1) {
      throw expsum::domain_error(
          "split expects exactly one negative term, got " +
          std::to_string(negatives.size()));
    }
    auto result = expsum::split_shared_mi(positives, negatives.front(), kind);
    out << expsum::io::serialize_report("split", doc, result);
    return 0;
  }

  if (*irr_cmd) {
    auto doc = expsum::io::parse_input_document(read_input(irr_flags.input));
    if (doc.holds_terms()) {
      throw expsum::io::parse_error("irr expects a schedule document");
    }
    expsum::Window window =
        irr_flags.has_window
            ? parse_window_flag(irr_flags.window_text)
            : doc.options.window.value_or(expsum::default_rate_window());
    auto solution = expsum::irr_solve(doc.schedule(), window,
                                      pick_tolerance(irr_flags, doc.options));
    out << expsum::io::serialize_report("irr", doc, solution);
    return 0;
  }

  if (*claim_cmd) {
    expsum::ClaimCheckConfig config;
    expsum::io::ClaimCheckEcho echo;
    std::optional<expsum::io::InputDocument> instance_doc;
    if (!claim_in.empty()) {
      instance_doc = expsum::io::parse_input_document(read_input(claim_in));
      const auto& sum = require_terms(*instance_doc, "claimcheck");
      config.instances.push_back(sum);
      if (instance_doc->options.window) {
        config.window = instance_doc->options.window;
      }
      if (instance_doc->options.tol) {
        config.tol = *instance_doc->options.tol;
      }
    }
    config.trials = claim_has_trials ? claim_trials
                                     : (instance_doc ? 0u : 100u);
    if (claim_has_seed) {
      config.seed = claim_seed;
    } else if (instance_doc && instance_doc->options.seed) {
      config.seed = *instance_doc->options.seed;
    } else if (const char* env = std::getenv("EXPSUM_SEED")) {
      config.seed = parse_seed_text(env, "EXPSUM_SEED");
    }
    config.max_terms = claim_max_terms;
    auto reports = expsum::claim_check(config);
    echo.trials = config.trials;
    echo.seed = config.seed;
    echo.max_terms = config.max_terms;
    echo.instance = std::move(instance_doc);
    out << expsum::io::serialize_report("claimcheck", echo, reports);
    return 0;
  }

  if (*sample_cmd) {
    auto doc = expsum::io::parse_input_document(read_input(sample_flags.input));
    if (!std::isfinite(sample_from) || !std::isfinite(sample_to) ||
        !std::isfinite(sample_step)) {
      throw expsum::io::parse_error("--from, --to and --step must be finite");
    }
    if (sample_from > sample_to) {
      throw expsum::io::parse_error("--from must not exceed --to");
    }
    if (sample_from < sample_to && !(sample_step > 0.0)) {
      throw expsum::io::parse_error("--step must be positive");
    }
    if (sample_has_derivative && !doc.holds_terms()) {
      throw expsum::io::parse_error(
          "--derivative applies to terms documents only");
    }

    std::size_t rows =
        sample_from == sample_to
            ? 1
            : static_cast<std::size_t>(
                  std::floor((sample_to - sample_from) / sample_step + 1e-9)) +
                  1;
    std::vector<std::array<double, 2>> table;
    table.reserve(rows);
    if (doc.holds_terms()) {
      expsum::ExpSum target = sample_has_derivative
                                  ? expsum::derivative(doc.terms(),
                                                       sample_derivative)
                                  : doc.terms();
      for (std::size_t i = 0; i < rows; ++i) {
        double k = sample_from + static_cast<double>(i) * sample_step;
        table.push_back({k, expsum::evaluate(target, k)});
      }
    } else {
      for (std::size_t i = 0; i < rows; ++i) {
        double rate = sample_from + static_cast<double>(i) * sample_step;
        table.push_back({rate, expsum::irr_evaluate(doc.schedule(), rate)});
      }
    }
    out << expsum::io::serialize_csv(table);
    return 0;
  }

  err << "error: no command selected\n";
  return 2;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  try {
    return dispatch(argc, argv, out, err);
  } catch (const expsum::io::parse_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("expsum");
  for (const auto& arg : args) {
    argv.push_back(arg.c_str());
  }
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace expsumcli
