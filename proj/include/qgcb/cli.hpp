#pragma once

// Command-line driver: compute, verify and theta subcommands.
//
// Exit codes:
//   0  success
//   1  unexpected failure
//   2  configuration or parse error
//   3  a computation left the truncation (raise --ht-bound)
//   4  an invariant failed (a verification check or an internal assertion)

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qgcb/rootdata.hpp"

namespace qgcb::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kConfigError = 2, kTruncation = 3, kInvariant = 4 };

struct JobConfig {
  std::string datum;                 // preset name or path to a JSON datum file
  std::string weights;               // as given on the command line
  std::size_t r = 0;
  int ht_bound = 6;
  std::vector<std::string> checks;
  std::string out;
  std::string csv;
  std::string report;
  std::uint64_t seed = 1;

  nlohmann::json to_json() const;
};

const std::vector<std::string>& default_checks();
const std::vector<std::string>& known_checks();

/// Preset name, or a JSON file {"name", "symmetrizers", "cartan"}.
RootDatum load_datum(const std::string& source);

/// Weights separated by ';' with coordinates separated by ','. Without a ';'
/// the numbers are grouped into weights of the datum's rank, so "1,1" is two
/// rank-one weights and "1,0,0,1" is two rank-two weights. Empty means none.
std::vector<Weight> parse_weights(const std::string& s, std::size_t rank);

/// Throws ParseError on r > number of weights, negative bound, or unknown checks.
void validate(const JobConfig& c, std::size_t num_weights);

nlohmann::json run_compute(const JobConfig& c);
/// The report; its "passed" field is false when an enforced check failed.
nlohmann::json run_verify(const JobConfig& c);
nlohmann::json run_export_theta(const JobConfig& c);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qgcb::cli
