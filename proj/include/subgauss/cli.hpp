#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "subgauss/sweep.hpp"

namespace subgauss::cli {

inline const std::vector<std::string> kCommands{"construct", "diagnose", "density", "divergence", "sweep", "llt"};
inline constexpr const char* kToolVersion = "1.0.0";

struct GridParams {
  double L = 10.0;     // output nodes cover |x| <= L
  long points = 2001;  // odd, so x = 0 is a node
  bool operator==(const GridParams&) const = default;
};

struct OutputParams {
  std::string dir = ".";
  std::vector<std::string> formats{"csv", "json"};
  bool operator==(const OutputParams&) const = default;
};

// Every field holds its resolved value, so serialization is explicit and
// parse(serialize(c)) == c.
struct ExperimentConfig {
  std::string command;
  nlohmann::json spec;
  int n = 1;
  std::vector<int> n_list;
  std::vector<double> alphas;
  GridParams grid;
  OutputParams output;
  sweep::VerdictRule tolerances;
  double a = 1.0;             // llt critical-zone parameter
  double tau0 = 0.25;         // llt window for the log-cube excess check
  double window_scale = 1.0;  // llt Richter window multiplier
  bool with_cubic = false;    // llt Richter fit with an x^3/sqrt(n) column

  bool operator==(const ExperimentConfig& o) const;
};

// Strict parse: unknown keys raise ParseError (with the closest known key as a
// suggestion), malformed JSON raises ParseError with line and column, and
// violated invariants raise ValidationError. `command_hint` fills a missing
// "command" and must agree with a present one.
ExperimentConfig parse_config(const std::string& text, const std::string& command_hint = "");
ExperimentConfig parse_config_file(const std::filesystem::path& path, const std::string& command_hint = "");
nlohmann::json serialize(const ExperimentConfig& c);

struct RunOptions {
  int threads = 1;
  std::map<std::string, std::string> extra_versions;  // reported in the manifest
};

struct RunResult {
  int exit_code = 0;
  std::vector<std::filesystem::path> outputs;
  std::string message;
};

// Runs the command pipeline and writes its artifacts plus manifest.json into
// output.dir. Exit code 0 on success, 1 on computation errors, 2 on config or
// output-directory errors; nothing is left behind on failure.
RunResult dispatch(const ExperimentConfig& c, const RunOptions& opt);

// Exit code for an error kind raised before or during a run.
int exit_code_for(ErrorKind kind) noexcept;

}  // namespace subgauss::cli
