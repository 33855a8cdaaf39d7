#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "subgauss/cli.hpp"
#include "subgauss/div.hpp"

namespace subgauss::cli {

using nlohmann::json;

namespace {

const std::vector<std::string> kTopKeys{"command", "spec",  "n",    "n_list", "alphas",       "grid",      "output",
                                        "tolerances", "a", "tau0", "window_scale", "with_cubic"};
const std::vector<std::string> kGridKeys{"L", "points"};
const std::vector<std::string> kOutputKeys{"dir", "formats"};
const std::vector<std::string> kToleranceKeys{"stall_band", "resolvable_factor", "monotone_jitter"};

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] != b[j - 1])});
      diag = up;
    }
  }
  return row[b.size()];
}

void check_keys(const json& j, const std::vector<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) != allowed.end()) continue;
    std::string best;
    std::size_t best_d = 3;  // suggest only near misses
    for (const auto& k : allowed) {
      const std::size_t d = edit_distance(it.key(), k);
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    std::string msg = "unknown key '" + it.key() + "'" + (where.empty() ? "" : " in '" + where + "'");
    if (!best.empty()) msg += "; did you mean '" + best + "'?";
    throw Error(ErrorKind::ParseError, msg);
  }
}

std::string path_of(const std::string& where, const char* key) { return where.empty() ? key : where + "." + key; }

double get_number(const json& j, const char* key, const std::string& where) {
  if (!j[key].is_number()) throw Error(ErrorKind::ParseError, "field '" + path_of(where, key) + "' must be a number");
  return j[key].get<double>();
}

long get_integer(const json& j, const char* key, const std::string& where) {
  if (!j[key].is_number_integer()) throw Error(ErrorKind::ParseError, "field '" + path_of(where, key) + "' must be an integer");
  return j[key].get<long>();
}

template <class T>
std::vector<T> get_array(const json& j, const char* key) {
  const auto& v = j[key];
  if (!v.is_array()) throw Error(ErrorKind::ParseError, std::string("field '") + key + "' must be an array");
  std::vector<T> out;
  for (const auto& e : v) {
    if constexpr (std::is_same_v<T, int>) {
      if (!e.is_number_integer()) throw Error(ErrorKind::ParseError, std::string("field '") + key + "' must hold integers");
      out.push_back(e.get<int>());
    } else if constexpr (std::is_same_v<T, double>) {
      if (!e.is_number()) throw Error(ErrorKind::ParseError, std::string("field '") + key + "' must hold numbers");
      out.push_back(e.get<double>());
    } else {
      if (!e.is_string()) throw Error(ErrorKind::ParseError, std::string("field '") + key + "' must hold strings");
      out.push_back(e.get<std::string>());
    }
  }
  return out;
}

std::vector<int> default_ladder(const std::string& command) {
  if (command == "llt") return {64, 128, 256, 512};
  return sweep::kDefaultLadder;
}

void validate(const ExperimentConfig& c) {
  std::vector<std::string> problems;
  if (c.n < 1) problems.push_back("n must be ≥ 1");
  for (std::size_t i = 0; i < c.n_list.size(); ++i) {
    if (c.n_list[i] < 1) problems.push_back("n must be ≥ 1 (n_list entry " + std::to_string(c.n_list[i]) + ")");
    if (c.n_list[i] > sweep::kMaxLadderN)
      problems.push_back("n_list entry " + std::to_string(c.n_list[i]) + " exceeds " + std::to_string(sweep::kMaxLadderN));
    if (i > 0 && c.n_list[i] <= c.n_list[i - 1]) problems.push_back("n_list must be strictly increasing");
  }
  if (c.n_list.empty()) problems.push_back("n_list must not be empty");
  for (double al : c.alphas)
    if (!(al > 0.0) || al == 1.0) problems.push_back("alpha " + fmt(al) + " must be positive and different from 1");
  if (!(c.grid.L > 0.0)) problems.push_back("grid.L must be positive");
  if (c.grid.points < 3 || c.grid.points % 2 == 0) problems.push_back("grid.points must be odd and at least 3");
  for (const auto& f : c.output.formats)
    if (f != "csv" && f != "json") problems.push_back("unknown output format '" + f + "' (csv or json)");
  if (c.output.formats.empty()) problems.push_back("output.formats must not be empty");
  if (!(c.tolerances.stall_band > 0.0 && c.tolerances.stall_band < 1.0)) problems.push_back("tolerances.stall_band must lie in (0, 1)");
  if (!(c.tolerances.resolvable_factor >= 1.0)) problems.push_back("tolerances.resolvable_factor must be at least 1");
  if (!(c.tolerances.monotone_jitter >= 0.0)) problems.push_back("tolerances.monotone_jitter must be nonnegative");
  if (!(c.a > 0.0)) problems.push_back("a must be positive");
  if (!(c.tau0 > 0.0)) problems.push_back("tau0 must be positive");
  if (!(c.window_scale > 0.0)) problems.push_back("window_scale must be positive");
  try {
    (void)dist::DistributionSpec::from_json(c.spec);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ParseError) throw;
    problems.push_back(std::string("spec: ") + e.what());
  }
  if (problems.empty()) return;
  std::string msg;
  for (const auto& p : problems) msg += (msg.empty() ? "" : "; ") + p;
  throw Error(ErrorKind::ValidationError, msg);
}

}  // namespace

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
  const auto& t = tolerances;
  const auto& u = o.tolerances;
  return command == o.command && spec == o.spec && n == o.n && n_list == o.n_list && alphas == o.alphas && grid == o.grid &&
         output == o.output && t.stall_band == u.stall_band && t.resolvable_factor == u.resolvable_factor &&
         t.monotone_jitter == u.monotone_jitter && a == o.a && tau0 == o.tau0 && window_scale == o.window_scale &&
         with_cubic == o.with_cubic;
}

ExperimentConfig parse_config(const std::string& text, const std::string& command_hint) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line and column.
    const std::size_t pos = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n'));
    const std::size_t nl = text.rfind('\n', pos == 0 ? 0 : pos - 1);
    const std::size_t col = nl == std::string::npos ? pos + 1 : pos - nl;
    throw Error(ErrorKind::ParseError, "malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(col));
  }
  if (!j.is_object()) throw Error(ErrorKind::ParseError, "config must be a JSON object");
  check_keys(j, kTopKeys, "");

  ExperimentConfig c;
  if (j.contains("command")) {
    if (!j["command"].is_string()) throw Error(ErrorKind::ParseError, "field 'command' must be a string");
    c.command = j["command"].get<std::string>();
    if (!command_hint.empty() && c.command != command_hint)
      throw Error(ErrorKind::ValidationError, "config command '" + c.command + "' differs from requested '" + command_hint + "'");
  } else {
    c.command = command_hint;
  }
  if (std::find(kCommands.begin(), kCommands.end(), c.command) == kCommands.end())
    throw Error(ErrorKind::ValidationError, "command must be one of construct, diagnose, density, divergence, sweep, llt");
  if (!j.contains("spec")) throw Error(ErrorKind::ParseError, "field 'spec' is required");
  c.spec = j["spec"];

  if (c.command == "llt") c.n = 256;  // tilted check needs n >= 4(a + 1)
  if (j.contains("n")) c.n = static_cast<int>(get_integer(j, "n", ""));
  c.n_list = j.contains("n_list") ? get_array<int>(j, "n_list") : default_ladder(c.command);
  c.alphas = j.contains("alphas") ? get_array<double>(j, "alphas") : div::kDefaultAlphas;
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    if (!g.is_object()) throw Error(ErrorKind::ParseError, "field 'grid' must be an object");
    check_keys(g, kGridKeys, "grid");
    if (g.contains("L")) c.grid.L = get_number(g, "L", "grid");
    if (g.contains("points")) c.grid.points = get_integer(g, "points", "grid");
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    if (!o.is_object()) throw Error(ErrorKind::ParseError, "field 'output' must be an object");
    check_keys(o, kOutputKeys, "output");
    if (o.contains("dir")) {
      if (!o["dir"].is_string()) throw Error(ErrorKind::ParseError, "field 'output.dir' must be a string");
      c.output.dir = o["dir"].get<std::string>();
    }
    if (o.contains("formats")) c.output.formats = get_array<std::string>(o, "formats");
  }
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    if (!t.is_object()) throw Error(ErrorKind::ParseError, "field 'tolerances' must be an object");
    check_keys(t, kToleranceKeys, "tolerances");
    if (t.contains("stall_band")) c.tolerances.stall_band = get_number(t, "stall_band", "tolerances");
    if (t.contains("resolvable_factor")) c.tolerances.resolvable_factor = get_number(t, "resolvable_factor", "tolerances");
    if (t.contains("monotone_jitter")) c.tolerances.monotone_jitter = get_number(t, "monotone_jitter", "tolerances");
  }
  if (j.contains("a")) c.a = get_number(j, "a", "");
  if (j.contains("tau0")) c.tau0 = get_number(j, "tau0", "");
  if (j.contains("window_scale")) c.window_scale = get_number(j, "window_scale", "");
  if (j.contains("with_cubic")) {
    if (!j["with_cubic"].is_boolean()) throw Error(ErrorKind::ParseError, "field 'with_cubic' must be a boolean");
    c.with_cubic = j["with_cubic"].get<bool>();
  }
  validate(c);
  return c;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path, const std::string& command_hint) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), command_hint);
}

json serialize(const ExperimentConfig& c) {
  return json{{"command", c.command},
              {"spec", c.spec},
              {"n", c.n},
              {"n_list", c.n_list},
              {"alphas", c.alphas},
              {"grid", {{"L", c.grid.L}, {"points", c.grid.points}}},
              {"output", {{"dir", c.output.dir}, {"formats", c.output.formats}}},
              {"tolerances",
               {{"stall_band", c.tolerances.stall_band},
                {"resolvable_factor", c.tolerances.resolvable_factor},
                {"monotone_jitter", c.tolerances.monotone_jitter}}},
              {"a", c.a},
              {"tau0", c.tau0},
              {"window_scale", c.window_scale},
              {"with_cubic", c.with_cubic}};
}

}  // namespace subgauss::cli
