#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "subgauss/cli.hpp"

namespace sg = subgauss;

namespace {

// Apply --out and --n to the raw document so the overrides pass the same validation.
std::string with_overrides(const std::string& text, const std::string& command, const std::string& out_dir, const int* n) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    return text;  // parse_config reports the position
  }
  if (!j.is_object()) return text;
  if (!out_dir.empty()) j["output"]["dir"] = out_dir;
  if (n) {
    j["n"] = *n;
    if (command == "sweep") {
      // --n caps the ladder.
      std::vector<int> ladder = j.contains("n_list") && j["n_list"].is_array() ? j["n_list"].get<std::vector<int>>() : sg::sweep::kDefaultLadder;
      std::erase_if(ladder, [&](int v) { return v > *n; });
      if (*n >= 1) j["n_list"] = ladder;
    }
  }
  return j.dump();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian-relative divergences of normalized sums"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  int n_value = 0, threads = 0;
  for (const auto& name : sg::cli::kCommands) {
    auto* sub = app.add_subcommand(name, "run the " + name + " pipeline");
    sub->add_option("--config", config_path, "JSON experiment config")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
    sub->add_option("--n", n_value, "number of summands (caps the ladder for sweep)");
    sub->add_option("--threads", threads, "worker threads for sweep");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  const auto* sub = app.get_subcommands().front();

  int resolved_threads = 1;
  if (sub->count("--threads")) {
    resolved_threads = threads;
  } else if (const char* env = std::getenv("SUBGAUSS_LAB_THREADS")) {
    try {
      resolved_threads = std::stoi(env);
    } catch (const std::exception&) {
      std::cerr << "ValidationError: SUBGAUSS_LAB_THREADS must be an integer\n";
      return 2;
    }
  }
  if (resolved_threads < 1) {
    std::cerr << "ValidationError: threads must be >= 1\n";
    return 2;
  }

  sg::cli::ExperimentConfig config;
  try {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) throw sg::Error(sg::ErrorKind::ParseError, "cannot read config file '" + config_path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    config = sg::cli::parse_config(with_overrides(ss.str(), command, out_dir, sub->count("--n") ? &n_value : nullptr), command);
  } catch (const sg::Error& e) {
    std::cerr << e.what() << '\n';
    return sg::cli::exit_code_for(e.kind());
  }

  sg::cli::RunOptions opt;
  opt.threads = resolved_threads;
  opt.extra_versions["CLI11"] = CLI11_VERSION;
  const auto res = sg::cli::dispatch(config, opt);
  if (res.exit_code != 0) {
    std::cerr << res.message << '\n';
    return res.exit_code;
  }
  if (command == "diagnose") {
    std::ifstream v(std::filesystem::path(config.output.dir) / "verdict.txt");
    std::cout << v.rdbuf();
  }
  for (const auto& p : res.outputs) std::cout << "wrote " << p.string() << '\n';
  return 0;
}
