#include <catch_amalgamated.hpp>

#include <fstream>

#include "subgauss/cli.hpp"
#include "subgauss/div.hpp"

using namespace subgauss;

namespace {

ErrorKind kind_of(const std::string& text) {
  try {
    cli::parse_config(text);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;  // parsed; callers never expect this
}

std::string message_of(const std::string& text) {
  try {
    cli::parse_config(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("subgauss_cli_" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

TEST_CASE("config round trip") {
  const auto c = cli::parse_config(R"({"command": "sweep", "spec": {"kind": "uniform"}, "n_list": [16, 64],
                                       "tolerances": {"stall_band": 0.2}, "output": {"dir": "out", "formats": ["csv"]}})");
  CHECK(c.n_list == std::vector<int>{16, 64});
  CHECK(c.tolerances.stall_band == 0.2);
  CHECK(cli::parse_config(cli::serialize(c).dump()) == c);
  const auto l = cli::parse_config(R"({"spec": {"kind": "uniform"}})", "llt");
  CHECK(l.n == 256);
  CHECK(l.n_list == std::vector<int>{64, 128, 256, 512});
  CHECK(cli::parse_config(cli::serialize(l).dump()) == l);
}

TEST_CASE("defaults") {
  const auto c = cli::parse_config(R"({"command": "divergence", "spec": {"kind": "uniform"}})");
  CHECK(c.n == 1);
  CHECK(c.n_list == sweep::kDefaultLadder);
  CHECK(c.alphas == div::kDefaultAlphas);
  CHECK(c.grid.points == 2001);
  CHECK(c.output.formats == std::vector<std::string>{"csv", "json"});
}

TEST_CASE("unknown keys suggest the closest known key") {
  const std::string text = R"({"command": "divergence", "spec": {"kind": "uniform"}, "alpha": [2]})";
  CHECK(kind_of(text) == ErrorKind::ParseError);
  CHECK(message_of(text).find("did you mean 'alphas'?") != std::string::npos);
  CHECK(message_of(R"({"command": "sweep", "spec": {"kind": "uniform"}, "grid": {"point": 5}})").find("'points'") !=
        std::string::npos);
}

TEST_CASE("malformed JSON reports line and column") {
  const std::string text = "{\n  \"n\": ,\n}";
  CHECK(kind_of(text) == ErrorKind::ParseError);
  CHECK(message_of(text).find("line 2, column 8") != std::string::npos);
}

TEST_CASE("validation collects every problem") {
  const auto msg = message_of(R"({"command": "density", "spec": {"kind": "uniform"}, "n": 0, "grid": {"points": 10}})");
  CHECK(msg.find("n must be ≥ 1") != std::string::npos);
  CHECK(msg.find("grid.points") != std::string::npos);
  CHECK(kind_of(R"({"command": "density", "spec": {"kind": "uniform"}, "n": 0})") == ErrorKind::ValidationError);
  CHECK(kind_of(R"({"command": "fly", "spec": {"kind": "uniform"}})") == ErrorKind::ValidationError);
}

TEST_CASE("inadmissible c is a validation error naming c_max") {
  const auto text = R"({"command": "construct", "spec": {"kind": "trig", "c": 1.0, "a0": 0.375, "cos": [[2, -0.5], [4, 0.125]], "sin": []}})";
  CHECK(kind_of(text) == ErrorKind::ValidationError);
  CHECK(message_of(text).find("c_max") != std::string::npos);
}

TEST_CASE("exit codes by error kind") {
  CHECK(cli::exit_code_for(ErrorKind::ParseError) == 2);
  CHECK(cli::exit_code_for(ErrorKind::ValidationError) == 2);
  CHECK(cli::exit_code_for(ErrorKind::IoError) == 2);
  CHECK(cli::exit_code_for(ErrorKind::ZoneViolation) == 1);
  CHECK(cli::exit_code_for(ErrorKind::UncertifiedTail) == 1);
}

TEST_CASE("dispatch writes headed artifacts and a manifest") {
  const auto dir = scratch("density");
  auto c = cli::parse_config(R"({"command": "density", "spec": {"kind": "uniform"}, "n": 4, "grid": {"L": 6, "points": 601}})");
  c.output.dir = dir.string();
  const auto r = cli::dispatch(c, {});
  REQUIRE(r.exit_code == 0);
  CHECK(slurp(dir / "density.csv").rfind("x,p,phi,ratio_minus_1\n", 0) == 0);
  const auto d = nlohmann::json::parse(slurp(dir / "density.json"));
  CHECK(std::abs(d["integral"].get<double>() - 1.0) < 1e-6);
  const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
  for (const char* k : {"spec_hash", "config_hash", "versions", "tolerances", "wall_time_s", "outputs"}) CHECK(m.contains(k));
  CHECK(cli::parse_config(m["config"].dump()) == c);
  std::filesystem::remove_all(dir);
}

TEST_CASE("a failing run leaves nothing behind") {
  const auto dir = scratch("fail");
  auto c = cli::parse_config(R"({"command": "llt", "spec": {"kind": "uniform"}, "n": 5})");
  c.output.dir = dir.string();
  const auto r = cli::dispatch(c, {});
  CHECK(r.exit_code == 1);
  CHECK(r.message.find("ZoneViolation") != std::string::npos);
  CHECK_FALSE(std::filesystem::exists(dir));
}
