#include <chrono>
#include <fstream>
#include <system_error>

#include "subgauss/cli.hpp"
#include "subgauss/diag.hpp"
#include "subgauss/div.hpp"
#include "subgauss/fft.hpp"
#include "subgauss/llt.hpp"

namespace subgauss::cli {

using nlohmann::json;

namespace {

struct Artifact {
  std::string name;
  std::string body;
};

class Outputs {
 public:
  Outputs(const ExperimentConfig& c) : csv_(has(c, "csv")), json_(has(c, "json")) {}
  void csv(std::string name, std::string body) {
    if (csv_) items.push_back({std::move(name), std::move(body)});
  }
  void json_doc(std::string name, const json& doc) {
    if (json_) items.push_back({std::move(name), doc.dump(2) + "\n"});
  }
  void text(std::string name, std::string body) { items.push_back({std::move(name), std::move(body)}); }
  std::vector<Artifact> items;

 private:
  static bool has(const ExperimentConfig& c, const char* f) {
    return std::find(c.output.formats.begin(), c.output.formats.end(), f) != c.output.formats.end();
  }
  bool csv_, json_;
};

conv::OutputGrid output_grid(const GridParams& g, double half_width) {
  const long half_points = (g.points - 1) / 2;
  const double dx = g.L / static_cast<double>(half_points);
  return {dx, static_cast<long>(std::ceil(half_width / dx - 1e-9))};
}

json spec_summary(const dist::DistributionSpec& spec) {
  json j{{"spec", spec.to_json()}, {"spec_id", spec.id()}, {"kind", spec.kind()}, {"symmetric", spec.is_symmetric()}};
  const double s = spec.support_halfwidth();
  j["support_halfwidth"] = std::isfinite(s) ? json(s) : json(nullptr);
  if (const auto* t = spec.as<dist::TrigGaussian>()) {
    const auto [c_min, c_max] = dist::admissible_c_range(t->poly);
    j["c_max"] = c_max;
    j["c_min"] = c_min;
  }
  if (!spec.is_normal()) {
    const auto cum = dist::moments_and_cumulants(spec, 8);
    j["cumulants"] = cum.gamma;
    j["beta3"] = cum.beta3;
    j["max_density"] = cum.max_density;
    j["first_nonzero_cumulant"] =
        cum.first_nonzero ? json{{"m", cum.first_nonzero->first}, {"gamma", cum.first_nonzero->second}} : json(nullptr);
  }
  return j;
}

double grid_integral(const conv::SumDensity& s, const conv::OutputGrid& g) {
  std::vector<double> v;
  for (long j = -g.half_count; j <= g.half_count; ++j) {
    const double w = (j == -g.half_count || j == g.half_count) ? 0.5 : 1.0;
    v.push_back(w * s.density(g.x(j)));
  }
  return pairwise_sum(v) * g.dx;
}

void run_command(const ExperimentConfig& c, const RunOptions& opt, Outputs& out) {
  const auto spec = dist::DistributionSpec::from_json(c.spec);
  if (c.command == "construct") {
    out.json_doc("spec.json", spec_summary(spec));
    out.csv("profile.csv", tilt::profile_csv(diag::diagnostic_profile(spec)));
    if (const auto* t = spec.as<dist::TrigGaussian>(); t && !spec.is_normal()) {
      const auto dev = dist::trig_deviation(*t);
      out.csv("coefficients.csv", conv::spectral_coefficients_csv(*dev.as<dist::SpectralForm>()));
    } else if (!spec.is_normal()) {
      const auto g = output_grid(c.grid, c.grid.L);
      out.csv("density.csv", conv::sum_density_csv(conv::density_zn(spec, 1, g), g));
    }
  } else if (c.command == "diagnose") {
    const auto rep = diag::diagnose(spec);
    out.json_doc("diagnostics.json", diag::to_json(rep));
    out.text("verdict.txt", diag::verdict_table(rep));
  } else if (c.command == "density") {
    if (spec.is_normal()) throw Error(ErrorKind::MethodUnavailable, "the normal law needs no density route");
    const auto g = output_grid(c.grid, c.grid.L);
    const auto s = conv::density_zn(spec, c.n, g);
    out.csv("density.csv", conv::sum_density_csv(s, g));
    out.json_doc("density.json", {{"spec_id", spec.id()},
                                  {"n", c.n},
                                  {"method", conv::to_string(s.method)},
                                  {"accuracy", s.accuracy},
                                  {"integral", grid_integral(s, g)},
                                  {"clipped_nodes", div::clipped_nodes(s)}});
  } else if (c.command == "divergence") {
    if (spec.is_normal()) throw Error(ErrorKind::MethodUnavailable, "every divergence of the normal law from itself is 0");
    const auto tb = div::make_tail_bound(spec, c.n);
    const auto g = output_grid(c.grid, div::certified_half_width(tb, c.grid.L));
    const auto s = conv::density_zn(spec, c.n, g);
    auto rep = div::divergence_report(s, c.alphas, &tb);
    out.csv("divergence.csv", div::to_csv(rep));
    auto j = div::to_json(rep);
    j["spec_id"] = spec.id();
    j["n"] = c.n;
    j["method"] = conv::to_string(s.method);
    out.json_doc("divergence.json", j);
  } else if (c.command == "sweep") {
    const auto s = sweep::run_sweep(spec, c.n_list, opt.threads, c.tolerances);
    out.csv("sweep.csv", sweep::to_csv(s));
    out.json_doc("sweep.json", sweep::to_json(s));
  } else if (c.command == "llt") {
    llt::LltReport r;
    r.gap = llt::uniform_llt_gap(spec, c.n_list);
    r.tilted = llt::tilted_llt_check(spec, c.n, c.a);
    if (!spec.is_normal()) {
      r.cramer = llt::cramer_coeffs(dist::moments_and_cumulants(spec, 8));
      r.richter = llt::richter_fit(spec, c.n_list, c.window_scale, c.with_cubic);
      r.log_cube = llt::log_cube_check(spec, c.n_list, c.tau0);
    }
    out.csv("tilted.csv", llt::tilted_csv(r.tilted));
    auto j = llt::to_json(r);
    j["spec_id"] = spec.id();
    out.json_doc("llt.json", j);
  }
}

void write_file(const std::filesystem::path& p, const std::string& body) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  f << body;
  f.close();
  if (!f) throw Error(ErrorKind::IoError, "cannot write '" + p.string() + "'");
}

}  // namespace

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::ValidationError:
    case ErrorKind::RejectsNonStandardized:
    case ErrorKind::RejectsInadmissibleC:
    case ErrorKind::IoError:
      return 2;
    default:
      return 1;
  }
}

RunResult dispatch(const ExperimentConfig& c, const RunOptions& opt) {
  RunResult res;
  const auto t0 = std::chrono::steady_clock::now();
  const std::filesystem::path dir(c.output.dir);
  std::error_code ec;
  const bool existed = std::filesystem::exists(dir, ec);
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    res.exit_code = 2;
    res.message = "IoError: output directory '" + dir.string() + "' is not usable";
    return res;
  }
  Outputs out(c);
  try {
    run_command(c, opt, out);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json versions{{"subgauss-lab", kToolVersion},
                  {"fftw", fft::backend_version()},
                  {"linalg", linalg_version()},
                  {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) +
                                        "." + std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
    for (const auto& [k, v] : opt.extra_versions) versions[k] = v;
    json names = json::array();
    for (const auto& a : out.items) names.push_back(a.name);
    const json manifest{{"command", c.command},
                        {"spec_id", dist::DistributionSpec::from_json(c.spec).id()},
                        {"spec_hash", fnv1a_hex(c.spec.dump())},
                        {"config_hash", fnv1a_hex(serialize(c).dump())},
                        {"config", serialize(c)},
                        {"versions", versions},
                        {"tolerances", serialize(c)["tolerances"]},
                        {"threads", opt.threads},
                        {"wall_time_s", wall},
                        {"outputs", names}};
    out.items.push_back({"manifest.json", manifest.dump(2) + "\n"});
    for (const auto& a : out.items) {
      write_file(dir / a.name, a.body);
      res.outputs.push_back(dir / a.name);
    }
  } catch (const Error& e) {
    res.exit_code = exit_code_for(e.kind());
    res.message = e.what();
  } catch (const std::exception& e) {
    res.exit_code = 1;
    res.message = e.what();
  }
  if (res.exit_code != 0) {
    for (const auto& p : res.outputs) std::filesystem::remove(p, ec);
    res.outputs.clear();
    if (!existed) std::filesystem::remove(dir, ec);  // only succeeds when empty
  }
  return res;
}

}  // namespace subgauss::cli
