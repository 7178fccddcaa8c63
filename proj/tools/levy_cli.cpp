// Batch front end: exponent tables, spherical transforms, simulation,
// classification and full reports from a config file or a named preset.

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "levy/classifier.hpp"
#include "levy/error.hpp"

namespace {

using levy::io::Json;

enum ExitCode { kOk = 0, kOther = 1, kInvalid = 2, kDivergence = 3, kIo = 4 };

int exit_code(levy::ErrorKind kind) {
  switch (kind) {
    case levy::ErrorKind::schema_error:
    case levy::ErrorKind::invalid_argument:
    case levy::ErrorKind::measure_invalid:
    case levy::ErrorKind::unsupported_group:
    case levy::ErrorKind::requires_symmetric:
    case levy::ErrorKind::not_applicable:
      return kInvalid;
    case levy::ErrorKind::divergence:
    case levy::ErrorKind::decay_error:
      return kDivergence;
    case levy::ErrorKind::io_error:
      return kIo;
    case levy::ErrorKind::assertion:
      return kOther;
  }
  return kOther;
}

struct Options {
  std::string config;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::vector<std::string> overrides;
  std::string input;
  std::string path_file;
};

levy::RunConfig load(const Options& o) {
  if (o.config.empty() == o.preset.empty()) {
    throw levy::Error(levy::ErrorKind::schema_error, "give exactly one of --config or --preset");
  }
  Json doc;
  if (!o.config.empty()) {
    const std::string text = levy::io::read_file(o.config);
    try {
      doc = Json::parse(text);
    } catch (const std::exception& e) {
      throw levy::Error(levy::ErrorKind::schema_error, o.config + " is not valid JSON: " + e.what());
    }
  } else {
    doc = levy::preset_document(o.preset);
  }
  for (const auto& ov : o.overrides) levy::apply_override(doc, ov);
  if (o.seed) levy::apply_override(doc, "simulation.seed=" + std::to_string(*o.seed));
  return levy::parse_run_config(doc);
}

std::filesystem::path out_dir(const Options& o, const levy::RunConfig& run) {
  return o.out.empty() ? std::filesystem::path(run.output.dir) : std::filesystem::path(o.out);
}

void write_files(const std::filesystem::path& dir, const std::vector<std::pair<std::string, std::string>>& files) {
  levy::Report r;
  r.files = files;
  for (const auto& p : levy::write_report(r, dir)) std::cout << "wrote " << p.string() << "\n";
}

levy::RadialFunction input_function(const Options& o, const levy::RadialGrid& grid) {
  if (o.input.empty()) return levy::gaussian_bump(grid, 0.5);
  const auto csv = levy::io::parse_csv(levy::io::read_file(o.input));
  auto col = [&](const std::string& name) {
    const auto it = std::find(csv.columns.begin(), csv.columns.end(), name);
    if (it == csv.columns.end()) {
      throw levy::Error(levy::ErrorKind::schema_error, o.input + " needs columns 'radius' and 'value'");
    }
    return static_cast<std::size_t>(it - csv.columns.begin());
  };
  const std::size_t ri = col("radius");
  const std::size_t vi = col("value");
  std::vector<double> r;
  std::vector<double> v;
  for (const auto& row : csv.rows) {
    if (!r.empty() && !(row[ri] > r.back())) {
      throw levy::Error(levy::ErrorKind::schema_error, o.input + ": radii must be strictly increasing");
    }
    r.push_back(row[ri]);
    v.push_back(row[vi]);
  }
  if (r.size() < 2) throw levy::Error(levy::ErrorKind::schema_error, o.input + " needs at least two rows");
  // Piecewise linear in the radius, zero beyond the last sample.
  auto f = [r, v](double t) {
    if (t < r.front() || t > r.back()) return 0.0;
    const auto it = std::upper_bound(r.begin(), r.end(), t);
    if (it == r.end()) return v.back();
    const std::size_t k = static_cast<std::size_t>(it - r.begin());
    const double s = (t - r[k - 1]) / (r[k] - r[k - 1]);
    return v[k - 1] + s * (v[k] - v[k - 1]);
  };
  return levy::RadialFunction::from_function(grid, f, r.back());
}

int run_exponent(const Options& o) {
  const auto run = load(o);
  const auto table = levy::exponent_table(run.params, run.spectral_grid());
  const auto cos = levy::cosine_form_report(table);
  Json j;
  j["name"] = run.name;
  j["growth_bound_ratio"] = levy::growth_bound_ratio(table);
  j["cosine_form"] = {{"max_abs_difference", cos.max_abs_difference},
                      {"max_relative_difference", cos.max_relative_difference},
                      {"status", "report only"}};
  write_files(out_dir(o, run), {{"exponent.csv", levy::exponent_csv(table)}, {"exponent.json", j.dump(2) + "\n"}});
  return kOk;
}

int run_transform(const Options& o) {
  const auto run = load(o);
  const auto grid = run.spectral_grid();
  const auto f = input_function(o, run.radial_grid());
  const auto f_hat = levy::spherical_transform(f, grid);
  const auto p = levy::parseval(f, f, grid);
  std::cout << "norm^2 (radial) " << levy::io::format_double(p.lhs) << ", (spectral) "
            << levy::io::format_double(p.rhs) << "\n";
  write_files(out_dir(o, run), {{"spectral.csv", levy::spectral_csv(run, grid, f_hat)}});
  return kOk;
}

int run_simulate(const Options& o) {
  const auto run = load(o);
  const auto sim = run.sim_config();
  const auto stats = levy::potential_estimate(sim);
  Json j = levy::occupation_json(stats);
  const auto dir = out_dir(o, run);
  write_files(dir, {{"occupation.csv", levy::occupation_csv(run, stats)}, {"occupation.json", j.dump(2) + "\n"}});
  if (!o.path_file.empty()) {
    levy::write_path_file(o.path_file, levy::simulate_path(sim, 0));
    std::cout << "wrote " << o.path_file << "\n";
  }
  return kOk;
}

int finish_verdict(const levy::Verdict& v) {
  std::cout << "classification: " << levy::to_string(v.classification) << "\n";
  if (v.harmonic && v.harmonic->report.divergent) {
    std::cerr << "divergence: harmonic integral did not converge under mesh refinement\n";
    return kDivergence;
  }
  return kOk;
}

int run_classify(const Options& o) {
  const auto run = load(o);
  const auto v = levy::classify(run);
  write_files(out_dir(o, run), {{"verdict.json", levy::verdict_json(run, v).dump(2) + "\n"}});
  return finish_verdict(v);
}

int run_report(const Options& o) {
  const auto run = load(o);
  const auto report = levy::build_report(run);
  levy::write_report(report, out_dir(o, run));
  for (const auto& [name, content] : report.files) std::cout << "wrote " << (out_dir(o, run) / name).string() << "\n";
  return finish_verdict(report.verdict);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recurrence and transience of bi-invariant Levy processes on SL(2,R) and SU(2)"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON run config");
    sub->add_option("--preset", o.preset, "named preset");
    sub->add_option("--seed", o.seed, "RNG seed (overrides simulation.seed)");
    sub->add_option("--out", o.out, "output directory (overrides output.dir)");
    sub->add_option("--override", o.overrides, "dotted.key=value, repeatable")->take_all();
  };
  auto* exponent = app.add_subcommand("exponent", "tabulate the exponent on the spectral grid");
  auto* transform = app.add_subcommand("transform", "spherical transform of a radial function");
  auto* simulate = app.add_subcommand("simulate", "occupation statistics from simulated paths");
  auto* classify = app.add_subcommand("classify", "verdict from both channels");
  auto* report = app.add_subcommand("report", "verdict, tables and summary");
  auto* presets = app.add_subcommand("presets", "list preset names");
  for (auto* s : {exponent, transform, simulate, classify, report}) add_common(s);
  transform->add_option("--input", o.input, "CSV with columns radius,value (default: Gaussian bump, width 0.5)");
  simulate->add_option("--path-file", o.path_file, "write path 0 in the binary path format");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (*exponent) return run_exponent(o);
    if (*transform) return run_transform(o);
    if (*simulate) return run_simulate(o);
    if (*classify) return run_classify(o);
    if (*report) return run_report(o);
    if (*presets) {
      for (const auto& n : levy::preset_names()) std::cout << n << "\n";
      return kOk;
    }
  } catch (const levy::Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
  return kOther;
}
