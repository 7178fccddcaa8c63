#include "levy/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "levy/error.hpp"

namespace levy {

namespace {

using io::Json;

// Collects every schema problem before failing, so one run reports all of
// them.
class SchemaReader {
 public:
  void problem(const std::string& key, const std::string& message) { problems_.push_back(key + ": " + message); }

  void check_keys(const Json& obj, const std::string& prefix, const std::set<std::string>& allowed) {
    std::vector<std::string> unknown;
    for (const auto& [key, value] : obj.items()) {
      if (!allowed.count(key)) unknown.push_back(prefix + key);
    }
    if (!unknown.empty()) {
      std::string list;
      for (const auto& k : unknown) list += (list.empty() ? "" : ", ") + k;
      problems_.push_back("unknown keys: " + list);
    }
  }

  const Json* section(const Json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key)) return nullptr;
    const Json& s = obj.at(key);
    if (!s.is_object()) {
      problem(path, "must be an object");
      return nullptr;
    }
    return &s;
  }

  void number(const Json& obj, const std::string& key, const std::string& path, double& out) {
    if (!obj.contains(key)) return;
    const Json& v = obj.at(key);
    if (!v.is_number()) return problem(path, "must be a number");
    out = v.get<double>();
  }

  template <class Int>
  void integer(const Json& obj, const std::string& key, const std::string& path, Int& out) {
    if (!obj.contains(key)) return;
    const Json& v = obj.at(key);
    if (v.is_number_unsigned()) {
      out = static_cast<Int>(v.get<std::uint64_t>());
    } else if (v.is_number_integer()) {
      const auto x = v.get<std::int64_t>();
      if (x < 0 && std::is_unsigned_v<Int>) return problem(path, "must be >= 0");
      out = static_cast<Int>(x);
    } else {
      problem(path, "must be an integer");
    }
  }

  void boolean(const Json& obj, const std::string& key, const std::string& path, bool& out) {
    if (!obj.contains(key)) return;
    const Json& v = obj.at(key);
    if (!v.is_boolean()) return problem(path, "must be true or false");
    out = v.get<bool>();
  }

  void string(const Json& obj, const std::string& key, const std::string& path, std::string& out) {
    if (!obj.contains(key)) return;
    const Json& v = obj.at(key);
    if (!v.is_string()) return problem(path, "must be a string");
    out = v.get<std::string>();
  }

  void numbers(const Json& obj, const std::string& key, const std::string& path, std::vector<double>& out) {
    if (!obj.contains(key)) return;
    const Json& v = obj.at(key);
    if (!v.is_array()) return problem(path, "must be an array of numbers");
    std::vector<double> tmp;
    for (const auto& x : v) {
      if (!x.is_number()) return problem(path, "must be an array of numbers");
      tmp.push_back(x.get<double>());
    }
    out = std::move(tmp);
  }

  void strings(const Json& obj, const std::string& key, const std::string& path, std::vector<std::string>& out) {
    if (!obj.contains(key)) return;
    const Json& v = obj.at(key);
    if (!v.is_array()) return problem(path, "must be an array of strings");
    std::vector<std::string> tmp;
    for (const auto& x : v) {
      if (!x.is_string()) return problem(path, "must be an array of strings");
      tmp.push_back(x.get<std::string>());
    }
    out = std::move(tmp);
  }

  void finish() const {
    if (problems_.empty()) return;
    std::string msg = "invalid config";
    for (const auto& p : problems_) msg += "\n  " + p;
    throw Error(ErrorKind::schema_error, msg);
  }

 private:
  std::vector<std::string> problems_;
};

RadialLevyMeasure parse_levy(SchemaReader& r, const Json& s) {
  r.check_keys(s, "process.levy.", {"kind", "masses", "scale", "cutoff", "alpha", "upper"});
  RadialLevyMeasure m;
  std::string kind = "zero";
  r.string(s, "kind", "process.levy.kind", kind);
  try {
    m.kind = levy_kind_from_string(kind);
  } catch (const Error&) {
    r.problem("process.levy.kind", "unknown kind '" + kind + "'");
    return m;
  }
  if (s.contains("masses")) {
    const Json& ms = s.at("masses");
    if (!ms.is_array()) {
      r.problem("process.levy.masses", "must be an array of {radius, rate} objects");
    } else {
      for (std::size_t i = 0; i < ms.size(); ++i) {
        const std::string path = "process.levy.masses[" + std::to_string(i) + "]";
        if (!ms[i].is_object()) {
          r.problem(path, "must be an object");
          continue;
        }
        r.check_keys(ms[i], path + ".", {"radius", "rate"});
        PointMass p;
        r.number(ms[i], "radius", path + ".radius", p.radius);
        r.number(ms[i], "rate", path + ".rate", p.rate);
        m.masses.push_back(p);
      }
    }
  }
  r.number(s, "scale", "process.levy.scale", m.scale);
  r.number(s, "cutoff", "process.levy.cutoff", m.cutoff);
  r.number(s, "alpha", "process.levy.alpha", m.alpha);
  r.number(s, "upper", "process.levy.upper", m.upper);
  if (m.kind == LevyKind::point_masses && m.masses.empty()) {
    r.problem("process.levy.masses", "point_masses needs at least one mass");
  }
  try {
    m.validate();
  } catch (const Error& e) {
    r.problem("process.levy", e.what());
  }
  return m;
}

Json levy_json(const RadialLevyMeasure& m) {
  Json j;
  j["kind"] = std::string(to_string(m.kind));
  switch (m.kind) {
    case LevyKind::zero:
      break;
    case LevyKind::point_masses: {
      Json arr = Json::array();
      for (const auto& p : m.masses) arr.push_back({{"radius", p.radius}, {"rate", p.rate}});
      j["masses"] = arr;
      break;
    }
    case LevyKind::exponential:
      j["scale"] = m.scale;
      j["cutoff"] = m.cutoff;
      break;
    case LevyKind::stable_like:
      j["scale"] = m.scale;
      j["alpha"] = m.alpha;
      j["cutoff"] = m.cutoff;
      j["upper"] = m.upper;
      break;
  }
  return j;
}

Json params_json(const ProcessParams& p) {
  Json j;
  j["group"] = std::string(to_string(p.group));
  j["a"] = p.a;
  j["symmetric"] = p.symmetric;
  j["levy"] = levy_json(p.levy);
  j["effective_diffusion"] = p.effective_diffusion();
  return j;
}

Json stats_json(const SampleStats& s) { return {{"mean", s.mean}, {"std_error", s.std_error}}; }

std::string fmt(double x) {
  if (!std::isfinite(x)) return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

Classification combine_radii(const std::vector<BallDecision>& decisions) {
  if (decisions.empty()) return Classification::inconclusive;
  const auto first = decisions.front().classification;
  for (const auto& d : decisions) {
    if (d.classification != first) return Classification::inconclusive;
  }
  return first;
}

Verdict classify_with(const RunConfig& run, const ExponentTable* table) {
  Verdict v;
  const auto sim = run.sim_config();
  v.occupation = potential_estimate(sim);
  for (std::size_t b = 0; b < run.simulation.ball_radii.size(); ++b) {
    v.decisions.push_back(decide(v.occupation.balls[b], run.decision));
  }
  v.probabilistic = combine_radii(v.decisions);
  v.degenerate = run.params.degenerate();

  if (run.params.group == GroupId::SU2) {
    if (v.probabilistic != Classification::recurrent) {
      throw Error(ErrorKind::assertion, "compact group but the occupation channel returned " +
                                            std::string(to_string(v.probabilistic)));
    }
    v.agreement = true;
    if (v.degenerate) {
      v.classification = Classification::inconclusive;
      v.note = "degenerate process (a = 0, no jumps): constant path, excluded from classification";
    } else {
      v.classification = Classification::recurrent;
      v.note = "compact group: single (occupation) channel";
    }
    return v;
  }

  const double cutoff = run.spectral.harmonic_cutoff;
  if (table) {
    v.harmonic = harmonic_evidence(table->params, table->grid, cutoff);
  } else {
    v.harmonic = harmonic_evidence(run.params, run.spectral_grid(), cutoff);
  }
  const bool finite = !v.harmonic->report.divergent;
  if (v.degenerate) {
    v.classification = Classification::inconclusive;
    v.agreement = false;
    v.note = "degenerate process (a = 0, no jumps): constant path, excluded from classification";
  } else if (v.probabilistic == Classification::transient && finite) {
    v.classification = Classification::transient;
    v.agreement = true;
  } else if (v.probabilistic == Classification::recurrent && !finite) {
    v.classification = Classification::recurrent;
    v.agreement = true;
  } else {
    v.classification = Classification::inconclusive;
    v.agreement = false;
    v.note = "channels disagree: occupation " + std::string(to_string(v.probabilistic)) + ", harmonic integral " +
             (finite ? "finite" : "divergent");
  }
  return v;
}

std::string summary_text(const RunConfig& run, const Verdict& v) {
  std::string s;
  auto line = [&](const std::string& x) { s += x + "\n"; };
  line("run: " + run.name + " (group " + std::string(to_string(run.params.group)) + ")");
  line("classification: " + std::string(to_string(v.classification)));
  line(std::string("agreement: ") + (v.agreement ? "yes" : "no"));
  line(std::string("degenerate: ") + (v.degenerate ? "yes" : "no"));
  if (!v.note.empty()) line("note: " + v.note);
  line("");
  line("process: a = " + fmt(run.params.a) + ", effective diffusion = " + fmt(run.params.effective_diffusion()) +
       ", jumps: " + std::string(to_string(run.params.levy.kind)) + " (rate " + fmt(run.params.levy.jump_rate()) +
       "), symmetric = " + (run.params.symmetric ? "yes" : "no"));
  line("simulation: " + std::to_string(run.simulation.n_paths) + " paths, step " + fmt(run.simulation.step) +
       ", seed " + std::to_string(run.simulation.seed));
  line("");
  std::string hz;
  for (double h : v.occupation.horizons) hz += (hz.empty() ? "" : ", ") + fmt(h);
  line("occupation channel: expected time in B_r(m) over horizons " + hz);
  for (std::size_t b = 0; b < v.decisions.size(); ++b) {
    const auto& bs = v.occupation.balls[b];
    std::string row = "  r = " + fmt(bs.ball.radius) + ":";
    for (const auto& o : bs.occupation) row += " " + fmt(o.mean) + " +- " + fmt(o.std_error) + ";";
    row += " slope " + fmt(bs.slope.mean) + " +- " + fmt(bs.slope.std_error) + " -> " +
           std::string(to_string(v.decisions[b].classification));
    line(row);
  }
  line("  escaped paths: " + std::to_string(v.occupation.escaped_paths) + " of " +
       std::to_string(v.occupation.n_paths) + ", mean max distance " + fmt(v.occupation.max_distance.mean));
  line("  verdict: " + std::string(to_string(v.probabilistic)));
  line("");
  if (v.harmonic) {
    const auto& h = *v.harmonic;
    line("harmonic channel: integral of the Plancherel density over Re(eta) on [0, " + fmt(h.cutoff) + "]" +
         (h.via_symmetrization ? " (through the symmetrized exponent)" : ""));
    std::string refs;
    for (double x : h.report.refinement_values) refs += (refs.empty() ? "" : ", ") + fmt(x);
    line("  value " + fmt(h.report.value) + ", mesh refinements " + refs + ", delta " +
         fmt(h.report.grid_refinement_delta) + " -> " + (h.report.divergent ? "divergent" : "finite"));
  } else {
    line("harmonic channel: absent (compact group)");
  }
  line("");
  line("checks instantiated:");
  line("  potential dichotomy: bounded occupation of balls means transience, linear growth means recurrence");
  if (run.params.group == GroupId::SU2) {
    line("  compact recurrence: every process on a compact group is recurrent (asserted)");
  } else {
    line("  harmonic transience: a finite, mesh-stable integral of 1/Re(eta) certifies transience");
    line("  radius independence: the occupation verdict is required to agree for every radius");
  }
  line("");
  line("decision policy (artifact thresholds, overridable):");
  line("  recurrent if the occupation slope exceeds " + fmt(run.decision.recurrent_sigma) + " standard error(s)");
  line("  transient if the last two horizon means differ by less than " + fmt(run.decision.transient_sigma) +
       " standard error(s)");
  line("  harmonic integral divergent if Re(eta) <= 0 on the mesh, the integrand exceeds 1e12, or the");
  line("  refinement delta fails to halve when the mesh is halved");
  return s;
}

}  // namespace

SimConfig RunConfig::sim_config() const {
  SimConfig c;
  c.params = params;
  c.horizon = simulation.horizon;
  c.step = simulation.step;
  c.n_paths = simulation.n_paths;
  c.seed = simulation.seed;
  c.ball_radii = simulation.ball_radii;
  c.base = base_point(params.group);
  c.escape_margin = simulation.escape_margin < 0.0 ? default_escape_margin(params.group) : simulation.escape_margin;
  return c;
}

SpectralGrid RunConfig::spectral_grid() const {
  SpectralGridOptions o;
  o.lambda_max = spectral.lambda_max;
  o.n_nodes = spectral.n_lambda;
  o.k_order = spectral.k_order;
  return SpectralGrid::make(o);
}

RadialGrid RunConfig::radial_grid() const { return RadialGrid::make(spectral.t_max, spectral.n_radial); }

RunConfig parse_run_config(const Json& doc) {
  SchemaReader r;
  RunConfig c;
  if (!doc.is_object()) {
    r.problem("<root>", "config must be a JSON object");
    r.finish();
  }
  r.check_keys(doc, "", {"schema_version", "name", "group", "process", "simulation", "spectral", "decision", "output"});
  if (!doc.contains("schema_version")) {
    r.problem("schema_version", "is required");
  } else {
    r.integer(doc, "schema_version", "schema_version", c.schema_version);
    if (c.schema_version != kSchemaVersion) {
      r.problem("schema_version", "unsupported version " + std::to_string(c.schema_version) + " (expected " +
                                      std::to_string(kSchemaVersion) + ")");
    }
  }
  r.string(doc, "name", "name", c.name);
  std::string group = "SL2R";
  if (!doc.contains("group")) {
    r.problem("group", "is required");
  } else {
    r.string(doc, "group", "group", group);
    try {
      c.params.group = group_from_string(group);
    } catch (const Error&) {
      r.problem("group", "unknown group '" + group + "' (expected SL2R or SU2)");
    }
  }

  if (const Json* p = r.section(doc, "process", "process")) {
    r.check_keys(*p, "process.", {"a", "symmetric", "levy"});
    r.number(*p, "a", "process.a", c.params.a);
    if (!(std::isfinite(c.params.a) && c.params.a >= 0.0)) r.problem("process.a", "must be >= 0");
    r.boolean(*p, "symmetric", "process.symmetric", c.params.symmetric);
    if (const Json* l = r.section(*p, "levy", "process.levy")) c.params.levy = parse_levy(r, *l);
  }

  auto& sim = c.simulation;
  if (c.params.group == GroupId::SL2R && c.params.levy.kind != LevyKind::zero && c.params.a == 0.0) sim.step = 1e-2;
  if (const Json* s = r.section(doc, "simulation", "simulation")) {
    r.check_keys(*s, "simulation.", {"horizon", "step", "n_paths", "seed", "ball_radii", "escape_margin"});
    r.number(*s, "horizon", "simulation.horizon", sim.horizon);
    r.number(*s, "step", "simulation.step", sim.step);
    r.integer(*s, "n_paths", "simulation.n_paths", sim.n_paths);
    r.integer(*s, "seed", "simulation.seed", sim.seed);
    r.numbers(*s, "ball_radii", "simulation.ball_radii", sim.ball_radii);
    r.number(*s, "escape_margin", "simulation.escape_margin", sim.escape_margin);
  }
  if (!(std::isfinite(sim.horizon) && sim.horizon > 0.0)) r.problem("simulation.horizon", "must be > 0");
  if (!(sim.step > 0.0 && sim.step <= sim.horizon)) r.problem("simulation.step", "must satisfy 0 < step <= horizon");
  if (sim.n_paths < 1) r.problem("simulation.n_paths", "must be >= 1");
  if (sim.ball_radii.empty()) r.problem("simulation.ball_radii", "needs at least one radius");
  for (double x : sim.ball_radii) {
    if (!(x > 0.0)) r.problem("simulation.ball_radii", "radii must be > 0");
  }

  auto& sp = c.spectral;
  if (const Json* s = r.section(doc, "spectral", "spectral")) {
    r.check_keys(*s, "spectral.", {"lambda_max", "n_lambda", "t_max", "n_radial", "k_order", "harmonic_cutoff"});
    r.number(*s, "lambda_max", "spectral.lambda_max", sp.lambda_max);
    r.integer(*s, "n_lambda", "spectral.n_lambda", sp.n_lambda);
    r.number(*s, "t_max", "spectral.t_max", sp.t_max);
    r.integer(*s, "n_radial", "spectral.n_radial", sp.n_radial);
    r.integer(*s, "k_order", "spectral.k_order", sp.k_order);
    r.number(*s, "harmonic_cutoff", "spectral.harmonic_cutoff", sp.harmonic_cutoff);
  }
  if (!(sp.lambda_max > 0.0)) r.problem("spectral.lambda_max", "must be > 0");
  if (sp.n_lambda < 3) r.problem("spectral.n_lambda", "must be >= 3");
  if (!(sp.t_max > 0.0)) r.problem("spectral.t_max", "must be > 0");
  if (sp.n_radial < 2 || sp.n_radial % 2 != 0) r.problem("spectral.n_radial", "must be even and >= 2");
  if (sp.k_order < 16) r.problem("spectral.k_order", "must be >= 16");
  if (!(sp.harmonic_cutoff > 0.0 && sp.harmonic_cutoff <= sp.lambda_max)) {
    r.problem("spectral.harmonic_cutoff", "must lie in (0, lambda_max]");
  }

  if (const Json* s = r.section(doc, "decision", "decision")) {
    r.check_keys(*s, "decision.", {"recurrent_sigma", "transient_sigma"});
    r.number(*s, "recurrent_sigma", "decision.recurrent_sigma", c.decision.recurrent_sigma);
    r.number(*s, "transient_sigma", "decision.transient_sigma", c.decision.transient_sigma);
  }
  if (!(c.decision.recurrent_sigma > 0.0)) r.problem("decision.recurrent_sigma", "must be > 0");
  if (!(c.decision.transient_sigma > 0.0)) r.problem("decision.transient_sigma", "must be > 0");

  if (const Json* s = r.section(doc, "output", "output")) {
    r.check_keys(*s, "output.", {"dir", "formats"});
    r.string(*s, "dir", "output.dir", c.output.dir);
    r.strings(*s, "formats", "output.formats", c.output.formats);
  }
  for (const auto& f : c.output.formats) {
    if (f != "json" && f != "csv" && f != "txt") r.problem("output.formats", "unknown format '" + f + "'");
  }
  r.finish();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& file) {
  const std::string text = io::read_file(file);
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorKind::schema_error, file.string() + " is not valid JSON: " + e.what());
  }
  return parse_run_config(doc);
}

Json to_json(const RunConfig& c) {
  Json j;
  j["schema_version"] = c.schema_version;
  j["name"] = c.name;
  j["group"] = std::string(to_string(c.params.group));
  j["process"] = {{"a", c.params.a}, {"symmetric", c.params.symmetric}, {"levy", levy_json(c.params.levy)}};
  j["simulation"] = {{"horizon", c.simulation.horizon},       {"step", c.simulation.step},
                     {"n_paths", c.simulation.n_paths},       {"seed", c.simulation.seed},
                     {"ball_radii", c.simulation.ball_radii}, {"escape_margin", c.simulation.escape_margin}};
  j["spectral"] = {{"lambda_max", c.spectral.lambda_max}, {"n_lambda", c.spectral.n_lambda},
                   {"t_max", c.spectral.t_max},           {"n_radial", c.spectral.n_radial},
                   {"k_order", c.spectral.k_order},       {"harmonic_cutoff", c.spectral.harmonic_cutoff}};
  j["decision"] = {{"recurrent_sigma", c.decision.recurrent_sigma}, {"transient_sigma", c.decision.transient_sigma}};
  j["output"] = {{"dir", c.output.dir}, {"formats", c.output.formats}};
  return j;
}

void apply_override(Json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw Error(ErrorKind::schema_error, "override '" + std::string(assignment) + "' is not key=value");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  Json value;
  try {
    value = Json::parse(text);
  } catch (const std::exception&) {
    value = text;
  }
  Json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw Error(ErrorKind::schema_error, "override key '" + key + "' has an empty component");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    if (!node->contains(part)) (*node)[part] = Json::object();
    node = &(*node)[part];
    if (!node->is_object()) throw Error(ErrorKind::schema_error, "override key '" + key + "' crosses a non-object");
    start = dot + 1;
  }
}

std::vector<std::string> preset_names() {
  return {"su2-diffusion",      "sl2r-diffusion", "sl2r-compound-poisson",
          "sl2r-diffusion-jumps", "sl2r-stable",  "sl2r-asymmetric"};
}

Json preset_document(std::string_view name) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["name"] = std::string(name);
  if (name == "su2-diffusion") {
    j["group"] = "SU2";
    j["process"] = {{"a", 1.0}, {"levy", {{"kind", "zero"}}}};
  } else if (name == "sl2r-diffusion") {
    j["group"] = "SL2R";
    j["process"] = {{"a", 1.0}, {"levy", {{"kind", "zero"}}}};
  } else if (name == "sl2r-compound-poisson") {
    j["group"] = "SL2R";
    j["process"] = {{"a", 0.0},
                    {"levy", {{"kind", "point_masses"}, {"masses", Json::array({{{"radius", 1.0}, {"rate", 1.0}}})}}}};
    j["simulation"] = {{"step", 1e-2}};
  } else if (name == "sl2r-diffusion-jumps") {
    j["group"] = "SL2R";
    j["process"] = {{"a", 0.5}, {"levy", {{"kind", "exponential"}, {"scale", 1.0}, {"cutoff", 0.0}}}};
  } else if (name == "sl2r-stable") {
    j["group"] = "SL2R";
    j["process"] = {
        {"a", 0.0},
        {"levy", {{"kind", "stable_like"}, {"scale", 1.0}, {"alpha", 1.0}, {"cutoff", 0.05}, {"upper", 3.0}}}};
    j["simulation"] = {{"step", 1e-2}};
  } else if (name == "sl2r-asymmetric") {
    j["group"] = "SL2R";
    j["process"] = {{"a", 0.25},
                    {"symmetric", false},
                    {"levy",
                     {{"kind", "point_masses"},
                      {"masses", Json::array({{{"radius", 0.5}, {"rate", 1.0}}, {{"radius", 2.0}, {"rate", 0.25}}})}}}};
  } else {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw Error(ErrorKind::schema_error, "unknown preset '" + std::string(name) + "' (known: " + known + ")");
  }
  return j;
}

HarmonicEvidence harmonic_evidence(const ProcessParams& params, const SpectralGrid& grid, double cutoff) {
  HarmonicEvidence h;
  h.cutoff = cutoff;
  if (params.symmetric) {
    h.report = harmonic_transience_integral(exponent_table(params, grid), cutoff);
    return h;
  }
  // Re(eta) = eta_sym / 2, so the integral of 1 / Re(eta) is twice that of
  // 1 / eta_sym.
  h.via_symmetrization = true;
  h.report = harmonic_transience_integral(exponent_table(symmetrize(params), grid), cutoff);
  h.report.value *= 2.0;
  h.report.grid_refinement_delta *= 2.0;
  h.report.tail_estimate *= 2.0;
  for (double& v : h.report.refinement_values) v *= 2.0;
  return h;
}

Verdict classify(const RunConfig& run) { return classify_with(run, nullptr); }

double compact_set_potential(const RunConfig& run, const Verdict& verdict, std::span<const Ball> cover) {
  if (verdict.classification == Classification::recurrent || verdict.probabilistic == Classification::recurrent) {
    throw Error(ErrorKind::not_applicable, "compact-set potentials are infinite for recurrent processes");
  }
  if (cover.empty()) return 0.0;
  SimConfig sim = run.sim_config();
  sim.ball_radii.clear();
  std::vector<Ball> balls;
  for (const auto& b : cover) {
    // Translate the base point onto each center with a transitivity witness.
    const GroupElement sigma = transitivity_witness(sim.base, b.center);
    const Point center = act(sigma, sim.base);
    if (!same_point(center, b.center)) {
      throw Error(ErrorKind::assertion, "transitivity witness missed a cover center");
    }
    balls.push_back({center, b.radius});
  }
  const auto stats = potential_estimate(sim, balls);
  double total = 0.0;
  for (const auto& bs : stats.balls) total += bs.occupation.back().mean;
  return total;
}

Json energy_json(const EnergyReport& r) {
  Json j;
  j["value"] = r.divergent ? Json(nullptr) : Json(r.value);
  j["divergent"] = r.divergent;
  j["tail_estimate"] = r.tail_estimate;
  j["grid_refinement_delta"] = r.grid_refinement_delta;
  j["refinement_values"] = r.refinement_values;
  return j;
}

Json occupation_json(const OccupationStats& stats) {
  Json j;
  j["horizons"] = stats.horizons;
  j["n_paths"] = stats.n_paths;
  j["escaped_paths"] = stats.escaped_paths;
  j["total_jumps"] = stats.total_jumps;
  j["max_distance"] = stats_json(stats.max_distance);
  j["max_distance_overall"] = stats.max_distance_overall;
  Json balls = Json::array();
  for (const auto& b : stats.balls) {
    Json bj;
    bj["radius"] = b.ball.radius;
    Json occ = Json::array();
    for (std::size_t k = 0; k < b.occupation.size(); ++k) {
      occ.push_back({{"horizon", stats.horizons[k]}, {"mean", b.occupation[k].mean},
                     {"std_error", b.occupation[k].std_error}});
    }
    bj["occupation"] = occ;
    bj["slope"] = stats_json(b.slope);
    bj["last_exit"] = stats_json(b.last_exit);
    balls.push_back(bj);
  }
  j["balls"] = balls;
  return j;
}

Json verdict_json(const RunConfig& run, const Verdict& v) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["name"] = run.name;
  j["group"] = std::string(to_string(run.params.group));
  j["classification"] = std::string(to_string(v.classification));
  j["agreement"] = v.agreement;
  j["degenerate"] = v.degenerate;
  j["note"] = v.note;
  Json prob = occupation_json(v.occupation);
  prob["classification"] = std::string(to_string(v.probabilistic));
  for (std::size_t b = 0; b < v.decisions.size(); ++b) {
    prob["balls"][b]["recurrent_signal"] = v.decisions[b].recurrent_signal;
    prob["balls"][b]["transient_signal"] = v.decisions[b].transient_signal;
    prob["balls"][b]["classification"] = std::string(to_string(v.decisions[b].classification));
  }
  j["probabilistic"] = prob;
  if (v.harmonic) {
    Json h = energy_json(v.harmonic->report);
    h["cutoff"] = v.harmonic->cutoff;
    h["via_symmetrization"] = v.harmonic->via_symmetrization;
    j["harmonic"] = h;
  } else {
    j["harmonic"] = nullptr;
  }
  j["thresholds"] = {{"recurrent_sigma", run.decision.recurrent_sigma},
                     {"transient_sigma", run.decision.transient_sigma},
                     {"divergence_integrand_limit", kDivergenceIntegrandLimit},
                     {"policy", "artifact thresholds, not derived from theory"}};
  j["config"] = to_json(run);
  return j;
}

std::string exponent_csv(const ExponentTable& table) {
  Json header;
  header["table"] = "exponent";
  header["params"] = params_json(table.params);
  header["grid"] = {{"lambda_max", table.grid.lambda_max()}, {"n_nodes", table.grid.size()},
                    {"rho", table.grid.rho()},               {"kappa", table.grid.kappa()},
                    {"k_order", table.grid.k_order()}};
  io::CsvTable csv(header, {"lambda", "re_eta", "im_eta", "beta"});
  const auto nodes = table.grid.nodes();
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    csv.add_row({nodes[j], table.eta[j].real(), table.eta[j].imag(), table.beta[j]});
  }
  return csv.str();
}

std::string occupation_csv(const RunConfig& run, const OccupationStats& stats) {
  Json header;
  header["table"] = "occupation";
  header["name"] = run.name;
  header["group"] = std::string(to_string(run.params.group));
  header["n_paths"] = stats.n_paths;
  header["step"] = run.simulation.step;
  header["seed"] = run.simulation.seed;
  io::CsvTable csv(header, {"radius", "horizon", "mean", "std_error"});
  for (const auto& b : stats.balls) {
    for (std::size_t k = 0; k < b.occupation.size(); ++k) {
      csv.add_row({b.ball.radius, stats.horizons[k], b.occupation[k].mean, b.occupation[k].std_error});
    }
  }
  return csv.str();
}

std::string harmonic_csv(const RunConfig& run, const ExponentTable& table) {
  const double cutoff = run.spectral.harmonic_cutoff;
  Json header;
  header["table"] = "harmonic_integrand";
  header["name"] = run.name;
  header["cutoff"] = cutoff;
  header["kappa"] = table.grid.kappa();
  header["via_symmetrization"] = !table.params.symmetric;
  // Non-symmetric params are tabulated through Re(eta) = eta_sym / 2.
  ExponentTable source = table.params.symmetric ? table : exponent_table(symmetrize(table.params), table.grid);
  if (!table.params.symmetric) {
    for (auto& e : source.eta) e *= 0.5;
  }
  const auto h = harmonic_integrand(source, cutoff);
  io::CsvTable csv(header, {"lambda", "density", "re_eta", "integrand"});
  for (std::size_t j = 0; j < h.lambda.size(); ++j) csv.add_row({h.lambda[j], h.density[j], h.re_eta[j], h.integrand[j]});
  return csv.str();
}

std::string spectral_csv(const RunConfig& run, const SpectralGrid& grid, const SpectralVector& v) {
  Json header;
  header["table"] = "spherical_transform";
  header["name"] = run.name;
  header["grid"] = {{"lambda_max", grid.lambda_max()}, {"n_nodes", grid.size()}, {"kappa", grid.kappa()}};
  io::CsvTable csv(header, {"lambda", "weight", "re", "im"});
  const auto nodes = grid.nodes();
  const auto w = grid.weights();
  for (std::size_t j = 0; j < nodes.size(); ++j) csv.add_row({nodes[j], w[j], v.values[j].real(), v.values[j].imag()});
  return csv.str();
}

Report build_report(const RunConfig& run) {
  Report rep;
  if (run.params.group == GroupId::SL2R) rep.table = exponent_table(run.params, run.spectral_grid());
  rep.verdict = classify_with(run, rep.table ? &*rep.table : nullptr);
  auto wants = [&](const char* f) {
    return std::find(run.output.formats.begin(), run.output.formats.end(), f) != run.output.formats.end();
  };
  if (wants("json")) rep.files.emplace_back("verdict.json", verdict_json(run, rep.verdict).dump(2) + "\n");
  if (wants("csv")) {
    if (rep.table) rep.files.emplace_back("exponent.csv", exponent_csv(*rep.table));
    rep.files.emplace_back("occupation.csv", occupation_csv(run, rep.verdict.occupation));
    if (rep.table) rep.files.emplace_back("harmonic.csv", harmonic_csv(run, *rep.table));
  }
  if (wants("txt")) rep.files.emplace_back("summary.txt", summary_text(run, rep.verdict));
  return rep;
}

std::vector<std::filesystem::path> write_report(const Report& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io_error, "cannot create output directory " + dir.string());
  std::vector<std::filesystem::path> out;
  for (const auto& [name, content] : report.files) {
    io::atomic_write(dir / name, content);
    out.push_back(dir / name);
  }
  return out;
}

}  // namespace levy
