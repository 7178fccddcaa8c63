#include <doctest.h>

#include <filesystem>

#include "levy/classifier.hpp"
#include "levy/error.hpp"

using namespace levy;
using io::Json;

namespace {

RunConfig preset(const std::string& name, std::vector<std::string> overrides = {}) {
  Json doc = preset_document(name);
  for (const auto& o : overrides) apply_override(doc, o);
  return parse_run_config(doc);
}

std::string schema_message(const Json& doc) {
  try {
    (void)parse_run_config(doc);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::schema_error) return e.what();
    return "wrong kind: " + std::string(e.what());
  }
  return "";
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_SUITE("classifier") {
  TEST_CASE("config defaults and round trip") {
    const Json minimal = {{"schema_version", 1}, {"group", "SU2"}};
    const auto c = parse_run_config(minimal);
    CHECK(c.params.group == GroupId::SU2);
    CHECK(c.params.a == 0.0);
    CHECK(c.simulation.ball_radii == std::vector<double>{0.5, 1.0, 2.0});
    CHECK(c.sim_config().escape_margin == default_escape_margin(GroupId::SU2));
    for (const auto& name : preset_names()) {
      const auto run = preset(name);
      CHECK(to_json(parse_run_config(to_json(run))) == to_json(run));
    }
  }

  TEST_CASE("schema errors are collected with dotted keys") {
    Json doc = preset_document("sl2r-diffusion");
    doc["process"]["a"] = -1.0;
    doc["simulation"] = {{"n_paths", "many"}, {"colour", 3}};
    doc["extra"] = true;
    const auto msg = schema_message(doc);
    CHECK(contains(msg, "process.a"));
    CHECK(contains(msg, "simulation.n_paths"));
    CHECK(contains(msg, "simulation.colour"));
    CHECK(contains(msg, "extra"));

    CHECK(contains(schema_message({{"group", "SL2R"}}), "schema_version"));
    CHECK(contains(schema_message({{"schema_version", 2}, {"group", "SL2R"}}), "schema_version"));
    CHECK(contains(schema_message({{"schema_version", 1}}), "group"));
    CHECK(contains(schema_message({{"schema_version", 1}, {"group", "SO3"}}), "group"));
    Json bad_levy = preset_document("sl2r-stable");
    bad_levy["process"]["levy"]["alpha"] = 2.5;
    CHECK(contains(schema_message(bad_levy), "process.levy"));
    Json bad_format = preset_document("sl2r-diffusion");
    bad_format["output"] = {{"formats", {"xml"}}};
    CHECK(contains(schema_message(bad_format), "output.formats"));
    CHECK(contains(schema_message(Json::array()), "object"));
  }

  TEST_CASE("overrides") {
    Json doc = preset_document("sl2r-diffusion");
    apply_override(doc, "simulation.seed=99");
    apply_override(doc, "simulation.ball_radii=[1.5]");
    apply_override(doc, "name=renamed");
    apply_override(doc, "output.dir=some/where");
    const auto c = parse_run_config(doc);
    CHECK(c.simulation.seed == 99);
    CHECK(c.simulation.ball_radii == std::vector<double>{1.5});
    CHECK(c.name == "renamed");
    CHECK(c.output.dir == "some/where");
    CHECK_THROWS_AS(apply_override(doc, "no-equals-sign"), Error);
    CHECK_THROWS_AS(apply_override(doc, "name.inner=1"), Error);
  }

  TEST_CASE("shipped preset files match the built-in catalog") {
    CHECK(preset_names().size() == 6);
    for (const auto& name : preset_names()) {
      const auto file = std::filesystem::path(LEVY_PRESET_DIR) / (name + ".json");
      REQUIRE(std::filesystem::exists(file));
      CHECK(to_json(load_run_config(file)) == to_json(preset(name)));
    }
    CHECK_THROWS_AS(preset_document("nope"), Error);
  }

  TEST_CASE("SU2 diffusion is recurrent with a single channel") {
    const auto v = classify(preset("su2-diffusion", {"simulation.n_paths=100", "simulation.horizon=10"}));
    CHECK(v.classification == Classification::recurrent);
    CHECK(v.probabilistic == Classification::recurrent);
    CHECK(!v.harmonic.has_value());
    CHECK(v.agreement);
    CHECK(!v.degenerate);
  }

  TEST_CASE("H2 diffusion is transient with a finite harmonic integral") {
    const auto v = classify(preset("sl2r-diffusion", {"simulation.n_paths=200"}));
    CHECK(v.classification == Classification::transient);
    REQUIRE(v.harmonic.has_value());
    CHECK(!v.harmonic->report.divergent);
    CHECK(v.agreement);
    for (const auto& d : v.decisions) CHECK(d.classification == Classification::transient);
  }

  TEST_CASE("degenerate process is flagged and inconclusive") {
    const auto v = classify(preset("sl2r-diffusion", {"process.a=0", "simulation.n_paths=4", "simulation.step=0.1"}));
    CHECK(v.degenerate);
    CHECK(v.classification == Classification::inconclusive);
    CHECK(!v.agreement);
    REQUIRE(v.harmonic.has_value());
    CHECK(v.harmonic->report.divergent);
    CHECK(v.probabilistic == Classification::recurrent);
  }

  TEST_CASE("verdict never claims both outcomes") {
    for (const auto& name : preset_names()) {
      const auto v = classify(preset(name, {"simulation.n_paths=40", "simulation.horizon=5"}));
      for (const auto& d : v.decisions) {
        if (d.recurrent_signal && d.transient_signal) CHECK(d.classification == Classification::inconclusive);
      }
      if (v.classification != Classification::inconclusive) CHECK(v.agreement);
    }
  }

  TEST_CASE("compact-set potential") {
    const auto run = preset("sl2r-diffusion", {"simulation.n_paths=100", "simulation.ball_radii=[2.0]"});
    const auto v = classify(run);
    REQUIRE(v.classification == Classification::transient);
    CHECK(compact_set_potential(run, v, {}) == 0.0);

    const auto m = base_point(GroupId::SL2R);
    const Ball single[] = {{m, 2.0}};
    const double one = compact_set_potential(run, v, single);
    CHECK(one == doctest::Approx(v.occupation.balls[0].occupation.back().mean).epsilon(1e-12));

    const Ball cover[] = {{project(boost(1.0)), 3.0}, {project(boost(-1.0)), 3.0}};
    const double two = compact_set_potential(run, v, cover);
    CHECK(std::isfinite(two));
    CHECK(two >= one);

    Verdict recurrent = v;
    recurrent.classification = Classification::recurrent;
    try {
      (void)compact_set_potential(run, recurrent, single);
      FAIL("expected not_applicable");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::not_applicable);
    }
  }

  TEST_CASE("reports: file sets, format filter and determinism") {
    const auto su2 = build_report(preset("su2-diffusion", {"simulation.n_paths=100", "simulation.horizon=10"}));
    REQUIRE(su2.files.size() == 3);
    CHECK(su2.files[0].first == "verdict.json");
    CHECK(su2.files[1].first == "occupation.csv");
    CHECK(su2.files[2].first == "summary.txt");
    CHECK(su2.verdict.classification == Classification::recurrent);

    const auto run = preset("sl2r-asymmetric", {"simulation.n_paths=40", "simulation.horizon=5"});
    const auto a = build_report(run);
    const auto b = build_report(run);
    REQUIRE(a.files.size() == 5);
    for (std::size_t i = 0; i < a.files.size(); ++i) {
      CHECK(a.files[i].first == b.files[i].first);
      CHECK(a.files[i].second == b.files[i].second);
    }
    const auto j = Json::parse(a.files[0].second);
    CHECK(j["harmonic"]["via_symmetrization"] == true);
    CHECK(j["thresholds"]["recurrent_sigma"] == 3.0);
    CHECK(contains(a.files[4].second, "artifact thresholds"));

    const auto csv = io::parse_csv(a.files[1].second);
    CHECK(csv.columns == std::vector<std::string>{"lambda", "re_eta", "im_eta", "beta"});
    CHECK(csv.rows.size() == 2000);

    const auto only_json = build_report(preset("su2-diffusion", {"simulation.n_paths=100", "simulation.horizon=10",
                                                                 "output.formats=[\"json\"]"}));
    CHECK(only_json.files.size() == 1);

    const auto dir = std::filesystem::temp_directory_path() / "levy-test-report";
    std::filesystem::remove_all(dir);
    const auto written = write_report(su2, dir);
    CHECK(written.size() == 3);
    for (const auto& p : written) CHECK(io::read_file(p) != "");
    std::size_t n = 0;
    for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++n;
    CHECK(n == 3);
    std::filesystem::remove_all(dir);
  }
}
