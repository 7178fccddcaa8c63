#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "levy/io.hpp"
#include "levy/simulator.hpp"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("levy-cli-" + name);
  fs::remove_all(p);
  return p;
}

int run(const std::string& args) {
  const std::string cmd = std::string(LEVY_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::size_t file_count(const fs::path& dir) {
  if (!fs::exists(dir)) return 0;
  std::size_t n = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++n;
  return n;
}

const std::string kSmall = "--override simulation.n_paths=40 --override simulation.horizon=5";

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("minimal SU2 config gives three files and a recurrent verdict") {
    const auto dir = scratch("su2");
    const auto cfg = scratch("su2.json");
    std::ofstream(cfg) << R"({"schema_version": 1, "group": "SU2", "process": {"a": 1.0},
                              "simulation": {"n_paths": 60, "horizon": 8}})";
    CHECK(run("report --config " + cfg.string() + " --out " + dir.string()) == 0);
    CHECK(file_count(dir) == 3);
    const auto v = levy::io::Json::parse(levy::io::read_file(dir / "verdict.json"));
    CHECK(v["classification"] == "recurrent");
    CHECK(v["harmonic"].is_null());
    fs::remove_all(dir);
    fs::remove(cfg);
  }

  TEST_CASE("invalid config fails before writing anything") {
    const auto dir = scratch("bad");
    const auto cfg = scratch("bad.json");
    std::ofstream(cfg) << R"({"schema_version": 1, "group": "SL2R", "process": {"a": -1.0}})";
    CHECK(run("report --config " + cfg.string() + " --out " + dir.string()) == 2);
    CHECK(!fs::exists(dir));
    std::ofstream(cfg) << "{not json";
    CHECK(run("classify --config " + cfg.string() + " --out " + dir.string()) == 2);
    CHECK(!fs::exists(dir));
    fs::remove(cfg);
  }

  TEST_CASE("usage and io errors") {
    const auto dir = scratch("usage");
    CHECK(run("report --preset no-such-preset --out " + dir.string()) == 2);
    CHECK(run("report --out " + dir.string()) == 2);
    CHECK(run("report --preset sl2r-diffusion --config x.json --out " + dir.string()) == 2);
    CHECK(run("report --config /nonexistent/cfg.json --out " + dir.string()) == 4);
    CHECK(run("exponent --preset su2-diffusion --out " + dir.string()) == 2);
    CHECK(run("frobnicate") == 2);
    CHECK(!fs::exists(dir));
    CHECK(run("--help") == 0);
  }

  TEST_CASE("repeat runs with the same seed are byte-identical") {
    const auto a = scratch("rep-a");
    const auto b = scratch("rep-b");
    const auto c = scratch("rep-c");
    CHECK(run("report --preset sl2r-diffusion-jumps --seed 7 " + kSmall + " --out " + a.string()) == 0);
    CHECK(run("report --preset sl2r-diffusion-jumps --seed 7 " + kSmall + " --out " + b.string()) == 0);
    CHECK(run("report --preset sl2r-diffusion-jumps --seed 8 " + kSmall + " --out " + c.string()) == 0);
    REQUIRE(file_count(a) == 5);
    for (const auto& e : fs::directory_iterator(a)) {
      CHECK(levy::io::read_file(e.path()) == levy::io::read_file(b / e.path().filename()));
    }
    CHECK(levy::io::read_file(a / "occupation.csv") != levy::io::read_file(c / "occupation.csv"));
    for (const auto& d : {a, b, c}) fs::remove_all(d);
  }

  TEST_CASE("divergent harmonic evidence exits 3 after writing the report") {
    const auto dir = scratch("degenerate");
    CHECK(run("report --preset sl2r-diffusion --override process.a=0 --override simulation.n_paths=4 "
              "--override simulation.step=0.1 --out " +
              dir.string()) == 3);
    CHECK(file_count(dir) == 5);
    fs::remove_all(dir);
  }

  TEST_CASE("exponent, transform and simulate subcommands") {
    const auto dir = scratch("subs");
    CHECK(run("exponent --preset sl2r-stable --out " + dir.string()) == 0);
    CHECK(fs::exists(dir / "exponent.csv"));
    CHECK(fs::exists(dir / "exponent.json"));

    const auto input = scratch("input.csv");
    std::ofstream(input) << "radius,value\n0,1\n0.5,0.5\n1,0\n";
    CHECK(run("transform --preset sl2r-diffusion --input " + input.string() + " --out " + dir.string()) == 0);
    const auto spec = levy::io::parse_csv(levy::io::read_file(dir / "spectral.csv"));
    CHECK(spec.columns == std::vector<std::string>{"lambda", "weight", "re", "im"});
    CHECK(run("transform --preset sl2r-diffusion --out " + dir.string()) == 0);

    const auto path = dir / "path.bin";
    CHECK(run("simulate --preset sl2r-compound-poisson " + kSmall + " --path-file " + path.string() + " --out " +
              dir.string()) == 0);
    CHECK(fs::exists(dir / "occupation.csv"));
    const auto p = levy::read_path_file(path);
    CHECK(p.times.back() == doctest::Approx(5.0));

    CHECK(run("classify --preset sl2r-diffusion " + kSmall + " --out " + dir.string()) == 0);
    CHECK(fs::exists(dir / "verdict.json"));
    fs::remove_all(dir);
    fs::remove(input);
  }
}
