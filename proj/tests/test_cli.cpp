#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include "doctest.h"
#include "symkit/field_io.hpp"
#include "symkit/random.hpp"
#include "symkit/rearrange.hpp"
#include "symkit/suite.hpp"

using namespace symkit;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name) {
  const fs::path p = fs::temp_directory_path() / ("symkit-test-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string &args) {
  const std::string cmd = std::string(SYMKIT_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

SuiteConfig small_config() {
  SuiteConfig c = SuiteConfig::defaults();
  c.verify_cases = 5;
  return c;
}

} // namespace

TEST_CASE("rng streams are reproducible") {
  // first output of the reference mt19937_64 with its default seed
  CHECK(Rng(5489).next() == 14514284786278117030ULL);
  Rng a(derive_seed(1, "x", 0)), b(derive_seed(1, "x", 0));
  for (int k = 0; k < 100; ++k)
    CHECK(a.normal() == b.normal());
  CHECK(derive_seed(1, "x", 0) != derive_seed(1, "x", 1));
  CHECK(derive_seed(1, "x", 0) != derive_seed(1, "y", 0));
  Rng r(3);
  for (int k = 0; k < 1000; ++k) {
    const int v = r.integer(-2, 2);
    CHECK(v >= -2);
    CHECK(v <= 2);
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("config round trip and validation") {
  const SuiteConfig c = SuiteConfig::defaults();
  CHECK_NOTHROW(c.validate());
  const nlohmann::ordered_json j = to_json(c);
  CHECK(to_json(parse_config(nlohmann::json::parse(j.dump()))) == j);

  CHECK_THROWS_AS(parse_config(nlohmann::json::object()), ConfigError);
  CHECK_THROWS_AS(parse_config({{"format", "symkit-config 2"}}), ConfigError);

  SuiteConfig bad = c;
  bad.ladder = {{1, 128, 1.0 / 16}, {1, 256, 1.0 / 16}};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.slack["default"] = {1e-3, 2e-3, 1e-4};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = c;
  bad.choquard.n = 64;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  const SuiteConfig partial = parse_config({{"format", "symkit-config 1"}, {"seed", 99}});
  CHECK(partial.seed == 99);
  CHECK(partial.verify_cases == c.verify_cases);
  CHECK(partial.slack_for("no-such-entry") == c.slack_for("default"));
}

TEST_CASE("refinement assessment") {
  const std::vector<double> h = {0.1, 0.05, 0.025};
  RefinementTrend t = assess_refinement(h, {1e-3, 5e-4, 2e-4}, 1.0, 1e-3);
  CHECK(t.ok());
  CHECK(t.factors[0] == doctest::Approx(0.5));
  t = assess_refinement(h, {1e-3, 9e-4, 2e-4}, 1.0, 1e-3);
  CHECK_FALSE(t.contracting);
  t = assess_refinement(h, {0.0, 0.0, 0.0}, 1.0, 1e-3);
  CHECK(t.ok());
  CHECK(t.factors[0] == 0.0);
  t = assess_refinement(h, {0.0, 1e-9, 0.0}, 1.0, 1e-3);
  CHECK_FALSE(t.contracting);
  t = assess_refinement(h, {1.0, 0.5, 0.25}, 1.0, 1e-3);
  CHECK(t.contracting);
  CHECK_FALSE(t.final_ok);
}

TEST_CASE("reports are deterministic and auditable") {
  const SuiteConfig c = small_config();
  const auto a = run_verify(c), b = run_verify(c);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(to_json(a[k], false).dump() == to_json(b[k], false).dump());
    CHECK(a[k].verdict == Verdict::Pass);
    CHECK(a[k].value <= a[k].tolerance);
    CHECK_FALSE(to_json(a[k], false).contains("wall_seconds"));
  }
  SuiteConfig other = c;
  other.seed += 1;
  CHECK(run_verify(other).front().digest != a.front().digest);

  const std::string csv = csv_summary(a);
  CHECK(csv.rfind("id,verdict,value,tolerance\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == long(a.size() + 1));

  const fs::path dir = scratch("reports");
  write_reports(a, dir);
  CHECK(fs::exists(dir / "summary.csv"));
  CHECK(fs::exists(dir / "verify.pairing.d1.json"));
}

TEST_CASE("swapping two cells in rearrange breaks the pairing check") {
  VerifyHooks hooks;
  hooks.rearrange = [](const ScalarField &f) {
    const ScalarField r = rearrange(f);
    std::vector<double> v(r.values().begin(), r.values().end());
    const CellOrder order(f.grid());
    std::swap(v[order.cells()[0]], v[order.cells()[v.size() / 2]]);
    return ScalarField(f.grid(), std::move(v));
  };
  bool pairing_failed = false;
  for (const auto &r : run_verify(small_config(), hooks))
    if (r.id.rfind("verify/pairing/", 0) == 0)
      pairing_failed = pairing_failed || r.verdict == Verdict::Fail;
  CHECK(pairing_failed);
}

TEST_CASE("empty case set passes vacuously with a warning") {
  SuiteConfig c = small_config();
  c.verify_cases = 0;
  for (const auto &r : run_verify(c)) {
    CHECK(r.verdict == Verdict::Pass);
    CHECK_FALSE(r.warnings.empty());
  }
}

TEST_CASE("command line exit codes") {
  const fs::path dir = scratch("cli");
  CHECK(run_cli("") == 2);
  CHECK(run_cli("no-such-verb") == 2);
  CHECK(run_cli("--config " + (dir / "missing.json").string() + " verify") == 2);

  std::ofstream(dir / "bad.json") << R"({"format": "symkit-config 1", "ladder": [{"d": 1, "n": 128, "h": 0.1}, {"d": 1, "n": 256, "h": 0.1}]})";
  CHECK(run_cli("--config " + (dir / "bad.json").string() + " verify") == 2);
  std::ofstream(dir / "broken.json") << "{ not json";
  CHECK(run_cli("--config " + (dir / "broken.json").string() + " verify") == 2);

  std::ofstream(dir / "ok.json") << R"({"format": "symkit-config 1", "cases": {"verify": 3}})";
  CHECK(run_cli("--config " + (dir / "ok.json").string() + " --out " + (dir / "out").string() + " verify") == 0);
  CHECK(fs::exists(dir / "out" / "summary.csv"));

  Rng rng(1);
  save(random_cells(rng, Grid::cube(2, 6, 0.5), 0.5, true), dir / "f.txt");
  CHECK(run_cli("rearrange " + (dir / "f.txt").string() + " " + (dir / "g.txt").string()) == 0);
  const ScalarField g = load_field(dir / "g.txt");
  CHECK(g.nonneg());
  CHECK(run_cli("info " + (dir / "g.txt").string()) == 0);
  std::ofstream(dir / "junk.txt") << "SYMKIT-FIELD 1\n2\n";
  CHECK(run_cli("info " + (dir / "junk.txt").string()) == 2);
}
