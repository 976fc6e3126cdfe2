#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "partcheck/commands.hpp"
#include "partcheck/csv.hpp"
#include "partcheck/datagen.hpp"
#include "partcheck/errors.hpp"
#include "partcheck/explore.hpp"
#include "partcheck/rng.hpp"

using namespace partcheck;
namespace fs = std::filesystem;

namespace {

// Fresh scratch directory per test run.
fs::path scratch_dir() {
  static int counter = 0;
  static std::mt19937_64 rng(std::random_device{}());
  fs::path p = fs::temp_directory_path() /
               ("partcheck_test_" + std::to_string(rng()) + "_" + std::to_string(counter++));
  fs::create_directories(p);
  return p;
}

void write_file(const fs::path& p, const std::string& content) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << content;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Minimal single-gene constitutive project.
std::string constitutive_config(const std::string& out = "out") {
  return R"({
  "format_version": 1,
  "genes": [{"id": "g", "alpha": 0.5, "min": 0.0, "max": 10.0}],
  "promoters": [{
    "id": "p", "kind": "constitutive", "data": "data/p.csv", "reporter": "g",
    "fit": "constant",
    "generator": {"beta_max": 1.1, "noise_sd": 0.03, "reporter_init": 0.0}
  }],
  "devices": [{"name": "dev", "wiring": [{"gene": "g", "promoter": "p"}]}],
  "propositions": [{"name": "pi_low", "c": [1.0], "d": -4.0}],
  "specifications": [
    {"name": "stay_low", "formula": "G pi_low"},
    {"name": "nothing", "formula": "false"}
  ],
  "analysis": {"seed": 3, "out": ")" + out + R"("}
})";
}

// The toggle case-study config (trimmed to two promoters when asked).
std::string toggle_config() {
  std::ifstream in(fs::path(PARTCHECK_SOURCE_DIR) / "configs" / "toggle.json");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("trajectory CSV round-trips and reports malformed lines") {
  std::string text = "cell,step,g1,g2\nc0,0,1.0,2.0\nc0,1,1.5,2.5\nc1,0,0.5,0.25\n";
  std::istringstream in(text);
  TrajectoryFile t = parse_trajectory_csv(in);
  CHECK(t.columns == std::vector<std::string>{"g1", "g2"});
  CHECK(t.rows.size() == 3);

  // writing and re-parsing reproduces the values exactly
  std::ostringstream out;
  write_trajectory_csv(out, t);
  std::istringstream in2(out.str());
  TrajectoryFile t2 = parse_trajectory_csv(in2);
  REQUIRE(t2.rows.size() == t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    CHECK(t2.rows[i].cell == t.rows[i].cell);
    CHECK(t2.rows[i].step == t.rows[i].step);
    CHECK(t2.rows[i].values == t.rows[i].values);
  }

  std::istringstream bad1("cell,step,g\nc0,0,notanumber\n");
  try {
    parse_trajectory_csv(bad1);
    FAIL("expected CsvError");
  } catch (const CsvError& e) {
    CHECK(e.line == 2);
  }
  std::istringstream bad2("cell,step,g\nc0,1,1.0\nc0,1,2.0\n");
  try {
    parse_trajectory_csv(bad2);
    FAIL("expected CsvError");
  } catch (const CsvError& e) {
    CHECK(e.line == 3);  // non-increasing step
  }
  std::istringstream bad3("time,g\n");
  CHECK_THROWS_AS(parse_trajectory_csv(bad3), CsvError);
}

TEST_CASE("cell splitting and population bands") {
  std::string text =
      "cell,step,g\nc0,0,1.0\nc1,0,3.0\nc0,1,2.0\nc1,1,1.0\n";
  std::istringstream in(text);
  TrajectoryFile t = parse_trajectory_csv(in);
  std::vector<std::string> cols = {"g"};
  auto cells = split_by_cell(t, cols);
  REQUIRE(cells.size() == 2);
  CHECK(cells[0].by_column[0] == std::vector<double>{1.0, 2.0});
  CHECK(cells[1].by_column[0] == std::vector<double>{3.0, 1.0});
  auto bands = population_bands(t, "g");
  REQUIRE(bands.size() == 2);
  CHECK(bands[0].min == 1.0);
  CHECK(bands[0].max == 3.0);
  CHECK(bands[1].min == 1.0);
  CHECK(bands[1].max == 2.0);
}

TEST_CASE("config loading validates referential integrity") {
  fs::path dir = scratch_dir();
  write_file(dir / "ok.json", constitutive_config());
  ProjectConfig cfg = load_config(dir / "ok.json");
  CHECK(cfg.genes.size() == 1);
  CHECK(cfg.find_promoter("p") != nullptr);
  CHECK(cfg.find_device("dev") != nullptr);

  std::string bad = constitutive_config();
  bad.replace(bad.find("\"gene\": \"g\""), 11, "\"gene\": \"nope\"");
  write_file(dir / "bad.json", bad);
  CHECK_THROWS_AS(load_config(dir / "bad.json"), ConfigError);

  std::string badspec = constitutive_config();
  badspec.replace(badspec.find("G pi_low"), 8, "G pi_unknown");
  write_file(dir / "badspec.json", badspec);
  CHECK_THROWS_AS(load_config(dir / "badspec.json"), ConfigError);

  write_file(dir / "noversion.json", "{}");
  CHECK_THROWS_AS(load_config(dir / "noversion.json"), ConfigError);
}

TEST_CASE("synthetic repressor decays exactly geometrically") {
  fs::path dir = scratch_dir();
  write_file(dir / "toggle.json", toggle_config());
  ProjectConfig cfg = load_config(dir / "toggle.json");
  TrajectoryFile t = simulate_characterization(cfg, "p2", 3, 18, 11);
  std::vector<std::string> cols = {"g2"};
  for (const auto& cell : split_by_cell(t, cols)) {
    REQUIRE(cell.by_column[0].size() == 19);
    double x0 = cell.by_column[0][0];
    CHECK(x0 == doctest::Approx(12.0));
    double alpha = cfg.find_gene("g2")->alpha;
    for (std::size_t k = 0; k < cell.by_column[0].size(); ++k) {
      CHECK(cell.by_column[0][k] == doctest::Approx(std::pow(alpha, k) * x0).epsilon(1e-12));
    }
  }
}

TEST_CASE("unrepressed reporter rises toward beta_max/(1-alpha)") {
  fs::path dir = scratch_dir();
  std::string cfg_text = toggle_config();
  // zero noise, repressor absent from the start
  cfg_text.replace(cfg_text.find("\"noise_sd\": 0.02, \"regulator_init\": 12.0"),
                   std::string("\"noise_sd\": 0.02, \"regulator_init\": 12.0").size(),
                   "\"noise_sd\": 0.0, \"regulator_init\": 0.0");
  write_file(dir / "toggle.json", cfg_text);
  ProjectConfig cfg = load_config(dir / "toggle.json");
  TrajectoryFile t = simulate_characterization(cfg, "p1", 1, 60, 1);
  std::vector<std::string> cols = {"rep"};
  auto cells = split_by_cell(t, cols);
  const auto& trace = cells[0].by_column[0];
  const auto& gen = *cfg.find_promoter("p1")->generator;
  double alpha = cfg.find_gene("rep")->alpha;
  double fixed_point = gen.beta_max / (1.0 - alpha);
  CHECK(trace.back() == doctest::Approx(fixed_point).epsilon(1e-4));
  for (std::size_t k = 1; k < trace.size(); ++k) CHECK(trace[k] >= trace[k - 1] - 1e-12);
}

TEST_CASE("recovered rates stay within three noise standard deviations of the Hill curve") {
  fs::path dir = scratch_dir();
  write_file(dir / "toggle.json", toggle_config());
  ProjectConfig cfg = load_config(dir / "toggle.json");
  const PromoterConfig& p2 = *cfg.find_promoter("p2");
  const auto& gen = *p2.generator;

  TrajectoryFile t = simulate_characterization(cfg, "p2", 20, 18, 77);
  std::ostringstream os;
  write_trajectory_csv(os, t);
  write_file(dir / "data" / "p2_char.csv", os.str());

  auto samples = extract_samples(cfg, p2);
  CHECK(samples.size() == 20 * 18);
  auto hill = [&](double u) {
    double kn = std::pow(gen.k, gen.hill_n);
    return gen.beta_leak + (gen.beta_max - gen.beta_leak) * kn / (kn + std::pow(u, gen.hill_n));
  };
  for (const auto& s : samples) {
    CHECK(std::abs(s.rate - hill(*s.regulator_conc)) <= 3.0 * gen.noise_sd + 1e-12);
  }
}

TEST_CASE("characterize persists byte-identical fits for the same seed") {
  fs::path dir = scratch_dir();
  write_file(dir / "toggle.json", toggle_config());
  ProjectConfig cfg = load_config(dir / "toggle.json");

  TrajectoryFile t = simulate_characterization(cfg, "p2", 10, 18, 7);
  std::ostringstream os;
  write_trajectory_csv(os, t);
  write_file(dir / "data" / "p2_char.csv", os.str());

  CommonOptions cli;
  cli.config_path = (dir / "toggle.json").string();
  EffectiveOptions opts = resolve_options(cfg, cli);

  PromoterFit a = characterize_promoter(cfg, *cfg.find_promoter("p2"), opts);
  PromoterFit b = characterize_promoter(cfg, *cfg.find_promoter("p2"), opts);
  CHECK(fit_to_json(a) == fit_to_json(b));

  // piecewise-linear area never exceeds piecewise-constant area
  EffectiveOptions pwc = opts;
  pwc.fit_override = FitKind::kPiecewiseConstant;
  PromoterFit c = characterize_promoter(cfg, *cfg.find_promoter("p2"), pwc);
  CHECK(fitted_area(a.map) <= fitted_area(c.map) + 1e-12);

  // round-trip through the persisted form preserves the fit and passes the
  // capture re-check
  PromoterFit loaded = fit_from_json(fit_to_json(a));
  CHECK(fit_to_json(loaded) == fit_to_json(a));

  // a corrupted fit file fails the capture re-check
  std::string broken = fit_to_json(a);
  auto pos = broken.find("\"trapezoids\"");
  REQUIRE(pos != std::string::npos);
  // shrink every trapezoid ceiling below the data
  std::string shrunk = std::regex_replace(fit_to_json(a), std::regex("\"left\": \\[[^\\]]*\\]"),
                                          "\"left\": [0.0, 0.0001]");
  CHECK_THROWS_AS(fit_from_json(shrunk), ConfigError);
}

TEST_CASE("verify on an all-constitutive device finds the invariant band") {
  fs::path dir = scratch_dir();
  write_file(dir / "cfg.json", constitutive_config());
  ProjectConfig cfg = load_config(dir / "cfg.json");

  // Synthesize single-cell data: constant-rate trace with rate drawn in
  // [1.0, 1.2]; the fitted constant range then sits inside that band.
  std::mt19937_64 rng(5);
  TrajectoryFile t;
  t.columns = {"g"};
  for (int c = 0; c < 5; ++c) {
    double x = 0.0;
    for (int k = 0; k <= 20; ++k) {
      t.rows.push_back({"c" + std::to_string(c), k, {x}});
      x = 0.5 * x + uniform_in(rng, 1.0, 1.2);
    }
  }
  std::ostringstream os;
  write_trajectory_csv(os, t);
  write_file(dir / "data" / "p.csv", os.str());

  CommonOptions cli;
  cli.config_path = (dir / "cfg.json").string();
  EffectiveOptions opts = resolve_options(cfg, cli);
  const DeviceConfig& dev = *cfg.find_device("dev");
  auto fits = resolve_fits(cfg, dev, opts);

  // the fixed-point band from the fitted range must sit below the pi_low cut
  const RateInterval range = fits.at("p").map.boxes[0];
  CHECK(range.hi / (1.0 - 0.5) < 4.0);

  BuiltModel model = build_model(cfg, dev, fits);
  VerifyReport r = run_verification(cfg, dev, *cfg.find_specification("stay_low"), fits, model);
  CHECK(r.result.sat_fraction > 0.0);
  CHECK(r.result.sat_fraction + r.result.viol_fraction + r.result.undecided_fraction ==
        doctest::Approx(1.0).epsilon(1e-9));

  // the region below the cut is exactly the satisfying one
  VerifyReport rf = run_verification(cfg, dev, *cfg.find_specification("nothing"), fits, model);
  CHECK(rf.result.sat_fraction == doctest::Approx(0.0));
  CHECK(rf.result.viol_fraction == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("explore enumerates candidates canonically") {
  fs::path dir = scratch_dir();
  write_file(dir / "toggle.json", toggle_config());
  ProjectConfig cfg = load_config(dir / "toggle.json");

  auto candidates = enumerate_mutual_repression(cfg);
  REQUIRE(candidates.size() == 3);
  CHECK(candidates[0].name == "g1<-p2,g2<-p1");
  CHECK(candidates[1].name == "g1<-p3,g3<-p1");
  CHECK(candidates[2].name == "g2<-p3,g3<-p2");

  // permuting the parts pool does not change the enumeration
  ProjectConfig shuffled = cfg;
  std::reverse(shuffled.genes.begin(), shuffled.genes.end());
  std::reverse(shuffled.promoters.begin(), shuffled.promoters.end());
  auto again = enumerate_mutual_repression(shuffled);
  REQUIRE(again.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(again[i].name == candidates[i].name);

  // a single-gene pool has no mutual-repression candidates
  ProjectConfig tiny = cfg;
  tiny.genes.resize(1);
  tiny.promoters.resize(1);
  CHECK(enumerate_mutual_repression(tiny).empty());
}

TEST_CASE("DOT export passes a grammar check") {
  fs::path dir = scratch_dir();
  write_file(dir / "cfg.json", constitutive_config("dot_out"));
  ProjectConfig cfg = load_config(dir / "cfg.json");
  std::mt19937_64 rng(5);
  TrajectoryFile t;
  t.columns = {"g"};
  double x = 0.0;
  for (int k = 0; k <= 20; ++k) {
    t.rows.push_back({"c0", k, {x}});
    x = 0.5 * x + 1.1;
  }
  std::ostringstream os;
  write_trajectory_csv(os, t);
  write_file(dir / "data" / "p.csv", os.str());

  CommonOptions cli;
  cli.config_path = (dir / "cfg.json").string();
  int rc = cmd_export_quotient(cli, "dev", std::nullopt);
  CHECK(rc == 0);

  std::string dot = read_file(dir / "dot_out" / "quotient_dev.dot");
  REQUIRE(!dot.empty());

  // Grammar check over the emitted DOT subset, line by line.
  std::regex node_re(R"(^  n\d+ \[label="[^"]*"(, verdict="[^"]*")?\];$)");
  std::regex edge_re(R"(^  n\d+ -> n\d+;$)");
  std::istringstream lines(dot);
  std::string line;
  int nodes = 0, edges = 0, depth = 0;
  bool header = false, closed = false;
  while (std::getline(lines, line)) {
    if (line == "digraph quotient {") {
      header = true;
      ++depth;
    } else if (line == "}") {
      closed = true;
      --depth;
    } else if (std::regex_match(line, node_re)) {
      ++nodes;
    } else if (std::regex_match(line, edge_re)) {
      ++edges;
    } else if (line != "  rankdir=LR;") {
      FAIL("unexpected DOT line: ", line);
    }
  }
  CHECK(header);
  CHECK(closed);
  CHECK(depth == 0);
  // node count equals region count + 1 (OUT); this device partitions into
  // two regions (the pi_low cut), so 3 nodes.
  CHECK(nodes == 3);
  CHECK(edges >= nodes);  // every state has at least one outgoing edge
}

TEST_CASE("the CLI binary runs the full loop end to end") {
  fs::path dir = scratch_dir();
  write_file(dir / "toggle.json", toggle_config());

  auto run = [&](const std::string& args) {
    std::string cmd = std::string(PARTCHECK_BIN) + " " + args + " >" +
                      (dir / "stdout.txt").string() + " 2>" + (dir / "stderr.txt").string();
    return std::system(cmd.c_str());
  };
  std::string cfg = (dir / "toggle.json").string();

  for (const std::string p : {"p1", "p2", "p3"}) {
    CHECK(run("simulate-characterization --config " + cfg + " --promoter " + p) == 0);
  }
  CHECK(run("characterize --config " + cfg + " --promoter p2") == 0);
  CHECK(fs::exists(dir / "out" / "fits" / "p2.fit.json"));

  CHECK(run("verify --config " + cfg + " --device device3 --spec phi1") == 0);
  CHECK(fs::exists(dir / "out" / "verify_device3_phi1.txt"));
  CHECK(fs::exists(dir / "out" / "verify_device3_phi1.json"));

  // verdicts are data: exit 0 even when nothing satisfies; the gate flags it
  CHECK(run("verify --config " + cfg + " --device device1 --spec phi1") == 0);
  int gated = run("verify --config " + cfg + " --device device1 --spec phi1 "
                  "--min-satisfying 0.05");
  CHECK(gated != 0);

  CHECK(run("explore --config " + cfg + " --topology mutual-repression") == 0);
  CHECK(fs::exists(dir / "out" / "explore.json"));
  CHECK(run("export-quotient --config " + cfg + " --device device3 --spec phi1") == 0);
  CHECK(fs::exists(dir / "out" / "quotient_device3.dot"));

  // determinism: byte-identical reports for identical config + seed
  std::string first = read_file(dir / "out" / "verify_device3_phi1.json");
  fs::remove_all(dir / "out");
  for (const std::string p : {"p1", "p2", "p3"}) {
    run("simulate-characterization --config " + cfg + " --promoter " + p);
  }
  CHECK(run("verify --config " + cfg + " --device device3 --spec phi1") == 0);
  CHECK(read_file(dir / "out" / "verify_device3_phi1.json") == first);

  // unknown promoter fails loudly
  CHECK(run("characterize --config " + cfg + " --promoter nope") != 0);
}

TEST_CASE("population-mode characterization uses min/max bands") {
  fs::path dir = scratch_dir();
  std::string cfg_text = constitutive_config();
  cfg_text.replace(cfg_text.find("\"fit\": \"constant\""), 17,
                   "\"fit\": \"constant\", \"mode\": \"population\"");
  write_file(dir / "cfg.json", cfg_text);
  ProjectConfig cfg = load_config(dir / "cfg.json");

  // two unlabeled subpopulations: rates must cover the cross transitions
  write_file(dir / "data" / "p.csv",
             "cell,step,g\n"
             "c0,0,1.0\nc1,0,2.0\n"
             "c0,1,2.0\nc1,1,4.0\n");
  auto samples = extract_samples(cfg, *cfg.find_promoter("p"));
  REQUIRE(samples.size() == 2);
  CHECK(samples[0].rate == doctest::Approx(2.0 - 0.5 * 2.0));  // min(k+1) - a*max(k)
  CHECK(samples[1].rate == doctest::Approx(4.0 - 0.5 * 1.0));  // max(k+1) - a*min(k)

  // population mode on a regulated promoter is rejected at load
  std::string bad = R"({
    "format_version": 1,
    "genes": [{"id": "g", "alpha": 0.5, "min": 0.0, "max": 10.0}],
    "promoters": [{"id": "p", "kind": "regulated", "regulator": "g",
                   "reporter": "g", "mode": "population"}]
  })";
  write_file(dir / "bad.json", bad);
  CHECK_THROWS_AS(load_config(dir / "bad.json"), ConfigError);
}
