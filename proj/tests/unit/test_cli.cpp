#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "nhscat/commands.hpp"

using namespace nhscat;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("nhscat_cli_" + std::to_string(::getpid()) + "_" +
                                        std::to_string(counter()++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int n = 0;
    return n;
  }
};

fs::path write_file(const fs::path& dir, const std::string& name, const std::string& text) {
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::string_view cmd, const fs::path& config, const fs::path& out_dir, bool dry = false) {
  CommandOptions o;
  o.config = config;
  o.out = out_dir;
  o.dry_run = dry;
  std::ostringstream out, err;
  const int code = run_command(cmd, o, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

const char* kSmallEvolve = R"(model: {family: imaginary_onsite, gamma0: 1.0, gamma1: 1.8}
lattice: {L: 120}
packet: {j0: -30, sigma: 6, k: pi/3}
time: {t_end: 20, record_every: 1, extract_at: 20, growth_window: [12, 20], snapshots: [0, 20]}
)";

}  // namespace

TEST_CASE("scatter on the free chain conserves flux") {
  TempDir d;
  const fs::path cfg = write_file(d.path, "c.yaml",
                                  "model: {family: imaginary_onsite, gamma0: 0, gamma1: 0}\n"
                                  "k_grid: {start: 0.05, stop: 3.09, count: 40}\n");
  const Run r = run("scatter", cfg, d.path / "out");
  REQUIRE(r.code == kExitOk);
  const auto rows = read_csv(d.path / "out" / "scatter.csv");
  REQUIRE(rows.size() == 41);
  CHECK(rows[0] == std::vector<std::string>{"k", "R_L", "T_L", "R_R", "T_R"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][1]) + std::stod(rows[i][2]) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_FALSE(fs::exists(d.path / "out" / "scatter_sweep.csv"));
}

TEST_CASE("scatter with a sweep") {
  TempDir d;
  const fs::path cfg = write_file(d.path, "c.yaml",
                                  "model: {family: imaginary_onsite, gamma0: 1, gamma1: 1.2}\n"
                                  "sweep: {start: 0, stop: 2, step: 0.1}\n");
  REQUIRE(run("scatter", cfg, d.path).code == kExitOk);
  const auto rows = read_csv(d.path / "scatter_sweep.csv");
  REQUIRE(rows.size() == 22);
  CHECK(rows[0][0] == "param");
  CHECK(std::stod(rows[13][2]) == doctest::Approx(0.8416147652637144).epsilon(1e-12));
}

TEST_CASE("malformed configurations exit with code 2") {
  TempDir d;
  const fs::path bad = write_file(d.path, "bad.yaml", "model:\n  family: imaginary_onsite\n  gama1: 1\n");
  for (std::string_view cmd : command_names()) {
    const Run r = run(cmd, bad, d.path / "o");
    CHECK(r.code == kExitConfig);
    CHECK(r.err.find("line 3, column 3") != std::string::npos);
  }
  CHECK_FALSE(fs::exists(d.path / "o"));
  CHECK(run("scatter", d.path / "missing.yaml", d.path).code == kExitConfig);
  CHECK(run("nonsense", bad, d.path).code == kExitConfig);

  const fs::path no_sweep = write_file(d.path, "ns.yaml", "model: {family: imaginary_coupling, gamma: 1}\n");
  CHECK(run("poles", no_sweep, d.path).code == kExitConfig);
  CHECK(run("sweep", no_sweep, d.path).code == kExitConfig);
  const fs::path empty_sweep = write_file(
      d.path, "es.yaml", "model: {family: imaginary_coupling}\nsweep: {start: 1, stop: 0, step: 0.1}\n");
  CHECK(run("poles", empty_sweep, d.path).code == kExitConfig);
  const fs::path too_big = write_file(
      d.path, "tb.yaml", "model: {family: imaginary_coupling}\nlattice: {L: 100}\nspectrum: {max_L: 50}\n");
  CHECK(run("spectrum", too_big, d.path).code == kExitConfig);
}

TEST_CASE("dry runs validate without writing") {
  TempDir d;
  const fs::path cfg = write_file(d.path, "c.yaml", kSmallEvolve);
  for (std::string_view cmd : {"scatter", "evolve", "spectrum", "validate"}) {
    const Run r = run(cmd, cfg, d.path / "o", true);
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("configuration OK") != std::string::npos);
  }
  CHECK_FALSE(fs::exists(d.path / "o"));
}

TEST_CASE("computation failures exit with code 1") {
  TempDir d;
  // a wall-to-wall exceptional point: the eigen propagator refuses it
  const fs::path cfg = write_file(d.path, "c.yaml",
                                  "model: {family: unequal_hopping, kappa: -1, gamma: 1}\n"
                                  "lattice: {L: 40}\npacket: {j0: -10, sigma: 3}\n"
                                  "time: {t_end: 2, propagator: eigen}\n");
  const Run r = run("evolve", cfg, d.path);
  CHECK(r.code == kExitComputation);
  CHECK(r.err.find("error: evolve") != std::string::npos);
}

TEST_CASE("validate reports verdicts") {
  TempDir d;
  auto verdict = [&](const std::string& g1) {
    const fs::path cfg = write_file(d.path, "v.yaml",
                                    "model: {family: imaginary_onsite, gamma0: 1, gamma1: " + g1 + "}\n");
    const Run r = run("validate", cfg, d.path);
    REQUIRE(r.code == kExitOk);
    return std::make_pair(r.out, nlohmann::json::parse(slurp(d.path / "validate.json")));
  };
  const auto [sub_text, sub] = verdict("1.2");
  CHECK(sub["valid"] == true);
  CHECK(sub_text.find("VALID") != std::string::npos);
  CHECK(sub_text.find("INVALID") == std::string::npos);

  const auto [super_text, super] = verdict("1.8");
  CHECK(super["valid"] == false);
  REQUIRE(super["growing_bound_states"].size() == 1);
  CHECK(super["growing_bound_states"][0]["im_E"].get<double>() == doctest::Approx(0.655051).epsilon(1e-5));
  CHECK(super_text.find("growing_bound") != std::string::npos);
  CHECK(super_text.find("INVALID") != std::string::npos);

  const auto [at_text, at] = verdict("1.5");
  CHECK(at["valid"] == false);
  REQUIRE(at["spectral_singularities"].size() == 1);
  CHECK(at_text.find("spectral_singularity") != std::string::npos);
  CHECK(at["critical_value"].get<double>() == doctest::Approx(1.5).epsilon(1e-9));
}

TEST_CASE("evolve, spectrum, poles and sweep outputs") {
  TempDir d;
  const fs::path cfg = write_file(d.path, "c.yaml", std::string(kSmallEvolve) +
                                                         "sweep: {start: 1.0, stop: 2.0, step: 0.5}\n"
                                                         "spectrum: {eigenvectors: true}\n");
  REQUIRE(run("evolve", cfg, d.path).code == kExitOk);
  CHECK(read_csv(d.path / "timeseries.csv").size() == 22);
  CHECK(read_csv(d.path / "snapshot_t20.csv").size() == 121);
  CHECK(fs::exists(d.path / "snapshot_t0.csv"));
  const auto summary = nlohmann::json::parse(slurp(d.path / "evolve_summary.json"));
  CHECK(summary["L"] == 120);
  CHECK(summary.contains("extract"));
  // too short for a clean exponential; the fit failure is reported rather than thrown
  CHECK(summary["growth"]["from"] == 12.0);
  CHECK((summary["growth"].contains("rate") || summary["growth"].contains("error")));

  REQUIRE(run("spectrum", cfg, d.path).code == kExitOk);
  CHECK(read_csv(d.path / "eigenvalues.csv").size() == 121);
  const auto bound = read_csv(d.path / "bound_states.csv");
  REQUIRE(bound.size() == 2);
  CHECK(fs::exists(d.path / ("bound_state_" + bound[1][0] + ".csv")));
  CHECK(read_csv(d.path / "eigenvectors.csv").size() == 120 * 120 + 1);

  REQUIRE(run("poles", cfg, d.path).code == kExitOk);
  // gamma0 == gamma1 sends both roots to z = 0, so no pole at the first point
  const auto poles = read_csv(d.path / "poles.csv");
  REQUIRE(poles.size() == 5);
  CHECK(poles[1][0] == "1.5");
  CHECK(poles[2][6] == "spectral_singularity");
  CHECK(poles[4][6] == "growing_bound");

  const Run s = run("sweep", cfg, d.path);
  REQUIRE(s.code == kExitOk);
  CHECK(read_csv(d.path / "sweep.csv").size() == 4);
}

TEST_CASE("outputs are byte-identical across runs") {
  TempDir d;
  const fs::path cfg = write_file(d.path, "c.yaml", std::string(kSmallEvolve) +
                                                         "sweep: {start: 0.0, stop: 2.0, step: 0.25}\n");
  for (std::string_view cmd : command_names()) {
    REQUIRE(run(cmd, cfg, d.path / "a").code == kExitOk);
    CommandOptions o;
    o.config = cfg;
    o.out = d.path / "b";
    o.threads = 3;
    std::ostringstream out, err;
    REQUIRE(run_command(cmd, o, out, err) == kExitOk);
  }
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(d.path / "a")) {
    const fs::path other = d.path / "b" / entry.path().filename();
    REQUIRE(fs::exists(other));
    CHECK(slurp(entry.path()) == slurp(other));
    ++compared;
  }
  CHECK(compared >= 10);
}

TEST_CASE("the executable") {
  TempDir d;
  const fs::path bad = write_file(d.path, "bad.yaml", "model: [\n");
  const fs::path good = write_file(d.path, "good.yaml", "model: {family: imaginary_coupling, gamma: 0.5}\n");
  auto status = [](const std::string& cmd) {
    const int s = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  const std::string exe = NHSCAT_EXECUTABLE;
  CHECK(status(exe + " validate --config " + bad.string()) == 2);
  CHECK(status(exe + " validate --config " + good.string() + " --out " + (d.path / "o").string()) == 0);
  CHECK(fs::exists(d.path / "o" / "validate.json"));
  CHECK(status(exe + " scatter --config " + good.string() + " --dry-run") == 0);
  CHECK(status(exe + " scatter --config " + good.string() + " --threads 0") == 2);
  CHECK(status(exe + " frobnicate --config " + good.string()) == 2);
  CHECK(status(exe + " --help") == 0);
}
