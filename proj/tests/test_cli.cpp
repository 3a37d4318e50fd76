// Drives the built executable end to end on the reduced grid.
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "kickscope/experiment.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace kickscope;

namespace {

const char* const kSmallConfig = R"(geometry.d = 1
geometry.sigma = 0.02
units.t = 1
grid.n = 2^17
grid.x_min = -327.18
grid.x_max = 328.18
sampling.count = 20000
output.stride = 64
)";

struct Workspace {
  fs::path root;
  Workspace() {
    root = fs::temp_directory_path() / ("kickscope_cli_" + std::to_string(std::rand()) + "_" +
                                        std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::remove_all(root);
    fs::create_directories(root);
  }
  ~Workspace() { fs::remove_all(root); }

  fs::path config(const std::string& name, const std::string& extra) const {
    const fs::path p = root / name;
    std::ofstream(p) << kSmallConfig << extra;
    return p;
  }
};

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(KICKSCOPE_BIN) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::map<std::string, std::string> key_values(const fs::path& p) {
  std::map<std::string, std::string> out;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line))
    if (const auto eq = line.find('='); eq != std::string::npos) out[line.substr(0, eq)] = line.substr(eq + 1);
  return out;
}

std::vector<std::vector<double>> csv_rows(const fs::path& p, std::string* header = nullptr) {
  std::istringstream in(slurp(p));
  std::string line;
  std::getline(in, line);
  if (header) *header = line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(cell == "NA" ? std::nan("") : std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("run: outputs, summary values, byte-identical reruns") {
  Workspace ws;
  const fs::path cfg = ws.config("half.cfg", "detector.c = 0.5\n");
  REQUIRE(run_cli("run --config " + cfg.string() + " --out " + (ws.root / "a").string(), ws.root / "log_a") == 0);
  REQUIRE(run_cli("run --config " + cfg.string() + " --out " + (ws.root / "b").string(), ws.root / "log_b") == 0);
  for (const char* f : {"pattern.csv", "momentum.csv", "summary.txt"}) {
    CAPTURE(f);
    REQUIRE(fs::exists(ws.root / "a" / f));
    CHECK(slurp(ws.root / "a" / f) == slurp(ws.root / "b" / f));
  }

  auto kv = key_values(ws.root / "a" / "summary.txt");
  CHECK(std::abs(std::stod(kv["V_measured"]) - 0.5) <= 0.01);
  CHECK(std::abs(std::stod(kv["F_k_branch"]) - 0.25) <= 1e-6);
  CHECK(std::abs(std::stod(kv["p0_measured"]) - kPi) <= std::stod(kv["dp"]));
  CHECK(kv["basis"] == "symmetric");
  CHECK(kv["storey_satisfied"] == "true");
  CHECK(kv.count("eq14_residual") == 1);
  CHECK(std::abs(std::stod(kv["P_QMinus"]) - 0.25) <= 1e-9);

  std::string header;
  const auto rows = csv_rows(ws.root / "a" / "pattern.csv", &header);
  CHECK(header == "x,rho_total,rho_branch1,rho_branch2,rho_branch3");
  CHECK(rows.size() == (std::size_t{1} << 17) / 64);
  for (const auto& r : rows) REQUIRE(std::abs(r[1] - (r[2] + r[3] + r[4])) <= 1e-12 * (1 + r[1]));
  CHECK(csv_rows(ws.root / "a" / "momentum.csv", &header).size() == rows.size());
  CHECK(header == "p,spec_branch1,spec_branch2,spec_branch3");
}

TEST_CASE("run: c = 1 reproduces the no-detector pattern and has no kick") {
  Workspace ws;
  const fs::path cfg = ws.config("full.cfg", "detector.c = 1\n");
  REQUIRE(run_cli("run --config " + cfg.string() + " --out " + ws.root.string(), ws.root / "log") == 0);
  const auto kv = key_values(ws.root / "summary.txt");
  CHECK(kv.at("p0_measured") == "NA");

  const auto geom = testing::small_geometry();
  const auto grid = testing::small_grid();
  const auto ref = wavepacket::propagate_fft(experiment::reference_state(geom, grid), testing::small_units());
  double peak = 0.0;
  for (std::size_t j = 0; j < ref.size(); ++j) peak = std::max(peak, std::norm(ref[j]));
  const auto rows = csv_rows(ws.root / "pattern.csv");
  double worst = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    REQUIRE(std::abs(rows[i][0] - grid.x(i * 64)) <= 1e-9);
    worst = std::max(worst, std::abs(rows[i][1] - std::norm(ref[i * 64])));
  }
  CHECK(worst <= 1e-12 * peak);
}

TEST_CASE("configuration errors exit 2 and leave no files") {
  Workspace ws;
  const fs::path bad = ws.config("bad.cfg", "geometry.width = 3\n");
  const fs::path out = ws.root / "out";
  CHECK(run_cli("run --config " + bad.string() + " --out " + out.string(), ws.root / "log") == 2);
  CHECK_FALSE(fs::exists(out));
  const fs::path invalid = ws.config("invalid.cfg", "detector.c = 1.5\n");
  CHECK(run_cli("run --config " + invalid.string() + " --out " + out.string(), ws.root / "log") == 2);
  CHECK((!fs::exists(out) || fs::is_empty(out)));
  CHECK(run_cli("run --config " + (ws.root / "missing.cfg").string(), ws.root / "log") == 2);
  CHECK(run_cli("launch", ws.root / "log") == 2);
  CHECK(run_cli("run --bogus", ws.root / "log") == 2);
  CHECK(run_cli("scan --config " + ws.config("s.cfg", "").string() + " --c-values 0,3 --out " + out.string(),
                ws.root / "log") == 2);
  CHECK((!fs::exists(out) || fs::is_empty(out)));
}

TEST_CASE("scan: one row per c value") {
  Workspace ws;
  const fs::path cfg = ws.config("scan.cfg", "");
  REQUIRE(run_cli("scan --config " + cfg.string() + " --c-values 0,0.5,1 --out " + ws.root.string(), ws.root / "log") == 0);
  std::string header;
  const auto rows = csv_rows(ws.root / "scan.csv", &header);
  CHECK(header == "c,V_measured,F_k_branch,p0_measured,eq14_residual");
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) {
    CHECK(std::abs(r[1] - r[0]) <= 0.01);
    CHECK(std::abs(r[2] - (1 - r[0]) / 2) <= 1e-6);
  }
  CHECK(std::isnan(rows[2][3]));
  CHECK(std::abs(rows[0][3] - kPi) <= 2 * kPi / 655.36);
}

TEST_CASE("sample: reproducible, seed flag overrides the config") {
  Workspace ws;
  const fs::path cfg = ws.config("sample.cfg", "sampling.seed = 9\n");
  REQUIRE(run_cli("sample --config " + cfg.string() + " --out " + (ws.root / "a").string(), ws.root / "log") == 0);
  REQUIRE(run_cli("sample --config " + cfg.string() + " --out " + (ws.root / "b").string(), ws.root / "log") == 0);
  REQUIRE(run_cli("sample --config " + cfg.string() + " --seed 10 --out " + (ws.root / "c").string(), ws.root / "log") == 0);
  CHECK(slurp(ws.root / "a" / "events.csv") == slurp(ws.root / "b" / "events.csv"));
  CHECK(slurp(ws.root / "a" / "events.csv") != slurp(ws.root / "c" / "events.csv"));
  const auto kv = key_values(ws.root / "a" / "sample_summary.txt");
  CHECK(kv.at("count") == "20000");
  CHECK(std::stod(kv.at("chi2_p_value")) > 0.01);
  const std::string events = slurp(ws.root / "a" / "events.csv");
  CHECK(events.rfind("outcome,x\n", 0) == 0);
  CHECK(std::count(events.begin(), events.end(), '\n') == 20001);
}

TEST_CASE("output directory from the environment") {
  Workspace ws;
  const fs::path cfg = ws.config("env.cfg", "");
  const fs::path dir = ws.root / "from_env";
  const std::string cmd = "KICKSCOPE_OUT=" + dir.string() + " " + KICKSCOPE_BIN + " scan --config " +
                          cfg.string() + " --c-values 0.5 > /dev/null 2>&1";
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(fs::exists(dir / "scan.csv"));
}

TEST_CASE("verify: exit codes") {
  Workspace ws;
  CHECK(run_cli("verify --config " + ws.config("ok.cfg", "").string(), ws.root / "ok.log") == 0);
  CHECK(slurp(ws.root / "ok.log").find("FAIL") == std::string::npos);

  CHECK(run_cli("verify --config " + ws.config("strict.cfg", "verify.tolerance_scale = 0\n").string(),
                ws.root / "strict.log") == 1);
  CHECK(slurp(ws.root / "strict.log").find("FAIL") != std::string::npos);

  CHECK(run_cli("verify --config " + ws.config("full.cfg", "detector.c = 1\n").string(), ws.root / "full.log") == 0);
  CHECK(slurp(ws.root / "full.log").find("SKIP") != std::string::npos);
}
