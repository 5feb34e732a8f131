#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "config.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace nlsprop;
using namespace nlsprop::cli;
namespace fs = std::filesystem;

namespace {

ConfigError config_error(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected a ConfigError");
  return ConfigError(ErrorKind::ParseError, "", 0, "");
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("nlsprop_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json report(const fs::path& dir) { return nlohmann::json::parse(slurp(dir / "report.json")); }

CommandLine command(const std::string& name, const fs::path& out) {
  CommandLine cl;
  cl.command = name;
  cl.out_dir = out.string();
  return cl;
}

}  // namespace

TEST_CASE("empty configuration gives the defaults") {
  const auto c = parse_config_text("");
  CHECK(c.family == ProblemFamily::Nls3d);
  CHECK(c.r_max_soliton == 100.0);
  CHECK(c.r_max_index_3d == 200.0);
  CHECK(c.r_max_index_1d == 100.0);
  CHECK(c.index_tol == 1e-13);
  CHECK(c.products_abs_tol_1d == 1e-8);
  CHECK(c.products_rel_tol_1d == 1e-10);
  CHECK(c.overrides.empty());
  const auto opt = c.pipeline_options();
  CHECK(opt.index.r_max == 200.0);
  CHECK(opt.products.abs_tol == 1e-12);
  CHECK(parse_config_text("# only a comment\n\n").sigma == 1.0);
}

TEST_CASE("overrides are applied and echoed") {
  const auto c = parse_config_text("r_max_index_3d = 400\n");
  CHECK(c.r_max_index_3d == 400.0);
  CHECK(c.pipeline_options().index.r_max == 400.0);
  const auto echo = config_echo(c);
  CHECK(echo["domains"]["r_max_index_3d"] == 400.0);
  REQUIRE(echo["overrides"].size() == 1);
  CHECK(echo["overrides"][0]["key"] == "r_max_index_3d");

  const auto d = parse_config_text(
      "[problem]\nfamily = nls1d ; parity sectors\nsigma = 3.5\n[verdict]\ndelta0 = 0, 1e-4, 1e-3\n"
      "[sweep]\nlo = 2.3\nhi = 6.3\npoints = 5\n");
  CHECK(d.family == ProblemFamily::Nls1d);
  CHECK(d.spec().dim() == 1);
  CHECK(d.sigma == 3.5);
  CHECK(d.delta0 == std::vector<double>{0.0, 1e-4, 1e-3});
  CHECK(d.pipeline_options().index.r_max == 100.0);
  CHECK(d.threshold_tolerance() == 1e-10);
}

TEST_CASE("parse errors carry the line number") {
  auto e = config_error("[domains]\nr_max_soliton = 100\nbogus = 3\n");
  CHECK(e.kind() == ErrorKind::ParseError);
  CHECK(e.line() == 3);
  CHECK(e.field() == "bogus");

  CHECK(config_error("\nsigma: 1\n").line() == 2);
  CHECK(config_error("[nowhere]\n").line() == 1);
  CHECK(config_error("[domains\n").line() == 1);
  CHECK(config_error("sigma = abc\n").field() == "sigma");
  CHECK(config_error("[domains]\nsigma = 1\n").line() == 2);
  CHECK(config_error("max_harmonic = 2.5\n").kind() == ErrorKind::ParseError);
  CHECK(config_error("family = kdv\n").kind() == ErrorKind::ParseError);
}

TEST_CASE("validation errors name the field") {
  auto e = config_error("gamma = 0.2\n");
  CHECK(e.kind() == ErrorKind::ValidationError);
  CHECK(e.field() == "gamma");
  CHECK(std::string(e.what()).find("gamma") != std::string::npos);
  CHECK(config_error("sigma = -1\n").field() == "sigma");
  CHECK(config_error("index = 0\n").field() == "index");
  CHECK(config_error("delta0 = 1e-4, 0\n").field() == "delta0");
  CHECK(config_error("[sweep]\nlo = 1.2\nhi = 0.8\npoints = 3\n").field() == "lo");
}

TEST_CASE("campaign grids") {
  CHECK(campaign_grid(ProblemFamily::Nls3d).size() == 41);
  CHECK(campaign_grid(ProblemFamily::Cqnls).size() == 25);
  CHECK(campaign_grid(ProblemFamily::Cqnls).back() == 0.012);
  CHECK(campaign_grid(ProblemFamily::Nls1d).front() == 2.3);
  CHECK(csv_number(0.1) == "1.0000000000000001e-01");
}

TEST_CASE("command-line layering") {
  CommandLine cl;
  cl.command = "soliton";
  cl.gamma = 0.01;
  CHECK(resolve_config(cl).family == ProblemFamily::Cqnls);
  cl.gamma = 0.2;
  CHECK_THROWS_AS(resolve_config(cl), ConfigError);

  CommandLine bad;
  bad.command = "soliton";
  bad.problem = "cqnls";
  bad.sigma = 1.0;
  CHECK_THROWS_AS(resolve_config(bad), ConfigError);

  CommandLine range;
  range.command = "threshold";
  range.bracket = std::make_pair(0.9, 0.8);
  CHECK_THROWS_AS(resolve_config(range), ConfigError);
}

TEST_CASE("soliton subcommand writes deterministic files") {
  const auto a = scratch("soliton_a"), b = scratch("soliton_b");
  for (const auto& dir : {a, b}) {
    auto cl = command("soliton", dir);
    cl.problem = "nls1d";
    cl.sigma = 3.0;
    REQUIRE(run_command(cl) == kOk);
  }
  for (const char* f : {"soliton.csv", "potentials.csv"}) {
    CHECK(slurp(a / f) == slurp(b / f));
  }
  std::istringstream lines(slurp(a / "soliton.csv"));
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  CHECK(header == "r,R,R',dOmegaR");
  CHECK(first.rfind("0.0000000000000000e+00,", 0) == 0);
  CHECK(slurp(a / "potentials.csv").rfind("r,V+,V-,calV+,calV-\n", 0) == 0);
  const auto rep = report(a);
  CHECK(rep["status"] == "ok");
  CHECK(rep["command"] == "soliton");
  CHECK(rep["config"]["problem"]["family"] == "nls1d");
}

TEST_CASE("index subcommand summary rows") {
  const auto dir = scratch("index");
  auto cl = command("index", dir);
  cl.problem = "nls1d";
  cl.sigma = 3.0;
  REQUIRE(run_command(cl) == kOk);
  const auto rep = report(dir);
  std::vector<int> counts;
  for (const auto& s : rep["results"]["sectors"]) counts.push_back(s["root_count"]);
  CHECK(counts == std::vector<int>{1, 1, 1, 0});
  std::istringstream lines(slurp(dir / "index.csv"));
  std::string line;
  std::getline(lines, line);
  CHECK(line == "sector,r,U,root_count,C0,C1,clear");
  int summaries = 0;
  while (std::getline(lines, line))
    if (line.find(",,") == line.find(',')) ++summaries;
  CHECK(summaries == 4);
}

TEST_CASE("exit codes") {
  const auto dir = scratch("exit");
  auto bad_gamma = command("soliton", dir);
  bad_gamma.gamma = 0.2;
  CHECK(run_command(bad_gamma) == kUsage);

  auto missing = command("threshold", dir);
  CHECK(run_command(missing) == kUsage);

  auto unknown = command("threshold", dir);
  unknown.quantity = "K1_o";
  unknown.bracket = std::make_pair(1.0, 1.1);
  CHECK(run_command(unknown) == kUsage);

  auto no_change = command("threshold", dir);
  no_change.problem = "nls1d";
  no_change.quantity = "K2_e";
  no_change.bracket = std::make_pair(3.0, 3.2);
  CHECK(run_command(no_change) == kNumericalFailure);
  const auto rep = report(dir);
  CHECK(rep["status"] == "failed");
  CHECK(rep["error"]["kind"] == "NoSignChange");

  CHECK(run_command(command("no-such-command", dir)) == kUsage);

  const auto cfg = dir / "bad.cfg";
  std::ofstream(cfg) << "[problem]\ngamma = 0.2\n";
  auto from_file = command("soliton", dir);
  from_file.config_path = cfg.string();
  CHECK(run_command(from_file) == kUsage);
}

TEST_CASE("threshold subcommand in 1D") {
  const auto dir = scratch("threshold");
  auto cl = command("threshold", dir);
  cl.problem = "nls1d";
  cl.quantity = "K1_o";
  cl.bracket = std::make_pair(6.0, 6.2);
  REQUIRE(run_command(cl) == kOk);
  const auto rep = report(dir);
  CHECK(rep["results"]["value"].get<double>() == doctest::Approx(6.1288520139).epsilon(1e-6));
  CHECK(rep["results"]["parameter"] == "sigma");
}

TEST_CASE("sweep subcommand records failed points") {
  const auto dir = scratch("sweep");
  auto cl = command("sweep", dir);
  cl.problem = "nls1d";
  cl.scan = std::make_pair(3.0, 3.1);
  cl.points = 2;
  REQUIRE(run_command(cl) == kOk);
  std::istringstream lines(slurp(dir / "sweep.csv"));
  std::string header, row;
  std::getline(lines, header);
  CHECK(header.rfind("sigma,ok,established,mu_star,index B+^(e)", 0) == 0);
  CHECK(header.find("K1_o") != std::string::npos);
  int rows = 0;
  while (std::getline(lines, row)) ++rows;
  CHECK(rows == 2);
  CHECK(report(dir)["results"]["established_points"] == 2);
}

TEST_CASE("reproduce-paper on a subset of criteria") {
  const auto dir = scratch("reproduce");
  auto cl = command("reproduce-paper", dir);
  cl.only = {3, 6};
  REQUIRE(run_command(cl) == kOk);
  const auto rep = report(dir);
  CHECK(rep["results"]["acceptance"]["passed"] == 2);
  CHECK(rep["results"]["criteria"][1]["id"] == 6);
  CHECK(rep["results"]["criteria"][1]["data"]["C0"].get<double>() ==
        doctest::Approx(-0.3668).epsilon(1e-2));
}
