#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

using nlsprop::cli::CommandLine;

namespace {

struct Flags {
  std::string problem, config, out, quantity;
  double sigma = 0.0, gamma = 0.0, delta0 = 0.0, tol = 0.0, rmax = 0.0;
  std::vector<double> bracket, scan;
  int points = 0;
  std::vector<int> only;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--problem", f.problem, "Problem family")
      ->check(CLI::IsMember({"nls1d", "nls3d", "cqnls"}));
  sub->add_option("--sigma", f.sigma, "Power-law exponent sigma");
  sub->add_option("--gamma", f.gamma, "Cubic-quintic coefficient gamma (implies cqnls)");
  sub->add_option("--config", f.config, "Campaign configuration file")->check(CLI::ExistingFile);
  sub->add_option("--out", f.out, "Output directory (default: current directory)");
  sub->add_option("--delta0", f.delta0, "Distortion delta0 of the index operators");
  sub->add_option("--tol", f.tol, "Tolerance of the subcommand's main solve");
  sub->add_option("--rmax", f.rmax, "Soliton domain (index: integration span)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nlsprop: numerical verification of the NLS spectral property"};
  app.require_subcommand(1);
  Flags f;
  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"soliton", "Ground state, dR/domega and potentials (soliton.csv, potentials.csv)"},
      {"slope", "Slope condition; --scan LO HI locates its sign change"},
      {"eigen", "Unstable eigenpair of JL (eigen.csv)"},
      {"index", "Index functions and sector indexes (index.csv)"},
      {"products", "Gram data of the index-carrying sectors (products.csv)"},
      {"verdict", "Per-sector and global spectral-property verdict"},
      {"threshold", "Parameter threshold of a quantity (--quantity, --bracket or --scan)"},
      {"sweep", "Indexes, Gram quantities and verdicts over a parameter grid (sweep.csv)"},
      {"reproduce-paper", "Run every acceptance criterion; exit 0 only if all pass"},
  };
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    add_common(sub, f);
    const std::string name = s.name;
    if (name == "threshold") sub->add_option("--quantity", f.quantity, "Quantity name, e.g. Jratio0");
    if (name == "threshold")
      sub->add_option("--bracket", f.bracket, "Bracket LO HI")->expected(2);
    if (name == "threshold" || name == "slope" || name == "sweep") {
      sub->add_option("--scan", f.scan, "Scan range LO HI")->expected(2);
      sub->add_option("--points", f.points, "Samples of the scan (default 11)");
    }
    if (name == "reproduce-paper")
      sub->add_option("--only", f.only, "Run only these criteria (1-12)")
          ->check(CLI::Range(1, 12));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : nlsprop::cli::kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  CommandLine cl;
  cl.command = sub->get_name();
  auto given = [&](const char* opt) { return sub->get_option_no_throw(opt) && sub->count(opt) > 0; };
  if (given("--problem")) cl.problem = f.problem;
  if (given("--sigma")) cl.sigma = f.sigma;
  if (given("--gamma")) cl.gamma = f.gamma;
  if (given("--config")) cl.config_path = f.config;
  if (given("--out")) cl.out_dir = f.out;
  if (given("--delta0")) cl.delta0 = f.delta0;
  if (given("--tol")) cl.tol = f.tol;
  if (given("--rmax")) cl.rmax = f.rmax;
  if (given("--quantity")) cl.quantity = f.quantity;
  if (given("--bracket")) cl.bracket = std::make_pair(f.bracket[0], f.bracket[1]);
  if (given("--scan")) cl.scan = std::make_pair(f.scan[0], f.scan[1]);
  if (given("--points")) cl.points = f.points;
  cl.only = f.only;
  return nlsprop::cli::run_command(cl);
}
