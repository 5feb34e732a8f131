#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "acceptance.hpp"
#include "nlsprop/linops.hpp"

#ifndef NLSPROP_VERSION
#define NLSPROP_VERSION "unknown"
#endif

namespace nlsprop::cli {

using json = nlohmann::ordered_json;

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
      : out_(path), path_(path) {
    if (!out_) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
    row(header);
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << csv_cell(cells[i]);
    out_ << '\n';
  }

  void numbers(const std::vector<double>& values) {
    std::vector<std::string> cells;
    for (double v : values) cells.push_back(csv_number(v));
    row(cells);
  }

  std::string name() const { return path_.filename().string(); }

 private:
  std::ofstream out_;
  std::filesystem::path path_;
};

struct Run {
  CampaignConfig config;
  std::filesystem::path out;
  json results = json::object();
  json timings = json::object();
  std::vector<std::string> files;

  template <class F>
  auto timed(const std::string& task, F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    auto result = fn();
    timings[task] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
  }

  CsvWriter csv(const std::string& name, const std::vector<std::string>& header) {
    files.push_back(name);
    return CsvWriter(out / name, header);
  }
};

PipelineOptions command_options(const CommandLine& cl, const CampaignConfig& c) {
  auto opt = c.pipeline_options();
  if (cl.command != "index" && cl.rmax) opt.soliton.r_max = *cl.rmax;
  if (!cl.tol) return opt;
  if (cl.command == "soliton" || (cl.command == "slope" && !cl.scan) || cl.command == "eigen") {
    opt.soliton.abs_tol = opt.soliton.rel_tol = *cl.tol;
  } else if (cl.command == "index") {
    opt.index.tolerance = *cl.tol;
  } else if (cl.command == "products" || cl.command == "verdict") {
    opt.products.abs_tol = opt.products.rel_tol = *cl.tol;
  }
  return opt;
}

json spec_json(const ProblemSpec& spec) {
  return {{"label", spec.label()}, {"dimension", spec.dim()}, {"omega", spec.omega}};
}

json index_json(const IndexReport& rep, const std::string& form) {
  return {{"form", form},
          {"operator", rep.tag},
          {"sector", rep.sector.label()},
          {"root_count", rep.root_count},
          {"roots", rep.root_locations},
          {"tangential", rep.tangential},
          {"C0", rep.C0},
          {"C1", rep.C1},
          {"farfield_clear", rep.farfield_clear},
          {"delta0", rep.delta0_used}};
}

std::string form_tag(Sign sign, Sector sector) {
  std::string s = sign == Sign::Plus ? "B+^(" : "B-^(";
  s += sector.is_parity() ? (sector.k == 0 ? "e" : "o") : std::to_string(sector.k);
  return s + ")";
}

json gram_json(const GramData& g) {
  return {{"operator", g.tag},
          {"directions", g.rhs_labels},
          {"gram", g.gram},
          {"ratios", g.ratios},
          {"consistency_error", g.consistency_error},
          {"two_way_error", g.two_way_error},
          {"degenerate", g.degenerate}};
}

json verdict_json(const SpectralVerdict& v) {
  json sectors = json::array();
  for (const auto& s : v.sector_verdicts)
    sectors.push_back({{"form", s.tag},
                       {"sector", s.sector.label()},
                       {"index", s.index},
                       {"negative_directions_found", s.negative_directions_found},
                       {"decisive_quantity", s.decisive_name},
                       {"decisive_value", s.decisive_value},
                       {"positive_on_complement", s.positive_on_complement},
                       {"degenerate", s.degenerate},
                       {"reason", s.reason}});
  return {{"spec", spec_json(v.spec)},
          {"delta0", v.delta0},
          {"established", v.established},
          {"sectors", sectors},
          {"reasons", v.reasons},
          {"coercivity_note", v.coercivity_note}};
}

// ---- subcommands ----

void cmd_soliton(const CommandLine& cl, Run& run) {
  const auto spec = run.config.spec();
  const auto opt = command_options(cl, run.config);
  const auto s = run.timed("soliton", [&] { return solve_soliton(spec, opt.soliton); });
  {
    auto csv = run.csv("soliton.csv", {"r", "R", "R'", "dOmegaR"});
    for (std::size_t i = 0; i < s.R.size(); ++i)
      csv.numbers({s.mesh()[i], s.R.node_value(i), s.R_prime.node_value(i), s.dOmegaR.node_value(i)});
  }
  {
    const auto lin = build_linearized_potentials(spec, s);
    const auto dist = build_distorted_potentials(spec, s);
    auto csv = run.csv("potentials.csv", {"r", "V+", "V-", "calV+", "calV-"});
    for (std::size_t i = 0; i < s.R.size(); ++i)
      csv.numbers({s.mesh()[i], lin.plus.node_value(i), lin.minus.node_value(i),
                   dist.plus.node_value(i), dist.minus.node_value(i)});
  }
  run.results = {{"spec", spec_json(spec)},
                 {"R0", s.R.node_value(0)},
                 {"r_max", s.r_max},
                 {"mesh_points", s.R.size()},
                 {"abs_tol", s.abs_tol},
                 {"rel_tol", s.rel_tol},
                 {"residual_norm", s.residual_norm},
                 {"ode_residual", s.ode_residual},
                 {"abc_residuals", s.abc_residuals},
                 {"positivity_ok", s.positivity_ok},
                 {"domega_crosscheck", s.domega_crosscheck}};
}

void cmd_slope(const CommandLine& cl, Run& run) {
  const auto opt = command_options(cl, run.config);
  const auto family = run.config.family;
  if (!cl.scan) {
    const auto spec = run.config.spec();
    const auto s = run.timed("slope", [&] { return slope_condition(spec, 1e-3, opt.soliton); });
    run.results = {{"spec", spec_json(spec)},
                   {"slope", s.value},
                   {"finite_difference", s.finite_difference},
                   {"norm_squared", s.norm_squared},
                   {"slope_over_norm_squared", s.value / s.norm_squared},
                   {"stable", s.value > 0.0}};
    return;
  }
  const auto [lo, hi] = *cl.scan;
  const int points = cl.points.value_or(11);
  const double tol = cl.tol.value_or(1e-9);
  std::vector<std::pair<double, double>> samples;
  json threshold = nullptr;
  run.timed("scan", [&] {
    try {
      const auto t = scan_threshold(family, "slope", lo, hi, points, tol, opt, &samples);
      threshold = {{"parameter", t.parameter}, {"value", t.value}, {"bracket", {t.lo, t.hi}},
                   {"evaluations", t.evaluations}};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoSignChange) throw;
    }
    return 0;
  });
  auto csv = run.csv("sweep.csv", {parameter_name(family), "slope"});
  for (const auto& [p, v] : samples) csv.numbers({p, v});
  run.results = {{"family", family_name(family)},
                 {"scan", {lo, hi}},
                 {"points", points},
                 {"sign_change", threshold}};
}

void cmd_eigen(const CommandLine& cl, Run& run) {
  const auto spec = run.config.spec();
  const auto opt = command_options(cl, run.config);
  const auto s = run.timed("soliton", [&] { return solve_soliton(spec, opt.soliton); });
  const auto e = run.timed("eigen", [&] { return solve_unstable_eigenpair(spec, s, opt.eigen); });
  auto csv = run.csv("eigen.csv", {"r", "phi1", "phi2"});
  const auto& mesh = e.phi1.mesh();
  for (std::size_t i = 0; i < mesh.size(); ++i)
    csv.numbers({mesh[i], e.phi1.node_value(i), e.phi2.value(mesh[i])});
  run.results = {{"spec", spec_json(spec)},
                 {"mu_star", e.mu_star},
                 {"residual1", e.residual1},
                 {"residual2", e.residual2},
                 {"normalization", e.normalization},
                 {"tail", e.tail},
                 {"attempts", e.attempts}};
}

void cmd_index(const CommandLine& cl, Run& run) {
  const auto spec = run.config.spec();
  auto opt = command_options(cl, run.config);
  if (cl.rmax) opt.index.r_max = *cl.rmax;
  const double delta0 = opt.delta0;
  const auto s = run.timed("soliton", [&] { return solve_soliton(spec, opt.soliton); });
  std::vector<std::pair<std::string, IndexReport>> reports;
  run.timed("index", [&] {
    auto one = [&](Sign sign, Sector sector) -> const IndexReport& {
      const auto op = make_operator(spec, s, sign, Family::DistortedL, sector, delta0);
      reports.emplace_back(form_tag(sign, sector), index_of_sector(op, opt.index, false));
      return reports.back().second;
    };
    if (spec.dim() == 3) {
      for (Sign sign : {Sign::Plus, Sign::Minus}) {
        std::vector<int> counts;
        int zeros = 0;
        for (int k = 0; k <= opt.max_harmonic && zeros < 2; ++k) {
          counts.push_back(one(sign, Sector::harmonic(k)).root_count);
          zeros = counts.back() == 0 ? zeros + 1 : 0;
        }
        check_monotonicity(counts);
      }
    } else {
      for (Sector sector : {Sector::even(), Sector::odd()})
        for (Sign sign : {Sign::Plus, Sign::Minus}) one(sign, sector);
    }
    return 0;
  });
  auto csv = run.csv("index.csv", {"sector", "r", "U", "root_count", "C0", "C1", "clear"});
  json sectors = json::array();
  for (const auto& [form, rep] : reports) {
    const auto& tr = rep.trajectory;
    constexpr int kSamples = 2000;
    for (int i = 0; i <= kSamples; ++i) {
      const double r = tr.r_min() + (tr.r_max() - tr.r_min()) * i / kSamples;
      csv.row({form, csv_number(r), csv_number(tr.value(r)), "", "", "", ""});
    }
    csv.row({form, "", "", std::to_string(rep.root_count), csv_number(rep.C0), csv_number(rep.C1),
             rep.farfield_clear ? "1" : "0"});
    sectors.push_back(index_json(rep, form));
  }
  run.results = {{"spec", spec_json(spec)}, {"delta0", delta0}, {"sectors", sectors}};
}

void write_products(Run& run, const PipelineResult& res) {
  auto csv = run.csv("products.csv", {"sector", "quantity", "value"});
  json grams = json::array();
  for (const auto& sec : res.sectors) {
    if (!sec.gram) continue;
    const auto& g = *sec.gram;
    const auto form = sec.verdict.tag;
    for (const auto& [name, value] : sector_quantities(res.verdict.spec, sec.sign, sec.sector, g))
      csv.row({form, name, csv_number(value)});
    for (const auto& [name, value] : g.ratios) csv.row({form, name, csv_number(value)});
    csv.row({form, "consistency_error", csv_number(g.consistency_error)});
    csv.row({form, "two_way_error", csv_number(g.two_way_error)});
    auto j = gram_json(g);
    j["form"] = form;
    grams.push_back(j);
  }
  run.results["products"] = grams;
  run.results["quantities"] = res.quantities;
}

void cmd_products(const CommandLine& cl, Run& run) {
  const auto spec = run.config.spec();
  const auto opt = command_options(cl, run.config);
  const auto res = run.timed("pipeline", [&] { return run_pipeline(spec, opt); });
  run.results["spec"] = spec_json(spec);
  run.results["mu_star"] = res.eigenpair.mu_star;
  write_products(run, res);
}

void cmd_verdict(const CommandLine& cl, Run& run) {
  const auto spec = run.config.spec();
  json verdicts = json::array();
  bool all = true;
  std::optional<PipelineResult> first;
  for (double d : run.config.delta0) {
    auto opt = command_options(cl, run.config);
    opt.delta0 = d;
    auto res = run.timed("pipeline delta0=" + csv_number(d), [&] { return run_pipeline(spec, opt); });
    verdicts.push_back(verdict_json(res.verdict));
    all = all && res.verdict.established;
    if (!first) first = std::move(res);
  }
  run.results["spec"] = spec_json(spec);
  run.results["established"] = all;
  run.results["verdicts"] = verdicts;
  write_products(run, *first);
  std::cout << spec.label() << ": spectral property " << (all ? "established" : "NOT established")
            << '\n';
  for (const auto& v : first->verdict.reasons) std::cout << "  " << v << '\n';
}

void require_quantity(const CommandLine& cl, ProblemFamily family) {
  if (!cl.quantity) throw UsageError("--quantity is required");
  const auto names = known_quantities(family);
  if (std::find(names.begin(), names.end(), *cl.quantity) == names.end()) {
    std::string list;
    for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
    throw UsageError("unknown quantity '" + *cl.quantity + "' for " + family_name(family) +
                     " (known: " + list + ")");
  }
}

void cmd_threshold(const CommandLine& cl, Run& run) {
  const auto family = run.config.family;
  require_quantity(cl, family);
  if (!cl.bracket && !cl.scan) throw UsageError("threshold needs --bracket LO HI or --scan LO HI");
  const auto opt = command_options(cl, run.config);
  const double tol = cl.tol.value_or(run.config.threshold_tolerance());
  const auto t = run.timed("threshold", [&] {
    if (cl.bracket)
      return find_threshold(family, *cl.quantity, cl.bracket->first, cl.bracket->second, tol, opt);
    return scan_threshold(family, *cl.quantity, cl.scan->first, cl.scan->second,
                          cl.points.value_or(11), tol, opt);
  });
  run.results = {{"family", family_name(family)},
                 {"quantity", t.quantity},
                 {"parameter", t.parameter},
                 {"value", t.value},
                 {"bracket", {t.lo, t.hi}},
                 {"f_lo", t.f_lo},
                 {"f_hi", t.f_hi},
                 {"x_tolerance", tol},
                 {"evaluations", t.evaluations}};
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s = %.12g", t.parameter.c_str(), t.value);
  std::cout << t.quantity << " changes sign at " << buf << " (" << t.evaluations
            << " evaluations)\n";
}

void cmd_sweep(const CommandLine& cl, Run& run) {
  const auto family = run.config.family;
  std::vector<double> grid;
  if (cl.scan)
    grid = uniform_grid(cl.scan->first, cl.scan->second, cl.points.value_or(11));
  else if (run.config.sweep_points > 0)
    grid = uniform_grid(run.config.sweep_lo, run.config.sweep_hi, run.config.sweep_points);
  else
    grid = campaign_grid(family);
  const auto opt = command_options(cl, run.config);
  const auto rows = run.timed("sweep", [&] { return sweep(family, grid, opt); });

  std::set<std::string> forms, names;
  for (const auto& row : rows) {
    for (const auto& [k, v] : row.indexes) forms.insert(k);
    for (const auto& [k, v] : row.quantities) names.insert(k);
  }
  std::vector<std::string> header = {parameter_name(family), "ok", "established", "mu_star"};
  for (const auto& f : forms) header.push_back("index " + f);
  for (const auto& f : forms) header.push_back("positive " + f);
  for (const auto& n : names) header.push_back(n);
  header.push_back("error");
  auto csv = run.csv("sweep.csv", header);
  int failures = 0, established = 0;
  for (const auto& row : rows) {
    std::vector<std::string> cells = {csv_number(row.parameter), row.ok ? "1" : "0",
                                      row.established ? "1" : "0",
                                      row.ok ? csv_number(row.mu_star) : ""};
    for (const auto& f : forms) {
      auto it = row.indexes.find(f);
      cells.push_back(it == row.indexes.end() ? "" : std::to_string(it->second));
    }
    for (const auto& f : forms) {
      auto it = row.positive.find(f);
      cells.push_back(it == row.positive.end() ? "" : (it->second ? "1" : "0"));
    }
    for (const auto& n : names) {
      auto it = row.quantities.find(n);
      cells.push_back(it == row.quantities.end() ? "" : csv_number(it->second));
    }
    cells.push_back(row.error);
    csv.row(cells);
    failures += row.ok ? 0 : 1;
    established += row.established ? 1 : 0;
  }
  run.results = {{"family", family_name(family)},
                 {"points", grid.size()},
                 {"failed_points", failures},
                 {"established_points", established}};
}

int cmd_reproduce(const CommandLine& cl, Run& run) {
  const auto results = run.timed("acceptance", [&] {
    return run_acceptance(run.config, cl.only, [](const CriterionResult& r) {
      std::cout << format_line(r) << std::endl;
    });
  });
  json criteria = json::array();
  int passed = 0;
  for (const auto& r : results) {
    criteria.push_back({{"id", r.id},
                        {"title", r.title},
                        {"pass", r.passed},
                        {"detail", r.detail},
                        {"seconds", r.seconds},
                        {"data", r.data}});
    run.timings["criterion " + std::to_string(r.id)] = r.seconds;
    passed += r.passed ? 1 : 0;
  }
  run.results["criteria"] = criteria;
  run.results["acceptance"] = {{"passed", passed}, {"total", results.size()}};
  std::cout << passed << "/" << results.size() << " criteria passed\n";
  return passed == static_cast<int>(results.size()) ? kOk : kNumericalFailure;
}

void write_report(const Run& run, const std::string& command, const std::string& status,
                  const json& error) {
  json report;
  report["toolkit"] = {{"name", "nlsprop"}, {"version", NLSPROP_VERSION}};
  report["command"] = command;
  report["config"] = config_echo(run.config);
  report["results"] = run.results;
  report["files"] = run.files;
  report["wall_clock_seconds"] = run.timings;
  report["status"] = status;
  if (!error.is_null()) report["error"] = error;
  std::ofstream out(run.out / "report.json");
  out << report.dump(2) << '\n';
}

}  // namespace

CampaignConfig resolve_config(const CommandLine& cl) {
  CampaignConfig c = cl.config_path ? parse_config(*cl.config_path) : CampaignConfig{};
  auto flag = [&](const std::string& name, const std::string& value) {
    c.overrides.emplace_back("--" + name, value);
  };
  if (cl.problem) {
    try {
      c.family = parse_family(*cl.problem);
    } catch (const Error&) {
      throw ConfigError(ErrorKind::ValidationError,
                        "problem: must be nls1d, nls3d or cqnls, got '" + *cl.problem + "'", 0,
                        "problem");
    }
    flag("problem", *cl.problem);
  }
  if (cl.sigma) {
    if (c.family == ProblemFamily::Cqnls)
      throw ConfigError(ErrorKind::ValidationError, "sigma: cqnls is parametrized by --gamma", 0,
                        "sigma");
    c.sigma = *cl.sigma;
    flag("sigma", csv_number(*cl.sigma));
  }
  if (cl.gamma) {
    if (!cl.problem) c.family = ProblemFamily::Cqnls;
    if (c.family != ProblemFamily::Cqnls)
      throw ConfigError(ErrorKind::ValidationError,
                        "gamma: only the cqnls problem has a gamma parameter", 0, "gamma");
    c.gamma = *cl.gamma;
    flag("gamma", csv_number(*cl.gamma));
  }
  if (cl.delta0) {
    c.delta0 = {*cl.delta0};
    flag("delta0", csv_number(*cl.delta0));
  }
  if (cl.out_dir) {
    c.out_dir = *cl.out_dir;
    flag("out", *cl.out_dir);
  }
  if (cl.tol) {
    if (!(*cl.tol > 0.0)) throw ConfigError(ErrorKind::ValidationError, "tol: must be positive", 0, "tol");
    flag("tol", csv_number(*cl.tol));
  }
  if (cl.rmax) {
    if (!(*cl.rmax > 0.0)) throw ConfigError(ErrorKind::ValidationError, "rmax: must be positive", 0, "rmax");
    flag("rmax", csv_number(*cl.rmax));
  }
  if (cl.points && *cl.points < 2)
    throw ConfigError(ErrorKind::ValidationError, "points: need at least 2", 0, "points");
  for (const auto* range : {&cl.bracket, &cl.scan})
    if (*range && !((*range)->first < (*range)->second))
      throw ConfigError(ErrorKind::ValidationError, "range must satisfy lo < hi", 0,
                        range == &cl.bracket ? "bracket" : "scan");
  c.validate();
  return c;
}

int run_command(const CommandLine& cl) {
  Run run;
  try {
    run.config = resolve_config(cl);
  } catch (const ConfigError& e) {
    std::cerr << "nlsprop: " << e.what() << '\n';
    return kUsage;
  }
  run.out = run.config.out_dir;
  std::error_code ec;
  std::filesystem::create_directories(run.out, ec);
  if (ec) {
    std::cerr << "nlsprop: cannot create output directory " << run.out << ": " << ec.message() << '\n';
    return kUsage;
  }

  int code = kOk;
  try {
    const auto& c = cl.command;
    if (c == "soliton") cmd_soliton(cl, run);
    else if (c == "slope") cmd_slope(cl, run);
    else if (c == "eigen") cmd_eigen(cl, run);
    else if (c == "index") cmd_index(cl, run);
    else if (c == "products") cmd_products(cl, run);
    else if (c == "verdict") cmd_verdict(cl, run);
    else if (c == "threshold") cmd_threshold(cl, run);
    else if (c == "sweep") cmd_sweep(cl, run);
    else if (c == "reproduce-paper") code = cmd_reproduce(cl, run);
    else throw UsageError("unknown subcommand '" + c + "'");
  } catch (const UsageError& e) {
    std::cerr << "nlsprop: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "nlsprop: " << e.what() << '\n';
    write_report(run, cl.command, "failed",
                 {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}});
    return kNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "nlsprop: " << e.what() << '\n';
    write_report(run, cl.command, "failed", {{"kind", "internal"}, {"message", e.what()}});
    return kNumericalFailure;
  }
  write_report(run, cl.command, code == kOk ? "ok" : "failed", nullptr);
  return code;
}

}  // namespace nlsprop::cli
