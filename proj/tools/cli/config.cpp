#include "config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace nlsprop::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_fail(int line, const std::string& field, const std::string& msg) {
  throw ConfigError(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + msg, line,
                    field);
}

[[noreturn]] void invalid(const std::string& field, const std::string& msg) {
  throw ConfigError(ErrorKind::ValidationError, field + ": " + msg, 0, field);
}

double to_double(const std::string& text, int line, const std::string& key) {
  const std::string t = trim(text);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || *end != '\0' || !std::isfinite(v))
    parse_fail(line, key, "'" + t + "' is not a number");
  return v;
}

int to_int(const std::string& text, int line, const std::string& key) {
  const double v = to_double(text, line, key);
  if (v != std::floor(v) || std::abs(v) > 1e9) parse_fail(line, key, "expected an integer");
  return static_cast<int>(v);
}

using Setter = std::function<void(CampaignConfig&, const std::string&, int)>;

struct Key {
  std::string section;
  Setter set;
};

Setter real(double CampaignConfig::*field, const char* name) {
  return [field, name](CampaignConfig& c, const std::string& v, int line) {
    c.*field = to_double(v, line, name);
  };
}

const std::map<std::string, Key>& keys() {
  static const std::map<std::string, Key> table = [] {
    std::map<std::string, Key> k;
    k["family"] = {"problem", [](CampaignConfig& c, const std::string& v, int line) {
                     try {
                       c.family = parse_family(trim(v));
                     } catch (const Error&) {
                       parse_fail(line, "family", "family must be nls1d, nls3d or cqnls");
                     }
                   }};
    k["sigma"] = {"problem", real(&CampaignConfig::sigma, "sigma")};
    k["gamma"] = {"problem", real(&CampaignConfig::gamma, "gamma")};
    k["omega"] = {"problem", real(&CampaignConfig::omega, "omega")};
    k["r_max_soliton"] = {"domains", real(&CampaignConfig::r_max_soliton, "r_max_soliton")};
    k["r_max_index_3d"] = {"domains", real(&CampaignConfig::r_max_index_3d, "r_max_index_3d")};
    k["r_max_index_1d"] = {"domains", real(&CampaignConfig::r_max_index_1d, "r_max_index_1d")};
    k["soliton_3d"] = {"tolerances", real(&CampaignConfig::soliton_tol_3d, "soliton_3d")};
    k["soliton_1d"] = {"tolerances", real(&CampaignConfig::soliton_tol_1d, "soliton_1d")};
    k["index"] = {"tolerances", real(&CampaignConfig::index_tol, "index")};
    k["products_3d"] = {"tolerances", real(&CampaignConfig::products_tol_3d, "products_3d")};
    k["products_1d_abs"] = {"tolerances",
                            real(&CampaignConfig::products_abs_tol_1d, "products_1d_abs")};
    k["products_1d_rel"] = {"tolerances",
                            real(&CampaignConfig::products_rel_tol_1d, "products_1d_rel")};
    k["threshold_3d"] = {"tolerances", real(&CampaignConfig::threshold_tol_3d, "threshold_3d")};
    k["threshold_cq"] = {"tolerances", real(&CampaignConfig::threshold_tol_cq, "threshold_cq")};
    k["threshold_1d"] = {"tolerances", real(&CampaignConfig::threshold_tol_1d, "threshold_1d")};
    k["delta0"] = {"verdict", [](CampaignConfig& c, const std::string& v, int line) {
                     c.delta0.clear();
                     std::stringstream ss(v);
                     std::string item;
                     while (std::getline(ss, item, ',')) c.delta0.push_back(to_double(item, line, "delta0"));
                   }};
    k["degeneracy_factor"] = {"verdict",
                              real(&CampaignConfig::degeneracy_factor, "degeneracy_factor")};
    k["max_harmonic"] = {"verdict", [](CampaignConfig& c, const std::string& v, int line) {
                           c.max_harmonic = to_int(v, line, "max_harmonic");
                         }};
    k["lo"] = {"sweep", real(&CampaignConfig::sweep_lo, "lo")};
    k["hi"] = {"sweep", real(&CampaignConfig::sweep_hi, "hi")};
    k["points"] = {"sweep", [](CampaignConfig& c, const std::string& v, int line) {
                     c.sweep_points = to_int(v, line, "points");
                   }};
    k["dir"] = {"output", [](CampaignConfig& c, const std::string& v, int) { c.out_dir = trim(v); }};
    return k;
  }();
  return table;
}

}  // namespace

double CampaignConfig::threshold_tolerance() const {
  switch (family) {
    case ProblemFamily::Nls1d: return threshold_tol_1d;
    case ProblemFamily::Cqnls: return threshold_tol_cq;
    default: return threshold_tol_3d;
  }
}

PipelineOptions CampaignConfig::pipeline_options(double delta0_value) const {
  PipelineOptions o;
  o.delta0 = delta0_value;
  const bool one = family == ProblemFamily::Nls1d;
  o.soliton.r_max = r_max_soliton;
  o.soliton.abs_tol = o.soliton.rel_tol = one ? soliton_tol_1d : soliton_tol_3d;
  o.index.tolerance = index_tol;
  o.index.r_max = one ? r_max_index_1d : r_max_index_3d;
  o.products.abs_tol = one ? products_abs_tol_1d : products_tol_3d;
  o.products.rel_tol = one ? products_rel_tol_1d : products_tol_3d;
  o.degeneracy_factor = degeneracy_factor;
  o.max_harmonic = max_harmonic;
  return o;
}

void CampaignConfig::validate() const {
  if (!(sigma > 0.0)) invalid("sigma", "must be positive");
  if (!(gamma >= 0.0 && gamma < kCubicQuinticGammaMax))
    invalid("gamma", "must satisfy 0 <= gamma < 3/16 (soliton existence)");
  if (!(omega > 0.0)) invalid("omega", "must be positive");
  const std::pair<const char*, double> positive[] = {
      {"r_max_soliton", r_max_soliton},     {"r_max_index_3d", r_max_index_3d},
      {"r_max_index_1d", r_max_index_1d},   {"soliton_3d", soliton_tol_3d},
      {"soliton_1d", soliton_tol_1d},       {"index", index_tol},
      {"products_3d", products_tol_3d},     {"products_1d_abs", products_abs_tol_1d},
      {"products_1d_rel", products_rel_tol_1d}, {"threshold_3d", threshold_tol_3d},
      {"threshold_cq", threshold_tol_cq},   {"threshold_1d", threshold_tol_1d},
      {"degeneracy_factor", degeneracy_factor}};
  for (const auto& [name, v] : positive)
    if (!(v > 0.0)) invalid(name, "must be positive");
  if (delta0.empty()) invalid("delta0", "needs at least one value");
  for (std::size_t i = 0; i < delta0.size(); ++i) {
    if (delta0[i] < 0.0) invalid("delta0", "values must be nonnegative");
    if (i > 0 && !(delta0[i] > delta0[i - 1])) invalid("delta0", "values must be increasing");
  }
  if (max_harmonic < 1) invalid("max_harmonic", "must be at least 1");
  if (sweep_points > 0) {
    if (sweep_points > 1 && !(sweep_lo < sweep_hi)) invalid("lo", "sweep grid needs lo < hi");
    if (family == ProblemFamily::Cqnls && (sweep_lo < 0.0 || sweep_hi >= kCubicQuinticGammaMax))
      invalid("hi", "gamma grid must lie in [0, 3/16)");
    if (family != ProblemFamily::Cqnls && !(sweep_lo > 0.0)) invalid("lo", "sigma must be positive");
  }
}

CampaignConfig parse_config_text(const std::string& text) {
  CampaignConfig c;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    if (const auto hash = s.find_first_of("#;"); hash != std::string::npos) s.erase(hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') parse_fail(line, "", "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      static const char* sections[] = {"problem", "domains", "tolerances", "verdict", "sweep",
                                       "output"};
      bool known = false;
      for (const char* name : sections) known = known || section == name;
      if (!known) parse_fail(line, section, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) parse_fail(line, "", "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq)), value = trim(s.substr(eq + 1));
    if (key.empty()) parse_fail(line, "", "missing key");
    if (value.empty()) parse_fail(line, key, "missing value for '" + key + "'");
    const auto it = keys().find(key);
    if (it == keys().end()) parse_fail(line, key, "unknown key '" + key + "'");
    if (!section.empty() && it->second.section != section)
      parse_fail(line, key, "key '" + key + "' belongs to [" + it->second.section + "]");
    it->second.set(c, value, line);
    c.overrides.emplace_back(key, value);
  }
  c.validate();
  return c;
}

CampaignConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(ErrorKind::ParseError, "cannot open config file " + path, 0, "");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

nlohmann::ordered_json config_echo(const CampaignConfig& c) {
  nlohmann::ordered_json j;
  j["problem"] = {{"family", family_name(c.family)},
                  {"sigma", c.sigma},
                  {"gamma", c.gamma},
                  {"omega", c.omega}};
  j["domains"] = {{"r_max_soliton", c.r_max_soliton},
                  {"r_max_index_3d", c.r_max_index_3d},
                  {"r_max_index_1d", c.r_max_index_1d}};
  j["tolerances"] = {{"soliton_3d", c.soliton_tol_3d},     {"soliton_1d", c.soliton_tol_1d},
                     {"index", c.index_tol},                {"products_3d", c.products_tol_3d},
                     {"products_1d_abs", c.products_abs_tol_1d},
                     {"products_1d_rel", c.products_rel_tol_1d},
                     {"threshold_3d", c.threshold_tol_3d}, {"threshold_cq", c.threshold_tol_cq},
                     {"threshold_1d", c.threshold_tol_1d}};
  j["verdict"] = {{"delta0", c.delta0},
                  {"degeneracy_factor", c.degeneracy_factor},
                  {"max_harmonic", c.max_harmonic}};
  j["sweep"] = {{"lo", c.sweep_lo}, {"hi", c.sweep_hi}, {"points", c.sweep_points}};
  j["output"] = {{"dir", c.out_dir}};
  auto& o = j["overrides"] = nlohmann::ordered_json::array();
  for (const auto& [k, v] : c.overrides) o.push_back({{"key", k}, {"value", v}});
  return j;
}

std::vector<double> campaign_grid(ProblemFamily family) {
  switch (family) {
    case ProblemFamily::Nls1d: return uniform_grid(2.3, 6.3, 41);
    case ProblemFamily::Cqnls: return uniform_grid(0.0, 0.012, 25);
    default: return uniform_grid(0.8, 1.2, 41);
  }
}

}  // namespace nlsprop::cli
