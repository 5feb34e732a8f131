#include "nlsprop/verdict.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "nlsprop/errors.hpp"
#include "nlsprop/quadrature.hpp"
#include "nlsprop/roots.hpp"

namespace nlsprop {

ProblemFamily parse_family(const std::string& name) {
  if (name == "nls1d") return ProblemFamily::Nls1d;
  if (name == "nls3d") return ProblemFamily::Nls3d;
  if (name == "cqnls") return ProblemFamily::Cqnls;
  throw Error(ErrorKind::InvalidArgument, "unknown problem '" + name + "' (nls1d|nls3d|cqnls)");
}

std::string family_name(ProblemFamily family) {
  switch (family) {
    case ProblemFamily::Nls1d: return "nls1d";
    case ProblemFamily::Nls3d: return "nls3d";
    case ProblemFamily::Cqnls: return "cqnls";
  }
  return "";
}

std::string parameter_name(ProblemFamily family) {
  return family == ProblemFamily::Cqnls ? "gamma" : "sigma";
}

ProblemSpec family_spec(ProblemFamily family, double parameter, double omega) {
  ProblemSpec spec;
  spec.omega = omega;
  if (family == ProblemFamily::Cqnls) {
    spec.nonlinearity = NonlinearitySpec::cubic_quintic(parameter);
  } else {
    spec.nonlinearity = NonlinearitySpec::power(parameter);
    spec.dimension = family == ProblemFamily::Nls1d ? Dimension::One : Dimension::Three;
  }
  spec.validate();
  return spec;
}

namespace {

std::string form_tag(Sign sign, Sector sector) {
  std::string s = sign == Sign::Plus ? "B+^(" : "B-^(";
  s += sector.is_parity() ? (sector.k == 0 ? "e" : "o") : std::to_string(sector.k);
  return s + ")";
}

std::string sector_suffix(Sector sector) {
  if (sector.is_parity()) return sector.k == 0 ? "e" : "o";
  return std::to_string(sector.k);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<double> eigenvalues(const GramData& g) {
  if (g.size() == 0) return {};
  if (g.size() == 1) return {g.gram[0][0]};
  const double a = g.gram[0][0], b = g.gram[0][1], d = g.gram[1][1];
  const double mid = 0.5 * (a + d), rad = std::hypot(0.5 * (a - d), b);
  return {mid - rad, mid + rad};
}

}  // namespace

HarmonicVerdict harmonic_verdict(const IndexReport& index, const GramData& gram,
                                 double degeneracy_tol, const std::string& decisive_name,
                                 double decisive_value) {
  HarmonicVerdict v;
  v.tag = index.tag;
  v.sector = index.sector;
  v.index = index.root_count;
  if (!index.farfield_clear) {
    v.reason = "index of " + index.tag + " is not certified by the far-field fit";
    return v;
  }
  if (v.index == 0) {
    v.positive_on_complement = true;
    return v;
  }
  if (static_cast<std::size_t>(v.index) > gram.size())
    throw Error(ErrorKind::IndexExceedsDirections,
                index.tag + " has index " + std::to_string(v.index) + " but only " +
                    std::to_string(gram.size()) + " orthogonality directions");
  const double tol = degeneracy_tol >= 0.0 ? degeneracy_tol : 1e-8 * gram.max_abs();
  for (double e : eigenvalues(gram))
    if (e < -tol) ++v.negative_directions_found;
  v.decisive_name = decisive_name.empty() ? "eig_min" : decisive_name;
  v.decisive_value = decisive_name.empty() ? gram.smallest_eigenvalue() : decisive_value;
  v.degenerate = gram.degenerate || std::abs(v.decisive_value) <= tol;
  v.positive_on_complement = v.negative_directions_found == v.index && !v.degenerate;
  if (!v.positive_on_complement) {
    if (v.degenerate)
      v.reason = v.decisive_name + " = " + fmt(v.decisive_value) + " is within the degeneracy tolerance";
    else
      v.reason = "Gram matrix has " + std::to_string(v.negative_directions_found) +
                 " negative eigenvalue(s) for index " + std::to_string(v.index) + " (" +
                 v.decisive_name + " = " + fmt(v.decisive_value) + ")";
  }
  return v;
}

std::map<std::string, double> sector_quantities(const ProblemSpec& spec, Sign sign, Sector sector,
                                                const GramData& gram) {
  std::map<std::string, double> q;
  const std::string s = sector_suffix(sector);
  const std::string letter = sign == Sign::Plus ? "K" : "J";
  const std::string sep = sector.is_parity() ? "_" : "";
  if (gram.size() == 1) {
    q[letter + "1_" + s] = gram.gram[0][0];
  } else if (gram.size() == 2) {
    const double a = gram.gram[0][0], b = gram.gram[0][1], d = gram.gram[1][1];
    q[letter + "1_" + s] = a;
    q[letter + "2_" + s] = d;
    q[letter + "3_" + s] = b;
    const bool by_first = sign == Sign::Plus && !spec.is_power();
    q[letter + "ratio" + sep + s] = (a * d - b * b) / (by_first ? a : d);
  }
  return q;
}

std::string decisive_quantity(const ProblemSpec& spec, Sign sign, Sector sector) {
  const std::string s = sector_suffix(sector);
  if (sector.k == 0) {
    // 1D B+ even sector is decided by K2 alone.
    if (sector.is_parity() && sign == Sign::Plus) return "K2_e";
    return std::string(sign == Sign::Plus ? "K" : "J") + "ratio" + (sector.is_parity() ? "_" : "") + s;
  }
  if (sector.k == 1 && sign == Sign::Plus) return "K1_" + s;
  (void)spec;
  return "";
}

namespace {

SectorResult run_sector(const ProblemSpec& spec, const SolitonData& soliton,
                        const Eigenpair& pair, Sign sign, Sector sector,
                        const PipelineOptions& options) {
  SectorResult out;
  out.sign = sign;
  out.sector = sector;
  const auto op = make_operator(spec, soliton, sign, Family::DistortedL, sector, options.delta0);
  out.index = index_of_sector(op, options.index, false);
  GramData gram;
  if (out.index.root_count > 0 && out.index.farfield_clear) {
    gram = gram_matrix(op, sector_rhs_set(spec, soliton, pair, sign, sector), options.products);
    out.gram = gram;
  }
  const std::string name = decisive_quantity(spec, sign, sector);
  double value = 0.0;
  if (out.gram && !name.empty()) {
    const auto q = sector_quantities(spec, sign, sector, gram);
    if (auto it = q.find(name); it != q.end()) value = it->second;
  }
  try {
    out.verdict = harmonic_verdict(out.index, gram, options.degeneracy_factor * gram.max_abs(),
                                   out.gram ? name : "", value);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::IndexExceedsDirections) throw;
    out.verdict.tag = out.index.tag;
    out.verdict.sector = sector;
    out.verdict.index = out.index.root_count;
    out.verdict.reason = e.what();
  }
  out.verdict.sign = sign;
  out.verdict.tag = form_tag(sign, sector);
  return out;
}

std::string coercivity_note(const ProblemSpec& spec, const SolitonData& soliton) {
  const auto pots = build_distorted_potentials(spec, soliton);
  const auto fp = fit_decay(pots.plus), fm = fit_decay(pots.minus);
  std::ostringstream os;
  os << "distorted potentials decay like exp(-kappa r) with kappa = " << fmt(fp.kappa) << " (+), "
     << fmt(fm.kappa) << " (-) on the resolved tail; the bound B >= delta0 int e^{-|x|} |z|^2 "
     << "therefore extends to the full spectral-property estimate";
  if (!fp.decays || !fm.decays) os << " [decay fit failed]";
  return os.str();
}

}  // namespace

PipelineResult run_pipeline(const ProblemSpec& spec, const PipelineOptions& options) {
  spec.validate();
  PipelineResult res;
  res.soliton = solve_soliton(spec, options.soliton);
  res.eigenpair = solve_unstable_eigenpair(spec, res.soliton, options.eigen);

  auto add = [&](Sign sign, Sector sector) -> const SectorResult& {
    res.sectors.push_back(run_sector(spec, res.soliton, res.eigenpair, sign, sector, options));
    return res.sectors.back();
  };
  if (spec.dim() == 3) {
    for (Sign sign : {Sign::Plus, Sign::Minus}) {
      std::vector<int> counts;
      int zeros = 0;
      for (int k = 0; k <= options.max_harmonic && zeros < 2; ++k) {
        const auto& s = add(sign, Sector::harmonic(k));
        counts.push_back(s.index.root_count);
        zeros = s.index.root_count == 0 ? zeros + 1 : 0;
      }
      check_monotonicity(counts);
      if (zeros < 2)
        res.verdict.reasons.push_back("harmonic scan did not terminate by k = " +
                                      std::to_string(options.max_harmonic));
    }
  } else {
    for (Sector sector : {Sector::even(), Sector::odd()})
      for (Sign sign : {Sign::Plus, Sign::Minus}) add(sign, sector);
  }

  res.quantities["mu_star"] = res.eigenpair.mu_star;
  res.quantities["slope"] = 2.0 * inner_product(res.soliton.R, res.soliton.dOmegaR,
                                                res.soliton.weight());
  auto& v = res.verdict;
  v.spec = spec;
  v.delta0 = options.delta0;
  v.established = v.reasons.empty();
  for (const auto& s : res.sectors) {
    if (s.gram)
      for (const auto& [name, value] : sector_quantities(spec, s.sign, s.sector, *s.gram))
        res.quantities[name] = value;
    v.sector_verdicts.push_back(s.verdict);
    if (!s.verdict.positive_on_complement) {
      v.established = false;
      v.reasons.push_back(s.verdict.tag + ": " + s.verdict.reason);
    }
  }
  v.coercivity_note = coercivity_note(spec, res.soliton);
  return res;
}

SpectralVerdict spectral_verdict(const ProblemSpec& spec, double delta0) {
  PipelineOptions options;
  options.delta0 = delta0;
  return run_pipeline(spec, options).verdict;
}

namespace {

struct QuantitySite {
  Sign sign;
  Sector sector;
};

std::map<std::string, QuantitySite> quantity_sites(ProblemFamily family) {
  std::map<std::string, QuantitySite> m;
  if (family == ProblemFamily::Nls1d) {
    for (const char* n : {"K1_e", "K2_e", "K3_e", "Kratio_e"}) m[n] = {Sign::Plus, Sector::even()};
    for (const char* n : {"J1_e", "J2_e", "J3_e", "Jratio_e"}) m[n] = {Sign::Minus, Sector::even()};
    m["K1_o"] = {Sign::Plus, Sector::odd()};
  } else {
    for (const char* n : {"K1_0", "K2_0", "K3_0", "Kratio0"})
      m[n] = {Sign::Plus, Sector::harmonic(0)};
    for (const char* n : {"J1_0", "J2_0", "J3_0", "Jratio0"})
      m[n] = {Sign::Minus, Sector::harmonic(0)};
    m["K1_1"] = {Sign::Plus, Sector::harmonic(1)};
  }
  return m;
}

}  // namespace

std::vector<std::string> known_quantities(ProblemFamily family) {
  std::vector<std::string> out;
  for (const auto& [name, site] : quantity_sites(family)) out.push_back(name);
  out.push_back("mu_star");
  out.push_back("slope");
  return out;
}

double evaluate_quantity(ProblemFamily family, double parameter, const std::string& name,
                         const PipelineOptions& options, WarmStart* warm) {
  const auto sites = quantity_sites(family);
  const auto site = sites.find(name);
  if (site == sites.end() && name != "mu_star" && name != "slope")
    throw Error(ErrorKind::InvalidArgument, "unknown quantity '" + name + "' for " +
                                                family_name(family));
  const auto spec = family_spec(family, parameter);
  auto sopt = options.soliton;
  if (warm && warm->soliton && !sopt.guess) sopt.guess = warm->soliton->state();
  const auto soliton = solve_soliton(spec, sopt);
  if (warm) warm->soliton = soliton;
  if (name == "slope") return 2.0 * inner_product(soliton.R, soliton.dOmegaR, soliton.weight());

  const bool needs_pair = name == "mu_star" || site->second.sector.k == 0;
  Eigenpair pair;
  if (needs_pair) {
    auto eopt = options.eigen;
    if (warm && warm->eigenpair && !eopt.guess) eopt.guess = warm->eigenpair;
    pair = solve_unstable_eigenpair(spec, soliton, eopt);
    if (warm) warm->eigenpair = pair;
    if (name == "mu_star") return pair.mu_star;
  }
  const auto [sign, sector] = site->second;
  const auto op = make_operator(spec, soliton, sign, Family::DistortedL, sector, options.delta0);
  const auto gram =
      gram_matrix(op, sector_rhs_set(spec, soliton, pair, sign, sector), options.products);
  return sector_quantities(spec, sign, sector, gram).at(name);
}

ThresholdResult find_threshold(const std::function<double(double)>& quantity, double lo,
                               double hi, double x_tolerance, const std::string& quantity_name,
                               const std::string& parameter) {
  if (!(lo < hi)) throw Error(ErrorKind::InvalidArgument, "bracket must satisfy lo < hi");
  ThresholdResult out;
  out.quantity = quantity_name;
  out.parameter = parameter;
  out.lo = lo;
  out.hi = hi;
  std::map<double, double> seen;
  auto f = [&](double x) {
    if (auto it = seen.find(x); it != seen.end()) return it->second;
    ++out.evaluations;
    return seen[x] = quantity(x);
  };
  out.f_lo = f(lo);
  out.f_hi = f(hi);
  if ((out.f_lo > 0) == (out.f_hi > 0) && out.f_lo != 0.0 && out.f_hi != 0.0)
    throw Error(ErrorKind::NoSignChange,
                (quantity_name.empty() ? std::string("quantity") : quantity_name) + " is " +
                    fmt(out.f_lo) + " at " + fmt(lo) + " and " + fmt(out.f_hi) + " at " + fmt(hi));
  out.value = brent_root(f, lo, hi, x_tolerance).x;
  return out;
}

ThresholdResult find_threshold(ProblemFamily family, const std::string& quantity, double lo,
                               double hi, double x_tolerance, const PipelineOptions& options) {
  WarmStart warm;
  return find_threshold(
      [&](double p) { return evaluate_quantity(family, p, quantity, options, &warm); }, lo, hi,
      x_tolerance, quantity, parameter_name(family));
}

std::vector<double> uniform_grid(double lo, double hi, int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "grid needs at least one point");
  if (n == 1) return {lo};
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
  g.back() = hi;
  return g;
}

std::vector<SweepRow> sweep(ProblemFamily family, const std::vector<double>& grid,
                            const PipelineOptions& options) {
  if (grid.empty()) throw Error(ErrorKind::InvalidArgument, "sweep grid is empty");
  std::vector<SweepRow> rows;
  std::optional<SolitonData> prev_soliton;
  std::optional<Eigenpair> prev_pair;
  for (double p : grid) {
    SweepRow row;
    row.parameter = p;
    try {
      auto opt = options;
      if (prev_soliton && !opt.soliton.guess) opt.soliton.guess = prev_soliton->state();
      if (prev_pair && !opt.eigen.guess) opt.eigen.guess = prev_pair;
      auto res = run_pipeline(family_spec(family, p), opt);
      row.ok = true;
      row.mu_star = res.eigenpair.mu_star;
      row.quantities = res.quantities;
      for (const auto& s : res.sectors) {
        row.indexes[s.verdict.tag] = s.index.root_count;
        row.positive[s.verdict.tag] = s.verdict.positive_on_complement;
      }
      row.established = res.verdict.established;
      prev_soliton = std::move(res.soliton);
      prev_pair = std::move(res.eigenpair);
    } catch (const Error& e) {
      row.error = e.what();
      prev_soliton.reset();
      prev_pair.reset();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace nlsprop
