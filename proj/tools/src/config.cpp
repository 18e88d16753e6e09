#include "crossdiff_cli/config.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "crossdiff/initdata.hpp"
#include "crossdiff/potentials.hpp"

namespace crossdiff::cli {

namespace {

using nlohmann::json;

struct Collector {
  std::vector<ConfigViolation>* out;
  void add(const std::string& key, const std::string& message) const {
    out->push_back(ConfigViolation{key, message});
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::string join(const std::string& parent, const char* key) {
  return parent.empty() ? key : parent + "." + key;
}

const json* find(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

void reject_unknown(const Collector& c, const json& obj, const std::string& parent,
                    std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) c.add(join(parent, it.key().c_str()), "unknown key");
  }
}

std::optional<double> read_number(const Collector& c, const json& obj,
                                  const std::string& parent, const char* key,
                                  bool required) {
  const json* v = find(obj, key);
  if (!v) {
    if (required) c.add(join(parent, key), "missing key");
    return std::nullopt;
  }
  if (!v->is_number()) {
    c.add(join(parent, key), "must be a number");
    return std::nullopt;
  }
  const double d = v->get<double>();
  if (!std::isfinite(d)) {
    c.add(join(parent, key), "must be finite");
    return std::nullopt;
  }
  return d;
}

std::optional<int> read_int(const Collector& c, const json& obj,
                            const std::string& parent, const char* key,
                            bool required) {
  const json* v = find(obj, key);
  if (!v) {
    if (required) c.add(join(parent, key), "missing key");
    return std::nullopt;
  }
  if (!v->is_number_integer()) {
    c.add(join(parent, key), "must be an integer");
    return std::nullopt;
  }
  return v->get<int>();
}

bool read_bool(const Collector& c, const json& obj, const std::string& parent,
               const char* key, bool fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_boolean()) {
    c.add(join(parent, key), "must be a boolean");
    return fallback;
  }
  return v->get<bool>();
}

std::optional<std::string> read_string(const Collector& c, const json& obj,
                                       const std::string& parent, const char* key,
                                       bool required) {
  const json* v = find(obj, key);
  if (!v) {
    if (required) c.add(join(parent, key), "missing key");
    return std::nullopt;
  }
  if (!v->is_string()) {
    c.add(join(parent, key), "must be a string");
    return std::nullopt;
  }
  return v->get<std::string>();
}

std::optional<std::vector<double>> read_number_array(const Collector& c, const json& obj,
                                                     const std::string& parent,
                                                     const char* key) {
  const json* v = find(obj, key);
  if (!v) return std::nullopt;
  if (!v->is_array() || v->empty()) {
    c.add(join(parent, key), "must be a nonempty array of numbers");
    return std::nullopt;
  }
  std::vector<double> out;
  out.reserve(v->size());
  for (const auto& e : *v) {
    if (!e.is_number() || !std::isfinite(e.get<double>())) {
      c.add(join(parent, key), "must be a nonempty array of finite numbers");
      return std::nullopt;
    }
    out.push_back(e.get<double>());
  }
  return out;
}

// comma-separated numeric rows of width 3; a first line that fails to parse
// is taken as the schema header, and blank or '#' lines are skipped
bool read_csv3(const Collector& c, const std::string& key, const std::string& path,
               std::vector<double>& col0, std::vector<double>& col1,
               std::vector<double>& col2) {
  std::ifstream in(path);
  if (!in) {
    c.add(key, "cannot read file '" + path + "'");
    return false;
  }
  std::string line;
  bool first_content = true;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> fields;
    bool numeric = true;
    std::size_t start = 0;
    while (start <= line.size()) {
      const std::size_t comma = line.find(',', start);
      const std::string tok =
          line.substr(start, comma == std::string::npos ? comma : comma - start);
      char* end = nullptr;
      const double d = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0') {
        numeric = false;
        break;
      }
      fields.push_back(d);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!numeric) {
      if (first_content) {
        first_content = false;
        continue;  // header line
      }
      c.add(key, "row " + std::to_string(row) + " of '" + path + "' is not numeric");
      return false;
    }
    first_content = false;
    if (fields.size() != 3) {
      c.add(key, "row " + std::to_string(row) + " of '" + path + "' has " +
                     std::to_string(fields.size()) + " fields, expected 3");
      return false;
    }
    col0.push_back(fields[0]);
    col1.push_back(fields[1]);
    col2.push_back(fields[2]);
  }
  if (col0.size() < 2) {
    c.add(key, "'" + path + "' needs at least two sample rows, got " +
                   std::to_string(col0.size()));
    return false;
  }
  return true;
}

double horner(const std::vector<double>& coeffs, double x) {
  double acc = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
  return acc;
}

std::vector<double> interp_to_centers(const Grid1D& grid, const std::vector<double>& xs,
                                      const std::vector<double>& vs) {
  std::vector<double> out(grid.n);
  std::size_t k = 0;
  for (int j = 0; j < grid.n; ++j) {
    const double x = grid.center(j);
    if (x <= xs.front()) {
      out[j] = vs.front();
    } else if (x >= xs.back()) {
      out[j] = vs.back();
    } else {
      while (xs[k + 1] < x) ++k;
      const double w = (x - xs[k]) / (xs[k + 1] - xs[k]);
      out[j] = vs[k] + w * (vs[k + 1] - vs[k]);
    }
  }
  return out;
}

// everything rebind needs to rebuild the scenario on a fresh (eta, n)
struct Ingredients {
  double length = 1.0;
  PressureLaw law = PressureLaw::logarithmic(1.0);
  double t_final = 0.25;
  double cfl_safety = 0.4;
  double output_every = 0.0;
  double quad_tol = 1e-10;
  double tail_cutoff = 60.0;
  bool init_mollify = true;
  bool slow_mollify = false;
  bool track_dissipation = true;
  std::vector<double> p_list{2.0, 3.0};
  double theta = 1.0;

  bool init_from_preset = true;
  std::string preset;
  std::vector<double> init_x, init_rho1, init_rho2;

  bool pots_present = false;
  bool pots_from_csv = false;
  bool pots_mollify = true;
  std::vector<double> pot_x, pot_v1, pot_v2;     // csv source
  std::vector<double> pot_co1, pot_co2;          // polynomial source
};

Potentials build_raw_potentials(const Grid1D& grid, const Ingredients& ing) {
  std::vector<double> v1, v2;
  if (ing.pots_from_csv) {
    v1 = interp_to_centers(grid, ing.pot_x, ing.pot_v1);
    v2 = interp_to_centers(grid, ing.pot_x, ing.pot_v2);
  } else {
    v1.resize(grid.n);
    v2.resize(grid.n);
    for (int j = 0; j < grid.n; ++j) {
      v1[j] = horner(ing.pot_co1, grid.center(j));
      v2[j] = horner(ing.pot_co2, grid.center(j));
    }
  }
  return potentials_from_cells(grid, v1, v2);
}

RunConfig build_config(const Ingredients& ing, double eta, int n) {
  const Grid1D grid(n, ing.length);
  RunConfig cfg;
  cfg.grid = grid;
  cfg.law = ing.law;
  cfg.eta = eta;
  cfg.t_final = ing.t_final;
  cfg.cfl_safety = ing.cfl_safety;
  cfg.output_every = ing.output_every;
  cfg.quad_tol = ing.quad_tol;
  cfg.tail_cutoff = ing.tail_cutoff;
  cfg.mollify = ing.init_mollify;
  cfg.slow_mollify = ing.slow_mollify;
  cfg.track_dissipation = ing.track_dissipation;
  cfg.diag.p_list = ing.p_list;
  cfg.diag.theta = ing.theta;
  cfg.init = ing.init_from_preset
                 ? make_preset(grid, ing.preset)
                 : from_samples(grid, ing.init_x, ing.init_rho1, ing.init_rho2);
  if (ing.pots_present) {
    const Potentials raw = build_raw_potentials(grid, ing);
    cfg.pots = ing.pots_mollify ? mollify_potentials(grid, raw, eta, ing.slow_mollify)
                                : raw;
  }
  return cfg;
}

}  // namespace

ParseResult parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("parse_config: cannot read " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error("parse_config: " + path + ": " + e.what());
  }

  ParseResult result;
  const Collector c{&result.violations};
  if (!doc.is_object()) {
    c.add("config", "top level must be a JSON object");
    return result;
  }
  reject_unknown(c, doc, "",
                 {"name", "grid", "pressure", "run", "init", "potentials", "xi",
                  "diagnostics"});

  Ingredients ing;

  std::string name = std::filesystem::path(path).stem().string();
  if (const json* v = find(doc, "name")) {
    if (v->is_string()) {
      name = v->get<std::string>();
    } else {
      c.add("name", "must be a string");
    }
  }

  // ---- grid
  std::optional<int> n;
  std::optional<double> length;
  if (const json* g = find(doc, "grid"); g && g->is_object()) {
    reject_unknown(c, *g, "grid", {"n", "L"});
    n = read_int(c, *g, "grid", "n", true);
    if (n && *n < 16) {
      c.add("grid.n", "must be at least 16, got " + std::to_string(*n));
      n.reset();
    }
    length = read_number(c, *g, "grid", "L", true);
    if (length && !(*length > 0.0)) {
      c.add("grid.L", "must be positive, got " + fmt(*length));
      length.reset();
    }
  } else {
    c.add("grid", g ? "must be an object" : "missing key");
  }
  if (length) ing.length = *length;

  // ---- pressure
  bool law_ok = false;
  if (const json* p = find(doc, "pressure"); p && p->is_object()) {
    reject_unknown(c, *p, "pressure", {"kind", "alpha", "lambda", "kappa"});
    const auto kind = read_string(c, *p, "pressure", "kind", true);
    const auto lambda = read_number(c, *p, "pressure", "lambda", true);
    bool lambda_ok = false;
    if (lambda) {
      if (*lambda > 0.0) {
        lambda_ok = true;
      } else {
        c.add("pressure.lambda", "must be positive, got " + fmt(*lambda));
      }
    }
    if (kind && *kind == "power") {
      if (find(*p, "kappa")) {
        c.add("pressure.kappa", "only meaningful for the logarithmic law");
      }
      const json* a = find(*p, "alpha");
      if (!a) {
        c.add("pressure.alpha", "missing key (the power law requires an exponent)");
      } else if (!a->is_number()) {
        c.add("pressure.alpha", "must be a number");
      } else {
        const double alpha = a->get<double>();
        if (!(alpha > 0.0) || !(alpha < 1.0)) {
          c.add("pressure.alpha", "must lie in (0, 1), got " + fmt(alpha));
        } else if (lambda_ok) {
          ing.law = PressureLaw::power(alpha, *lambda);
          law_ok = true;
        }
      }
    } else if (kind && *kind == "logarithmic") {
      if (find(*p, "alpha")) {
        c.add("pressure.alpha", "only meaningful for the power law");
      }
      double kappa = 1.0;
      bool kappa_ok = true;
      if (const auto k = read_number(c, *p, "pressure", "kappa", false)) {
        if (*k > 0.0) {
          kappa = *k;
        } else {
          c.add("pressure.kappa", "must be positive, got " + fmt(*k));
          kappa_ok = false;
        }
      } else if (find(*p, "kappa")) {
        kappa_ok = false;  // present but not a usable number; already reported
      }
      if (lambda_ok && kappa_ok) {
        ing.law = PressureLaw::logarithmic(*lambda, kappa);
        law_ok = true;
      }
    } else if (kind) {
      c.add("pressure.kind",
            "unknown law kind '" + *kind + "' (expected power or logarithmic)");
    }
  } else {
    c.add("pressure", p ? "must be an object" : "missing key");
  }

  // ---- run
  std::optional<double> eta;
  std::optional<double> horizon;
  if (const json* r = find(doc, "run"); r && r->is_object()) {
    reject_unknown(c, *r, "run", {"eta", "T", "cfl_safety", "output_every"});
    eta = read_number(c, *r, "run", "eta", true);
    if (eta && (!(*eta > 0.0) || *eta > 1.0)) {
      c.add("run.eta", "must lie in (0, 1], got " + fmt(*eta));
      eta.reset();
    }
    horizon = read_number(c, *r, "run", "T", true);
    if (horizon && !(*horizon > 0.0)) {
      c.add("run.T", "must be positive, got " + fmt(*horizon));
      horizon.reset();
    }
    if (const auto s = read_number(c, *r, "run", "cfl_safety", false)) {
      if (*s > 0.0 && *s < 1.0) {
        ing.cfl_safety = *s;
      } else {
        c.add("run.cfl_safety", "must lie in (0, 1), got " + fmt(*s));
      }
    }
    if (const auto oe = read_number(c, *r, "run", "output_every", false)) {
      if (*oe > 0.0) {
        ing.output_every = *oe;
      } else {
        c.add("run.output_every", "must be positive, got " + fmt(*oe));
      }
    }
  } else {
    c.add("run", r ? "must be an object" : "missing key");
  }
  if (horizon) {
    ing.t_final = *horizon;
    if (ing.output_every == 0.0) ing.output_every = *horizon / 16.0;
  }

  // ---- init
  bool init_ok = false;
  if (const json* i = find(doc, "init"); i && i->is_object()) {
    reject_unknown(c, *i, "init", {"preset", "csv", "mollify", "slow_mollify"});
    ing.init_mollify = read_bool(c, *i, "init", "mollify", true);
    ing.slow_mollify = read_bool(c, *i, "init", "slow_mollify", false);
    const json* preset = find(*i, "preset");
    const json* csv = find(*i, "csv");
    if ((preset != nullptr) == (csv != nullptr)) {
      c.add("init", "exactly one of 'preset' or 'csv' must be given");
    } else if (preset) {
      if (const auto ps = read_string(c, *i, "init", "preset", true)) {
        if (*ps == "uniform" || *ps == "segregated_step" || *ps == "mixed_gaussians" ||
            *ps == "partial_overlap") {
          ing.init_from_preset = true;
          ing.preset = *ps;
          init_ok = true;
        } else {
          c.add("init.preset", "unknown preset '" + *ps +
                                   "' (expected uniform, segregated_step, "
                                   "mixed_gaussians, or partial_overlap)");
        }
      }
    } else {
      if (const auto cp = read_string(c, *i, "init", "csv", true)) {
        ing.init_from_preset = false;
        init_ok = read_csv3(c, "init.csv", *cp, ing.init_x, ing.init_rho1, ing.init_rho2);
      }
    }
  } else {
    c.add("init", i ? "must be an object" : "missing key");
  }

  // ---- potentials (optional; absent means zero drift)
  bool pots_ok = true;
  if (const json* p = find(doc, "potentials")) {
    if (!p->is_object()) {
      c.add("potentials", "must be an object");
      pots_ok = false;
    } else {
      ing.pots_present = true;
      reject_unknown(c, *p, "potentials",
                     {"csv", "coeffs1", "coeffs2", "mollify", "enforce_flat_boundary"});
      ing.pots_mollify = read_bool(c, *p, "potentials", "mollify", true);
      const bool enforce = read_bool(c, *p, "potentials", "enforce_flat_boundary", false);
      const json* csv = find(*p, "csv");
      const auto co1 = read_number_array(c, *p, "potentials", "coeffs1");
      const auto co2 = read_number_array(c, *p, "potentials", "coeffs2");
      if (csv && (find(*p, "coeffs1") || find(*p, "coeffs2"))) {
        c.add("potentials", "give either 'csv' or polynomial coefficients, not both");
        pots_ok = false;
      } else if (csv) {
        ing.pots_from_csv = true;
        if (const auto cp = read_string(c, *p, "potentials", "csv", true)) {
          pots_ok = read_csv3(c, "potentials.csv", *cp, ing.pot_x, ing.pot_v1, ing.pot_v2);
          if (pots_ok) {
            for (std::size_t k = 1; k < ing.pot_x.size(); ++k) {
              if (!(ing.pot_x[k] > ing.pot_x[k - 1])) {
                c.add("potentials.csv", "sample abscissae must be strictly increasing");
                pots_ok = false;
                break;
              }
            }
          }
        } else {
          pots_ok = false;
        }
      } else if ((find(*p, "coeffs1") != nullptr) != (find(*p, "coeffs2") != nullptr)) {
        c.add("potentials", "'coeffs1' and 'coeffs2' must be given together");
        pots_ok = false;
      } else if (co1 && co2) {
        ing.pots_from_csv = false;
        ing.pot_co1 = *co1;
        ing.pot_co2 = *co2;
      } else if (!find(*p, "coeffs1")) {
        c.add("potentials", "needs either 'csv' or 'coeffs1'/'coeffs2'");
        pots_ok = false;
      } else {
        pots_ok = false;  // malformed coefficient arrays; already reported
      }

      // flat-boundary enforcement examines the raw samples, before any
      // mollification, because it asserts a property of the supplied data
      if (pots_ok && ing.pots_present && enforce && n && length) {
        const Potentials raw = build_raw_potentials(Grid1D(*n, *length), ing);
        if (!raw.boundary_compatible) {
          c.add("potentials",
                "flat boundary enforcement failed: the supplied potentials must "
                "satisfy ∂ₓV₁ = ∂ₓV₂ = 0 on ∂Ω "
                "(mollify them or flatten the ends)");
        }
      }
    }
  }

  // ---- xi
  if (const json* x = find(doc, "xi"); x && x->is_object()) {
    reject_unknown(c, *x, "xi", {"quad_tol", "tail_cutoff"});
    if (const auto qt = read_number(c, *x, "xi", "quad_tol", false)) {
      if (*qt > 0.0) {
        ing.quad_tol = *qt;
      } else {
        c.add("xi.quad_tol", "must be positive, got " + fmt(*qt));
      }
    }
    if (const auto tc = read_number(c, *x, "xi", "tail_cutoff", false)) {
      if (*tc > 0.0) {
        ing.tail_cutoff = *tc;
      } else {
        c.add("xi.tail_cutoff", "must be positive, got " + fmt(*tc));
      }
    }
  } else if (x) {
    c.add("xi", "must be an object");
  }

  // ---- diagnostics
  if (const json* d = find(doc, "diagnostics"); d && d->is_object()) {
    reject_unknown(c, *d, "diagnostics", {"p_list", "theta", "track_dissipation"});
    if (const auto ps = read_number_array(c, *d, "diagnostics", "p_list")) {
      bool all_positive = true;
      for (const double p : *ps) {
        if (!(p > 0.0)) all_positive = false;
      }
      if (all_positive) {
        ing.p_list = *ps;
      } else {
        c.add("diagnostics.p_list", "every exponent must be positive");
      }
    }
    if (const auto th = read_number(c, *d, "diagnostics", "theta", false)) {
      if (*th > 0.0) {
        ing.theta = *th;
      } else {
        c.add("diagnostics.theta", "must be positive, got " + fmt(*th));
      }
    }
    ing.track_dissipation = read_bool(c, *d, "diagnostics", "track_dissipation", true);
  } else if (d) {
    c.add("diagnostics", "must be an object");
  }

  // ---- mollifier collar feasibility, checked only when something asks to
  // mollify; the solver would reject the run later with the same complaint
  const bool wants_mollify =
      (init_ok && ing.init_mollify) || (ing.pots_present && pots_ok && ing.pots_mollify);
  if (eta && length && wants_mollify) {
    const double width = ing.slow_mollify ? std::sqrt(*eta) : *eta;
    if (width > *length / 8.0) {
      c.add("run.eta", "collar width " + fmt(width) + " exceeds L/8 = " +
                           fmt(*length / 8.0) +
                           "; eta is too large relative to the domain");
      eta.reset();
    }
  }

  if (!result.violations.empty()) return result;
  (void)law_ok;

  Scenario scenario;
  scenario.name = name;
  scenario.rebind = [ing](double eta2, int n2) { return build_config(ing, eta2, n2); };
  try {
    scenario.config = scenario.rebind(*eta, *n);
  } catch (const std::invalid_argument& e) {
    // construction rejected the evaluated data (bad sample columns and the
    // like); surface it as a violation at the key that sourced the data
    const std::string what = e.what();
    const std::string key =
        what.rfind("initial data:", 0) == 0 ? "init.csv" : "config";
    c.add(key, what);
    return result;
  }
  result.scenario = std::move(scenario);
  return result;
}

}  // namespace crossdiff::cli
