#include "iwalog/runner.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "iwalog/block_form.hpp"

namespace iwalog {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// config parsing

void require_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!ok.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
  }
}

long get_long(const json& j, const char* key, long def, long lo, long hi, const std::string& where) {
  if (!j.contains(key)) return def;
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + " must be an integer");
  const long x = v.get<long>();
  if (x < lo || x > hi) {
    throw ConfigError(where + "." + key + " = " + std::to_string(x) + " outside [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  }
  return x;
}

int get_int(const json& j, const char* key, int def, int lo, int hi, const std::string& where) {
  return static_cast<int>(get_long(j, key, def, lo, hi, where));
}

bool get_bool(const json& j, const char* key, bool def, const std::string& where) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_boolean()) throw ConfigError(where + "." + key + " must be a boolean");
  return j.at(key).get<bool>();
}

mpz_class parse_bigint(const json& v, const std::string& where) {
  if (v.is_number_integer()) {
    return v.is_number_unsigned() ? mpz_class(std::to_string(v.get<unsigned long long>()))
                                  : mpz_class(std::to_string(v.get<long long>()));
  }
  if (v.is_string()) {
    mpz_class x;
    if (x.set_str(v.get<std::string>(), 10) != 0) throw ConfigError(where + ": '" + v.get<std::string>() + "' is not an integer");
    return x;
  }
  throw ConfigError(where + " must be an integer or a decimal string");
}

mpq_class parse_rational(const json& v, const std::string& where) {
  if (v.is_number_integer()) return mpq_class(v.get<long>());
  if (v.is_string()) {
    mpq_class x;
    if (x.set_str(v.get<std::string>(), 10) != 0) throw ConfigError(where + ": '" + v.get<std::string>() + "' is not a rational");
    x.canonicalize();
    return x;
  }
  throw ConfigError(where + " must be an integer or a rational string like \"1/3\"");
}

IntMatrix parse_matrix(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw ConfigError(where + " must be a non-empty array of rows");
  IntMatrix m;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const json& row = v[i];
    if (!row.is_array()) throw ConfigError(where + " row " + std::to_string(i) + " is not an array");
    std::vector<mpz_class> r;
    for (std::size_t k = 0; k < row.size(); ++k) {
      r.push_back(parse_bigint(row[k], where + "[" + std::to_string(i) + "][" + std::to_string(k) + "]"));
    }
    if (!m.empty() && r.size() != m.front().size()) throw ConfigError(where + " is ragged");
    m.push_back(std::move(r));
  }
  return m;
}

Var parse_var(const json& j, const std::string& where) {
  if (!j.contains("var")) return Var::X;
  const std::string v = j.at("var").is_string() ? j.at("var").get<std::string>() : "";
  if (v == "X") return Var::X;
  if (v == "Y") return Var::Y;
  throw ConfigError(where + ".var must be \"X\" or \"Y\"");
}

ModulePresentation parse_module(const json& j, unsigned p, int precision, const std::string& where) {
  require_keys(j, where, {"name", "free_rank", "torsion"});
  ModulePresentation m;
  m.p = p;
  m.free_rank = get_int(j, "free_rank", 0, 0, 16, where);
  if (!j.contains("torsion")) return m;
  if (!j.at("torsion").is_array()) throw ConfigError(where + ".torsion must be an array");
  int idx = 0;
  for (const json& f : j.at("torsion")) {
    const std::string fw = where + ".torsion[" + std::to_string(idx++) + "]";
    require_keys(f, fw, {"atoms", "terms", "label"});
    if (f.contains("atoms") == f.contains("terms")) throw ConfigError(fw + " needs exactly one of atoms, terms");
    if (f.contains("atoms")) {
      std::vector<RootAtom> atoms;
      int ai = 0;
      for (const json& a : f.at("atoms")) {
        const std::string aw = fw + ".atoms[" + std::to_string(ai++) + "]";
        require_keys(a, aw, {"kind", "var", "level"});
        RootAtom atom;
        const std::string kind = a.contains("kind") && a.at("kind").is_string() ? a.at("kind").get<std::string>() : "";
        if (kind == "var") {
          atom.kind = RootAtom::Kind::Var;
        } else if (kind == "phi") {
          atom.kind = RootAtom::Kind::Phi;
        } else if (kind == "omega") {
          atom.kind = RootAtom::Kind::Omega;
        } else {
          throw ConfigError(aw + ".kind must be var, phi or omega");
        }
        atom.var = parse_var(a, aw);
        atom.level = get_int(a, "level", atom.kind == RootAtom::Kind::Phi ? 1 : 0, atom.kind == RootAtom::Kind::Phi ? 1 : 0, 8, aw);
        atoms.push_back(atom);
      }
      if (atoms.empty()) throw ConfigError(fw + ".atoms is empty");
      m.torsion.push_back(TorsionFactor::from_atoms(p, atoms, precision));
    } else {
      std::vector<PolyTerm> terms;
      if (!f.at("terms").is_array()) throw ConfigError(fw + ".terms must be an array");
      for (const json& t : f.at("terms")) {
        if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() || !t[1].is_number_integer()) {
          throw ConfigError(fw + ".terms entries must be [i, j, coefficient]");
        }
        const int i = t[0].get<int>();
        const int jj = t[1].get<int>();
        if (i < 0 || jj < 0 || i > 64 || jj > 64) throw ConfigError(fw + ".terms exponent out of range");
        terms.push_back({i, jj, PAdicScalar::from_integer(p, parse_bigint(t[2], fw + ".terms"), precision)});
      }
      const IwasawaPoly poly = IwasawaPoly::from_terms(p, terms);
      if (poly.is_zero()) throw ConfigError(fw + " is the zero polynomial");
      const std::string label = f.contains("label") && f.at("label").is_string() ? f.at("label").get<std::string>() : "";
      m.torsion.push_back(TorsionFactor::untagged(poly, label));
    }
  }
  return m;
}

ColemanModel parse_coleman(const json& j, const std::string& where) {
  require_keys(j, where, {"a", "b", "c", "vanishes"});
  ColemanModel c;
  c.a = get_long(j, "a", 0, 0, 1L << 20, where);
  c.b = get_long(j, "b", 0, 0, 1L << 20, where);
  c.c = get_long(j, "c", 0, 0, 1L << 20, where);
  c.vanishes = get_bool(j, "vanishes", false, where);
  return c;
}

}  // namespace

DieudonneInput RunConfig::input() const { return make_input(p, g, c_p, c_pc, precision); }

RunConfig parse_config(const json& j, std::optional<std::uint64_t> seed, std::optional<int> precision) {
  require_keys(j, "config", {"schema_version", "prime", "g", "precision", "tau", "seed", "matrices", "grid",
                             "closed_form", "convergence", "conjugacy", "coinvariants", "scenario"});
  if (!j.contains("schema_version") || !j.at("schema_version").is_number_integer() ||
      j.at("schema_version").get<int>() != kSchemaVersion) {
    throw ConfigError("schema_version must be " + std::to_string(kSchemaVersion));
  }
  RunConfig c;
  c.echo = j;
  if (!j.contains("prime")) throw ConfigError("config.prime is required");
  const long p = get_long(j, "prime", 3, 3, 997, "config");
  if (!is_odd_prime(static_cast<unsigned>(p))) throw ConfigError("config.prime must be an odd prime");
  c.p = static_cast<unsigned>(p);
  c.g = get_int(j, "g", 1, 1, 4, "config");
  c.precision = precision ? *precision : get_int(j, "precision", kDefaultPrecision, 8, 4096, "config");
  if (c.precision < 8 || c.precision > 4096) throw ConfigError("precision must lie in [8, 4096]");
  c.echo["precision"] = c.precision;
  c.tau = get_int(j, "tau", c.precision / 2, 1, c.precision, "config");
  if (c.tau > c.precision) throw ConfigError("tau exceeds precision");
  c.echo["tau"] = c.tau;
  if (seed) {
    c.seed = *seed;
  } else if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned() && !(j.at("seed").is_number_integer() && j.at("seed").get<long long>() >= 0)) {
      throw ConfigError("config.seed must be a non-negative integer");
    }
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  c.echo["seed"] = c.seed;

  if (!j.contains("matrices")) throw ConfigError("config.matrices is required");
  const json& mj = j.at("matrices");
  require_keys(mj, "matrices", {"c_p", "c_pc", "random", "block_anti_diagonal"});
  c.random_matrices = get_bool(mj, "random", false, "matrices");
  if (c.random_matrices) {
    if (mj.contains("c_p") || mj.contains("c_pc")) throw ConfigError("matrices: give either random or c_p/c_pc");
    c.random_block = get_bool(mj, "block_anti_diagonal", false, "matrices");
    const TestMatrices t = gen_test_matrices(c.p, c.g, c.seed, c.random_block, c.precision);
    c.c_p = t.c_p;
    c.c_pc = t.c_pc;
  } else {
    if (!mj.contains("c_p") || !mj.contains("c_pc")) throw ConfigError("matrices.c_p and matrices.c_pc are required");
    c.c_p = parse_matrix(mj.at("c_p"), "matrices.c_p");
    c.c_pc = parse_matrix(mj.at("c_pc"), "matrices.c_pc");
  }

  if (j.contains("grid")) {
    require_keys(j.at("grid"), "grid", {"r_max", "s_max"});
    c.r_max = get_int(j.at("grid"), "r_max", c.r_max, 1, 8, "grid");
    c.s_max = get_int(j.at("grid"), "s_max", c.s_max, 1, 8, "grid");
  }
  if (j.contains("closed_form")) {
    require_keys(j.at("closed_form"), "closed_form", {"k_max"});
    c.k_max = get_int(j.at("closed_form"), "k_max", c.k_max, 1, 8, "closed_form");
  }
  if (j.contains("convergence")) {
    require_keys(j.at("convergence"), "convergence", {"n_max", "max_degree"});
    c.conv_n_max = get_int(j.at("convergence"), "n_max", c.conv_n_max, 2, 8, "convergence");
    c.conv_degree = get_int(j.at("convergence"), "max_degree", c.conv_degree, 0, 64, "convergence");
  }
  if (j.contains("conjugacy")) {
    require_keys(j.at("conjugacy"), "conjugacy", {"basis"});
    if (j.at("conjugacy").contains("basis")) c.basis = parse_matrix(j.at("conjugacy").at("basis"), "conjugacy.basis");
  }
  if (j.contains("coinvariants")) {
    const json& cj = j.at("coinvariants");
    require_keys(cj, "coinvariants", {"n_max", "modules"});
    c.coinv_n_max = get_int(cj, "n_max", c.coinv_n_max, 0, 6, "coinvariants");
    if (cj.contains("modules")) {
      if (!cj.at("modules").is_array()) throw ConfigError("coinvariants.modules must be an array");
      int idx = 0;
      for (const json& mm : cj.at("modules")) {
        const std::string w = "coinvariants.modules[" + std::to_string(idx++) + "]";
        NamedModule nm;
        nm.name = mm.contains("name") && mm.at("name").is_string() ? mm.at("name").get<std::string>() : w;
        nm.module = parse_module(mm, c.p, c.precision, w);
        c.modules.push_back(std::move(nm));
      }
    }
  }

  GrowthScenario& s = c.scenario;
  s.p = c.p;
  s.g = c.g;
  s.fine.p = c.p;
  s.block_mode = false;
  if (j.contains("scenario")) {
    const json& sj = j.at("scenario");
    require_keys(sj, "scenario", {"n0", "bound0", "block_mode", "minor_valuation", "coleman", "bad_cells", "bad_rules",
                                  "fine", "n_max"});
    s.n0 = get_int(sj, "n0", 0, 0, 64, "scenario");
    s.bound0 = get_long(sj, "bound0", 0, 0, 1L << 40, "scenario");
    s.block_mode = get_bool(sj, "block_mode", true, "scenario");
    if (sj.contains("minor_valuation")) s.minor_valuation = parse_rational(sj.at("minor_valuation"), "scenario.minor_valuation");
    if (s.minor_valuation < 0) throw ConfigError("scenario.minor_valuation must be >= 0");
    c.growth_n_max = get_int(sj, "n_max", c.growth_n_max, 1, 12, "scenario");
    if (sj.contains("coleman")) {
      const json& cm = sj.at("coleman");
      require_keys(cm, "scenario.coleman", {"I0", "I1", "mix01", "mix10", "default"});
      for (auto it = cm.begin(); it != cm.end(); ++it) {
        s.coleman[it.key()] = parse_coleman(it.value(), "scenario.coleman." + it.key());
      }
    }
    if (sj.contains("bad_cells")) {
      for (const json& b : sj.at("bad_cells")) {
        require_keys(b, "scenario.bad_cells[]", {"r", "s", "count"});
        s.bad_cells.push_back({get_int(b, "r", 0, 0, 64, "bad_cells"), get_int(b, "s", 0, 0, 64, "bad_cells"),
                               get_long(b, "count", 1, 0, 1L << 40, "bad_cells")});
      }
    }
    if (sj.contains("bad_rules")) {
      for (const json& b : sj.at("bad_rules")) {
        require_keys(b, "scenario.bad_rules[]", {"offset", "count", "slope"});
        s.bad_rules.push_back({get_int(b, "offset", 0, -64, 64, "bad_rules"), get_long(b, "count", 0, 0, 1L << 40, "bad_rules"),
                               get_long(b, "slope", 0, 0, 1L << 20, "bad_rules")});
      }
    }
    if (sj.contains("fine")) s.fine = parse_module(sj.at("fine"), c.p, c.precision, "scenario.fine");
  }
  s.check();
  return c;
}

RunConfig load_config(const std::string& path, std::optional<std::uint64_t> seed, std::optional<int> precision) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j, seed, precision);
}

// ---------------------------------------------------------------------------
// reporting

const char* status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass:
      return "pass";
    case CheckStatus::Fail:
      return "fail";
    case CheckStatus::UpperBoundOnly:
      return "upper-bound-only";
    case CheckStatus::Skipped:
      return "skipped";
  }
  return "?";
}

void CsvTable::add(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw InternalInconsistency("csv row width mismatch");
  rows.push_back(std::move(row));
}

namespace {

std::string csv_field(const std::string& f) {
  if (f.find_first_of(",\"\n") == std::string::npos) return f;
  std::string out = "\"";
  for (char ch : f) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string CsvTable::render(const std::string& comment) const {
  std::string out;
  if (!comment.empty()) out += "# " + comment + "\n";
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += ',';
      out += csv_field(r[i]);
    }
    out += '\n';
  };
  line(columns);
  for (const auto& r : rows) line(r);
  return out;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"validate",   "log-matrices", "closed-form", "vanishing-pattern",
                                                 "convergence", "conjugacy",   "coinvariants", "h-large",
                                                 "growth",     "mw-bound"};
  return names;
}

namespace {

std::string b2s(bool b) { return b ? "true" : "false"; }
std::string q2s(const mpq_class& q) { return q.get_str(); }

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

std::string locus_string(const std::vector<std::size_t>& v) {
  std::vector<std::string> s;
  for (std::size_t x : v) s.push_back(std::to_string(x + 1));
  return "{" + join(s, " ") + "}";
}

CharacterPoint theta_for(unsigned p, Prime q, int k) {
  return q == Prime::P ? CharacterPoint::make(p, k, 0) : CharacterPoint::make(p, 0, k);
}

CheckResult make_result(const std::string& cmd, const std::string& header, std::vector<std::string> cols) {
  CheckResult r;
  r.command = cmd;
  r.header = header;
  r.table.columns = std::move(cols);
  return r;
}

// Matrix commands need an accepted input; returns false (and marks r failed) otherwise.
bool require_valid(const RunConfig& cfg, CheckResult& r) {
  const ValidationReport v = validate_input(cfg.input(), cfg.tau);
  if (v.accepted) return true;
  r.status = CheckStatus::Fail;
  r.detail = "input rejected: " + v.reason;
  return false;
}

bool input_is_block(const RunConfig& cfg) {
  const DieudonneInput d = cfg.input();
  return is_block_anti_diagonal(d.c_p, d.g) && is_block_anti_diagonal(d.c_pc, d.g);
}

CheckResult cmd_validate(const RunConfig& cfg) {
  CheckResult r = make_result("validate", "input validation: determinant, Frobenius slopes, block shape",
                              {"prime", "shape_ok", "det", "det_unit", "block_anti_diagonal", "charpoly", "slopes",
                               "root_valuations", "slopes_in_closed_left", "slopes_in_closed_right", "val_charpoly_at_1",
                               "eigenvalue_one"});
  const ValidationReport v = validate_input(cfg.input(), cfg.tau);
  for (Prime q : {Prime::P, Prime::PC}) {
    const PrimeValidation& pv = v.per_prime[static_cast<int>(q)];
    std::vector<std::string> slopes, roots;
    for (const auto& x : pv.newton.slopes) slopes.push_back(q2s(x));
    for (const auto& x : pv.newton.root_valuations) roots.push_back(q2s(x));
    r.table.add({prime_name(q), b2s(pv.shape_ok), pv.det, b2s(pv.det_unit), b2s(pv.block_anti_diagonal),
                 join(pv.newton.charpoly, " "), join(slopes, " "), join(roots, " "), b2s(pv.newton.reading_closed_left),
                 b2s(pv.newton.reading_closed_right), pv.newton.value_at_one.to_string(), b2s(pv.newton.eigenvalue_one)});
    json pj;
    pj["det_unit"] = pv.det_unit;
    pj["block_anti_diagonal"] = pv.block_anti_diagonal;
    pj["eigenvalue_one_warning"] = pv.newton.eigenvalue_one;
    pj["slopes_in_closed_left"] = pv.newton.reading_closed_left;
    pj["slopes_in_closed_right"] = pv.newton.reading_closed_right;
    r.data[prime_name(q)] = pj;
  }
  r.data["accepted"] = v.accepted;
  r.data["reason"] = v.reason;
  if (!v.accepted) {
    r.status = CheckStatus::Fail;
    r.detail = v.reason;
  } else {
    r.detail = "accepted";
  }
  return r;
}

CheckResult cmd_log_matrices(const RunConfig& cfg) {
  CheckResult r = make_result("log-matrices", "matrix tower H_{q,r} = C_{q,r} ... C_{q,1}",
                              {"prime", "r", "row", "col", "row_tag", "entry"});
  if (!require_valid(cfg, r)) return r;
  const DieudonneInput d = cfg.input();
  for (Prime q : {Prime::P, Prime::PC}) {
    const int r_max = q == Prime::P ? cfg.r_max : cfg.s_max;
    const auto tower = h_tower(d, q, r_max);
    json degrees = json::array();
    for (int k = 1; k <= r_max; ++k) {
      const LambdaMatrix& h = tower[static_cast<std::size_t>(k - 1)];
      int deg = -1;
      for (std::size_t i = 0; i < h.m.rows(); ++i) {
        const RowTag& t = h.row_tags[i];
        const std::string tag = t.level ? "Phi_" + std::to_string(t.level) + "(1+" + var_name(t.var) + ")" : "";
        for (std::size_t jj = 0; jj < h.m.cols(); ++jj) {
          deg = std::max(deg, h.m(i, jj).degree(var_of(q)));
          r.table.add({prime_name(q), std::to_string(k), std::to_string(i + 1), std::to_string(jj + 1), tag,
                       h.m(i, jj).to_string()});
        }
      }
      degrees.push_back(deg);
    }
    r.data[std::string("max_degree_") + prime_name(q)] = degrees;
  }
  r.detail = "tower built to (" + std::to_string(cfg.r_max) + ", " + std::to_string(cfg.s_max) + ")";
  return r;
}

CheckResult cmd_closed_form(const RunConfig& cfg) {
  CheckResult r = make_result("closed-form", "block closed form against direct evaluation at zeta_{p^k} - 1",
                              {"prime", "k", "row", "col", "closed_form", "direct", "equal"});
  if (!require_valid(cfg, r)) return r;
  if (!input_is_block(cfg)) {
    r.status = CheckStatus::Skipped;
    r.detail = "input is not block anti-diagonal";
    return r;
  }
  const DieudonneInput d = cfg.input();
  const BlockData b = BlockData::from_input(d);
  long mismatches = 0;
  for (Prime q : {Prime::P, Prime::PC}) {
    const auto tower = h_tower(d, q, cfg.k_max);
    for (int k = 1; k <= cfg.k_max; ++k) {
      const Matrix<CycloElement> cf = closed_form_h(b, q, k);
      const Matrix<CycloElement> direct = eval_matrix_at_theta(tower[static_cast<std::size_t>(k - 1)], theta_for(cfg.p, q, k));
      for (std::size_t i = 0; i < cf.rows(); ++i) {
        for (std::size_t jj = 0; jj < cf.cols(); ++jj) {
          const bool eq = cf(i, jj).equals_to_precision(direct(i, jj));
          if (!eq) ++mismatches;
          r.table.add({prime_name(q), std::to_string(k), std::to_string(i + 1), std::to_string(jj + 1),
                       cf(i, jj).to_string(), direct(i, jj).to_string(), b2s(eq)});
        }
      }
    }
  }
  json dv;
  for (int k = 1; k <= cfg.k_max; ++k) dv[std::to_string(k)] = q2s(delta_valuation(cfg.p, k));
  r.data["delta_valuations"] = dv;
  r.data["mismatches"] = mismatches;
  r.data["root_convention"] = "compatible system zeta_{p^n}^p = zeta_{p^(n-1)}";
  if (mismatches) {
    r.status = CheckStatus::Fail;
    r.detail = std::to_string(mismatches) + " entries differ";
  } else {
    r.detail = "all entries agree for k <= " + std::to_string(cfg.k_max);
  }
  return r;
}

CheckResult cmd_vanishing_pattern(const RunConfig& cfg) {
  CheckResult r = make_result("vanishing-pattern", "parity vanishing pattern of (I0, J)-minors of H_{r,s}(theta)",
                              {"r", "s", "J", "tag", "status", "valuation", "survivor", "ok"});
  r.data["minor_convention"] = "rows and columns ascending, plain determinant";
  r.data["tau"] = cfg.tau;
  if (!require_valid(cfg, r)) return r;
  if (!input_is_block(cfg)) {
    r.status = CheckStatus::Skipped;
    r.detail = "parity pattern applies to block anti-diagonal input only";
    return r;
  }
  const DieudonneInput d = cfg.input();
  const auto tp = h_tower(d, Prime::P, cfg.r_max);
  const auto tpc = h_tower(d, Prime::PC, cfg.s_max);
  long failures = 0;
  json surv = json::object();
  for (int rr = 1; rr <= cfg.r_max; ++rr) {
    for (int ss = 1; ss <= cfg.s_max; ++ss) {
      const PatternReport rep = verify_vanishing_pattern(tp, tpc, rr, ss, CharacterPoint::make(cfg.p, rr, ss), cfg.tau);
      for (const auto& row : rep.rows) {
        r.table.add({std::to_string(rr), std::to_string(ss), row.J.to_string(), row.J.tag(), status_name(row.status),
                     row.valuation.to_string(), b2s(row.survivor), b2s(row.ok)});
      }
      const std::string key = "(" + std::to_string(rr) + "," + std::to_string(ss) + ")";
      surv[key] = rep.survivor_valuation.to_string();
      if (!rep.passed) {
        if (!failures) r.detail = "(r,s)=" + key + ": " + rep.failure;
        ++failures;
      }
    }
  }
  r.data["survivor_valuations"] = surv;
  r.data["failing_cells"] = failures;
  if (failures) {
    r.status = CheckStatus::Fail;
  } else {
    r.detail = "every non-survivor minor is a symbolic zero";
  }
  return r;
}

CheckResult cmd_convergence(const RunConfig& cfg) {
  CheckResult r = make_result("convergence", "coefficient stabilization of M_{q,n} = C_phi^{n+1} H_{q,n}",
                              {"prime", "n", "degree", "valuation"});
  if (!require_valid(cfg, r)) return r;
  const DieudonneInput d = cfg.input();
  bool const_ok = true;
  for (Prime q : {Prime::P, Prime::PC}) {
    const auto rows = convergence_diagnostic(d, q, cfg.conv_n_max, cfg.conv_degree);
    std::map<int, std::vector<Valuation>> by_degree;
    for (const auto& row : rows) {
      r.table.add({prime_name(q), std::to_string(row.n), std::to_string(row.degree), row.valuation.to_string()});
      if (row.degree == 0 && !row.valuation.at_least_threshold(cfg.tau)) const_ok = false;
      by_degree[row.degree].push_back(row.valuation);
    }
    json mono;
    for (const auto& [deg, vals] : by_degree) {
      bool nondecreasing = true;
      for (std::size_t i = 1; i < vals.size(); ++i) {
        if (!vals[i].is_exact() || !vals[i - 1].is_exact()) continue;
        if (vals[i].value() < vals[i - 1].value()) nondecreasing = false;
      }
      mono[std::to_string(deg)] = nondecreasing;
    }
    r.data[std::string("nondecreasing_") + prime_name(q)] = mono;
  }
  if (!const_ok) {
    r.status = CheckStatus::Fail;
    r.detail = "constant coefficient of M_{n+1} - M_n is not zero";
  } else {
    r.detail = "constant coefficients stable";
  }
  return r;
}

Matrix<CycloElement> sample_values(const RunConfig& cfg) {
  // Deterministic 2g x 2g table of level-1 values; column 1 vanishes in the top rows, column 2 everywhere.
  const std::size_t n = static_cast<std::size_t>(2 * cfg.g);
  const std::size_t m = n + 1;
  const TestMatrices t = gen_test_matrices(cfg.p, cfg.g, cfg.seed ^ 0x9e3779b97f4a7c15ULL, false, 8);
  Matrix<CycloElement> v(n, m, CycloElement::exact_zero(cfg.p, 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (j == 1 || (j == 0 && i < static_cast<std::size_t>(cfg.g))) continue;
      const mpz_class& x = t.c_p[i][j % n];
      v(i, j) = CycloElement::from_integer(cfg.p, 1, x + 1, cfg.precision) *
                CycloElement::zeta_power(cfg.p, 1, static_cast<long>(j), cfg.precision);
    }
  }
  return v;
}

CheckResult cmd_conjugacy(const RunConfig& cfg) {
  CheckResult r = make_result("conjugacy", "block-diagonal change of basis and kernel invariance",
                              {"prime", "input_anti_diagonal", "output_anti_diagonal", "selection", "locus_before",
                               "locus_after", "equal"});
  if (!require_valid(cfg, r)) return r;
  const DieudonneInput d = cfg.input();
  const IntMatrix bi = cfg.basis ? *cfg.basis : gen_block_diagonal(cfg.p, cfg.g, cfg.seed + 1, 8);
  const ScalarMatrix b = scalar_matrix(cfg.p, bi, cfg.precision);
  r.data["basis"] = matrix_to_string(b);
  bool ok = true;
  try {
    const Matrix<CycloElement> v = sample_values(cfg);
    for (Prime q : {Prime::P, Prime::PC}) {
      const ConjugationResult cr = conjugate_basis(d.c(q), b, cfg.g);
      r.data[std::string("conjugated_") + prime_name(q)] = matrix_to_string(cr.conjugated);
      if (cr.input_anti_diagonal && !cr.output_anti_diagonal) ok = false;
      for (RowSelection sel : {RowSelection::Top, RowSelection::Bottom, RowSelection::Full, RowSelection::Empty}) {
        const KernelReport kr = kernel_invariance_check(v, b, cfg.g, sel);
        if (!kr.equal) ok = false;
        r.table.add({prime_name(q), b2s(cr.input_anti_diagonal), b2s(cr.output_anti_diagonal), selection_name(sel),
                     locus_string(kr.locus_before), locus_string(kr.locus_after), b2s(kr.equal)});
      }
    }
  } catch (const ValidationError& e) {
    r.status = CheckStatus::Fail;
    r.detail = std::string("basis rejected: ") + e.what();
    return r;
  }
  if (!ok) {
    r.status = CheckStatus::Fail;
    r.detail = "block structure or vanishing locus not preserved";
  } else {
    r.detail = "block anti-diagonality and vanishing loci preserved";
  }
  return r;
}

std::vector<NamedModule> coinvariant_modules(const RunConfig& cfg) {
  std::vector<NamedModule> mods = cfg.modules;
  mods.push_back({"fine", cfg.scenario.fine});
  return mods;
}

CheckResult cmd_coinvariants(const RunConfig& cfg) {
  CheckResult r = make_result("coinvariants", "coinvariant ranks and the r p^{2n} + O(p^n) fit",
                              {"module", "n", "rank", "free_part", "residual", "rank_kind"});
  bool ub = false;
  for (const auto& nm : coinvariant_modules(cfg)) {
    json mj;
    std::vector<long> ranks;
    for (int n = 0; n <= cfg.coinv_n_max; ++n) {
      const RankResult rr = coinvariant_rank(nm.module, n, cfg.tau);
      ub = ub || rr.upper_bound_only;
      long free_part = nm.module.free_rank;
      for (int i = 0; i < 2 * n; ++i) free_part *= static_cast<long>(cfg.p);
      r.table.add({nm.name, std::to_string(n), std::to_string(rr.rank), std::to_string(free_part),
                   std::to_string(rr.rank - free_part), rr.upper_bound_only ? "upper-bound" : "exact"});
      ranks.push_back(rr.rank);
    }
    mj["ranks"] = ranks;
    if (cfg.coinv_n_max >= 2) {
      try {
        const AsymptoticRankReport h = asymptotic_rank_check(nm.module, cfg.coinv_n_max, cfg.tau);
        mj["fitted_rank"] = h.fitted_rank;
        mj["constant"] = q2s(h.constant);
        mj["fitted_rank_matches"] = h.fitted_rank == nm.module.free_rank;
        if (h.fitted_rank != nm.module.free_rank) {
          r.status = CheckStatus::Fail;
          r.detail = nm.name + ": fitted rank " + std::to_string(h.fitted_rank) + " differs from free rank";
        }
      } catch (const InternalInconsistency& e) {
        r.status = CheckStatus::Fail;
        r.detail = nm.name + ": " + e.what();
      }
    }
    r.data[nm.name] = mj;
  }
  r.data["tau"] = cfg.tau;
  if (r.status == CheckStatus::Pass) {
    r.status = ub ? CheckStatus::UpperBoundOnly : CheckStatus::Pass;
    r.detail = ub ? "some zero decisions rest on the precision threshold" : "ranks exact";
  }
  return r;
}

// Block data for the scenario when it runs in block mode; null otherwise.
std::optional<BlockData> scenario_block(const RunConfig& cfg, CheckResult& r) {
  if (!cfg.scenario.block_mode) return std::nullopt;
  if (!require_valid(cfg, r)) return std::nullopt;
  if (!input_is_block(cfg)) {
    r.status = CheckStatus::Fail;
    r.detail = "block mode requires block anti-diagonal input";
    return std::nullopt;
  }
  return BlockData::from_input(cfg.input());
}

std::string valuation_cell(const Valuation& v) { return v.to_string(); }

CheckResult cmd_h_large(const RunConfig& cfg) {
  CheckResult r = make_result("h-large", "(H-large) scan of survivor minor plus Coleman valuation over (r, s)",
                              {"r", "s", "survivor", "minor_valuation", "coleman_valuation", "total_valuation",
                               "bad_classes", "constrained", "nonzero", "violation"});
  const auto block = scenario_block(cfg, r);
  if (r.status == CheckStatus::Fail) return r;
  const HLargeReport rep = h_large_scan(cfg.scenario, block ? &*block : nullptr, cfg.r_max, cfg.s_max);
  long violations = 0;
  for (const auto& c : rep.cells) {
    if (c.violation) ++violations;
    r.table.add({std::to_string(c.r), std::to_string(c.s), c.survivor, valuation_cell(c.minor_valuation),
                 valuation_cell(c.coleman_valuation), valuation_cell(c.total), std::to_string(c.bad_classes),
                 b2s(c.constrained), b2s(c.nonzero), b2s(c.violation)});
  }
  r.data["n0"] = cfg.scenario.n0;
  r.data["block_mode"] = cfg.scenario.block_mode;
  r.data["violations"] = violations;
  if (!rep.passed) {
    r.status = CheckStatus::Fail;
    r.detail = rep.failure;
  } else {
    r.detail = "no violations with |r - s| > " + std::to_string(cfg.scenario.n0);
  }
  return r;
}

void growth_rows(CheckResult& r, const GrowthReport& g, bool fine) {
  for (const auto& row : g.rows) {
    r.table.add({mode_name(g.mode), std::to_string(row.n), std::to_string(row.new_classes), std::to_string(row.c_n),
                 std::to_string(row.increment), std::to_string(row.cumulative), std::to_string(row.fine_rank),
                 std::to_string(row.total), q2s(row.ratio)});
  }
  json j;
  j["bounded"] = g.bounded;
  j["sup_c"] = g.sup_c;
  j["certificate"] = g.bounded ? q2s(g.certificate) : "unbounded";
  j["ratio_sup"] = q2s(g.ratio_sup);
  j["ratio_within_certificate"] = !g.bounded || g.ratio_sup <= g.certificate;
  if (fine) {
    j["fine_constant"] = q2s(g.fine_constant);
    j["fine_error"] = g.fine_error;
    j["upper_bound_only"] = g.upper_bound_only;
  }
  if (!g.note.empty()) j["note"] = g.note;
  r.data[mode_name(g.mode)] = j;
}

const std::vector<std::string> kGrowthColumns = {"mode",       "n",         "new_classes", "C_n",  "increment",
                                                 "cumulative", "fine_rank", "total",       "ratio"};

CheckResult cmd_growth(const RunConfig& cfg) {
  CheckResult r = make_result("growth", "Y' bound series with increments 2g C_n phi(p^n)", kGrowthColumns);
  for (CountingMode mode : {CountingMode::Classes, CountingMode::Cells}) {
    const GrowthReport g = growth_bound_series(cfg.scenario, cfg.growth_n_max, mode);
    growth_rows(r, g, false);
    if (mode == CountingMode::Classes && !g.bounded) {
      r.status = CheckStatus::Fail;
      r.detail = "C_n (bad classes) is unbounded";
    }
    if (g.bounded && g.ratio_sup > g.certificate) {
      r.status = CheckStatus::Fail;
      r.detail = std::string("ratio exceeds certificate in ") + mode_name(mode) + " mode";
    }
  }
  if (r.status == CheckStatus::Pass) r.detail = "C_n bounded; certificate " + r.data["classes"]["certificate"].get<std::string>();
  return r;
}

CheckResult cmd_mw_bound(const RunConfig& cfg) {
  CheckResult r = make_result("mw-bound", "total rank bound rank Y' bound + fine rank and its O(p^n) certificate",
                              kGrowthColumns);
  r.data["chain"] = "rank X_n <= rank Y_n + rank X0_n <= Y' bound + fine bound";
  const CheckResult hl = cmd_h_large(cfg);
  r.data["h_large"] = status_name(hl.status);
  bool ub = false;
  for (CountingMode mode : {CountingMode::Classes, CountingMode::Cells}) {
    const GrowthReport g = mordell_weil_bound(cfg.scenario, cfg.growth_n_max, mode, cfg.tau);
    growth_rows(r, g, true);
    ub = ub || g.upper_bound_only;
    if (r.status != CheckStatus::Fail) {
      if (g.fine_error) {
        r.status = CheckStatus::Fail;
        r.detail = g.note;
      } else if (mode == CountingMode::Classes && !g.bounded) {
        r.status = CheckStatus::Fail;
        r.detail = "C_n (bad classes) is unbounded";
      } else if (g.bounded && g.ratio_sup > g.certificate) {
        r.status = CheckStatus::Fail;
        r.detail = std::string("ratio exceeds certificate in ") + mode_name(mode) + " mode";
      }
    }
  }
  if (hl.status == CheckStatus::Fail && r.status != CheckStatus::Fail) {
    r.status = CheckStatus::Fail;
    r.detail = "scenario fails (H-large): " + hl.detail;
  }
  if (r.status != CheckStatus::Fail) {
    r.status = ub ? CheckStatus::UpperBoundOnly : CheckStatus::Pass;
    r.detail = "certificate " + r.data["classes"]["certificate"].get<std::string>() + " (classes), " +
               r.data["cells"]["certificate"].get<std::string>() + " (cells)";
  }
  return r;
}

}  // namespace

CheckResult run_check(const RunConfig& cfg, const std::string& command) {
  if (command == "validate") return cmd_validate(cfg);
  if (command == "log-matrices") return cmd_log_matrices(cfg);
  if (command == "closed-form") return cmd_closed_form(cfg);
  if (command == "vanishing-pattern") return cmd_vanishing_pattern(cfg);
  if (command == "convergence") return cmd_convergence(cfg);
  if (command == "conjugacy") return cmd_conjugacy(cfg);
  if (command == "coinvariants") return cmd_coinvariants(cfg);
  if (command == "h-large") return cmd_h_large(cfg);
  if (command == "growth") return cmd_growth(cfg);
  if (command == "mw-bound") return cmd_mw_bound(cfg);
  throw ConfigError("unknown command '" + command + "'");
}

int exit_code_for(const std::vector<CheckResult>& results) {
  bool ub = false;
  for (const auto& r : results) {
    if (r.status == CheckStatus::Fail) return 1;
    if (r.status == CheckStatus::UpperBoundOnly) ub = true;
  }
  return ub ? 3 : 0;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << content;
  if (!out) throw ConfigError("write failed for " + path.string());
}

}  // namespace

int run_and_write(const RunConfig& cfg, const std::string& command, const std::string& out_dir) {
  std::vector<std::string> cmds;
  if (command == "all") {
    cmds = command_names();
  } else if (std::find(command_names().begin(), command_names().end(), command) != command_names().end()) {
    cmds = {command};
  } else {
    throw ConfigError("unknown command '" + command + "'");
  }
  const std::filesystem::path dir(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw ConfigError("cannot create output directory " + out_dir);

  const std::string stamp = std::string("iwalog ") + kToolVersion + " | seed=" + std::to_string(cfg.seed) +
                            " | precision=" + std::to_string(cfg.precision) + " | tau=" + std::to_string(cfg.tau);
  std::vector<CheckResult> results;
  for (const auto& c : cmds) {
    results.push_back(run_check(cfg, c));
    const CheckResult& r = results.back();
    write_file(dir / (c + ".csv"), r.table.render(r.header + " | " + stamp));
  }
  if (command == "all") {
    CsvTable overview;
    overview.columns = {"command", "status", "detail"};
    for (const auto& r : results) overview.add({r.command, status_name(r.status), r.detail});
    write_file(dir / "all.csv", overview.render("all checks | " + stamp));
  }
  const int code = exit_code_for(results);
  json summary;
  summary["tool"] = "iwalog";
  summary["version"] = kToolVersion;
  summary["command"] = command;
  summary["seed"] = cfg.seed;
  summary["precision"] = cfg.precision;
  summary["tau"] = cfg.tau;
  summary["config"] = cfg.echo;
  summary["exit_code"] = code;
  json checks = json::object();
  for (const auto& r : results) {
    json c;
    c["header"] = r.header;
    c["status"] = status_name(r.status);
    c["detail"] = r.detail;
    c["data"] = r.data;
    c["rows"] = r.table.rows.size();
    checks[r.command] = c;
  }
  summary["checks"] = checks;
  write_file(dir / "summary.json", summary.dump(2) + "\n");
  return code;
}

}  // namespace iwalog
