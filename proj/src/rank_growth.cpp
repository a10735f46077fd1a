#include "iwalog/rank_growth.hpp"

#include <algorithm>
#include <cstdlib>

namespace iwalog {

namespace {

long pow_long(unsigned p, int k) {
  long r = 1;
  for (int i = 0; i < k; ++i) r *= static_cast<long>(p);
  return r;
}

// Exact order exponent of zeta_{p^m}^e, together with the exponent relative to that order.
std::pair<int, long> reduce_root(unsigned p, int m, long e) {
  const long q = pow_long(p, m);
  e = ((e % q) + q) % q;
  if (e == 0) return {0, 1};
  int order = m;
  while (e % static_cast<long>(p) == 0) {
    e /= static_cast<long>(p);
    --order;
  }
  return {order, e};
}

}  // namespace

std::vector<CharacterClass> enumerate_classes(unsigned p, int n, bool new_only) {
  if (n < 0) throw StructuralError("class level must be >= 0");
  std::vector<CharacterClass> out;
  if (!new_only || n == 0) out.push_back({CharacterPoint::trivial(p), 1});
  for (int m = new_only ? n : 1; m <= n; ++m) {
    if (m == 0) continue;
    const long q = pow_long(p, m);
    const long size = phi_prime_power(p, m);
    // w1 of exact order p^m, normalized to zeta_{p^m}.
    for (long b = 0; b < q; ++b) {
      const auto [s, bb] = reduce_root(p, m, b);
      out.push_back({CharacterPoint::make(p, m, s, 1, bb), size});
    }
    // w1 of smaller order, w2 normalized to zeta_{p^m}.
    for (long a = 0; a < q; a += static_cast<long>(p)) {
      const auto [r, aa] = reduce_root(p, m, a);
      out.push_back({CharacterPoint::make(p, r, m, aa, 1), size});
    }
  }
  return out;
}

long class_rank(const CharacterPoint& w) { return phi_prime_power(w.p, w.level()); }

// ---------------------------------------------------------------------------

IwasawaPoly RootAtom::polynomial(unsigned p, int precision) const {
  switch (kind) {
    case Kind::Var:
      return IwasawaPoly::variable(p, var, precision);
    case Kind::Phi:
      return IwasawaPoly::shifted_cyclotomic(p, level, var, precision);
    case Kind::Omega:
      return omega(p, level, var, precision);
  }
  throw StructuralError("unknown atom kind");
}

bool RootAtom::vanishes_at(const CharacterPoint& w) const {
  const int o = w.order(var);
  switch (kind) {
    case Kind::Var:
      return o == 0;
    case Kind::Phi:
      return o == level;
    case Kind::Omega:
      return o <= level;
  }
  return false;
}

std::string RootAtom::to_string() const {
  const std::string v = var_name(var);
  switch (kind) {
    case Kind::Var:
      return v;
    case Kind::Phi:
      return "Phi_" + std::to_string(level) + "(1+" + v + ")";
    case Kind::Omega:
      return "omega_" + std::to_string(level) + "(" + v + ")";
  }
  return "?";
}

TorsionFactor TorsionFactor::from_atoms(unsigned p, const std::vector<RootAtom>& atoms, int precision) {
  if (atoms.empty()) throw StructuralError("tagged factor needs at least one atom");
  TorsionFactor t;
  t.tagged = true;
  t.atoms = atoms;
  t.f = IwasawaPoly::from_integer(p, 1, precision);
  for (const auto& a : atoms) {
    t.f = t.f * a.polynomial(p, precision);
    if (!t.label.empty()) t.label += "*";
    t.label += a.to_string();
  }
  return t;
}

TorsionFactor TorsionFactor::untagged(const IwasawaPoly& f, std::string label) {
  if (f.is_zero()) throw StructuralError("torsion factor must be nonzero");
  TorsionFactor t;
  t.f = f;
  t.label = label.empty() ? f.to_string() : std::move(label);
  return t;
}

RankResult coinvariant_rank(const ModulePresentation& m, int n, int tau) {
  if (n < 0) throw StructuralError("coinvariant level must be >= 0");
  if (m.free_rank < 0) throw StructuralError("negative free rank");
  RankResult res;
  res.rank = static_cast<long>(m.free_rank) * pow_long(m.p, 2 * n);
  if (m.torsion.empty()) return res;
  const auto classes = enumerate_classes(m.p, n, false);
  for (const auto& t : m.torsion) {
    for (const auto& cls : classes) {
      bool zero = false;
      if (t.tagged) {
        zero = std::any_of(t.atoms.begin(), t.atoms.end(), [&](const RootAtom& a) { return a.vanishes_at(cls.rep); });
      } else {
        const CycloElement v = eval_at_character(t.f, cls.rep);
        zero = v.reported_zero(tau);
        if (zero) res.upper_bound_only = true;
      }
      if (zero) res.rank += cls.size;
    }
  }
  return res;
}

AsymptoticRankReport asymptotic_rank_check(const ModulePresentation& m, int n_max, int tau) {
  if (n_max < 2) throw StructuralError("asymptotic rank check needs n_max >= 2");
  AsymptoticRankReport rep;
  for (int n = 0; n <= n_max; ++n) {
    const RankResult r = coinvariant_rank(m, n, tau);
    rep.ranks.push_back(r.rank);
    rep.upper_bound_only = rep.upper_bound_only || r.upper_bound_only;
  }
  rep.fitted_rank = rep.ranks.back() / pow_long(m.p, 2 * n_max);
  rep.constant = 0;
  for (int n = 0; n <= n_max; ++n) {
    const long res = rep.ranks[static_cast<std::size_t>(n)] - rep.fitted_rank * pow_long(m.p, 2 * n);
    if (res < 0) {
      throw InternalInconsistency("negative residual at n=" + std::to_string(n) + " for fitted rank " +
                                  std::to_string(rep.fitted_rank));
    }
    rep.residuals.push_back(res);
    mpq_class c(res, pow_long(m.p, n));
    c.canonicalize();
    if (c > rep.constant) rep.constant = c;
  }
  return rep;
}

// ---------------------------------------------------------------------------

Valuation ColemanModel::at(unsigned p, int r, int s) const {
  if (vanishes) return Valuation::infinite();
  mpq_class v = mpq_class(a) + mpq_class(b, phi_prime_power(p, r)) + mpq_class(c, phi_prime_power(p, s));
  v.canonicalize();
  return Valuation::exact(v);
}

const char* mode_name(CountingMode m) { return m == CountingMode::Classes ? "classes" : "cells"; }

const ColemanModel& GrowthScenario::model_for(const std::string& tag) const {
  auto it = coleman.find(tag);
  if (it != coleman.end()) return it->second;
  it = coleman.find("default");
  if (it != coleman.end()) return it->second;
  static const ColemanModel unit_model{};
  return unit_model;
}

long GrowthScenario::explicit_bad(int r, int s) const {
  long total = 0;
  for (const auto& c : bad_cells) {
    if (c.r == r && c.s == s) total += c.count;
  }
  for (const auto& rule : bad_rules) {
    if (s - r != rule.offset) continue;
    total += rule.count + rule.slope * r;
  }
  return std::min(total, phi_prime_power(p, std::min(r, s)));
}

void GrowthScenario::check() const {
  if (n0 < 0) throw ConfigError("n0 must be >= 0");
  for (const auto& c : bad_cells) {
    if (c.r < 0 || c.s < 0 || c.count < 0) throw ConfigError("bad cell entries must be >= 0");
    const long avail = phi_prime_power(p, std::min(c.r, c.s));
    if (c.count > avail) {
      throw ConfigError("bad cell (" + std::to_string(c.r) + "," + std::to_string(c.s) + ") has " +
                        std::to_string(c.count) + " classes but only " + std::to_string(avail) + " exist");
    }
  }
  for (const auto& rule : bad_rules) {
    if (rule.count < 0 || rule.slope < 0) throw ConfigError("bad rule counts must be >= 0");
  }
  if (fine.p != p) throw ConfigError("fine module prime differs from scenario prime");
}

mpq_class delta_valuation(unsigned p, int k) {
  if (k < 1) throw StructuralError("delta_k needs k >= 1");
  mpq_class v = 0;
  const int last = k % 2 ? k - 1 : k;
  for (int i = 1; i + 1 <= last; i += 2) {
    v += mpq_class(1, phi_prime_power(p, i)) - mpq_class(1, phi_prime_power(p, i + 1));
  }
  v.canonicalize();
  return v;
}

namespace {

std::string survivor_tag(const GrowthScenario& s, int r, int c) {
  return s.block_mode ? surviving_index(s.g, r, c).tag() : std::string("I0");
}

// Survivor minor valuation from the closed form: g (val delta_r + val delta_s) plus the
// valuations of the determinants of the surviving g x g blocks.
Valuation block_minor_valuation(const GrowthScenario& s, const BlockData* block, int r, int c) {
  mpq_class v = s.g * (delta_valuation(s.p, r) + delta_valuation(s.p, c));
  if (block) {
    for (int qi = 0; qi < 2; ++qi) {
      const int k = qi == 0 ? r : c;
      const ScalarMatrix prod = block->b1[qi] * block->b2[qi];
      const ScalarMatrix m = k % 2 ? matrix_power(prod, static_cast<unsigned>((k - 1) / 2)) * block->b1[qi]
                                   : matrix_power(prod, static_cast<unsigned>(k / 2));
      const Valuation dv = determinant(m).valuation();
      if (!dv.is_exact()) return Valuation::at_least(v + dv.value());
      v += dv.value();
    }
  }
  v.canonicalize();
  return Valuation::exact(v);
}

// Bad classes in cell (r, s): explicit ones, or the whole cell when the survivor model vanishes
// inside the unconstrained band.
long bad_in_cell(const GrowthScenario& s, int r, int c) {
  long bad = s.explicit_bad(r, c);
  if (r >= 1 && c >= 1 && std::abs(r - c) <= s.n0 && s.model_for(survivor_tag(s, r, c)).vanishes) {
    bad = phi_prime_power(s.p, std::min(r, c));
  }
  return bad;
}

bool survivor_vanishes_in_band(const GrowthScenario& s) {
  if (!s.block_mode) return s.model_for("I0").vanishes;
  for (const char* tag : {"I0", "I1", "mix01", "mix10"}) {
    if (s.model_for(tag).vanishes) return true;
  }
  return false;
}

}  // namespace

HLargeReport h_large_scan(const GrowthScenario& s, const BlockData* block, int r_max, int s_max) {
  HLargeReport rep;
  for (int r = 1; r <= r_max; ++r) {
    for (int c = 1; c <= s_max; ++c) {
      HLargeCell cell;
      cell.r = r;
      cell.s = c;
      cell.survivor = survivor_tag(s, r, c);
      cell.minor_valuation = s.block_mode ? block_minor_valuation(s, block, r, c) : Valuation::exact(s.minor_valuation);
      cell.coleman_valuation = s.model_for(cell.survivor).at(s.p, r, c);
      if (cell.minor_valuation.kind() == Valuation::Kind::Exact &&
          cell.coleman_valuation.kind() == Valuation::Kind::Exact) {
        cell.total = Valuation::exact(cell.minor_valuation.value() + cell.coleman_valuation.value());
      } else if (cell.minor_valuation.kind() == Valuation::Kind::Infinite ||
                 cell.coleman_valuation.kind() == Valuation::Kind::Infinite) {
        cell.total = Valuation::infinite();
      } else {
        cell.total = Valuation::at_least(cell.minor_valuation.value() + cell.coleman_valuation.value());
      }
      cell.bad_classes = bad_in_cell(s, r, c);
      cell.constrained = std::abs(r - c) > s.n0;
      cell.nonzero = cell.total.is_exact() && cell.bad_classes == 0;
      cell.violation = cell.constrained && !cell.nonzero;
      if (cell.violation && rep.passed) {
        rep.passed = false;
        rep.failure = "(H-large) fails at (r,s)=(" + std::to_string(r) + "," + std::to_string(c) + ")";
      }
      rep.cells.push_back(std::move(cell));
    }
  }
  return rep;
}

long xi_count(const GrowthScenario& s, int n, CountingMode mode) {
  long total = 0;
  for (int r = 0; r <= n; ++r) {
    for (int c = 0; c <= n; ++c) {
      if (std::max(r, c) != n) continue;
      const long bad = bad_in_cell(s, r, c);
      if (bad == 0) continue;
      total += mode == CountingMode::Classes ? bad : 1;
    }
  }
  return total;
}

namespace {

bool c_n_bounded(const GrowthScenario& s, CountingMode mode) {
  if (mode == CountingMode::Cells) return true;
  for (const auto& rule : s.bad_rules) {
    if (rule.slope > 0) return false;
  }
  return !survivor_vanishes_in_band(s);
}

}  // namespace

GrowthReport growth_bound_series(const GrowthScenario& s, int n_max, CountingMode mode) {
  if (n_max < 1) throw StructuralError("growth series needs n_max >= 1");
  GrowthReport rep;
  rep.mode = mode;
  rep.bounded = c_n_bounded(s, mode);
  long cumulative = s.bound0;
  for (int n = 0; n <= n_max; ++n) {
    GrowthRow row;
    row.n = n;
    row.new_classes = static_cast<long>(enumerate_classes(s.p, n, true).size());
    row.c_n = n == 0 ? 0 : xi_count(s, n, mode);
    row.increment = n == 0 ? 0 : 2L * s.g * row.c_n * phi_prime_power(s.p, n);
    cumulative += row.increment;
    row.cumulative = cumulative;
    row.total = cumulative;
    row.ratio = mpq_class(row.total, pow_long(s.p, n));
    row.ratio.canonicalize();
    rep.sup_c = std::max(rep.sup_c, row.c_n);
    if (row.ratio > rep.ratio_sup) rep.ratio_sup = row.ratio;
    rep.rows.push_back(row);
  }
  rep.certificate = mpq_class(s.bound0) + 2 * s.g * rep.sup_c;
  rep.certificate.canonicalize();
  if (!rep.bounded) rep.note = "C_n unbounded: certificate is not finite";
  return rep;
}

GrowthReport mordell_weil_bound(const GrowthScenario& s, int n_max, CountingMode mode, int tau) {
  GrowthReport rep = growth_bound_series(s, n_max, mode);
  if (s.fine.free_rank > 0) {
    rep.fine_error = true;
    rep.note = "fine module has a free part; the fine dual must be torsion";
  }
  rep.ratio_sup = 0;
  rep.fine_constant = 0;
  for (auto& row : rep.rows) {
    const RankResult fr = coinvariant_rank(s.fine, row.n, tau);
    rep.upper_bound_only = rep.upper_bound_only || fr.upper_bound_only;
    row.fine_rank = fr.rank;
    row.total = row.cumulative + fr.rank;
    row.ratio = mpq_class(row.total, pow_long(s.p, row.n));
    row.ratio.canonicalize();
    mpq_class fc(fr.rank, pow_long(s.p, row.n));
    fc.canonicalize();
    if (fc > rep.fine_constant) rep.fine_constant = fc;
    if (row.ratio > rep.ratio_sup) rep.ratio_sup = row.ratio;
  }
  rep.certificate = mpq_class(s.bound0) + 2 * s.g * rep.sup_c + rep.fine_constant;
  rep.certificate.canonicalize();
  return rep;
}

}  // namespace iwalog
