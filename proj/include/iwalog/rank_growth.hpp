#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iwalog/block_form.hpp"
#include "iwalog/iwasawa_poly.hpp"

namespace iwalog {

struct CharacterClass {
  CharacterPoint rep;
  long size = 1;
};

/// Orbits of {w : w^{p^n} = 1} under w -> (w1^a, w2^a), (a, p) = 1.
/// new_only keeps the classes with max(o(w1), o(w2)) = n.
std::vector<CharacterClass> enumerate_classes(unsigned p, int n, bool new_only);

/// phi(p^{max(r, s)}), 1 for the trivial character.
long class_rank(const CharacterPoint& w);

/// A factor of a torsion generator whose zeros on p-power characters are known exactly.
struct RootAtom {
  enum class Kind { Var, Phi, Omega };
  Kind kind = Kind::Var;
  Var var = Var::X;
  int level = 0;  // Phi_{p^level}(1+var) or omega_level(var); unused for Var

  IwasawaPoly polynomial(unsigned p, int precision) const;
  bool vanishes_at(const CharacterPoint& w) const;
  std::string to_string() const;
};

/// Lambda / (f). Tagged factors carry an exact factorization into atoms; untagged ones
/// are decided numerically against the zero threshold.
struct TorsionFactor {
  IwasawaPoly f = IwasawaPoly::exact_zero(3);
  std::vector<RootAtom> atoms;
  bool tagged = false;
  std::string label;

  static TorsionFactor from_atoms(unsigned p, const std::vector<RootAtom>& atoms, int precision = kDefaultPrecision);
  static TorsionFactor untagged(const IwasawaPoly& f, std::string label = "");
};

struct ModulePresentation {
  unsigned p = 3;
  int free_rank = 0;
  std::vector<TorsionFactor> torsion;
};

struct RankResult {
  long rank = 0;
  bool upper_bound_only = false;
};

/// rank_{Z_p} of M_{Gamma_n}: r p^{2n} plus, per factor, the characters of level <= n where it vanishes.
RankResult coinvariant_rank(const ModulePresentation& m, int n, int tau);

struct AsymptoticRankReport {
  std::vector<long> ranks;      // n = 0..n_max
  std::vector<long> residuals;  // rank_n - r p^{2n}
  long fitted_rank = 0;
  mpq_class constant;  // max residual / p^n
  bool upper_bound_only = false;
};

AsymptoticRankReport asymptotic_rank_check(const ModulePresentation& m, int n_max, int tau);

// ---------------------------------------------------------------------------

/// val = a + b / phi(p^r) + c / phi(p^s), or identically vanishing.
struct ColemanModel {
  long a = 0;
  long b = 0;
  long c = 0;
  bool vanishes = false;

  Valuation at(unsigned p, int r, int s) const;
};

struct BadCell {
  int r = 0;
  int s = 0;
  long count = 0;
};

/// Cells (m, m + offset) for every m with both coordinates >= 0, count + slope * m classes each.
struct BadRule {
  int offset = 0;
  long count = 0;
  long slope = 0;
};

enum class CountingMode { Classes, Cells };

const char* mode_name(CountingMode m);

struct GrowthScenario {
  unsigned p = 3;
  int g = 1;
  int n0 = 0;
  long bound0 = 0;
  bool block_mode = true;
  /// Keys: I0, I1, mix01, mix10, default.
  std::map<std::string, ColemanModel> coleman;
  /// Survivor minor valuation used outside block mode.
  mpq_class minor_valuation = 0;
  std::vector<BadCell> bad_cells;
  std::vector<BadRule> bad_rules;
  ModulePresentation fine;

  const ColemanModel& model_for(const std::string& tag) const;
  /// Explicit bad classes in cell (r, s) from cells and rules.
  long explicit_bad(int r, int s) const;
  /// Throws ConfigError when a count exceeds the classes available in its cell.
  void check() const;
};

/// Exact valuation of delta_k: sum over odd i < k of 1/phi(p^i) - 1/phi(p^{i+1}).
mpq_class delta_valuation(unsigned p, int k);

struct HLargeCell {
  int r = 0;
  int s = 0;
  std::string survivor;
  Valuation minor_valuation = Valuation::infinite();
  Valuation coleman_valuation = Valuation::infinite();
  Valuation total = Valuation::infinite();
  long bad_classes = 0;
  bool constrained = false;  // |r - s| > n0
  bool nonzero = false;
  bool violation = false;
};

struct HLargeReport {
  std::vector<HLargeCell> cells;
  bool passed = true;
  std::string failure;
};

/// Scans (r, s) in [1, r_max] x [1, s_max]. In block mode the survivor minor valuation
/// comes from the closed form for `block`; otherwise from the scenario.
HLargeReport h_large_scan(const GrowthScenario& s, const BlockData* block, int r_max, int s_max);

/// Number of bad classes (or cells) with max(r, s) = n.
long xi_count(const GrowthScenario& s, int n, CountingMode mode);

struct GrowthRow {
  int n = 0;
  long new_classes = 0;
  long c_n = 0;
  long increment = 0;
  long cumulative = 0;
  long fine_rank = 0;
  long total = 0;
  mpq_class ratio;  // total / p^n (cumulative / p^n in the plain series)
};

struct GrowthReport {
  CountingMode mode = CountingMode::Classes;
  std::vector<GrowthRow> rows;
  bool bounded = true;           // C_n bounded for all n by the scenario's structure
  long sup_c = 0;                // sup of C_n over the scanned range
  mpq_class certificate;         // analytic bound for sup_n total_n / p^n (meaningful when bounded)
  mpq_class ratio_sup;           // max over computed rows
  mpq_class fine_constant;       // max fine_rank / p^n
  bool upper_bound_only = false;
  bool fine_error = false;       // fine module has a free part
  std::string note;
};

GrowthReport growth_bound_series(const GrowthScenario& s, int n_max, CountingMode mode);

GrowthReport mordell_weil_bound(const GrowthScenario& s, int n_max, CountingMode mode, int tau);

}  // namespace iwalog
