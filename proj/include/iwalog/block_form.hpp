#pragma once

#include <string>
#include <vector>

#include "iwalog/cyclotomic.hpp"
#include "iwalog/dieudonne.hpp"
#include "iwalog/matrix.hpp"

namespace iwalog {

/// C_q^{-1} = [[0, B_{q,1}], [B_{q,2}, 0]] for block anti-diagonal C_q.
struct BlockData {
  unsigned p = 3;
  int g = 1;
  int precision = kDefaultPrecision;
  ScalarMatrix b1[2];
  ScalarMatrix b2[2];

  static BlockData from_input(const DieudonneInput& d);
};

/// eps_1/eps_2 * eps_3/eps_4 * ... in Q_p(zeta_{p^k}); cached.
CycloElement delta_k(unsigned p, int k, int precision = kDefaultPrecision);

/// H_{q,k}(zeta_{p^k} - 1) from the closed form.
Matrix<CycloElement> closed_form_h(const BlockData& b, Prime q, int k);

/// The J whose (I0, J)-minor may survive at orders (r, s).
SignedIndex surviving_index(int g, int r, int s);

enum class MinorStatus { SymbolicZero, PrecisionZero, Nonzero };

const char* status_name(MinorStatus s);

struct PatternRow {
  int r = 0;
  int s = 0;
  SignedIndex J;
  MinorStatus status = MinorStatus::SymbolicZero;
  Valuation valuation = Valuation::infinite();
  bool survivor = false;
  bool ok = false;
};

struct PatternReport {
  CharacterPoint theta;
  int tau = 0;
  std::vector<PatternRow> rows;
  bool passed = true;
  std::string failure;
  Valuation survivor_valuation = Valuation::infinite();
};

/// All (I0, J)-minors of H_{r,s} at theta; non-survivors must vanish symbolically.
PatternReport verify_vanishing_pattern(const DieudonneInput& d, int r, int s, const CharacterPoint& theta, int tau);

/// Same, reusing precomputed towers H_{p,1..}, H_{pc,1..}.
PatternReport verify_vanishing_pattern(const std::vector<LambdaMatrix>& tower_p,
                                       const std::vector<LambdaMatrix>& tower_pc, int r, int s,
                                       const CharacterPoint& theta, int tau);

bool is_block_diagonal(const ScalarMatrix& b, int g);

struct ConjugationResult {
  ScalarMatrix conjugated;
  bool input_anti_diagonal = false;
  bool output_anti_diagonal = false;
};

/// B C B^{-1} for block-diagonal B.
ConjugationResult conjugate_basis(const ScalarMatrix& c, const ScalarMatrix& b, int g);

enum class RowSelection { Top, Bottom, Full, Empty, Custom };

const char* selection_name(RowSelection s);

struct KernelReport {
  std::vector<std::size_t> locus_before;
  std::vector<std::size_t> locus_after;
  bool equal = false;
  /// False for custom row sets outside the canonical family.
  bool covered = true;
};

/// Compares the simultaneous-vanishing locus of V and B V over the selected rows.
KernelReport kernel_invariance_check(const Matrix<CycloElement>& v, const ScalarMatrix& b, int g, RowSelection sel,
                                     const std::vector<std::size_t>& custom_rows = {});

}  // namespace iwalog
