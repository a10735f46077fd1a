#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "iwalog/cyclotomic.hpp"
#include "iwalog/iwasawa_poly.hpp"
#include "iwalog/matrix.hpp"
#include "iwalog/padic.hpp"

namespace iwalog {

/// The two primes above p: q = p (variable X) and q = p^c (variable Y).
enum class Prime { P, PC };

inline Var var_of(Prime q) { return q == Prime::P ? Var::X : Var::Y; }
const char* prime_name(Prime q);

struct DieudonneInput {
  unsigned p = 3;
  int g = 1;
  ScalarMatrix c_p;
  ScalarMatrix c_pc;
  int precision = kDefaultPrecision;

  const ScalarMatrix& c(Prime q) const { return q == Prime::P ? c_p : c_pc; }
};

/// (J_p, J_pc) as bitmasks over {1..2g}; bit k-1 stands for index k.
struct SignedIndex {
  int g = 1;
  std::uint32_t jp = 0;
  std::uint32_t jpc = 0;

  int size() const { return __builtin_popcount(jp) + __builtin_popcount(jpc); }
  bool in_family() const { return size() == 2 * g; }
  /// Rows of the 4g x 4g block matrix, 0-based: J_p then 2g + J_pc, ascending.
  std::vector<std::size_t> positions() const;
  /// "({1},{2})" style.
  std::string to_string() const;
  /// Name of a distinguished member (I0, I1, mix01, mix10, bdp_p, bdp_pc) or "".
  std::string tag() const;

  friend bool operator==(const SignedIndex& a, const SignedIndex& b) {
    return a.g == b.g && a.jp == b.jp && a.jpc == b.jpc;
  }
};

enum class Distinguished { I0, I1, Mix01, Mix10, BdpP, BdpPc };

SignedIndex distinguished(int g, Distinguished which);

/// Every (J_p, J_pc) with |J_p| + |J_pc| = 2g, ordered by (jp, jpc) masks.
std::vector<SignedIndex> enumerate_index_sets(int g);

/// Row tag: the row is divisible by Phi_{p^level}(1 + var) by construction (level 0: no tag).
struct RowTag {
  Var var = Var::X;
  int level = 0;
};

struct LambdaMatrix {
  int g = 1;
  Matrix<IwasawaPoly> m;
  std::vector<RowTag> row_tags;
  /// True for the 4g x 4g block-diagonal assembly.
  bool block_diagonal = false;
};

struct NewtonReport {
  std::vector<std::string> charpoly;  // serialized coefficients, constant term first
  std::vector<mpq_class> slopes;      // Newton polygon slopes, left to right
  std::vector<mpq_class> root_valuations;
  bool reading_closed_left = false;   // all root valuations in [-1, 0)
  bool reading_closed_right = false;  // all root valuations in (-1, 0]
  Valuation value_at_one = Valuation::infinite();
  bool eigenvalue_one = false;
};

struct PrimeValidation {
  bool shape_ok = false;
  bool det_unit = false;
  std::string det;
  bool block_anti_diagonal = false;
  NewtonReport newton;
};

struct ValidationReport {
  bool accepted = false;
  std::string reason;
  int tau = 0;
  PrimeValidation per_prime[2];
};

/// tau: zero threshold for the eigenvalue-1 test.
ValidationReport validate_input(const DieudonneInput& d, int tau);

bool is_block_anti_diagonal(const ScalarMatrix& c, int g);

/// C_phi = C diag(I_g, I_g / p).
ScalarMatrix c_phi(const DieudonneInput& d, Prime q);

LambdaMatrix c_step(const DieudonneInput& d, Prime q, int r);
/// C_{q,r} ... C_{q,1}.
LambdaMatrix h_matrix(const DieudonneInput& d, Prime q, int r);
/// H_{q,1}, ..., H_{q,r_max} in one pass.
std::vector<LambdaMatrix> h_tower(const DieudonneInput& d, Prime q, int r_max);
LambdaMatrix h_block(const LambdaMatrix& hp, const LambdaMatrix& hpc);

/// Plain determinant of the (I, J) submatrix; rows and columns ascending, no extra sign.
IwasawaPoly minor(const LambdaMatrix& h, const SignedIndex& I, const SignedIndex& J);

/// Entrywise evaluation at w. Rows tagged with Phi_{p^k} whose variable has exact order k
/// at w are checked numerically and replaced by exact zeros.
Matrix<CycloElement> eval_matrix_at_theta(const LambdaMatrix& h, const CharacterPoint& w);

/// Minor of an already evaluated 4g x 4g matrix.
CycloElement minor_at(const Matrix<CycloElement>& h_theta, const SignedIndex& I, const SignedIndex& J);

/// C_phi^{n+1} H_{q,n}.
Matrix<IwasawaPoly> m_approximant(const DieudonneInput& d, Prime q, int n);

struct ConvergenceRow {
  int n = 0;       // compares M_{n+1} with M_n
  int degree = 0;  // coefficient degree j
  Valuation valuation = Valuation::infinite();
};

/// For n = 1..n_max-1 and j = 0..max_degree: min valuation of coeff_j(M_{n+1} - M_n).
std::vector<ConvergenceRow> convergence_diagnostic(const DieudonneInput& d, Prime q, int n_max, int max_degree);

}  // namespace iwalog
