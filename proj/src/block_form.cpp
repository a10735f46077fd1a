#include "iwalog/block_form.hpp"

#include <map>
#include <mutex>
#include <tuple>

namespace iwalog {

namespace {

ScalarMatrix block_of(const ScalarMatrix& m, int g, int bi, int bj) {
  std::vector<std::size_t> rows, cols;
  for (int k = 0; k < g; ++k) {
    rows.push_back(static_cast<std::size_t>(bi * g + k));
    cols.push_back(static_cast<std::size_t>(bj * g + k));
  }
  return submatrix(m, rows, cols);
}

Matrix<CycloElement> lift(const ScalarMatrix& m, int level) {
  return map_matrix(m, [&](const PAdicScalar& x) { return CycloElement::from_scalar(x, level); });
}

}  // namespace

BlockData BlockData::from_input(const DieudonneInput& d) {
  BlockData b;
  b.p = d.p;
  b.g = d.g;
  b.precision = d.precision;
  for (Prime q : {Prime::P, Prime::PC}) {
    if (!is_block_anti_diagonal(d.c(q), d.g)) {
      throw ValidationError(std::string("matrix for ") + prime_name(q) + " is not block anti-diagonal");
    }
    const ScalarMatrix cinv = inverse(d.c(q));
    b.b1[static_cast<int>(q)] = block_of(cinv, d.g, 0, 1);
    b.b2[static_cast<int>(q)] = block_of(cinv, d.g, 1, 0);
  }
  return b;
}

CycloElement delta_k(unsigned p, int k, int precision) {
  if (k < 1) throw StructuralError("delta_k needs k >= 1");
  static std::mutex mu;
  static std::map<std::tuple<unsigned, int, int>, CycloElement> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({p, k, precision});
    if (it != cache.end()) return it->second;
  }
  CycloElement delta = CycloElement::from_integer(p, k, 1, precision);
  const int last = k % 2 ? k - 1 : k;
  // Each ratio eps_{2i-1}/eps_{2i} is formed at level 2i, then embedded.
  for (int i = 1; i + 1 <= last; i += 2) {
    const CycloElement ratio = CycloElement::epsilon_at(p, i, i + 1, precision) / CycloElement::epsilon(p, i + 1, precision);
    delta = delta * ratio.embed(k);
  }
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(std::make_tuple(p, k, precision), delta);
  return delta;
}

Matrix<CycloElement> closed_form_h(const BlockData& b, Prime q, int k) {
  if (k < 1) throw StructuralError("closed form needs k >= 1");
  const int qi = static_cast<int>(q);
  const std::size_t g = static_cast<std::size_t>(b.g);
  const ScalarMatrix prod = b.b1[qi] * b.b2[qi];
  ScalarMatrix block = k % 2 ? matrix_power(prod, static_cast<unsigned>((k - 1) / 2)) * b.b1[qi]
                             : matrix_power(prod, static_cast<unsigned>(k / 2));
  const CycloElement delta = delta_k(b.p, k, b.precision);
  Matrix<CycloElement> out(2 * g, 2 * g, CycloElement::exact_zero(b.p, k));
  const std::size_t col0 = k % 2 ? g : 0;
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = 0; j < g; ++j) {
      if (block(i, j).is_exact_zero()) continue;
      out(i, col0 + j) = delta * CycloElement::from_scalar(block(i, j), k);
    }
  }
  return out;
}

SignedIndex surviving_index(int g, int r, int s) {
  if (r < 1 || s < 1) throw StructuralError("surviving index needs r, s >= 1");
  const bool re = r % 2 == 0;
  const bool se = s % 2 == 0;
  if (re && se) return distinguished(g, Distinguished::I0);
  if (!re && !se) return distinguished(g, Distinguished::I1);
  if (!re && se) return distinguished(g, Distinguished::Mix10);
  return distinguished(g, Distinguished::Mix01);
}

const char* status_name(MinorStatus s) {
  switch (s) {
    case MinorStatus::SymbolicZero:
      return "symbolic-zero";
    case MinorStatus::PrecisionZero:
      return "precision-zero";
    case MinorStatus::Nonzero:
      return "nonzero";
  }
  return "?";
}

PatternReport verify_vanishing_pattern(const std::vector<LambdaMatrix>& tower_p,
                                       const std::vector<LambdaMatrix>& tower_pc, int r, int s,
                                       const CharacterPoint& theta, int tau) {
  if (theta.r != r || theta.s != s) throw StructuralError("character orders do not match (r, s)");
  if (r < 1 || s < 1 || static_cast<std::size_t>(r) > tower_p.size() || static_cast<std::size_t>(s) > tower_pc.size()) {
    throw StructuralError("tower too short for requested (r, s)");
  }
  const LambdaMatrix h = h_block(tower_p[static_cast<std::size_t>(r - 1)], tower_pc[static_cast<std::size_t>(s - 1)]);
  const int g = h.g;
  const Matrix<CycloElement> ht = eval_matrix_at_theta(h, theta);
  const SignedIndex i0 = distinguished(g, Distinguished::I0);
  const SignedIndex surv = surviving_index(g, r, s);
  PatternReport rep;
  rep.theta = theta;
  rep.tau = tau;
  for (const auto& J : enumerate_index_sets(g)) {
    PatternRow row;
    row.r = r;
    row.s = s;
    row.J = J;
    row.survivor = J == surv;
    const CycloElement m = minor_at(ht, i0, J);
    row.valuation = m.valuation();
    if (m.is_exact_zero()) {
      row.status = MinorStatus::SymbolicZero;
    } else if (m.reported_zero(tau)) {
      row.status = MinorStatus::PrecisionZero;
    } else {
      row.status = MinorStatus::Nonzero;
    }
    row.ok = row.survivor ? row.status == MinorStatus::Nonzero : row.status == MinorStatus::SymbolicZero;
    if (row.survivor) rep.survivor_valuation = row.valuation;
    if (!row.ok && rep.passed) {
      rep.passed = false;
      rep.failure = "J=" + J.to_string() + " is " + status_name(row.status) +
                    (row.survivor ? " but should survive" : " but should vanish");
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

PatternReport verify_vanishing_pattern(const DieudonneInput& d, int r, int s, const CharacterPoint& theta, int tau) {
  return verify_vanishing_pattern(h_tower(d, Prime::P, r), h_tower(d, Prime::PC, s), r, s, theta, tau);
}

bool is_block_diagonal(const ScalarMatrix& b, int g) {
  const std::size_t gg = static_cast<std::size_t>(g);
  if (b.rows() != 2 * gg || b.cols() != 2 * gg) return false;
  for (std::size_t i = 0; i < 2 * gg; ++i) {
    for (std::size_t j = 0; j < 2 * gg; ++j) {
      if ((i < gg) != (j < gg) && !b(i, j).is_zero()) return false;
    }
  }
  return true;
}

namespace {

void require_invertible_blocks(const ScalarMatrix& b, int g) {
  if (!is_block_diagonal(b, g)) throw ValidationError("change of basis is not block diagonal");
  for (int k = 0; k < 2; ++k) {
    if (!determinant(block_of(b, g, k, k)).is_unit()) {
      throw ValidationError("diagonal block " + std::to_string(k + 1) + " is not invertible over Z_p");
    }
  }
}

}  // namespace

ConjugationResult conjugate_basis(const ScalarMatrix& c, const ScalarMatrix& b, int g) {
  require_invertible_blocks(b, g);
  if (c.rows() != b.rows() || !c.is_square()) throw StructuralError("conjugation shape mismatch");
  ConjugationResult res;
  res.input_anti_diagonal = is_block_anti_diagonal(c, g);
  res.conjugated = b * c * inverse(b);
  res.output_anti_diagonal = is_block_anti_diagonal(res.conjugated, g);
  return res;
}

const char* selection_name(RowSelection s) {
  switch (s) {
    case RowSelection::Top:
      return "top";
    case RowSelection::Bottom:
      return "bottom";
    case RowSelection::Full:
      return "full";
    case RowSelection::Empty:
      return "empty";
    case RowSelection::Custom:
      return "custom";
  }
  return "?";
}

KernelReport kernel_invariance_check(const Matrix<CycloElement>& v, const ScalarMatrix& b, int g, RowSelection sel,
                                     const std::vector<std::size_t>& custom_rows) {
  require_invertible_blocks(b, g);
  const std::size_t gg = static_cast<std::size_t>(g);
  if (v.rows() != 2 * gg) throw StructuralError("V must have 2g rows");
  std::vector<std::size_t> rows;
  switch (sel) {
    case RowSelection::Top:
      for (std::size_t i = 0; i < gg; ++i) rows.push_back(i);
      break;
    case RowSelection::Bottom:
      for (std::size_t i = gg; i < 2 * gg; ++i) rows.push_back(i);
      break;
    case RowSelection::Full:
      for (std::size_t i = 0; i < 2 * gg; ++i) rows.push_back(i);
      break;
    case RowSelection::Empty:
      break;
    case RowSelection::Custom:
      rows = custom_rows;
      break;
  }
  int level = 0;
  for (const auto& x : v.data()) level = std::max(level, x.level());
  const Matrix<CycloElement> bv = lift(b, level) * v;
  auto locus = [&](const Matrix<CycloElement>& m) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      bool all = true;
      for (std::size_t i : rows) {
        if (!m(i, j).is_zero()) {
          all = false;
          break;
        }
      }
      if (all) out.push_back(j);
    }
    return out;
  };
  KernelReport rep;
  rep.locus_before = locus(v);
  rep.locus_after = locus(bv);
  rep.equal = rep.locus_before == rep.locus_after;
  rep.covered = sel != RowSelection::Custom;
  return rep;
}

}  // namespace iwalog
