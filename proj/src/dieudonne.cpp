#include "iwalog/dieudonne.hpp"

#include <algorithm>
#include <sstream>

namespace iwalog {

namespace {

std::string mask_to_string(std::uint32_t mask) {
  std::string s = "{";
  bool first = true;
  for (int k = 0; k < 32; ++k) {
    if (!(mask & (1u << k))) continue;
    if (!first) s += ",";
    first = false;
    s += std::to_string(k + 1);
  }
  return s + "}";
}

std::uint32_t low_mask(int g) { return (1u << g) - 1; }
std::uint32_t high_mask(int g) { return low_mask(g) << g; }

Matrix<IwasawaPoly> constant_poly_matrix(const ScalarMatrix& m) {
  return map_matrix(m, [](const PAdicScalar& x) {
    return x.is_exact_zero() ? IwasawaPoly::exact_zero(x.prime()) : IwasawaPoly::constant(x);
  });
}

// D_r * M with D_r = diag(I_g, Phi_{p^r}(1 + var) I_g).
LambdaMatrix apply_d(Matrix<IwasawaPoly> m, int g, unsigned p, Var var, int r, int precision) {
  const IwasawaPoly phi = IwasawaPoly::shifted_cyclotomic(p, r, var, precision);
  for (std::size_t i = static_cast<std::size_t>(g); i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!m(i, j).is_exact_zero()) m(i, j) = phi * m(i, j);
    }
  }
  LambdaMatrix out;
  out.g = g;
  out.m = std::move(m);
  out.row_tags.assign(out.m.rows(), RowTag{var, 0});
  for (std::size_t i = static_cast<std::size_t>(g); i < out.m.rows(); ++i) out.row_tags[i].level = r;
  return out;
}

void require_input_shape(const DieudonneInput& d) {
  const std::size_t n = static_cast<std::size_t>(2 * d.g);
  for (Prime q : {Prime::P, Prime::PC}) {
    if (d.c(q).rows() != n || d.c(q).cols() != n) {
      throw ValidationError(std::string("matrix for ") + prime_name(q) + " is not " + std::to_string(n) + "x" +
                            std::to_string(n));
    }
  }
}

// Lower convex hull of the points (i, v_i).
std::vector<std::pair<int, mpq_class>> lower_hull(const std::vector<std::pair<int, mpq_class>>& pts) {
  std::vector<std::pair<int, mpq_class>> hull;
  for (const auto& pt : pts) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      // Drop b when it lies on or above the segment a -> pt.
      const mpq_class lhs = (b.second - a.second) * (pt.first - a.first);
      const mpq_class rhs = (pt.second - a.second) * (b.first - a.first);
      if (lhs >= rhs) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(pt);
  }
  return hull;
}

NewtonReport newton_report(const ScalarMatrix& cphi, int tau) {
  const unsigned p = cphi(0, 0).prime();
  const std::size_t n = cphi.rows();
  int prec = kDefaultPrecision;
  for (const auto& x : cphi.data()) {
    if (!x.is_exact_zero()) prec = std::min(prec, x.precision());
  }
  Matrix<IwasawaPoly> t(n, n, IwasawaPoly::exact_zero(p));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      IwasawaPoly e = cphi(i, j).is_exact_zero() ? IwasawaPoly::exact_zero(p) : -IwasawaPoly::constant(cphi(i, j));
      if (i == j) e = e + IwasawaPoly::variable(p, Var::X, prec);
      t(i, j) = e;
    }
  }
  const IwasawaPoly cp = determinant(t);
  NewtonReport rep;
  std::vector<std::pair<int, mpq_class>> pts;
  PAdicScalar at_one = PAdicScalar::exact_zero(p);
  for (std::size_t k = 0; k <= n; ++k) {
    const PAdicScalar c = cp.coefficient(static_cast<int>(k), 0);
    rep.charpoly.push_back(c.serialize());
    at_one = at_one + c;
    if (!c.is_zero()) pts.emplace_back(static_cast<int>(k), mpq_class(c.valuation_lower_bound()));
  }
  const auto hull = lower_hull(pts);
  for (std::size_t k = 1; k < hull.size(); ++k) {
    const int len = hull[k].first - hull[k - 1].first;
    mpq_class slope = (hull[k].second - hull[k - 1].second) / len;
    slope.canonicalize();
    rep.slopes.push_back(slope);
    for (int m = 0; m < len; ++m) rep.root_valuations.push_back(-slope);
  }
  rep.reading_closed_left = !rep.root_valuations.empty();
  rep.reading_closed_right = !rep.root_valuations.empty();
  for (const auto& v : rep.root_valuations) {
    if (!(v >= -1 && v < 0)) rep.reading_closed_left = false;
    if (!(v > -1 && v <= 0)) rep.reading_closed_right = false;
  }
  rep.value_at_one = at_one.valuation();
  rep.eigenvalue_one = rep.value_at_one.at_least_threshold(tau);
  return rep;
}

}  // namespace

const char* prime_name(Prime q) { return q == Prime::P ? "p" : "pc"; }

std::vector<std::size_t> SignedIndex::positions() const {
  std::vector<std::size_t> out;
  for (int k = 0; k < 2 * g; ++k) {
    if (jp & (1u << k)) out.push_back(static_cast<std::size_t>(k));
  }
  for (int k = 0; k < 2 * g; ++k) {
    if (jpc & (1u << k)) out.push_back(static_cast<std::size_t>(2 * g + k));
  }
  return out;
}

std::string SignedIndex::to_string() const { return "(" + mask_to_string(jp) + "," + mask_to_string(jpc) + ")"; }

std::string SignedIndex::tag() const {
  const std::uint32_t lo = low_mask(g);
  const std::uint32_t hi = high_mask(g);
  if (jp == lo && jpc == lo) return "I0";
  if (jp == hi && jpc == hi) return "I1";
  if (jp == lo && jpc == hi) return "mix01";
  if (jp == hi && jpc == lo) return "mix10";
  if (jp == (lo | hi) && jpc == 0) return "bdp_p";
  if (jp == 0 && jpc == (lo | hi)) return "bdp_pc";
  return "";
}

SignedIndex distinguished(int g, Distinguished which) {
  const std::uint32_t lo = low_mask(g);
  const std::uint32_t hi = high_mask(g);
  switch (which) {
    case Distinguished::I0:
      return {g, lo, lo};
    case Distinguished::I1:
      return {g, hi, hi};
    case Distinguished::Mix01:
      return {g, lo, hi};
    case Distinguished::Mix10:
      return {g, hi, lo};
    case Distinguished::BdpP:
      return {g, lo | hi, 0};
    case Distinguished::BdpPc:
      return {g, 0, lo | hi};
  }
  throw StructuralError("unknown distinguished index");
}

std::vector<SignedIndex> enumerate_index_sets(int g) {
  if (g < 1 || g > 8) throw StructuralError("index sets need 1 <= g <= 8");
  std::vector<SignedIndex> out;
  const std::uint32_t all = 1u << (2 * g);
  for (std::uint32_t a = 0; a < all; ++a) {
    const int na = __builtin_popcount(a);
    for (std::uint32_t b = 0; b < all; ++b) {
      if (na + __builtin_popcount(b) == 2 * g) out.push_back({g, a, b});
    }
  }
  return out;
}

bool is_block_anti_diagonal(const ScalarMatrix& c, int g) {
  const std::size_t gg = static_cast<std::size_t>(g);
  if (c.rows() != 2 * gg || c.cols() != 2 * gg) return false;
  for (std::size_t i = 0; i < 2 * gg; ++i) {
    for (std::size_t j = 0; j < 2 * gg; ++j) {
      if ((i < gg) == (j < gg) && !c(i, j).is_zero()) return false;
    }
  }
  return true;
}

ValidationReport validate_input(const DieudonneInput& d, int tau) {
  ValidationReport rep;
  rep.tau = tau;
  rep.accepted = true;
  if (d.g < 1) {
    rep.accepted = false;
    rep.reason = "dimension g must be >= 1";
    return rep;
  }
  const std::size_t n = static_cast<std::size_t>(2 * d.g);
  for (Prime q : {Prime::P, Prime::PC}) {
    auto& pv = rep.per_prime[static_cast<int>(q)];
    const ScalarMatrix& c = d.c(q);
    if (!c.is_square()) {
      rep.accepted = false;
      rep.reason = std::string("matrix for ") + prime_name(q) + " is not square";
      return rep;
    }
    if (c.rows() != n) {
      rep.accepted = false;
      rep.reason = std::string("matrix for ") + prime_name(q) + " has wrong dimension (expected " +
                   std::to_string(n) + ")";
      return rep;
    }
    pv.shape_ok = true;
    const PAdicScalar det = determinant(c);
    pv.det = det.serialize();
    pv.det_unit = det.is_unit();
    pv.block_anti_diagonal = is_block_anti_diagonal(c, d.g);
    if (!pv.det_unit) {
      rep.accepted = false;
      if (rep.reason.empty()) rep.reason = "determinant not a unit";
      continue;
    }
    pv.newton = newton_report(c_phi(d, q), tau);
  }
  return rep;
}

ScalarMatrix c_phi(const DieudonneInput& d, Prime q) {
  const ScalarMatrix& c = d.c(q);
  const PAdicScalar inv_p = PAdicScalar::from_rational(d.p, mpq_class(1, d.p), d.precision);
  ScalarMatrix out = c;
  for (std::size_t i = 0; i < c.rows(); ++i) {
    for (std::size_t j = static_cast<std::size_t>(d.g); j < c.cols(); ++j) {
      if (!c(i, j).is_exact_zero()) out(i, j) = c(i, j) * inv_p;
    }
  }
  return out;
}

LambdaMatrix c_step(const DieudonneInput& d, Prime q, int r) {
  if (r < 1) throw StructuralError("c_step needs r >= 1");
  require_input_shape(d);
  return apply_d(constant_poly_matrix(inverse(d.c(q))), d.g, d.p, var_of(q), r, d.precision);
}

std::vector<LambdaMatrix> h_tower(const DieudonneInput& d, Prime q, int r_max) {
  if (r_max < 1) throw StructuralError("h_matrix needs r >= 1");
  require_input_shape(d);
  const Matrix<IwasawaPoly> cinv = constant_poly_matrix(inverse(d.c(q)));
  std::vector<LambdaMatrix> out;
  out.push_back(apply_d(cinv, d.g, d.p, var_of(q), 1, d.precision));
  for (int k = 2; k <= r_max; ++k) {
    // H_k = D_k C^{-1} H_{k-1}.
    out.push_back(apply_d(cinv * out.back().m, d.g, d.p, var_of(q), k, d.precision));
  }
  return out;
}

LambdaMatrix h_matrix(const DieudonneInput& d, Prime q, int r) { return h_tower(d, q, r).back(); }

LambdaMatrix h_block(const LambdaMatrix& hp, const LambdaMatrix& hpc) {
  const std::size_t n = hp.m.rows();
  if (!hp.m.is_square() || hpc.m.rows() != n || !hpc.m.is_square() || n == 0) {
    throw StructuralError("h_block needs two square blocks of equal size");
  }
  const unsigned p = hp.m(0, 0).prime();
  LambdaMatrix out;
  out.g = hp.g;
  out.block_diagonal = true;
  out.m = Matrix<IwasawaPoly>(2 * n, 2 * n, IwasawaPoly::exact_zero(p));
  out.row_tags.resize(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out.m(i, j) = hp.m(i, j);
      out.m(n + i, n + j) = hpc.m(i, j);
    }
    out.row_tags[i] = hp.row_tags.empty() ? RowTag{} : hp.row_tags[i];
    out.row_tags[n + i] = hpc.row_tags.empty() ? RowTag{Var::Y, 0} : hpc.row_tags[i];
  }
  return out;
}

IwasawaPoly minor(const LambdaMatrix& h, const SignedIndex& I, const SignedIndex& J) {
  if (!I.in_family() || !J.in_family() || I.g != h.g || J.g != h.g) {
    throw StructuralError("malformed index sets " + I.to_string() + " / " + J.to_string());
  }
  if (h.m.rows() != static_cast<std::size_t>(4 * h.g)) throw StructuralError("minor needs the 4g x 4g matrix");
  return determinant(submatrix(h.m, I.positions(), J.positions()));
}

Matrix<CycloElement> eval_matrix_at_theta(const LambdaMatrix& h, const CharacterPoint& w) {
  const unsigned p = w.p;
  const int level = w.level();
  Matrix<CycloElement> out(h.m.rows(), h.m.cols(), CycloElement::exact_zero(p, level));
  for (std::size_t i = 0; i < h.m.rows(); ++i) {
    const RowTag tag = i < h.row_tags.size() ? h.row_tags[i] : RowTag{};
    const bool vanishes = tag.level > 0 && w.order(tag.var) == tag.level;
    for (std::size_t j = 0; j < h.m.cols(); ++j) {
      const IwasawaPoly& f = h.m(i, j);
      if (f.is_exact_zero()) continue;
      CycloElement v = eval_at_character(f, w);
      if (vanishes) {
        if (!v.is_zero()) {
          throw InternalInconsistency("row " + std::to_string(i + 1) + " divisible by Phi_" +
                                      std::to_string(tag.level) + " does not vanish at " + w.to_string());
        }
        continue;
      }
      out(i, j) = std::move(v);
    }
  }
  return out;
}

CycloElement minor_at(const Matrix<CycloElement>& h_theta, const SignedIndex& I, const SignedIndex& J) {
  if (!I.in_family() || !J.in_family()) {
    throw StructuralError("malformed index sets " + I.to_string() + " / " + J.to_string());
  }
  return determinant(submatrix(h_theta, I.positions(), J.positions()));
}

namespace {

std::vector<Matrix<IwasawaPoly>> approximants(const DieudonneInput& d, Prime q, int n_max) {
  const auto tower = h_tower(d, q, n_max);
  const ScalarMatrix cp = c_phi(d, q);
  std::vector<Matrix<IwasawaPoly>> out;
  ScalarMatrix power = cp * cp;
  for (int n = 1; n <= n_max; ++n) {
    out.push_back(constant_poly_matrix(power) * tower[static_cast<std::size_t>(n - 1)].m);
    power = power * cp;
  }
  return out;
}

}  // namespace

Matrix<IwasawaPoly> m_approximant(const DieudonneInput& d, Prime q, int n) {
  if (n < 1) throw StructuralError("m_approximant needs n >= 1");
  return approximants(d, q, n).back();
}

std::vector<ConvergenceRow> convergence_diagnostic(const DieudonneInput& d, Prime q, int n_max, int max_degree) {
  if (n_max < 2) throw StructuralError("convergence diagnostic needs n_max >= 2");
  const auto ms = approximants(d, q, n_max);
  const Var v = var_of(q);
  std::vector<ConvergenceRow> rows;
  for (int n = 1; n < n_max; ++n) {
    const Matrix<IwasawaPoly> diff = ms[static_cast<std::size_t>(n)] - ms[static_cast<std::size_t>(n - 1)];
    for (int j = 0; j <= max_degree; ++j) {
      ConvergenceRow row;
      row.n = n;
      row.degree = j;
      bool have_exact = false;
      mpq_class best_exact;
      bool have_bound = false;
      mpq_class best_bound;
      for (const auto& f : diff.data()) {
        const PAdicScalar c = v == Var::X ? f.coefficient(j, 0) : f.coefficient(0, j);
        const Valuation val = c.valuation();
        if (val.kind() == Valuation::Kind::Exact) {
          if (!have_exact || val.value() < best_exact) best_exact = val.value();
          have_exact = true;
        } else if (val.kind() == Valuation::Kind::AtLeast) {
          if (!have_bound || val.value() < best_bound) best_bound = val.value();
          have_bound = true;
        }
      }
      if (have_exact && !(have_bound && best_bound < best_exact)) {
        row.valuation = Valuation::exact(best_exact);
      } else if (have_bound) {
        row.valuation = Valuation::at_least(best_bound);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace iwalog
