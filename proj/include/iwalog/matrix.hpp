#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iwalog/errors.hpp"
#include "iwalog/padic.hpp"

namespace iwalog {

/// Dense row-major matrix over a ring type T.
///
/// T supplies the hooks is_exact_zero / exact_zero_like / one_like (found by ADL),
/// so structural zeros survive products and determinants.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<T>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <class T>
Matrix<T> identity_like(std::size_t n, const T& sample) {
  Matrix<T> m(n, n, exact_zero_like(sample));
  for (std::size_t i = 0; i < n; ++i) m(i, i) = one_like(sample);
  return m;
}

template <class T, class F>
auto map_matrix(const Matrix<T>& m, F f) -> Matrix<decltype(f(m(0, 0)))> {
  using U = decltype(f(m(0, 0)));
  if (m.rows() == 0 || m.cols() == 0) return Matrix<U>();
  Matrix<U> out(m.rows(), m.cols(), f(m(0, 0)));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = f(m(i, j));
  }
  return out;
}

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw StructuralError("matrix product shape mismatch");
  if (a.rows() == 0 || b.cols() == 0 || a.cols() == 0) throw StructuralError("empty matrix product");
  Matrix<T> out(a.rows(), b.cols(), exact_zero_like(a(0, 0)));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      std::optional<T> acc;
      for (std::size_t k = 0; k < a.cols(); ++k) {
        if (is_exact_zero(a(i, k)) || is_exact_zero(b(k, j))) continue;
        T term = a(i, k) * b(k, j);
        acc = acc ? *acc + term : term;
      }
      if (acc) out(i, j) = std::move(*acc);
    }
  }
  return out;
}

template <class T>
Matrix<T> operator+(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw StructuralError("matrix sum shape mismatch");
  Matrix<T> out = a;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) + b(i, j);
  }
  return out;
}

template <class T>
Matrix<T> operator-(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw StructuralError("matrix difference shape mismatch");
  Matrix<T> out = a;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
  }
  return out;
}

template <class T>
Matrix<T> scale(const T& c, const Matrix<T>& m) {
  return map_matrix(m, [&](const T& x) { return is_exact_zero(x) ? x : c * x; });
}

template <class T>
Matrix<T> submatrix(const Matrix<T>& m, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
  if (rows.empty() || cols.empty()) throw StructuralError("empty submatrix selection");
  Matrix<T> out(rows.size(), cols.size(), m(0, 0));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (rows[i] >= m.rows() || cols[j] >= m.cols()) throw StructuralError("submatrix index out of range");
      out(i, j) = m(rows[i], cols[j]);
    }
  }
  return out;
}

template <class T>
Matrix<T> transpose(const Matrix<T>& m) {
  if (m.rows() == 0) return m;
  Matrix<T> out(m.cols(), m.rows(), m(0, 0));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = m(i, j);
  }
  return out;
}

/// Determinant by expansion over column subsets, row by row (O(n 2^n) products).
/// Exact zeros are skipped, so a determinant that vanishes structurally comes back
/// as an exact zero.
template <class T>
T determinant(const Matrix<T>& m) {
  if (!m.is_square()) throw StructuralError("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) throw StructuralError("determinant of an empty matrix");
  if (n > 24) throw UnsupportedError("subset determinant limited to 24 rows");
  std::vector<std::optional<T>> dp(std::size_t{1} << n);
  dp[0] = one_like(m(0, 0));
  for (std::size_t row = 0; row < n; ++row) {
    std::vector<std::optional<T>> next(dp.size());
    for (std::uint32_t s = 0; s < dp.size(); ++s) {
      if (!dp[s] || static_cast<std::size_t>(__builtin_popcount(s)) != row) continue;
      for (std::size_t c = 0; c < n; ++c) {
        if (s & (1u << c)) continue;
        if (is_exact_zero(m(row, c))) continue;
        const int above = __builtin_popcount(s >> (c + 1));
        T term = row == 0 ? m(row, c) : *dp[s] * m(row, c);
        if (is_exact_zero(term)) continue;
        if (above % 2) term = -term;
        auto& slot = next[s | (1u << c)];
        slot = slot ? *slot + term : term;
      }
    }
    dp = std::move(next);
  }
  const auto& full = dp.back();
  return full ? *full : exact_zero_like(m(0, 0));
}

/// Orders elements for pivot choice: smaller valuation first, zeros last.
template <class T>
std::pair<int, mpq_class> pivot_key(const T& x) {
  const Valuation v = x.valuation();
  if (v.kind() == Valuation::Kind::Exact) return {0, v.value()};
  if (v.kind() == Valuation::Kind::AtLeast) return {1, v.value()};
  return {2, 0};
}

/// Inverse over a field-like T (PAdicScalar, CycloElement). Adjugate for n <= 8,
/// Gauss-Jordan with minimal-valuation pivots (ties to the lowest row) above that.
template <class T>
Matrix<T> inverse(const Matrix<T>& m) {
  if (!m.is_square() || m.rows() == 0) throw StructuralError("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  if (n <= 8) {
    const T det = determinant(m);
    if (det.is_zero()) throw ZeroDivideError(det.is_exact_zero() ? kInfinitePrecision : det.precision());
    const T inv_det = det.inverse();
    Matrix<T> out(n, n, exact_zero_like(m(0, 0)));
    if (n == 1) {
      out(0, 0) = inv_det;
      return out;
    }
    std::vector<std::size_t> rows, cols;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        rows.clear();
        cols.clear();
        for (std::size_t k = 0; k < n; ++k) {
          if (k != j) rows.push_back(k);
          if (k != i) cols.push_back(k);
        }
        T cof = determinant(submatrix(m, rows, cols));
        if (is_exact_zero(cof)) continue;
        if ((i + j) % 2) cof = -cof;
        out(i, j) = cof * inv_det;
      }
    }
    return out;
  }
  Matrix<T> a = m;
  Matrix<T> out = identity_like(n, m(0, 0));
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t best = col;
    auto best_key = pivot_key(a(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      auto key = pivot_key(a(r, col));
      if (key < best_key) {
        best = r;
        best_key = key;
      }
    }
    if (best_key.first != 0) throw ZeroDivideError(a(best, col).is_exact_zero() ? kInfinitePrecision : a(best, col).precision());
    if (best != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(best, j), a(col, j));
        std::swap(out(best, j), out(col, j));
      }
    }
    const T inv = a(col, col).inverse();
    for (std::size_t j = 0; j < n; ++j) {
      if (!is_exact_zero(a(col, j))) a(col, j) = a(col, j) * inv;
      if (!is_exact_zero(out(col, j))) out(col, j) = out(col, j) * inv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || is_exact_zero(a(r, col))) continue;
      const T f = a(r, col);
      for (std::size_t j = 0; j < n; ++j) {
        if (!is_exact_zero(a(col, j))) a(r, j) = a(r, j) - f * a(col, j);
        if (!is_exact_zero(out(col, j))) out(r, j) = out(r, j) - f * out(col, j);
      }
    }
  }
  return out;
}

template <class T>
bool all_zero(const Matrix<T>& m) {
  for (const auto& x : m.data()) {
    if (!x.is_zero()) return false;
  }
  return true;
}

template <class T>
bool equals_to_precision(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (!a(i, j).equals_to_precision(b(i, j))) return false;
    }
  }
  return true;
}

template <class T>
Matrix<T> matrix_power(const Matrix<T>& m, unsigned e) {
  Matrix<T> out = identity_like(m.rows(), m(0, 0));
  for (unsigned i = 0; i < e; ++i) out = out * m;
  return out;
}

using ScalarMatrix = Matrix<PAdicScalar>;

/// Integer matrix read as exact p-adic data (zero entries become exact zeros).
ScalarMatrix scalar_matrix(unsigned p, const std::vector<std::vector<mpz_class>>& rows,
                           int precision = kDefaultPrecision);

std::string matrix_to_string(const ScalarMatrix& m);

}  // namespace iwalog
