#include "iwalog/matrix.hpp"

#include <sstream>

namespace iwalog {

ScalarMatrix scalar_matrix(unsigned p, const std::vector<std::vector<mpz_class>>& rows, int precision) {
  if (rows.empty()) throw StructuralError("empty matrix");
  ScalarMatrix m(rows.size(), rows[0].size(), PAdicScalar::exact_zero(p));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) throw StructuralError("ragged matrix rows");
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = PAdicScalar::from_exact_integer(p, rows[i][j], precision);
  }
  return m;
}

std::string matrix_to_string(const ScalarMatrix& m) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i) os << ", ";
    os << '[';
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) os << ", ";
      os << m(i, j).serialize();
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

}  // namespace iwalog
