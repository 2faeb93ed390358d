#include "toral/matrix.hpp"

#include <sstream>
#include <utility>

#include "toral/error.hpp"

namespace toral {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NotUnimodular: return "NotUnimodular";
    case ErrorCode::NonMonic: return "NonMonic";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::ZeroRadius: return "ZeroRadius";
    case ErrorCode::NonSymmetricExplicitInput: return "NonSymmetricExplicitInput";
    case ErrorCode::BadExponent: return "BadExponent";
    case ErrorCode::DegenerateGrid: return "DegenerateGrid";
    case ErrorCode::EscapeCapExceeded: return "EscapeCapExceeded";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::DegenerateVariance: return "DegenerateVariance";
  }
  return "Unknown";
}

IntegerMatrix::IntegerMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {
  if (dim == 0) throw Error(ErrorCode::NotSquare, "matrix dimension must be >= 1");
}

IntegerMatrix::IntegerMatrix(std::initializer_list<std::initializer_list<long>> rows)
    : IntegerMatrix(rows.size()) {
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != dim_) throw Error(ErrorCode::NotSquare, "row length differs from row count");
    std::size_t j = 0;
    for (long v : row) (*this)(i, j++) = v;
    ++i;
  }
}

IntegerMatrix IntegerMatrix::from_rows(const std::vector<std::vector<BigInt>>& rows) {
  if (rows.empty()) throw Error(ErrorCode::NotSquare, "matrix has no rows");
  IntegerMatrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) {
      throw Error(ErrorCode::NotSquare, "row " + std::to_string(i) + " has " +
                                            std::to_string(rows[i].size()) + " entries, expected " +
                                            std::to_string(rows.size()));
    }
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntegerMatrix IntegerMatrix::identity(std::size_t dim) {
  IntegerMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1;
  return m;
}

IntegerMatrix IntegerMatrix::transpose() const {
  IntegerMatrix t(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

BigInt bareiss_determinant(std::vector<BigInt> a, std::size_t n) {
  if (n == 0) return 1;
  int sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k * n + k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && a[swap * n + k] == 0) ++swap;
      if (swap == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[swap * n + j]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        BigInt v = a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        a[i * n + j] = std::move(v);
      }
    }
    prev = a[k * n + k];
  }
  BigInt det = a[n * n - 1];
  return sign > 0 ? det : BigInt(-det);
}

BigInt IntegerMatrix::determinant() const { return bareiss_determinant(entries_, dim_); }

IntegerMatrix IntegerMatrix::inverse() const {
  const std::size_t n = dim_;
  std::vector<mpq_class> a(n * 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i * 2 * n + j] = (*this)(i, j);
    a[i * 2 * n + n + i] = 1;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv * 2 * n + col] == 0) ++piv;
    if (piv == n) throw Error(ErrorCode::NotUnimodular, "matrix is singular");
    if (piv != col)
      for (std::size_t j = 0; j < 2 * n; ++j) std::swap(a[col * 2 * n + j], a[piv * 2 * n + j]);
    const mpq_class p = a[col * 2 * n + col];
    for (std::size_t j = 0; j < 2 * n; ++j) a[col * 2 * n + j] /= p;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a[i * 2 * n + col] == 0) continue;
      const mpq_class factor = a[i * 2 * n + col];
      for (std::size_t j = 0; j < 2 * n; ++j) a[i * 2 * n + j] -= factor * a[col * 2 * n + j];
    }
  }
  IntegerMatrix inv(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const mpq_class& v = a[i * 2 * n + n + j];
      if (v.get_den() != 1) throw Error(ErrorCode::NotUnimodular, "inverse is not integral");
      inv(i, j) = v.get_num();
    }
  }
  return inv;
}

IntegerMatrix IntegerMatrix::operator*(const IntegerMatrix& rhs) const {
  if (rhs.dim_ != dim_) throw Error(ErrorCode::DimensionMismatch, "matrix product");
  IntegerMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t k = 0; k < dim_; ++k) {
      const BigInt& aik = (*this)(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < dim_; ++j) out(i, j) += aik * rhs(k, j);
    }
  return out;
}

IntVector IntegerMatrix::operator*(const IntVector& v) const {
  if (v.size() != dim_) throw Error(ErrorCode::DimensionMismatch, "matrix-vector product");
  IntVector out(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) out[i] += (*this)(i, j) * v[j];
  return out;
}

std::vector<std::vector<BigInt>> IntegerMatrix::rows() const {
  std::vector<std::vector<BigInt>> out(dim_, std::vector<BigInt>(dim_));
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) out[i][j] = (*this)(i, j);
  return out;
}

std::string IntegerMatrix::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < dim_; ++i) {
    if (i) os << ';';
    for (std::size_t j = 0; j < dim_; ++j) {
      if (j) os << ',';
      os << (*this)(i, j);
    }
  }
  return os.str();
}

IntegerMatrix parse_matrix_literal(std::string_view text) {
  std::vector<std::vector<BigInt>> rows;
  std::vector<BigInt> row;
  std::string token;
  auto flush_token = [&] {
    std::string t;
    for (char c : token)
      if (c != ' ' && c != '\t') t.push_back(c);
    token.clear();
    if (t.empty()) throw Error(ErrorCode::Parse, "empty entry in matrix literal");
    if (t.front() == '+') t.erase(0, 1);
    BigInt v;
    if (v.set_str(t, 10) != 0) throw Error(ErrorCode::Parse, "not an integer: '" + t + "'");
    row.push_back(v);
  };
  for (char c : text) {
    if (c == ',') {
      flush_token();
    } else if (c == ';') {
      flush_token();
      rows.push_back(std::move(row));
      row.clear();
    } else {
      token.push_back(c);
    }
  }
  flush_token();
  rows.push_back(std::move(row));
  return IntegerMatrix::from_rows(rows);
}

}  // namespace toral
