#include "enriched/linalg.hpp"

#include <sstream>
#include <utility>

#include "enriched/errors.hpp"

namespace enriched {

namespace {

std::uint32_t reduce(std::int64_t value, std::uint32_t p) {
  const std::int64_t r = value % static_cast<std::int64_t>(p);
  return static_cast<std::uint32_t>(r < 0 ? r + p : r);
}

// Gauss-Jordan on the first `limit` columns.
std::vector<std::size_t> reduce_columns(FpMatrix& m, std::size_t limit) {
  const std::uint32_t p = m.prime();
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < limit && row < m.rows(); ++col) {
    std::size_t pivot = row;
    while (pivot < m.rows() && m(pivot, col) == 0) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != row) {
      for (std::size_t j = 0; j < m.cols(); ++j) {
        const auto a = m(row, j);
        m.set(row, j, m(pivot, j));
        m.set(pivot, j, a);
      }
    }
    const std::uint64_t inv = inverse_mod(m(row, col), p);
    for (std::size_t j = 0; j < m.cols(); ++j) m.set(row, j, static_cast<std::int64_t>(m(row, j) * inv % p));
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col) == 0) continue;
      const std::uint64_t factor = m(i, col);
      for (std::size_t j = 0; j < m.cols(); ++j) {
        if (m(row, j) != 0) m.add(i, j, -static_cast<std::int64_t>(factor * m(row, j) % p));
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

bool is_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint32_t k = 2; static_cast<std::uint64_t>(k) * k <= p; ++k) {
    if (p % k == 0) return false;
  }
  return true;
}

void require_prime(std::uint32_t p) {
  if (!is_prime(p) || p >= (1u << 16)) {
    throw InputError("field characteristic must be a prime below 65536, got " + std::to_string(p));
  }
}

std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p) {
  std::int64_t t = 0, new_t = 1, r = p, new_r = a % p;
  while (new_r != 0) {
    const std::int64_t q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  if (r != 1) throw InternalError("no inverse modulo " + std::to_string(p));
  return reduce(t, p);
}

FpMatrix::FpMatrix(std::size_t rows, std::size_t cols, std::uint32_t p)
    : rows_(rows), cols_(cols), p_(p), entries_(rows * cols, 0) {}

FpMatrix FpMatrix::identity(std::size_t n, std::uint32_t p) {
  FpMatrix m(n, n, p);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

void FpMatrix::set(std::size_t i, std::size_t j, std::int64_t value) { entries_[i * cols_ + j] = reduce(value, p_); }

void FpMatrix::add(std::size_t i, std::size_t j, std::int64_t value) {
  entries_[i * cols_ + j] = reduce(static_cast<std::int64_t>(entries_[i * cols_ + j]) + value, p_);
}

FpVector FpMatrix::column(std::size_t j) const {
  FpVector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

FpMatrix FpMatrix::operator*(const FpMatrix& other) const {
  if (cols_ != other.rows_ || p_ != other.p_) throw InternalError("matrix product: incompatible shapes");
  FpMatrix out(rows_, other.cols_, p_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const std::uint64_t a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < other.cols_; ++j) {
        out.entries_[i * out.cols_ + j] = static_cast<std::uint32_t>((out.entries_[i * out.cols_ + j] + a * other(k, j)) % p_);
      }
    }
  }
  return out;
}

FpVector FpMatrix::apply(const FpVector& v) const {
  if (v.size() != cols_) throw InternalError("matrix-vector product: incompatible shapes");
  FpVector out(rows_, 0);
  for (std::size_t i = 0; i < rows_; ++i) {
    std::uint64_t acc = 0;
    for (std::size_t j = 0; j < cols_; ++j) acc = (acc + static_cast<std::uint64_t>((*this)(i, j)) * v[j]) % p_;
    out[i] = static_cast<std::uint32_t>(acc);
  }
  return out;
}

bool FpMatrix::is_zero() const {
  for (auto e : entries_) {
    if (e != 0) return false;
  }
  return true;
}

std::size_t FpMatrix::rank() const {
  FpMatrix copy(*this);
  return row_reduce(copy).size();
}

std::vector<FpVector> FpMatrix::kernel_basis() const {
  FpMatrix r(*this);
  const auto pivots = row_reduce(r);
  std::vector<bool> is_pivot(cols_, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<FpVector> out;
  for (std::size_t free = 0; free < cols_; ++free) {
    if (is_pivot[free]) continue;
    FpVector v(cols_, 0);
    v[free] = 1;
    for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = reduce(-static_cast<std::int64_t>(r(k, free)), p_);
    out.push_back(std::move(v));
  }
  return out;
}

std::string FpMatrix::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out << (j ? " " : "") << (*this)(i, j);
    out << "\n";
  }
  return out.str();
}

std::vector<std::size_t> row_reduce(FpMatrix& m) { return reduce_columns(m, m.cols()); }

ColumnSpaceSolver::ColumnSpaceSolver(const FpMatrix& a)
    : rows_(a.rows()), cols_(a.cols()), p_(a.prime()), reduced_(a.rows(), a.cols() + a.rows(), a.prime()) {
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) reduced_.set(i, j, a(i, j));
    reduced_.set(i, cols_ + i, 1);
  }
  pivots_ = reduce_columns(reduced_, cols_);
}

std::optional<FpVector> ColumnSpaceSolver::solve(const FpVector& b) const {
  if (b.size() != rows_) throw InternalError("solver: right-hand side has the wrong length");
  // c = E b where E is the accumulated row operation matrix.
  FpVector c(rows_, 0);
  for (std::size_t i = 0; i < rows_; ++i) {
    std::uint64_t acc = 0;
    for (std::size_t k = 0; k < rows_; ++k) acc = (acc + static_cast<std::uint64_t>(reduced_(i, cols_ + k)) * b[k]) % p_;
    c[i] = static_cast<std::uint32_t>(acc);
  }
  for (std::size_t i = pivots_.size(); i < rows_; ++i) {
    if (c[i] != 0) return std::nullopt;
  }
  FpVector x(cols_, 0);
  for (std::size_t k = 0; k < pivots_.size(); ++k) x[pivots_[k]] = c[k];
  return x;
}

}  // namespace enriched
