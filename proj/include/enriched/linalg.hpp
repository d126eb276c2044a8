#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace enriched {

using FpVector = std::vector<std::uint32_t>;

bool is_prime(std::uint32_t p);
// Throws InputError unless p is a prime below 2^16.
void require_prime(std::uint32_t p);
std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p);

// Dense matrix over F_p.
class FpMatrix {
 public:
  FpMatrix() = default;
  FpMatrix(std::size_t rows, std::size_t cols, std::uint32_t p);

  static FpMatrix identity(std::size_t n, std::uint32_t p);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::uint32_t prime() const { return p_; }

  std::uint32_t operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  void set(std::size_t i, std::size_t j, std::int64_t value);
  void add(std::size_t i, std::size_t j, std::int64_t value);

  FpVector column(std::size_t j) const;
  FpMatrix operator*(const FpMatrix& other) const;
  FpVector apply(const FpVector& v) const;

  bool is_zero() const;
  std::size_t rank() const;
  // Basis of {x | Ax = 0}.
  std::vector<FpVector> kernel_basis() const;

  std::string to_string() const;

  friend bool operator==(const FpMatrix&, const FpMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::uint32_t p_ = 2;
  std::vector<std::uint32_t> entries_;
};

// Reduced row echelon form in place; returns the pivot columns.
std::vector<std::size_t> row_reduce(FpMatrix& m);

// Solves Ax = b for b in the column space of A.
class ColumnSpaceSolver {
 public:
  explicit ColumnSpaceSolver(const FpMatrix& a);
  std::optional<FpVector> solve(const FpVector& b) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::uint32_t p_ = 2;
  FpMatrix reduced_;                  // RREF of [A | I]
  std::vector<std::size_t> pivots_;   // pivot columns within A
};

}  // namespace enriched
