#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace spir {

/// Dense matrix over F_q (q prime), row-major raw representatives.
class MatQ {
 public:
  MatQ() = default;
  MatQ(uint32_t q, size_t rows, size_t cols) : q_(q), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

  uint32_t q() const { return q_; }
  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  uint32_t& at(size_t r, size_t c) { return a_[r * cols_ + c]; }
  uint32_t at(size_t r, size_t c) const { return a_[r * cols_ + c]; }

  void append_row(const std::vector<uint32_t>& row);
  void append_col(const MatQ& other);  // horizontal concat, same row count

  /// In-place reduced row echelon form; returns rank.
  size_t rref();
  size_t rank() const;

 private:
  uint32_t q_ = 0;
  size_t rows_ = 0, cols_ = 0;
  std::vector<uint32_t> a_;
};

/// Solve A x = b. Returns one solution if consistent.
std::optional<std::vector<uint32_t>> solve(const MatQ& A, const std::vector<uint32_t>& b);

/// True iff every column of sub lies in the column space of base.
/// On failure, *witness (if given) receives a functional f with f^T base = 0
/// but f^T sub != 0, i.e. a linear view combination exposing the hidden part.
bool cols_contained(const MatQ& base, const MatQ& sub, std::vector<uint32_t>* witness = nullptr);

}  // namespace spir
