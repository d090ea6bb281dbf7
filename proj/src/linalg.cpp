#include "spir/linalg.hpp"

#include <cassert>
#include <stdexcept>

#include "spir/field.hpp"

namespace spir {

void MatQ::append_row(const std::vector<uint32_t>& row) {
  if (cols_ == 0) cols_ = row.size();
  if (row.size() != cols_) throw std::invalid_argument("row width mismatch");
  a_.insert(a_.end(), row.begin(), row.end());
  ++rows_;
}

void MatQ::append_col(const MatQ& other) {
  if (other.rows_ != rows_) throw std::invalid_argument("row count mismatch");
  MatQ out(q_, rows_, cols_ + other.cols_);
  for (size_t r = 0; r < rows_; ++r) {
    for (size_t c = 0; c < cols_; ++c) out.at(r, c) = at(r, c);
    for (size_t c = 0; c < other.cols_; ++c) out.at(r, cols_ + c) = other.at(r, c);
  }
  *this = out;
}

size_t MatQ::rref() {
  size_t lead = 0;
  for (size_t r = 0; r < rows_ && lead < cols_; ++r) {
    size_t i = r;
    while (i < rows_ && at(i, lead) == 0) {
      ++i;
      if (i == rows_) {
        i = r;
        ++lead;
        if (lead == cols_) return r;
      }
    }
    for (size_t c = 0; c < cols_; ++c) std::swap(at(i, c), at(r, c));
    uint32_t inv = mod_inverse(at(r, lead), q_);
    for (size_t c = 0; c < cols_; ++c)
      at(r, c) = static_cast<uint32_t>((static_cast<uint64_t>(at(r, c)) * inv) % q_);
    for (size_t rr = 0; rr < rows_; ++rr) {
      if (rr == r || at(rr, lead) == 0) continue;
      uint64_t f = at(rr, lead);
      for (size_t c = 0; c < cols_; ++c) {
        uint64_t sub = (f * at(r, c)) % q_;
        at(rr, c) = static_cast<uint32_t>((at(rr, c) + q_ - sub) % q_);
      }
    }
    ++lead;
  }
  size_t rank = 0;
  for (size_t r = 0; r < rows_; ++r) {
    bool nonzero = false;
    for (size_t c = 0; c < cols_; ++c)
      if (at(r, c) != 0) {
        nonzero = true;
        break;
      }
    if (nonzero) ++rank;
  }
  return rank;
}

size_t MatQ::rank() const {
  MatQ copy = *this;
  return copy.rref();
}

std::optional<std::vector<uint32_t>> solve(const MatQ& A, const std::vector<uint32_t>& b) {
  if (b.size() != A.rows()) throw std::invalid_argument("rhs size mismatch");
  MatQ aug(A.q(), A.rows(), A.cols() + 1);
  for (size_t r = 0; r < A.rows(); ++r) {
    for (size_t c = 0; c < A.cols(); ++c) aug.at(r, c) = A.at(r, c);
    aug.at(r, A.cols()) = b[r] % A.q();
  }
  aug.rref();
  std::vector<uint32_t> x(A.cols(), 0);
  for (size_t r = 0; r < aug.rows(); ++r) {
    size_t lead = aug.cols();
    for (size_t c = 0; c < aug.cols(); ++c)
      if (aug.at(r, c) != 0) {
        lead = c;
        break;
      }
    if (lead == aug.cols()) continue;
    if (lead == A.cols()) return std::nullopt;  // 0 = nonzero
    x[lead] = aug.at(r, A.cols());
  }
  return x;
}

bool cols_contained(const MatQ& base, const MatQ& sub, std::vector<uint32_t>* witness) {
  // f^T base = 0 and f^T sub != 0 exists iff some column of sub is outside
  // col(base). Work with the transpose: rows of base^T span the orthogonal
  // complement test via rank comparison.
  MatQ joint = base;
  if (joint.rows() == 0) return sub.rank() == 0;
  size_t rb = base.rank();
  joint.append_col(sub);
  size_t rj = joint.rank();
  if (rj == rb) return true;
  if (witness) {
    // find a column v of sub with base x = v inconsistent, then extract the
    // inconsistency functional from the rref of [base | v].
    for (size_t c = 0; c < sub.cols(); ++c) {
      std::vector<uint32_t> v(sub.rows());
      for (size_t r = 0; r < sub.rows(); ++r) v[r] = sub.at(r, c);
      if (solve(base, v)) continue;
      // Gaussian elimination on [base^T | I]... simpler: find f by solving
      // [base | v]^T f picks out the row combination; a direct way: compute
      // the left null space of base and test against v.
      // Left null space: rref of base^T, null vectors of base^T... we instead
      // eliminate [base | I] by rows and read rows whose base-part is zero.
      size_t nr = base.rows(), nc = base.cols();
      MatQ aug(base.q(), nr, nc + nr);
      for (size_t r = 0; r < nr; ++r) {
        for (size_t cc = 0; cc < nc; ++cc) aug.at(r, cc) = base.at(r, cc);
        aug.at(r, nc + r) = 1;
      }
      aug.rref();
      for (size_t r = 0; r < nr; ++r) {
        bool zero_base = true;
        for (size_t cc = 0; cc < nc; ++cc)
          if (aug.at(r, cc) != 0) {
            zero_base = false;
            break;
          }
        if (!zero_base) continue;
        uint64_t dot = 0;
        for (size_t rr = 0; rr < nr; ++rr)
          dot = (dot + static_cast<uint64_t>(aug.at(r, nc + rr)) * v[rr]) % base.q();
        if (dot != 0) {
          witness->assign(nr, 0);
          for (size_t rr = 0; rr < nr; ++rr) (*witness)[rr] = aug.at(r, nc + rr);
          return false;
        }
      }
    }
    witness->clear();
  }
  return false;
}

}  // namespace spir
