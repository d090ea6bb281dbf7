#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace spir {

struct FieldMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DivisionByZero : std::domain_error {
  using std::domain_error::domain_error;
};

/// Prime field F_q. The modulus is checked for primality at construction
/// (trial division; the fields in this project are tiny).
class PrimeField {
 public:
  explicit PrimeField(uint32_t q);

  uint32_t order() const { return q_; }

  bool operator==(const PrimeField& o) const { return q_ == o.q_; }
  bool operator!=(const PrimeField& o) const { return q_ != o.q_; }

  static bool is_prime(uint32_t n);

 private:
  uint32_t q_;
};

/// One element of F_q. Value semantics; arithmetic between elements of
/// distinct fields throws FieldMismatch.
class FieldElement {
 public:
  FieldElement() : v_(0), q_(0) {}
  FieldElement(uint32_t value, const PrimeField& f) : v_(value % f.order()), q_(f.order()) {}

  uint32_t value() const { return v_; }
  uint32_t order() const { return q_; }
  PrimeField field() const { return PrimeField(q_); }

  bool is_zero() const { return v_ == 0; }

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator-() const;

  /// Multiplicative inverse; throws DivisionByZero on 0.
  FieldElement inverse() const;

  bool operator==(const FieldElement& o) const { return v_ == o.v_ && q_ == o.q_; }
  bool operator!=(const FieldElement& o) const { return !(*this == o); }

  std::string str() const { return std::to_string(v_); }

 private:
  void check_same(const FieldElement& o) const;

  uint32_t v_;
  uint32_t q_;
};

/// All q elements of F_q in ascending value order.
std::vector<FieldElement> enumerate_field(const PrimeField& f);

/// value^(-1) mod q for raw representatives (q prime). Throws DivisionByZero.
uint32_t mod_inverse(uint32_t value, uint32_t q);

}  // namespace spir
