#include "spir/field.hpp"

namespace spir {

bool PrimeField::is_prime(uint32_t n) {
  if (n < 2) return false;
  for (uint32_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

PrimeField::PrimeField(uint32_t q) : q_(q) {
  if (!is_prime(q))
    throw std::invalid_argument("field order " + std::to_string(q) + " is not prime");
}

void FieldElement::check_same(const FieldElement& o) const {
  if (q_ != o.q_)
    throw FieldMismatch("mixing elements of F_" + std::to_string(q_) + " and F_" +
                        std::to_string(o.q_));
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  check_same(o);
  FieldElement r;
  r.q_ = q_;
  r.v_ = (v_ + o.v_) % q_;
  return r;
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
  check_same(o);
  FieldElement r;
  r.q_ = q_;
  r.v_ = (v_ + q_ - o.v_) % q_;
  return r;
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
  check_same(o);
  FieldElement r;
  r.q_ = q_;
  r.v_ = static_cast<uint32_t>((static_cast<uint64_t>(v_) * o.v_) % q_);
  return r;
}

FieldElement FieldElement::operator-() const {
  FieldElement r;
  r.q_ = q_;
  r.v_ = (q_ - v_) % q_;
  return r;
}

FieldElement FieldElement::inverse() const {
  FieldElement r;
  r.q_ = q_;
  r.v_ = mod_inverse(v_, q_);
  return r;
}

std::vector<FieldElement> enumerate_field(const PrimeField& f) {
  std::vector<FieldElement> out;
  out.reserve(f.order());
  for (uint32_t v = 0; v < f.order(); ++v) out.emplace_back(v, f);
  return out;
}

uint32_t mod_inverse(uint32_t value, uint32_t q) {
  value %= q;
  if (value == 0) throw DivisionByZero("inverse of 0 in F_" + std::to_string(q));
  // extended Euclid on (q, value)
  int64_t t = 0, new_t = 1;
  int64_t r = q, new_r = value;
  while (new_r != 0) {
    int64_t quot = r / new_r;
    int64_t tmp = t - quot * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - quot * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (t < 0) t += q;
  return static_cast<uint32_t>(t);
}

}  // namespace spir
