#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "streamfec/errors.hpp"

namespace streamfec {

/// Largest supported modulus; keeps sums of two residues inside 32 bits.
constexpr std::uint32_t kMaxModulus = 0x7FFFFFFFu;

inline bool is_prime(std::uint64_t m)
{
  if (m < 2) return false;
  if (m % 2 == 0) return m == 2;
  for (std::uint64_t d = 3; d * d <= m; d += 2) {
    if (m % d == 0) return false;
  }
  return true;
}

/// Least prime >= m (m >= 2). Bertrand's postulate bounds the scan.
inline std::uint32_t smallest_prime_at_least(std::uint64_t m)
{
  if (m < 2) throw UsageError("smallest_prime_at_least: m must be >= 2");
  while (!is_prime(m)) ++m;
  return static_cast<std::uint32_t>(m);
}

/// Multiplicative inverse mod a prime p, by extended Euclid.
inline std::uint32_t mod_inverse(std::uint32_t a, std::uint32_t p)
{
  if (a == 0) throw UsageError("division by zero: 0 has no inverse in GF(p)");
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = p, new_r = a % p;
  while (new_r != 0) {
    const std::int64_t q = r / new_r;
    const std::int64_t tmp_t = t - q * new_t;
    t = new_t;
    new_t = tmp_t;
    const std::int64_t tmp_r = r - q * new_r;
    r = new_r;
    new_r = tmp_r;
  }
  // r == gcd(a, p) == 1 since p is prime and a != 0 mod p
  if (t < 0) t += p;
  return static_cast<std::uint32_t>(t);
}

/// The prime field GF(p). Arithmetic operates on raw residues in [0, p).
///
/// Immutable after construction; safe to share across threads. Fields with
/// small p carry a memoized inverse table; results are identical to the
/// extended-Euclid path either way.
class Field
{
public:
  explicit Field(std::uint32_t p) : p_{p}
  {
    if (!is_prime(p)) {
      throw ParameterError("field modulus " + std::to_string(p) + " is not prime");
    }
    if (p > kMaxModulus) {
      throw ParameterError("field modulus " + std::to_string(p) + " exceeds the supported range");
    }
    if (p_ <= kTableLimit) {
      inverses_.resize(p_);
      for (std::uint32_t a = 1; a < p_; ++a) inverses_[a] = mod_inverse(a, p_);
    }
  }

  std::uint32_t modulus() const noexcept { return p_; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const noexcept
  {
    const std::uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }

  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const noexcept
  {
    return a >= b ? a - b : a + p_ - b;
  }

  std::uint32_t neg(std::uint32_t a) const noexcept { return a == 0 ? 0 : p_ - a; }

  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const noexcept
  {
    return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * b) % p_);
  }

  std::uint32_t inv(std::uint32_t a) const
  {
    if (a == 0) throw UsageError("division by zero: 0 has no inverse in GF(p)");
    if (!inverses_.empty()) return inverses_[a % p_];
    return mod_inverse(a % p_, p_);
  }

  std::uint32_t reduce(std::uint64_t v) const noexcept
  {
    return static_cast<std::uint32_t>(v % p_);
  }

  bool operator==(const Field& other) const noexcept { return p_ == other.p_; }

private:
  static constexpr std::uint32_t kTableLimit = 1u << 16;

  std::uint32_t p_;
  std::vector<std::uint32_t> inverses_;
};

/// A residue tagged with its modulus. Operations on elements of different
/// fields are usage errors.
struct FieldElement
{
  std::uint32_t value = 0;
  std::uint32_t p = 2;

  FieldElement() = default;

  FieldElement(std::uint32_t value_, std::uint32_t p_) : value{value_}, p{p_}
  {
    if (p > kMaxModulus) {
      throw UsageError("field modulus " + std::to_string(p_) + " exceeds the supported range");
    }
    if (value >= p) {
      throw UsageError("field element " + std::to_string(value_) +
                       " out of range for GF(" + std::to_string(p_) + ")");
    }
  }

  bool operator==(const FieldElement&) const = default;
};

namespace detail {
inline void require_same_field(const FieldElement& a, const FieldElement& b)
{
  if (a.p != b.p) {
    throw UsageError("mixed-field operands: GF(" + std::to_string(a.p) + ") vs GF(" +
                     std::to_string(b.p) + ")");
  }
}
}  // namespace detail

inline FieldElement operator+(const FieldElement& a, const FieldElement& b)
{
  detail::require_same_field(a, b);
  const std::uint32_t s = a.value + b.value;
  return {s >= a.p ? s - a.p : s, a.p};
}

inline FieldElement operator-(const FieldElement& a, const FieldElement& b)
{
  detail::require_same_field(a, b);
  return {a.value >= b.value ? a.value - b.value : a.value + a.p - b.value, a.p};
}

inline FieldElement operator*(const FieldElement& a, const FieldElement& b)
{
  detail::require_same_field(a, b);
  return {static_cast<std::uint32_t>((static_cast<std::uint64_t>(a.value) * b.value) % a.p), a.p};
}

inline FieldElement inverse(const FieldElement& a)
{
  return {mod_inverse(a.value, a.p), a.p};
}

}  // namespace streamfec
