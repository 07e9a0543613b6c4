#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <stdexcept>
#include <string>

namespace wk {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline void check(bool cond, const std::string& msg) {
  if (!cond) throw std::runtime_error(msg);
}

bool is_prime(long long p);
long long mod_inverse(long long a, long long m);  // gcd(a,m)=1 required

// Commutative ground ring. Elements are exact rationals kept in canonical
// form: modular values are integers in [0, modulus), integer-ring values have
// denominator 1, rationals are in lowest terms (automatic).
struct Ring {
  enum class Kind { PrimeField, Rationals, Integers, IntegersModN };
  Kind kind = Kind::Rationals;
  long long modulus = 0;  // p or n; 0 for Q and Z

  static Ring gf(long long p);
  static Ring rationals();
  static Ring integers();
  static Ring zmod(long long n);
  // Accepts gf<p>, q, rationals, z, integers, z<n>, mod<n>.
  static std::optional<Ring> parse(const std::string& name);

  bool is_field() const { return kind == Kind::PrimeField || kind == Kind::Rationals; }
  bool is_modular() const { return kind == Kind::PrimeField || kind == Kind::IntegersModN; }
  std::string name() const;

  Rat reduce(const Rat& x) const;
  bool is_canonical(const Rat& x) const;
  Rat add(const Rat& a, const Rat& b) const { return reduce(a + b); }
  Rat sub(const Rat& a, const Rat& b) const { return reduce(a - b); }
  Rat mul(const Rat& a, const Rat& b) const { return reduce(a * b); }
  Rat neg(const Rat& a) const { return reduce(-a); }
  bool is_unit(const Rat& a) const;
  std::optional<Rat> inverse(const Rat& a) const;

  bool operator==(const Ring&) const = default;
};

}  // namespace wk
