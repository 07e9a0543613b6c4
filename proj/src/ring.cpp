#include "wk/ring.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace wk {

bool is_prime(long long p) {
  if (p < 2) return false;
  for (long long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

long long mod_inverse(long long a, long long m) {
  long long r0 = m, r1 = ((a % m) + m) % m, s0 = 0, s1 = 1;
  while (r1 != 0) {
    long long q = r0 / r1;
    long long r2 = r0 - q * r1, s2 = s0 - q * s1;
    r0 = r1; r1 = r2; s0 = s1; s1 = s2;
  }
  check(r0 == 1, "mod_inverse: element not invertible");
  return ((s0 % m) + m) % m;
}

Ring Ring::gf(long long p) {
  check(is_prime(p), "prime-field modulus must be prime");
  return Ring{Kind::PrimeField, p};
}

Ring Ring::rationals() { return Ring{Kind::Rationals, 0}; }

Ring Ring::integers() { return Ring{Kind::Integers, 0}; }

Ring Ring::zmod(long long n) {
  check(n >= 2, "integers-mod-n modulus must be at least 2");
  return Ring{Kind::IntegersModN, n};
}

std::optional<Ring> Ring::parse(const std::string& name) {
  if (name == "q" || name == "rationals") return rationals();
  if (name == "z" || name == "integers") return integers();
  auto tail_num = [&](size_t off) -> std::optional<long long> {
    if (name.size() <= off) return std::nullopt;
    long long v = 0;
    for (size_t i = off; i < name.size(); ++i) {
      if (name[i] < '0' || name[i] > '9') return std::nullopt;
      v = v * 10 + (name[i] - '0');
      if (v > 1000000) return std::nullopt;
    }
    return v;
  };
  if (name.rfind("gf", 0) == 0) {
    auto p = tail_num(2);
    if (p && is_prime(*p)) return gf(*p);
    return std::nullopt;
  }
  if (name.rfind("mod", 0) == 0) {
    auto n = tail_num(3);
    if (n && *n >= 2) return zmod(*n);
    return std::nullopt;
  }
  if (name.rfind("z", 0) == 0) {
    auto n = tail_num(1);
    if (n && *n >= 2) return zmod(*n);
    return std::nullopt;
  }
  return std::nullopt;
}

std::string Ring::name() const {
  switch (kind) {
    case Kind::PrimeField: return "gf" + std::to_string(modulus);
    case Kind::Rationals: return "q";
    case Kind::Integers: return "z";
    case Kind::IntegersModN: return "z" + std::to_string(modulus);
  }
  return "?";
}

Rat Ring::reduce(const Rat& x) const {
  switch (kind) {
    case Kind::Rationals:
      return x;
    case Kind::Integers:
      check(denominator(x) == 1, "integer ring element has a denominator");
      return x;
    case Kind::PrimeField:
    case Kind::IntegersModN: {
      Int m(modulus);
      Int den = denominator(x) % m;
      Int num = numerator(x) % m;
      if (num < 0) num += m;
      if (den < 0) den += m;
      long long d = den.convert_to<long long>();
      check(d != 0, "modular reduction: denominator divisible by modulus");
      long long inv = mod_inverse(d, modulus);
      Int v = (num * inv) % m;
      return Rat(v);
    }
  }
  return x;
}

bool Ring::is_canonical(const Rat& x) const {
  switch (kind) {
    case Kind::Rationals:
      return true;
    case Kind::Integers:
      return denominator(x) == 1;
    case Kind::PrimeField:
    case Kind::IntegersModN:
      return denominator(x) == 1 && numerator(x) >= 0 && numerator(x) < modulus;
  }
  return false;
}

bool Ring::is_unit(const Rat& a) const {
  Rat c = reduce(a);
  switch (kind) {
    case Kind::Rationals:
      return c != 0;
    case Kind::Integers:
      return c == 1 || c == -1;
    case Kind::PrimeField:
    case Kind::IntegersModN: {
      Int g = gcd(numerator(c), Int(modulus));
      return g == 1;
    }
  }
  return false;
}

std::optional<Rat> Ring::inverse(const Rat& a) const {
  Rat c = reduce(a);
  if (!is_unit(c)) return std::nullopt;
  switch (kind) {
    case Kind::Rationals:
    case Kind::Integers:
      return Rat(1) / c;
    case Kind::PrimeField:
    case Kind::IntegersModN:
      return Rat(mod_inverse(numerator(c).convert_to<long long>(), modulus));
  }
  return std::nullopt;
}

}  // namespace wk
