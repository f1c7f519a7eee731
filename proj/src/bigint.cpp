#include "rif/bigint.hpp"

#include <stdexcept>

namespace rif {

Int mod(const Int& a, const Int& m) {
  if (m == 0) return a;
  Int r = a % m;
  if (r < 0) r += (m < 0 ? Int(-m) : m);
  return r;
}

Int gcd(const Int& a, const Int& b) {
  Int x = abs(a), y = abs(b);
  while (y != 0) {
    Int t = x % y;
    x = std::move(y);
    y = std::move(t);
  }
  return x;
}

Int lcm(const Int& a, const Int& b) {
  if (a == 0 || b == 0) return 0;
  return abs(a / gcd(a, b) * b);
}

ExtGcd ext_gcd(const Int& a, const Int& b) {
  Int old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    Int q = old_r / r;
    Int tmp = old_r - q * r;
    old_r = std::move(r);
    r = std::move(tmp);
    tmp = old_s - q * s;
    old_s = std::move(s);
    s = std::move(tmp);
    tmp = old_t - q * t;
    old_t = std::move(t);
    t = std::move(tmp);
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  return {old_r, old_s, old_t};
}

std::string to_string(const Int& a) { return a.str(); }

Int parse_int(std::string_view s) {
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
    neg = s[i] == '-';
    ++i;
  }
  if (i == s.size()) throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  Int v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9')
      throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
    v = v * 10 + (s[i] - '0');
  }
  return neg ? Int(-v) : v;
}

long long to_ll(const Int& a) {
  if (a > Int(std::numeric_limits<long long>::max()) ||
      a < Int(std::numeric_limits<long long>::min()))
    throw std::overflow_error("integer does not fit in 64 bits");
  return static_cast<long long>(a);
}

IntVector zeros(std::size_t n) { return IntVector(n, Int(0)); }

IntVector unit(std::size_t n, std::size_t i) {
  IntVector v(n, Int(0));
  v[i] = 1;
  return v;
}

bool is_zero(const IntVector& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

}  // namespace rif
