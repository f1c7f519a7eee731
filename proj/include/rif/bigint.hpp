#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace rif {

using Int = boost::multiprecision::cpp_int;
using IntVector = std::vector<Int>;

// Least non-negative residue; m == 0 means no reduction.
Int mod(const Int& a, const Int& m);
Int gcd(const Int& a, const Int& b);
Int lcm(const Int& a, const Int& b);

struct ExtGcd {
  Int g, p, q;  // g = p*a + q*b, g >= 0
};
ExtGcd ext_gcd(const Int& a, const Int& b);

std::string to_string(const Int& a);
Int parse_int(std::string_view s);  // throws std::invalid_argument

long long to_ll(const Int& a);  // throws std::overflow_error

IntVector zeros(std::size_t n);
IntVector unit(std::size_t n, std::size_t i);
bool is_zero(const IntVector& v);

}  // namespace rif
