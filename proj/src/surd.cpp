#include "coxtop/surd.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <sstream>

#include "coxtop/errors.hpp"

namespace coxtop {

namespace {

using i128 = __int128;
using boost::multiprecision::int256_t;

std::int64_t chk(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw Error(Errc::BudgetExceeded, "surd coordinate overflow");
  return static_cast<std::int64_t>(v);
}

// sign of p + q*sqrt2
template <class T>
int sign2(const T& p, const T& q) {
  int sp = p > 0 ? 1 : (p < 0 ? -1 : 0);
  int sq = q > 0 ? 1 : (q < 0 ? -1 : 0);
  if (sq == 0) return sp;
  if (sp == 0 || sp == sq) return sq;
  T lhs = p * p, rhs = 2 * q * q;
  if (lhs == rhs) return 0;  // impossible for nonzero q, kept for safety
  return (lhs > rhs) ? sp : sq;
}

}  // namespace

Surd operator+(const Surd& x, const Surd& y) {
  return {chk(i128(x.a) + y.a), chk(i128(x.b) + y.b), chk(i128(x.c) + y.c), chk(i128(x.d) + y.d)};
}

Surd operator-(const Surd& x, const Surd& y) {
  return {chk(i128(x.a) - y.a), chk(i128(x.b) - y.b), chk(i128(x.c) - y.c), chk(i128(x.d) - y.d)};
}

Surd operator-(const Surd& x) { return Surd{} - x; }

Surd operator*(const Surd& x, const Surd& y) {
  // basis 1, r2, r3, r6 with r2*r3 = r6, r2*r6 = 2 r3, r3*r6 = 3 r2, r6*r6 = 6
  i128 a = i128(x.a) * y.a + 2 * i128(x.b) * y.b + 3 * i128(x.c) * y.c + 6 * i128(x.d) * y.d;
  i128 b = i128(x.a) * y.b + i128(x.b) * y.a + 3 * (i128(x.c) * y.d + i128(x.d) * y.c);
  i128 c = i128(x.a) * y.c + i128(x.c) * y.a + 2 * (i128(x.b) * y.d + i128(x.d) * y.b);
  i128 d = i128(x.a) * y.d + i128(x.d) * y.a + i128(x.b) * y.c + i128(x.c) * y.b;
  return {chk(a), chk(b), chk(c), chk(d)};
}

int Surd::sign() const {
  // x = P + sqrt3 * Q with P = a + b sqrt2, Q = c + d sqrt2
  int sp = sign2<i128>(a, b);
  int sq = sign2<i128>(c, d);
  if (sq == 0) return sp;
  if (sp == 0 || sp == sq) return sq;
  // signs differ: compare P^2 with 3 Q^2, both in Z[sqrt2]
  int256_t A = a, B = b, C = c, D = d;
  int256_t u = A * A + 2 * B * B - 3 * C * C - 6 * D * D;
  int256_t v = 2 * A * B - 6 * C * D;
  int s = sign2<int256_t>(u, v);
  return sp > 0 ? s : -s;
}

double Surd::approx() const {
  return double(a) + double(b) * std::sqrt(2.0) + double(c) * std::sqrt(3.0) + double(d) * std::sqrt(6.0);
}

std::string Surd::str() const {
  std::ostringstream os;
  os << a;
  if (b) os << (b > 0 ? "+" : "") << b << "r2";
  if (c) os << (c > 0 ? "+" : "") << c << "r3";
  if (d) os << (d > 0 ? "+" : "") << d << "r6";
  return os.str();
}

}  // namespace coxtop
