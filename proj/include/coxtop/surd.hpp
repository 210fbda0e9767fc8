#pragma once

#include <cstdint>
#include <string>

namespace coxtop {

// Element a + b*sqrt2 + c*sqrt3 + d*sqrt6 of the ring Z[sqrt2, sqrt3].
// Twice the cosine of pi/m lies in this ring for every supported bond, so the
// geometric representation never leaves it. Arithmetic is overflow-checked.
struct Surd {
  std::int64_t a = 0, b = 0, c = 0, d = 0;

  constexpr Surd() = default;
  constexpr Surd(std::int64_t a_, std::int64_t b_ = 0, std::int64_t c_ = 0, std::int64_t d_ = 0)
      : a(a_), b(b_), c(c_), d(d_) {}

  bool is_zero() const { return a == 0 && b == 0 && c == 0 && d == 0; }
  // Exact sign of the real number: -1, 0 or 1.
  int sign() const;
  double approx() const;
  std::string str() const;

  friend bool operator==(const Surd&, const Surd&) = default;
  friend Surd operator+(const Surd& x, const Surd& y);
  friend Surd operator-(const Surd& x, const Surd& y);
  friend Surd operator-(const Surd& x);
  friend Surd operator*(const Surd& x, const Surd& y);
  Surd& operator+=(const Surd& y) { return *this = *this + y; }
  Surd& operator-=(const Surd& y) { return *this = *this - y; }
};

}  // namespace coxtop
