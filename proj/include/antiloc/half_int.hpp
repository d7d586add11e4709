#pragma once

#include <compare>
#include <string>

namespace antiloc {

/// Angular momentum quantum number stored as twice its value, so that
/// half-integers are exact.
class HalfInt {
 public:
  constexpr HalfInt() = default;
  constexpr HalfInt(int integer) : twice_(2 * integer) {}  // NOLINT: implicit by intent

  static constexpr HalfInt from_twice(int twice) {
    HalfInt h;
    h.twice_ = twice;
    return h;
  }

  constexpr int twice() const { return twice_; }
  constexpr double value() const { return 0.5 * twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }

  constexpr HalfInt operator-() const { return from_twice(-twice_); }
  constexpr HalfInt operator+(HalfInt o) const { return from_twice(twice_ + o.twice_); }
  constexpr HalfInt operator-(HalfInt o) const { return from_twice(twice_ - o.twice_); }
  constexpr HalfInt& operator+=(HalfInt o) {
    twice_ += o.twice_;
    return *this;
  }

  constexpr bool operator==(const HalfInt&) const = default;
  constexpr auto operator<=>(const HalfInt&) const = default;

  std::string str() const {
    return is_integer() ? std::to_string(twice_ / 2) : std::to_string(twice_) + "/2";
  }

 private:
  int twice_ = 0;
};

/// n/2
constexpr HalfInt half(int n) { return HalfInt::from_twice(n); }

/// True when m is a valid projection of j: |m| <= j and j - m integral.
constexpr bool valid_projection(HalfInt j, HalfInt m) {
  return j.twice() >= 0 && m.twice() <= j.twice() && -m.twice() <= j.twice() && (j.twice() - m.twice()) % 2 == 0;
}

}  // namespace antiloc
