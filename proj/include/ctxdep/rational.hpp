#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace ctxdep {

/// Exact non-negative-denominator fraction, always stored in lowest terms.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t num) : num_(num), den_(1) {}  // NOLINT(implicit)
  constexpr Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) { normalize(); }

  constexpr std::int64_t num() const noexcept { return num_; }
  constexpr std::int64_t den() const noexcept { return den_; }

  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// "3/2", or "2" when the denominator is 1.
  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend constexpr Rational operator+(Rational a, Rational b) {
    const std::int64_t g = std::gcd(a.den_, b.den_);
    return Rational(a.num_ * (b.den_ / g) + b.num_ * (a.den_ / g), a.den_ / g * b.den_);
  }
  friend constexpr Rational operator-(Rational a, Rational b) { return a + Rational(-b.num_, b.den_); }
  friend constexpr Rational operator*(Rational a, Rational b) { return Rational(a.num_ * b.num_, a.den_ * b.den_); }
  friend constexpr Rational operator/(Rational a, Rational b) { return Rational(a.num_ * b.den_, a.den_ * b.num_); }
  constexpr Rational& operator+=(Rational o) { return *this = *this + o; }

  friend constexpr bool operator==(Rational a, Rational b) noexcept = default;
  friend constexpr auto operator<=>(Rational a, Rational b) noexcept {
    // Denominators are positive, so cross-multiplication preserves order.
    return a.num_ * b.den_ <=> b.num_ * a.den_;
  }

  friend std::ostream& operator<<(std::ostream& os, Rational r) { return os << r.str(); }

  /// Accepts "2", "1/2", "0.25". Returns nullopt for anything else or a zero denominator.
  static std::optional<Rational> parse(std::string_view text) {
    if (text.empty()) return std::nullopt;
    auto digits = [](std::string_view s) {
      if (s.empty() || s.size() > 15) return false;
      for (char c : s)
        if (c < '0' || c > '9') return false;
      return true;
    };
    bool negative = false;
    if (text.front() == '-') {
      negative = true;
      text.remove_prefix(1);
    }
    std::optional<Rational> out;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
      auto n = text.substr(0, slash), d = text.substr(slash + 1);
      if (!digits(n) || !digits(d)) return std::nullopt;
      const auto den = std::stoll(std::string(d));
      if (den == 0) return std::nullopt;
      out = Rational(std::stoll(std::string(n)), den);
    } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
      auto ip = text.substr(0, dot), fp = text.substr(dot + 1);
      if (ip.empty()) ip = "0";
      if (!digits(ip) || !digits(fp)) return std::nullopt;
      std::int64_t scale = 1;
      for (std::size_t i = 0; i < fp.size(); ++i) scale *= 10;
      out = Rational(std::stoll(std::string(ip)) * scale + std::stoll(std::string(fp)), scale);
    } else {
      if (!digits(text)) return std::nullopt;
      out = Rational(std::stoll(std::string(text)));
    }
    if (negative) out = Rational(-out->num_, out->den_);
    return out;
  }

 private:
  constexpr void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace ctxdep
