#pragma once

#include <gmpxx.h>

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

namespace mcm {

// Every probability in the library is an exact rational; no floating-point
// value ever enters a computation path.
using Rat = mpq_class;

inline Rat make_rat(long num, long den = 1) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline Rat pos_part(const Rat& x) { return x > 0 ? x : Rat(0); }

// Accepts "p", "-p", "p/q" and decimal strings like "0.25" (stored exactly,
// 0.25 becomes 1/4). Anything else, including q = 0, yields nullopt.
inline std::optional<Rat> parse_rat(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::string_view body = text;
  bool negative = false;
  if (body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
    if (body.empty()) return std::nullopt;
  }

  auto all_digits = [](std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };

  Rat value;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    std::string_view num = body.substr(0, slash);
    std::string_view den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return std::nullopt;
    mpz_class d(std::string(den), 10);
    if (d == 0) return std::nullopt;
    value = Rat(mpz_class(std::string(num), 10), d);
    value.canonicalize();
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    std::string_view ipart = body.substr(0, dot);
    std::string_view fpart = body.substr(dot + 1);
    if (!all_digits(ipart) || !all_digits(fpart)) return std::nullopt;
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, fpart.size());
    mpz_class digits(std::string(ipart) + std::string(fpart), 10);
    value = Rat(digits, scale);
    value.canonicalize();
  } else {
    if (!all_digits(body)) return std::nullopt;
    value = Rat(mpz_class(std::string(body), 10));
  }
  if (negative) value = -value;
  return value;
}

// Canonical form: "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Rat& r) { return r.get_str(); }

inline double to_double(const Rat& r) { return r.get_d(); }

// Nearest value with four decimal places, for display next to exact output.
inline double approx4(const Rat& r) {
  return std::round(to_double(r) * 10000.0) / 10000.0;
}

}  // namespace mcm
