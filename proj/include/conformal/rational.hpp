#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "conformal/error.hpp"
#include "conformal/matrix.hpp"

namespace conformal {

using Rational = mpq_class;
using RationalMatrix = DenseMatrix<Rational>;

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

/// "p/q" (or "p" for integers), canonical form.
inline std::string to_string(const Rational& r) {
  Rational c(r);
  c.canonicalize();
  return c.get_str();
}

/// 17 significant digits, enough to round-trip a double.
inline std::string to_decimal_string(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Parses "p/q", integers and decimals with optional exponent, exactly.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&] { return Error(ErrorCode::kParseError, "not a rational: '" + std::string(text) + "'"); };
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  if (s.empty()) throw fail();

  auto all_digits = [](std::string_view t) {
    if (t.empty()) return false;
    for (char c : t)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };

  bool negative = false;
  std::string body = s;
  if (body[0] == '+' || body[0] == '-') {
    negative = body[0] == '-';
    body = body.substr(1);
  }

  Rational value;
  if (auto slash = body.find('/'); slash != std::string::npos) {
    std::string num = body.substr(0, slash), den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) throw fail();
    mpz_class d(den, 10);
    if (d == 0) throw fail();
    value = Rational(mpz_class(num, 10), d);
  } else {
    std::string mantissa = body;
    long exponent = 0;
    if (auto e = body.find_first_of("eE"); e != std::string::npos) {
      mantissa = body.substr(0, e);
      std::string ex = body.substr(e + 1);
      bool eneg = false;
      if (!ex.empty() && (ex[0] == '+' || ex[0] == '-')) {
        eneg = ex[0] == '-';
        ex = ex.substr(1);
      }
      if (!all_digits(ex) || ex.size() > 6) throw fail();
      exponent = std::stol(ex) * (eneg ? -1 : 1);
    }
    std::string int_part = mantissa, frac_part;
    if (auto dot = mantissa.find('.'); dot != std::string::npos) {
      int_part = mantissa.substr(0, dot);
      frac_part = mantissa.substr(dot + 1);
    }
    if (int_part.empty() && frac_part.empty()) throw fail();
    if ((!int_part.empty() && !all_digits(int_part)) || (!frac_part.empty() && !all_digits(frac_part)))
      throw fail();
    mpz_class digits(int_part + frac_part == "" ? "0" : int_part + frac_part, 10);
    exponent -= static_cast<long>(frac_part.size());
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
    value = exponent >= 0 ? Rational(digits * scale) : Rational(digits, scale);
  }
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

namespace detail {

inline mpz_class floor_q(const Rational& r) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return f;
}

inline mpz_class ceil_q(const Rational& r) {
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return c;
}

// Simplest fraction (smallest denominator) in the closed interval [lo, hi], lo >= 0.
inline Rational simplest_nonnegative(const Rational& lo, const Rational& hi, int depth = 0) {
  mpz_class c = ceil_q(lo);
  if (Rational(c) <= hi || depth > 200) return Rational(c);
  mpz_class f = floor_q(lo);
  Rational inner = simplest_nonnegative(1 / (hi - f), 1 / (lo - f), depth + 1);
  Rational r = Rational(f) + 1 / inner;
  r.canonicalize();
  return r;
}

}  // namespace detail

/// Simplest fraction in [lo, hi].
inline Rational simplest_between(Rational lo, Rational hi) {
  if (hi < lo) std::swap(lo, hi);
  if (lo <= 0 && hi >= 0) return Rational(0);
  if (hi < 0) return -detail::simplest_nonnegative(-hi, -lo);
  return detail::simplest_nonnegative(lo, hi);
}

/// Best rational approximation of x with denominator at most cap (continued fractions
/// plus the final semiconvergent).
inline Rational best_approximation(double x, long cap) {
  Rational r(x);
  mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  Rational rest = r;
  for (int iter = 0; iter < 200; ++iter) {
    mpz_class a = detail::floor_q(rest);
    mpz_class p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > cap) {
      mpz_class k = (mpz_class(cap) - q0) / q1;
      Rational semi(p0 + k * p1, q0 + k * q1), conv(p1, q1);
      semi.canonicalize();
      conv.canonicalize();
      return abs(semi - r) < abs(conv - r) ? semi : conv;
    }
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    if (rest == Rational(a)) break;
    rest = 1 / (rest - a);
  }
  Rational out(p1, q1);
  out.canonicalize();
  return out;
}

/// Smallest-denominator fraction within tol of x if its denominator fits under cap,
/// otherwise the best approximation with denominator <= cap.
inline Rational approximate(double x, long cap = 10000, double tol = 1e-6) {
  Rational center(x), slack(tol);
  Rational s = simplest_between(center - slack, center + slack);
  if (s.get_den() <= cap) return s;
  return best_approximation(x, cap);
}

struct AffineSolution {
  std::vector<Rational> particular;               // free variables set to zero
  std::vector<std::vector<Rational>> nullspace;   // one vector per free variable
  std::size_t rank = 0;
};

/// Exact solution set of A x = b by reduced row echelon form; nullopt when inconsistent.
inline std::optional<AffineSolution> solve_affine(const RationalMatrix& a, const std::vector<Rational>& b) {
  const std::size_t m = a.rows(), p = a.cols();
  if (b.size() != m) throw Error(ErrorCode::kDimensionMismatch, "affine system rhs");
  RationalMatrix aug(m, p + 1);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < p; ++j) aug(i, j) = a(i, j);
    aug(i, p) = b[i];
  }
  std::vector<std::size_t> pivot_cols;
  std::size_t row = 0;
  for (std::size_t col = 0; col < p && row < m; ++col) {
    std::size_t piv = row;
    while (piv < m && aug(piv, col) == 0) ++piv;
    if (piv == m) continue;
    if (piv != row)
      for (std::size_t j = 0; j <= p; ++j) std::swap(aug(row, j), aug(piv, j));
    Rational inv = 1 / aug(row, col);
    for (std::size_t j = col; j <= p; ++j) aug(row, j) *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == row || aug(i, col) == 0) continue;
      Rational f = aug(i, col);
      for (std::size_t j = col; j <= p; ++j) aug(i, j) -= f * aug(row, j);
    }
    pivot_cols.push_back(col);
    ++row;
  }
  for (std::size_t i = row; i < m; ++i)
    if (aug(i, p) != 0) return std::nullopt;

  AffineSolution sol;
  sol.rank = pivot_cols.size();
  sol.particular.assign(p, Rational(0));
  std::vector<bool> is_pivot(p, false);
  for (std::size_t r = 0; r < pivot_cols.size(); ++r) {
    is_pivot[pivot_cols[r]] = true;
    sol.particular[pivot_cols[r]] = aug(r, p);
  }
  for (std::size_t free = 0; free < p; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(p, Rational(0));
    v[free] = 1;
    for (std::size_t r = 0; r < pivot_cols.size(); ++r) v[pivot_cols[r]] = -aug(r, free);
    sol.nullspace.push_back(std::move(v));
  }
  return sol;
}

inline std::vector<std::vector<Rational>> nullspace(const RationalMatrix& a) {
  return solve_affine(a, std::vector<Rational>(a.rows(), Rational(0)))->nullspace;
}

struct PsdCheck {
  bool psd = true;
  std::size_t failed_index = 0;  // pivot index where the test failed
  std::string reason;
};

/// Exact positive-semidefiniteness test by symmetric elimination without pivoting:
/// negative pivot means not PSD; a zero pivot requires its remaining row to vanish.
inline PsdCheck ldlt_psd(RationalMatrix a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw Error(ErrorCode::kDimensionMismatch, "ldlt needs a square matrix");
  for (std::size_t k = 0; k < n; ++k) {
    const Rational d = a(k, k);
    if (d < 0) return {false, k, "negative pivot " + to_string(d)};
    if (d == 0) {
      for (std::size_t j = k + 1; j < n; ++j)
        if (a(k, j) != 0) return {false, k, "zero pivot with nonzero row"};
      continue;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      Rational f = a(i, k) / d;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return {};
}

/// Gauss-Jordan inverse; throws DimensionMismatch on singular input.
inline RationalMatrix inverse(const RationalMatrix& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw Error(ErrorCode::kDimensionMismatch, "inverse needs a square matrix");
  RationalMatrix w = a, inv = RationalMatrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && w(piv, col) == 0) ++piv;
    if (piv == n) throw Error(ErrorCode::kDimensionMismatch, "singular matrix");
    for (std::size_t j = 0; j < n; ++j) {
      std::swap(w(col, j), w(piv, j));
      std::swap(inv(col, j), inv(piv, j));
    }
    Rational f = 1 / w(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      w(col, j) *= f;
      inv(col, j) *= f;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || w(i, col) == 0) continue;
      Rational h = w(i, col);
      for (std::size_t j = 0; j < n; ++j) {
        w(i, j) -= h * w(col, j);
        inv(i, j) -= h * inv(col, j);
      }
    }
  }
  return inv;
}

inline Matrix to_double(const RationalMatrix& m) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j).get_d();
  return out;
}

}  // namespace conformal
