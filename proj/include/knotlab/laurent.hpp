#pragma once

#include <cstdint>
#include <cstdlib>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

namespace knotlab {

enum class Variable { A, t };

/// Integer Laurent polynomial in one variable.
///
/// For `Variable::A` the stored exponent is the power of A. For `Variable::t`
/// it is measured in quarters, so t^(5/2) is stored as 10. The substitution
/// A = t^(-1/4) therefore sends A-exponent k to t-quarter exponent -k.
class LaurentPoly {
public:
  using Terms = std::map<int, std::int64_t>;

  explicit LaurentPoly(Variable var = Variable::A) : var_(var) {}

  static LaurentPoly constant(std::int64_t c, Variable var = Variable::A) {
    return monomial(c, 0, var);
  }

  static LaurentPoly monomial(std::int64_t c, int exp, Variable var = Variable::A) {
    LaurentPoly p(var);
    if (c != 0)
      p.terms_[exp] = c;
    return p;
  }

  Variable variable() const noexcept { return var_; }
  const Terms &terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  std::int64_t coefficient(int exp) const {
    auto it = terms_.find(exp);
    return it == terms_.end() ? 0 : it->second;
  }

  int min_exponent() const { return is_zero() ? 0 : terms_.begin()->first; }
  int max_exponent() const { return is_zero() ? 0 : terms_.rbegin()->first; }

  void add_term(int exp, std::int64_t c) {
    if (c == 0)
      return;
    auto &slot = terms_[exp];
    slot = checked_add(slot, c);
    if (slot == 0)
      terms_.erase(exp);
  }

  LaurentPoly &operator+=(const LaurentPoly &o) {
    require_same(o);
    for (auto [e, c] : o.terms_)
      add_term(e, c);
    return *this;
  }

  LaurentPoly &operator-=(const LaurentPoly &o) {
    require_same(o);
    for (auto [e, c] : o.terms_)
      add_term(e, checked_mul(c, -1));
    return *this;
  }

  LaurentPoly operator-() const {
    LaurentPoly r(var_);
    for (auto [e, c] : terms_)
      r.terms_[e] = checked_mul(c, -1);
    return r;
  }

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly &b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly &b) { return a -= b; }

  friend LaurentPoly operator*(const LaurentPoly &a, const LaurentPoly &b) {
    a.require_same(b);
    LaurentPoly r(a.var_);
    for (auto [ea, ca] : a.terms_)
      for (auto [eb, cb] : b.terms_)
        r.add_term(checked_exp(ea, eb), checked_mul(ca, cb));
    return r;
  }

  LaurentPoly &operator*=(const LaurentPoly &o) { return *this = *this * o; }

  LaurentPoly scaled(std::int64_t k) const {
    LaurentPoly r(var_);
    if (k == 0)
      return r;
    for (auto [e, c] : terms_)
      r.terms_[e] = checked_mul(c, k);
    return r;
  }

  /// Multiplies by the monomial var^shift (shift in storage units).
  LaurentPoly shifted(int shift) const {
    LaurentPoly r(var_);
    for (auto [e, c] : terms_)
      r.terms_[checked_exp(e, shift)] = c;
    return r;
  }

  LaurentPoly pow(unsigned n) const {
    LaurentPoly r = constant(1, var_);
    LaurentPoly base = *this;
    while (n) {
      if (n & 1u)
        r *= base;
      n >>= 1u;
      if (n)
        base *= base;
    }
    return r;
  }

  /// Exponent negation: p(x) -> p(x^-1).
  LaurentPoly inverted_variable() const {
    LaurentPoly r(var_);
    for (auto [e, c] : terms_)
      r.terms_[-e] = c;
    return r;
  }

  /// A = t^(-1/4). Only defined on A-polynomials.
  LaurentPoly substitute_a_to_t() const {
    if (var_ != Variable::A)
      throw std::logic_error("substitute_a_to_t: polynomial is not in A");
    LaurentPoly r(Variable::t);
    for (auto [e, c] : terms_)
      r.terms_[-e] = c;
    return r;
  }

  friend bool operator==(const LaurentPoly &a, const LaurentPoly &b) {
    return a.var_ == b.var_ && a.terms_ == b.terms_;
  }

  /// Human-readable form, highest exponent first: "-t^4 + t^3 + t",
  /// "-t^(5/2) - t^(1/2)", "-A^5 - A^-3 + A^-7".
  std::string to_string() const {
    if (terms_.empty())
      return "0";
    std::string out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      auto [e, c] = *it;
      std::int64_t mag = c < 0 ? -c : c;
      if (first)
        out += c < 0 ? "-" : "";
      else
        out += c < 0 ? " - " : " + ";
      first = false;
      std::string mono = monomial_text(e);
      if (mono.empty())
        out += std::to_string(mag);
      else if (mag == 1)
        out += mono;
      else
        out += std::to_string(mag) + mono;
    }
    return out;
  }

private:
  std::string monomial_text(int e) const {
    if (e == 0)
      return "";
    const char *name = var_ == Variable::A ? "A" : "t";
    if (var_ == Variable::A) {
      if (e == 1)
        return name;
      return std::string(name) + "^" + std::to_string(e);
    }
    if (e % 4 == 0) {
      int k = e / 4;
      if (k == 1)
        return name;
      return std::string(name) + "^" + std::to_string(k);
    }
    int g = std::gcd(std::abs(e), 4);
    return std::string(name) + "^(" + std::to_string(e / g) + "/" + std::to_string(4 / g) + ")";
  }

  void require_same(const LaurentPoly &o) const {
    if (var_ != o.var_)
      throw std::logic_error("LaurentPoly: mixed variables");
  }

  static std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r))
      throw std::overflow_error("LaurentPoly: coefficient overflow");
    return r;
  }
  static std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r))
      throw std::overflow_error("LaurentPoly: coefficient overflow");
    return r;
  }
  static int checked_exp(int a, int b) {
    int r;
    if (__builtin_add_overflow(a, b, &r))
      throw std::overflow_error("LaurentPoly: exponent overflow");
    return r;
  }

  Variable var_;
  Terms terms_;
};

} // namespace knotlab
