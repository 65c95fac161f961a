#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cft/errors.hpp"

namespace cft {

using BigRat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Symbol set of the case analysis, in the fixed canonical order:
// p, q, sin(phi), cos(phi), Omega, phi', phi'', lambda, mu.
enum Sym : int { SymP = 0, SymQ, SymS, SymC, SymW, SymF1, SymF2, SymL, SymM, kNumSyms };

const char* sym_name(Sym s);

using Mono = std::array<std::uint16_t, kNumSyms>;

// Graded-lexicographic order, P heaviest; "greater" so that map iteration
// runs from the leading term down.
struct GrlexGreater {
    bool operator()(const Mono& a, const Mono& b) const;
};

// Sparse multivariate polynomial with exact rational coefficients.  Zero
// terms are never stored; equality is structural.
class SymPoly {
  public:
    using TermMap = std::map<Mono, BigRat, GrlexGreater>;

    SymPoly() = default;
    static SymPoly constant(BigRat c);
    static SymPoly from_int(long n) { return constant(BigRat(n)); }
    static SymPoly symbol(Sym s, int power = 1);

    bool is_zero() const { return terms_.empty(); }
    bool is_rational_constant() const;
    std::size_t term_count() const { return terms_.size(); }
    const TermMap& terms() const { return terms_; }

    int degree(Sym s) const;
    bool depends_on(Sym s) const { return degree(s) > 0; }

    SymPoly operator-() const;
    SymPoly& operator+=(const SymPoly& o);
    SymPoly& operator-=(const SymPoly& o);
    friend SymPoly operator+(SymPoly a, const SymPoly& b) { return a += b; }
    friend SymPoly operator-(SymPoly a, const SymPoly& b) { return a -= b; }
    friend SymPoly operator*(const SymPoly& a, const SymPoly& b);
    SymPoly operator*(const BigRat& c) const;
    SymPoly pow(unsigned n) const;
    friend bool operator==(const SymPoly& a, const SymPoly& b) { return a.terms_ == b.terms_; }

    // Coefficients of s^0, s^1, ... (each free of s).  Empty for the zero poly.
    std::vector<SymPoly> coefficients(Sym s) const;
    SymPoly leading_coefficient(Sym s) const;

    // Formal partial derivative.
    SymPoly derivative(Sym s) const;

    // Replace every occurrence of s by the given polynomial.
    SymPoly substituted(Sym s, const SymPoly& value) const;

    // Exact division; nullopt when b does not divide *this.
    std::optional<SymPoly> divided_exactly(const SymPoly& b) const;

    BigRat evaluate(const std::array<BigRat, kNumSyms>& point) const;

    void add_term(const Mono& m, BigRat c);

    // Positive rational r with (*this)/r integer-coefficient, gcd 1.
    BigRat rational_content() const;

    // Canonical text form: grlex-descending terms, "coeff*P^a*..." style.
    std::string str() const;
    static SymPoly parse(const std::string& text);

  private:
    TermMap terms_;
};

// gcd over Q[P..M]: primitive, integer coefficients with content 1, leading
// (grlex) coefficient positive.  gcd(0,0) = 0.
SymPoly poly_gcd(const SymPoly& a, const SymPoly& b);

// Full content of `e` with respect to main variable `s`: rational gcd times
// polynomial gcd of the coefficients of s^k, sign-normalized so the grlex
// leading coefficient of the content is positive.  Zero poly -> 0.
SymPoly content_wrt(const SymPoly& e, Sym s);

// Rational fraction of SymPoly.  Denominator nonzero, gcd-reduced, and
// normalized monic-leading (grlex leading coefficient 1).
class SymFrac {
  public:
    SymFrac() : num_(), den_(SymPoly::from_int(1)) {}
    SymFrac(SymPoly n, SymPoly d);
    explicit SymFrac(SymPoly n) : num_(std::move(n)), den_(SymPoly::from_int(1)) {}

    const SymPoly& num() const { return num_; }
    const SymPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    SymFrac operator-() const;
    friend SymFrac operator+(const SymFrac& a, const SymFrac& b);
    friend SymFrac operator-(const SymFrac& a, const SymFrac& b);
    friend SymFrac operator*(const SymFrac& a, const SymFrac& b);
    friend SymFrac operator/(const SymFrac& a, const SymFrac& b);
    friend bool operator==(const SymFrac& a, const SymFrac& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    SymFrac substituted(Sym s, const SymFrac& value) const;

    // Exact evaluation; throws DomainError if the denominator vanishes.
    BigRat evaluate(const std::array<BigRat, kNumSyms>& point) const;

    std::string str() const;

  private:
    SymPoly num_, den_;
};

} // namespace cft
