#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>

#include "qclat/errors.hpp"

namespace qclat {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parse "p/q" or "p" (arbitrary precision, optional sign). Rejects q = 0.
Rational parse_rational(const std::string& text);

/// Canonical "p/q" form, denominator always printed ("3" -> "3/1").
std::string rational_string(const Rational& q);

/// Certified enclosure of a real number: value lies in [mid - rad, mid + rad].
/// All bounds are exact rationals, so enclosures compose without rounding.
struct RatBall {
    Rational mid;
    Rational rad;

    double mid_d() const;
    double rad_d() const;  // covers the double conversion of mid as well
};

/// d must be square-free and >= 2 to name a real quadratic field.
bool is_valid_disc(long d);

/// Element a + b*sqrt(d) of Q(sqrt(d)), exact.
///
/// Pure rationals carry disc 0 and interoperate with every field; elements
/// with a nonzero irrational part only combine when their discs agree.
class FieldElem {
  public:
    FieldElem() : disc_(0) {}
    FieldElem(Rational rat, Rational irr, long disc);
    static FieldElem rational(Rational r);
    static FieldElem integer(long n) { return rational(Rational(n)); }
    /// coef * sqrt(d)
    static FieldElem root_term(Rational coef, long disc);

    const Rational& rat() const { return rat_; }
    const Rational& irr() const { return irr_; }
    long disc() const { return disc_; }

    bool is_zero() const { return sgn(rat_) == 0 && sgn(irr_) == 0; }
    bool is_rational() const { return disc_ == 0; }
    bool is_integer() const;

    /// Throws ExactnessError when the irrational part is nonzero.
    Rational as_rational() const;

    FieldElem conjugate() const;  // a + b*sqrt(d) -> a - b*sqrt(d)
    FieldElem inverse() const;    // throws DivisionByZeroError on zero

    /// Exact sign of the real number, decided by integer arithmetic only.
    int sign() const;

    /// abs via sign()
    FieldElem abs() const;

    /// Largest integer n with n <= value, exact.
    Integer floor() const;

    /// Enclosure with rad <= 2^(1-precision_bits) * (1 + |mid|).
    /// precision_bits >= 24.
    RatBall to_ball(int precision_bits) const;

    /// Convenience: double approximation (precision 53 ball midpoint).
    double to_double() const;

    friend FieldElem operator+(const FieldElem& a, const FieldElem& b);
    friend FieldElem operator-(const FieldElem& a, const FieldElem& b);
    friend FieldElem operator*(const FieldElem& a, const FieldElem& b);
    friend FieldElem operator/(const FieldElem& a, const FieldElem& b);
    FieldElem operator-() const;
    FieldElem& operator+=(const FieldElem& b) { return *this = *this + b; }
    FieldElem& operator-=(const FieldElem& b) { return *this = *this - b; }
    FieldElem& operator*=(const FieldElem& b) { return *this = *this * b; }

    friend bool operator==(const FieldElem& a, const FieldElem& b);
    friend bool operator!=(const FieldElem& a, const FieldElem& b) { return !(a == b); }

    std::string str() const;  // human form, e.g. "1/2+3/1*sqrt(2)"

  private:
    Rational rat_;
    Rational irr_;
    long disc_;  // 0 iff irr_ == 0

    void normalize();
    friend long merged_disc(const FieldElem& a, const FieldElem& b);
};

/// sign(a - b); total order compatible with the real embedding
int compare(const FieldElem& a, const FieldElem& b);
inline bool operator<(const FieldElem& a, const FieldElem& b) { return compare(a, b) < 0; }

int sign_of(const FieldElem& a);

/// Parse "p/q", "sqrt(2)", "1/2+3*sqrt(2)", "2-sqrt2", ... into Q(sqrt(disc)).
/// disc_hint fixes d when the literal has no radical part.
FieldElem parse_field_elem(const std::string& text, long disc_hint);

/// Certified enclosure of a complex number.
struct ComplexBall {
    RatBall re;
    RatBall im;
    std::complex<double> to_complex() const { return {re.mid_d(), im.mid_d()}; }
    double rad_d() const;
};

/// The unimodular number e^{2*pi*i*t} with t in Q(sqrt(d)).
///
/// Canonical form keeps the rational part of t in [0,1); equality of phases
/// is then exact componentwise equality.
class Phase {
  public:
    Phase() = default;  // t = 0, the unit phase
    explicit Phase(const FieldElem& t);
    explicit Phase(const Rational& t) : Phase(FieldElem::rational(t)) {}

    const FieldElem& t() const { return t_; }
    bool is_one() const { return t_.is_zero(); }

    Phase conj() const { return Phase(-t_); }
    friend Phase operator*(const Phase& a, const Phase& b) { return Phase(a.t_ + b.t_); }
    friend bool operator==(const Phase& a, const Phase& b) { return a.t_ == b.t_; }
    friend bool operator!=(const Phase& a, const Phase& b) { return !(a == b); }

    /// e^{2*pi*i*t} with absolute error per component <= 2^-(precision_bits+16),
    /// hence relative error <= 2^(2-precision_bits).
    ComplexBall value(int precision_bits) const;

    /// Convenience double evaluation (exact mod-1 reduction, then libm-free
    /// MPFR at 64 bits rounded to double).
    std::complex<double> to_complex() const;

  private:
    FieldElem t_;
};

/// Phase that multiplies the coefficient by -1, i.e. t = 1/2.
Phase half_phase();

} // namespace qclat
