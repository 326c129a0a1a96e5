#include "qclat/exact.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <vector>

namespace qclat {

namespace {

// over-approximating double conversion
double double_upper(const Rational& q) {
    double d = q.get_d();  // truncated toward zero, |err| < 1 ulp
    return std::nextafter(std::nextafter(d, std::numeric_limits<double>::infinity()),
                          std::numeric_limits<double>::infinity());
}

// ceil(log2(|q|)) over-approximation from limb sizes; 0 for q == 0
long log2_upper(const Rational& q) {
    if (sgn(q) == 0) return 0;
    long num_bits = static_cast<long>(mpz_sizeinbase(q.get_num_mpz_t(), 2));
    long den_bits = static_cast<long>(mpz_sizeinbase(q.get_den_mpz_t(), 2));
    return num_bits - den_bits + 1;
}

Rational pow2(long k) {
    Integer p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(k >= 0 ? k : -k));
    Rational r = (k >= 0) ? Rational(p) : Rational(1, p);
    r.canonicalize();
    return r;
}

// floor(sqrt(d) * 2^k) exactly, via integer square root
Integer sqrt_scaled_floor(long d, long k) {
    Integer scaled(d);
    mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), static_cast<unsigned long>(2 * k));
    Integer s;
    mpz_sqrt(s.get_mpz_t(), scaled.get_mpz_t());
    return s;
}

Rational floor_rational(const Rational& q) {
    Integer f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return Rational(f);
}

} // namespace

Rational parse_rational(const std::string& text) {
    std::string s = text;
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
            s.end());
    if (s.empty()) throw ParseError("empty rational literal");
    std::string num = s, den = "1";
    if (auto slash = s.find('/'); slash != std::string::npos) {
        num = s.substr(0, slash);
        den = s.substr(slash + 1);
    }
    auto digits_ok = [](const std::string& t, bool allow_sign) {
        if (t.empty()) return false;
        size_t i = (allow_sign && (t[0] == '+' || t[0] == '-')) ? 1 : 0;
        if (i == t.size()) return false;
        return std::all_of(t.begin() + i, t.end(), [](unsigned char c) { return std::isdigit(c); });
    };
    if (!digits_ok(num, true) || !digits_ok(den, false))
        throw ParseError("malformed rational literal: '" + text + "'");
    Integer n(num), d(den);
    if (d == 0) throw ParseError("zero denominator in rational literal: '" + text + "'");
    Rational q(n, d);
    q.canonicalize();
    return q;
}

std::string rational_string(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

double RatBall::mid_d() const { return mid.get_d(); }

double RatBall::rad_d() const {
    // cover the truncation of mid.get_d() too: one ulp of mid
    Rational ulp = ::abs(mid) * pow2(-51) + pow2(-1070);
    return double_upper(rad + ulp);
}

bool is_valid_disc(long d) {
    if (d < 2) return false;
    for (long p = 2; p * p <= d; ++p)
        if (d % (p * p) == 0) return false;
    return true;
}

FieldElem::FieldElem(Rational rat, Rational irr, long disc)
    : rat_(std::move(rat)), irr_(std::move(irr)), disc_(disc) {
    if (sgn(irr_) != 0 && !is_valid_disc(disc_))
        throw Error("disc must be square-free and >= 2, got " + std::to_string(disc_));
    normalize();
}

FieldElem FieldElem::rational(Rational r) {
    FieldElem e;
    e.rat_ = std::move(r);
    return e;
}

FieldElem FieldElem::root_term(Rational coef, long disc) {
    return FieldElem(Rational(0), std::move(coef), disc);
}

void FieldElem::normalize() {
    if (sgn(irr_) == 0) {
        irr_ = 0;
        disc_ = 0;
    }
}

bool FieldElem::is_integer() const {
    return disc_ == 0 && rat_.get_den() == 1;
}

Rational FieldElem::as_rational() const {
    if (disc_ != 0) throw ExactnessError("field element has irrational part: " + str());
    return rat_;
}

long merged_disc(const FieldElem& a, const FieldElem& b) {
    if (a.disc_ == 0) return b.disc_;
    if (b.disc_ == 0 || a.disc_ == b.disc_) return a.disc_;
    throw FieldMismatchError("mixed quadratic fields: sqrt(" + std::to_string(a.disc_) +
                             ") vs sqrt(" + std::to_string(b.disc_) + ")");
}

FieldElem operator+(const FieldElem& a, const FieldElem& b) {
    long d = merged_disc(a, b);
    FieldElem r;
    r.rat_ = a.rat_ + b.rat_;
    r.irr_ = a.irr_ + b.irr_;
    r.disc_ = d;
    r.normalize();
    return r;
}

FieldElem operator-(const FieldElem& a, const FieldElem& b) {
    long d = merged_disc(a, b);
    FieldElem r;
    r.rat_ = a.rat_ - b.rat_;
    r.irr_ = a.irr_ - b.irr_;
    r.disc_ = d;
    r.normalize();
    return r;
}

FieldElem operator*(const FieldElem& a, const FieldElem& b) {
    long d = merged_disc(a, b);
    FieldElem r;
    r.rat_ = a.rat_ * b.rat_;
    if (d != 0) r.rat_ += a.irr_ * b.irr_ * d;
    r.irr_ = a.rat_ * b.irr_ + a.irr_ * b.rat_;
    r.disc_ = d;
    r.normalize();
    return r;
}

FieldElem FieldElem::inverse() const {
    if (is_zero()) throw DivisionByZeroError("division by zero field element");
    if (disc_ == 0) {
        FieldElem r;
        r.rat_ = 1 / rat_;
        return r;
    }
    // 1/(a+b*sqrt(d)) = (a - b*sqrt(d)) / (a^2 - d*b^2); norm nonzero since
    // sqrt(d) is irrational
    Rational norm = rat_ * rat_ - irr_ * irr_ * disc_;
    FieldElem r;
    r.rat_ = rat_ / norm;
    r.irr_ = -irr_ / norm;
    r.disc_ = disc_;
    r.normalize();
    return r;
}

FieldElem operator/(const FieldElem& a, const FieldElem& b) {
    return a * b.inverse();
}

FieldElem FieldElem::operator-() const {
    FieldElem r;
    r.rat_ = -rat_;
    r.irr_ = -irr_;
    r.disc_ = disc_;
    r.normalize();
    return r;
}

FieldElem FieldElem::conjugate() const {
    FieldElem r;
    r.rat_ = rat_;
    r.irr_ = -irr_;
    r.disc_ = disc_;
    r.normalize();
    return r;
}

bool operator==(const FieldElem& a, const FieldElem& b) {
    return a.rat_ == b.rat_ && a.irr_ == b.irr_ && a.disc_ == b.disc_;
}

int FieldElem::sign() const {
    int sr = sgn(rat_);
    int si = sgn(irr_);
    if (si == 0) return sr;
    if (sr == 0) return si;
    if (sr == si) return sr;
    // opposite signs: |a| vs |b|*sqrt(d) decided by a^2 vs d*b^2
    int c = cmp(rat_ * rat_, irr_ * irr_ * disc_);
    if (c == 0) return 0;  // unreachable for square-free d
    return c > 0 ? sr : si;
}

int sign_of(const FieldElem& a) { return a.sign(); }

FieldElem FieldElem::abs() const { return sign() < 0 ? -*this : *this; }

int compare(const FieldElem& a, const FieldElem& b) {
    return (a - b).sign();
}

Integer FieldElem::floor() const {
    if (disc_ == 0) {
        Integer f;
        mpz_fdiv_q(f.get_mpz_t(), rat_.get_num_mpz_t(), rat_.get_den_mpz_t());
        return f;
    }
    RatBall ball = to_ball(32);
    Integer lo(floor_rational(ball.mid - ball.rad).get_num());
    Integer hi(floor_rational(ball.mid + ball.rad).get_num());
    for (Integer n = lo; n <= hi; ++n) {
        FieldElem nn = FieldElem::rational(Rational(n));
        if ((*this - nn).sign() >= 0 && (*this - nn - FieldElem::integer(1)).sign() < 0)
            return n;
    }
    throw Error("floor enclosure failed");  // unreachable
}

RatBall FieldElem::to_ball(int precision_bits) const {
    if (precision_bits < 24) throw Error("precision_bits must be >= 24");
    if (disc_ == 0) return RatBall{rat_, Rational(0)};
    long k = precision_bits + 8 + std::max<long>(0, log2_upper(irr_));
    Integer s = sqrt_scaled_floor(disc_, k);
    Rational lo_root(s);
    lo_root /= pow2(k).get_num();
    Rational hi_root = lo_root + pow2(-k);
    Rational v1 = rat_ + irr_ * lo_root;
    Rational v2 = rat_ + irr_ * hi_root;
    if (v1 > v2) std::swap(v1, v2);
    // rad = |irr| * 2^-(k+1) <= 2^-(precision_bits+7)
    return RatBall{(v1 + v2) / 2, (v2 - v1) / 2};
}

double FieldElem::to_double() const {
    if (disc_ == 0) return rat_.get_d();
    return to_ball(64).mid.get_d();
}

std::string FieldElem::str() const {
    if (disc_ == 0) return rational_string(rat_);
    std::string s;
    if (sgn(rat_) != 0) s += rational_string(rat_);
    if (sgn(irr_) >= 0 && !s.empty()) s += "+";
    s += rational_string(irr_) + "*sqrt(" + std::to_string(disc_) + ")";
    return s;
}

FieldElem parse_field_elem(const std::string& text, long disc_hint) {
    std::string s = text;
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
            s.end());
    if (s.empty()) throw ParseError("empty field element literal");

    // split into terms at top-level +/- (skip a leading sign)
    std::vector<std::string> terms;
    size_t start = 0;
    for (size_t i = 1; i < s.size(); ++i) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != '/' && s[i - 1] != '+' && s[i - 1] != '-') {
            terms.push_back(s.substr(start, i - start));
            start = i;
        }
    }
    terms.push_back(s.substr(start));

    Rational rat(0), irr(0);
    long disc = 0;
    for (std::string term : terms) {
        int sign = 1;
        if (!term.empty() && (term[0] == '+' || term[0] == '-')) {
            if (term[0] == '-') sign = -1;
            term = term.substr(1);
        }
        auto pos = term.find("sqrt");
        if (pos == std::string::npos) {
            rat += sign * parse_rational(term);
            continue;
        }
        std::string coef_text = term.substr(0, pos);
        if (!coef_text.empty() && coef_text.back() == '*') coef_text.pop_back();
        Rational coef = coef_text.empty() ? Rational(1) : parse_rational(coef_text);
        std::string rad_text = term.substr(pos + 4);
        if (!rad_text.empty() && rad_text.front() == '(') {
            if (rad_text.back() != ')') throw ParseError("unbalanced sqrt(...) in '" + text + "'");
            rad_text = rad_text.substr(1, rad_text.size() - 2);
        }
        long d = rad_text.empty() ? disc_hint : std::stol(rad_text);
        if (disc != 0 && d != disc)
            throw ParseError("mixed radicals in field element literal: '" + text + "'");
        disc = d;
        irr += sign * coef;
    }
    if (sgn(irr) == 0) return FieldElem::rational(rat);
    return FieldElem(rat, irr, disc);
}

double ComplexBall::rad_d() const {
    return re.rad_d() + im.rad_d();
}

Phase::Phase(const FieldElem& t) : t_(t) {
    Rational r = t_.rat();
    r -= floor_rational(r);
    t_ = FieldElem(r, t_.irr(), t_.disc());
}

Phase half_phase() { return Phase(Rational(1, 2)); }

namespace {

// exact dyadic rational from an mpfr value
Rational mpfr_to_rational(mpfr_srcptr x) {
    if (mpfr_zero_p(x)) return Rational(0);
    Integer mant;
    mpfr_exp_t e = mpfr_get_z_2exp(mant.get_mpz_t(), x);
    Rational r(mant);
    return r * pow2(static_cast<long>(e));
}

} // namespace

ComplexBall Phase::value(int precision_bits) const {
    // exact reduction of t mod 1 keeps the mpfr argument in [0,1); the extra
    // working bits absorb the cancellation between rat and irr*sqrt(d)
    FieldElem tf = t_ - FieldElem::rational(Rational(t_.floor()));
    long slack_bits = std::max<long>(0, log2_upper(tf.irr())) + 8;
    long prec = precision_bits + 48 + slack_bits;

    mpfr_t root, arg, pi, c, s;
    mpfr_inits2(prec, root, arg, pi, c, s, static_cast<mpfr_ptr>(nullptr));
    if (tf.disc() != 0) {
        mpfr_sqrt_ui(root, static_cast<unsigned long>(tf.disc()), MPFR_RNDN);
        mpfr_mul_q(arg, root, tf.irr().get_mpq_t(), MPFR_RNDN);
        mpfr_add_q(arg, arg, tf.rat().get_mpq_t(), MPFR_RNDN);
    } else {
        mpfr_set_q(arg, tf.rat().get_mpq_t(), MPFR_RNDN);
    }

    mpfr_const_pi(pi, MPFR_RNDN);
    mpfr_mul(arg, arg, pi, MPFR_RNDN);
    mpfr_mul_ui(arg, arg, 2, MPFR_RNDN);
    mpfr_sin_cos(s, c, arg, MPFR_RNDN);

    Rational re = mpfr_to_rational(c);
    Rational im = mpfr_to_rational(s);
    mpfr_clears(root, arg, pi, c, s, static_cast<mpfr_ptr>(nullptr));

    // correctly rounded steps; 2*pi Lipschitz transfer of the argument error
    // keeps the total under 2^-(precision_bits+16)
    Rational rad = pow2(-(precision_bits + 32));
    return ComplexBall{RatBall{re, rad}, RatBall{im, rad}};
}

std::complex<double> Phase::to_complex() const {
    ComplexBall b = value(53);
    return b.to_complex();
}

} // namespace qclat
