#ifndef MAGOSC_QW_HPP
#define MAGOSC_QW_HPP

#include <magosc/rational.hpp>

#include <cmath>
#include <stdexcept>
#include <utility>

namespace magosc {

class field_mismatch_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/*
 * Element a + b*w of the real quadratic field Q(w), w^2 = rho for a fixed
 * positive rational rho.
 *
 * If rho is a perfect rational square r^2 the extension is degenerate and the
 * element collapses to the rational a + b*r at construction time, so b == 0
 * holds for every element of a degenerate field. That keeps the inversion
 * denominator a^2 - b^2*rho nonzero for every nonzero element: it can only
 * vanish when rho = (a/b)^2 is a perfect square, which the collapse rules out.
 *
 * Elements of different fields (different rho) never combine; binary
 * operations throw field_mismatch_error on a rho mismatch.
 */
class QwScalar {
public:
    QwScalar() : rho_(1) {}

    QwScalar(Rational a, Rational b, Rational rho)
        : a_(std::move(a)), b_(std::move(b)), rho_(std::move(rho)) {
        if (rho_ <= 0) throw std::domain_error("QwScalar: rho must be positive");
        if (b_ != 0) {
            if (auto r = exact_sqrt(rho_)) {
                a_ += b_ * *r;
                b_ = 0;
            }
        }
    }

    static QwScalar zero(const Rational& rho) { return QwScalar(0, 0, rho); }
    static QwScalar one(const Rational& rho) { return QwScalar(1, 0, rho); }
    static QwScalar rational(Rational a, const Rational& rho) {
        return QwScalar(std::move(a), 0, rho);
    }
    // b*w; folds if the field is degenerate.
    static QwScalar root_multiple(Rational b, const Rational& rho) {
        return QwScalar(0, std::move(b), rho);
    }

    const Rational& a() const { return a_; }
    const Rational& b() const { return b_; }
    const Rational& rho() const { return rho_; }

    bool is_zero() const { return a_ == 0 && b_ == 0; }
    bool is_rational() const { return b_ == 0; }

    QwScalar operator-() const { return raw(-a_, -b_, rho_); }

    QwScalar operator+(const QwScalar& o) const {
        check(o);
        return raw(a_ + o.a_, b_ + o.b_, rho_);
    }
    QwScalar operator-(const QwScalar& o) const {
        check(o);
        return raw(a_ - o.a_, b_ - o.b_, rho_);
    }
    QwScalar operator*(const QwScalar& o) const {
        check(o);
        return raw(a_ * o.a_ + b_ * o.b_ * rho_, a_ * o.b_ + b_ * o.a_, rho_);
    }
    QwScalar operator/(const QwScalar& o) const { return *this * o.inverse(); }

    QwScalar& operator+=(const QwScalar& o) { return *this = *this + o; }
    QwScalar& operator-=(const QwScalar& o) { return *this = *this - o; }
    QwScalar& operator*=(const QwScalar& o) { return *this = *this * o; }
    QwScalar& operator/=(const QwScalar& o) { return *this = *this / o; }

    QwScalar inverse() const {
        if (is_zero()) throw std::domain_error("QwScalar: division by zero");
        Rational d = a_ * a_ - b_ * b_ * rho_;
        // nonzero by the degenerate-field collapse invariant
        return raw(a_ / d, -b_ / d, rho_);
    }

    QwScalar conjugate() const { return raw(a_, -b_, rho_); }

    bool operator==(const QwScalar& o) const {
        return rho_ == o.rho_ && a_ == o.a_ && b_ == o.b_;
    }
    bool operator!=(const QwScalar& o) const { return !(*this == o); }

    // sign of a + b*sqrt(rho), decided exactly
    int sign() const {
        const int sa = a_ == 0 ? 0 : (a_ > 0 ? 1 : -1);
        const int sb = b_ == 0 ? 0 : (b_ > 0 ? 1 : -1);
        if (sb == 0) return sa;
        if (sa == 0) return sb;
        if (sa == sb) return sa;
        // opposite signs: compare a^2 against b^2*rho
        Rational lhs = a_ * a_, rhs = b_ * b_ * rho_;
        if (lhs == rhs) return 0;
        return (lhs > rhs) ? sa : sb;
    }

    double to_double() const {
        return magosc::to_double(a_) + magosc::to_double(b_) * std::sqrt(magosc::to_double(rho_));
    }

private:
    static QwScalar raw(Rational a, Rational b, Rational rho) {
        QwScalar s;
        s.a_ = std::move(a);
        s.b_ = std::move(b);
        s.rho_ = std::move(rho);
        return s;
    }

    void check(const QwScalar& o) const {
        if (rho_ != o.rho_)
            throw field_mismatch_error("QwScalar: mixing elements of different fields");
    }

    Rational a_, b_, rho_;
};

}  // namespace magosc

#endif
