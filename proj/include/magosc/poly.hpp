#ifndef MAGOSC_POLY_HPP
#define MAGOSC_POLY_HPP

#include <magosc/qw.hpp>

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace magosc {

class degree_limit_error : public std::runtime_error {
public:
    explicit degree_limit_error(int degree)
        : std::runtime_error("polynomial degree limit exceeded: " + std::to_string(degree)),
          degree(degree) {}
    int degree;
};

// phase-space variable index; order fixed for the monomial term order
enum class Var : int { x = 0, y = 1, z = 2, p1 = 3, p2 = 4, p3 = 5 };

constexpr std::array<Var, 6> kAllVars = {Var::x, Var::y, Var::z, Var::p1, Var::p2, Var::p3};

inline const char* var_name(Var v) {
    static const char* names[6] = {"x", "y", "z", "p1", "p2", "p3"};
    return names[static_cast<int>(v)];
}

struct Monomial {
    std::array<std::uint8_t, 6> e{};

    int total_degree() const {
        int d = 0;
        for (auto k : e) d += k;
        return d;
    }
    // degree in (p1, p2, p3) only
    int momentum_degree() const { return e[3] + e[4] + e[5]; }

    bool operator==(const Monomial& o) const { return e == o.e; }
};

// graded lexicographic: total degree first, ties by exponent tuple (x,y,z,p1,p2,p3)
inline bool grlex_less(const Monomial& a, const Monomial& b) {
    const int da = a.total_degree(), db = b.total_degree();
    if (da != db) return da < db;
    return a.e < b.e;
}

struct GrlexGreater {
    bool operator()(const Monomial& a, const Monomial& b) const { return grlex_less(b, a); }
};

/*
 * Sparse multivariate polynomial over Q(w) in the six canonical phase-space
 * variables. Terms are stored leading-first in graded lex order with no zero
 * coefficients, so the representation is canonical and iteration order is
 * deterministic.
 */
class PhasePoly {
public:
    static constexpr int kDegreeCap = 64;

    using TermMap = std::map<Monomial, QwScalar, GrlexGreater>;

    explicit PhasePoly(Rational rho) : rho_(std::move(rho)) {
        if (rho_ <= 0) throw std::domain_error("PhasePoly: rho must be positive");
    }

    static PhasePoly zero(const Rational& rho) { return PhasePoly(rho); }

    static PhasePoly constant(const QwScalar& c) {
        PhasePoly p(c.rho());
        if (!c.is_zero()) p.terms_.emplace(Monomial{}, c);
        return p;
    }

    static PhasePoly variable(Var v, const Rational& rho) {
        PhasePoly p(rho);
        Monomial m;
        m.e[static_cast<int>(v)] = 1;
        p.terms_.emplace(m, QwScalar::one(rho));
        return p;
    }

    const Rational& rho() const { return rho_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    int total_degree() const {
        if (is_zero()) throw std::domain_error("degree of zero polynomial");
        return terms_.begin()->first.total_degree();
    }

    int momentum_degree() const {
        if (is_zero()) throw std::domain_error("momentum degree of zero polynomial");
        int d = 0;
        for (const auto& [mono, c] : terms_) d = std::max(d, mono.momentum_degree());
        return d;
    }

    // terms attaining the maximal momentum degree
    PhasePoly momentum_leading() const {
        const int d = momentum_degree();
        PhasePoly out(rho_);
        for (const auto& [mono, c] : terms_)
            if (mono.momentum_degree() == d) out.terms_.emplace(mono, c);
        return out;
    }

    // leading term in graded lex order
    const std::pair<const Monomial, QwScalar>& leading() const {
        if (is_zero()) throw std::domain_error("leading term of zero polynomial");
        return *terms_.begin();
    }

    PhasePoly operator-() const {
        PhasePoly out(rho_);
        for (const auto& [mono, c] : terms_) out.terms_.emplace(mono, -c);
        return out;
    }

    PhasePoly operator+(const PhasePoly& o) const {
        check(o);
        PhasePoly out = *this;
        for (const auto& [mono, c] : o.terms_) out.add_term(mono, c);
        return out;
    }

    PhasePoly operator-(const PhasePoly& o) const {
        check(o);
        PhasePoly out = *this;
        for (const auto& [mono, c] : o.terms_) out.add_term(mono, -c);
        return out;
    }

    PhasePoly operator*(const PhasePoly& o) const {
        check(o);
        PhasePoly out(rho_);
        for (const auto& [ma, ca] : terms_) {
            for (const auto& [mb, cb] : o.terms_) {
                Monomial m;
                int deg = 0;
                for (int i = 0; i < 6; ++i) {
                    m.e[i] = static_cast<std::uint8_t>(ma.e[i] + mb.e[i]);
                    deg += m.e[i];
                }
                if (deg > kDegreeCap) throw degree_limit_error(deg);
                out.add_term(m, ca * cb);
            }
        }
        return out;
    }

    PhasePoly operator*(const QwScalar& s) const {
        PhasePoly out(rho_);
        if (s.is_zero()) return out;
        for (const auto& [mono, c] : terms_) out.terms_.emplace(mono, c * s);
        return out;
    }

    PhasePoly& operator+=(const PhasePoly& o) { return *this = *this + o; }
    PhasePoly& operator-=(const PhasePoly& o) { return *this = *this - o; }
    PhasePoly& operator*=(const PhasePoly& o) { return *this = *this * o; }

    PhasePoly pow(unsigned k) const {
        PhasePoly acc = constant(QwScalar::one(rho_));
        PhasePoly base = *this;
        while (k) {
            if (k & 1u) acc *= base;
            k >>= 1u;
            if (k) base *= base;
        }
        return acc;
    }

    bool operator==(const PhasePoly& o) const { return rho_ == o.rho_ && terms_ == o.terms_; }
    bool operator!=(const PhasePoly& o) const { return !(*this == o); }

    PhasePoly derivative(Var v) const {
        const int i = static_cast<int>(v);
        PhasePoly out(rho_);
        for (const auto& [mono, c] : terms_) {
            if (mono.e[i] == 0) continue;
            Monomial m = mono;
            m.e[i] -= 1;
            out.add_term(m, c * QwScalar::rational(mono.e[i], rho_));
        }
        return out;
    }

    // substitute var -> replacement; replacement must have total degree <= 1
    PhasePoly substitute_linear(Var v, const PhasePoly& replacement) const {
        check(replacement);
        if (!replacement.is_zero() && replacement.total_degree() > 1)
            throw std::domain_error("substitute_linear: replacement degree > 1");
        return substitute(v, replacement);
    }

    // chi depends on coordinates only; applies p_j -> p_j - dchi/dx_j
    PhasePoly gauge_transform(const PhasePoly& chi) const {
        check(chi);
        for (const auto& [mono, c] : chi.terms_)
            if (mono.momentum_degree() != 0)
                throw std::domain_error("gauge_transform: chi must depend on coordinates only");
        PhasePoly out = *this;
        for (int j = 0; j < 3; ++j) {
            const Var pj = static_cast<Var>(3 + j);
            const Var xj = static_cast<Var>(j);
            out = out.substitute(pj, variable(pj, rho_) - chi.derivative(xj));
        }
        return out;
    }

    QwScalar evaluate(const std::array<Rational, 6>& pt) const {
        // powers of the point coordinates, grown on demand
        std::array<std::vector<Rational>, 6> pows;
        for (int i = 0; i < 6; ++i) pows[i].push_back(1);
        QwScalar acc = QwScalar::zero(rho_);
        for (const auto& [mono, c] : terms_) {
            Rational v = 1;
            for (int i = 0; i < 6; ++i) {
                while (pows[i].size() <= mono.e[i]) pows[i].push_back(pows[i].back() * pt[i]);
                v *= pows[i][mono.e[i]];
            }
            acc += c * QwScalar::rational(v, rho_);
        }
        return acc;
    }

    double evaluate(const std::array<double, 6>& pt) const {
        double acc = 0.0;
        for (const auto& [mono, c] : terms_) {
            double v = c.to_double();
            for (int i = 0; i < 6; ++i)
                for (int k = 0; k < mono.e[i]; ++k) v *= pt[i];
            acc += v;
        }
        return acc;
    }

    std::string str() const {
        if (is_zero()) return "0";
        std::string s;
        for (const auto& [mono, c] : terms_) {
            if (!s.empty()) s += " + ";
            s += "(" + format_rational(c.a());
            if (c.b() != 0) s += " + " + format_rational(c.b()) + "*w";
            s += ")";
            for (int i = 0; i < 6; ++i) {
                if (mono.e[i] == 0) continue;
                s += "*";
                s += var_name(static_cast<Var>(i));
                if (mono.e[i] > 1) s += "^" + std::to_string(mono.e[i]);
            }
        }
        return s;
    }

private:
    void check(const PhasePoly& o) const {
        if (rho_ != o.rho_)
            throw field_mismatch_error("PhasePoly: mixing polynomials over different fields");
    }

    void add_term(const Monomial& m, const QwScalar& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    PhasePoly substitute(Var v, const PhasePoly& replacement) const {
        const int i = static_cast<int>(v);
        PhasePoly out(rho_);
        std::vector<PhasePoly> rpow{constant(QwScalar::one(rho_))};
        for (const auto& [mono, c] : terms_) {
            while (rpow.size() <= mono.e[i]) rpow.push_back(rpow.back() * replacement);
            Monomial rest = mono;
            rest.e[i] = 0;
            PhasePoly term(rho_);
            term.terms_.emplace(rest, c);
            out += term * rpow[mono.e[i]];
        }
        return out;
    }

    Rational rho_;
    TermMap terms_;
};

inline PhasePoly operator*(const QwScalar& s, const PhasePoly& p) { return p * s; }

// canonical bracket {f,g} = sum_i df/dx_i dg/dp_i - df/dp_i dg/dx_i
inline PhasePoly poisson_bracket(const PhasePoly& f, const PhasePoly& g) {
    PhasePoly out = PhasePoly::zero(f.rho());
    for (int i = 0; i < 3; ++i) {
        const Var q = static_cast<Var>(i);
        const Var p = static_cast<Var>(3 + i);
        out += f.derivative(q) * g.derivative(p) - f.derivative(p) * g.derivative(q);
    }
    return out;
}

}  // namespace magosc

#endif
