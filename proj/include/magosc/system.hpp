#ifndef MAGOSC_SYSTEM_HPP
#define MAGOSC_SYSTEM_HPP

#include <magosc/linalg.hpp>
#include <magosc/poly.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace magosc {

// a claimed exact identity failed to hold; always fatal
class invariant_violation_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/*
 * Charged particle in the constant field B = (-O1, O2, 0) with the harmonic
 * potential W = O1*O2/(2S) (Sx - y)^2, S = m^2 O1 / (n^2 O2). All derived
 * constants live in Q(w), w^2 = rho = O1^2/n^2 + O2^2/m^2; the two decoupled
 * oscillation frequencies are m*w and n*w, so every orbit closes with common
 * period 2*pi/w.
 */
struct SystemParams {
    Rational omega1;  // O1 > 0
    Rational omega2;  // O2 > 0
    int m = 1;
    int n = 1;

    Rational S;
    Rational kappa;  // m/n
    Rational rho;    // w^2
    QwScalar freq1;  // m*w
    QwScalar freq2;  // n*w
    QwScalar tau;    // m*n*w  (the tau of the m=3, n=2 worked example)
    double period = 0.0;
};

inline SystemParams derive_params(const Rational& omega1, const Rational& omega2, int m, int n) {
    if (omega1 <= 0 || omega2 <= 0)
        throw std::domain_error("derive_params: Omega1 and Omega2 must be positive");
    if (m < 1 || n < 1) throw std::domain_error("derive_params: m and n must be positive");
    const int g = std::gcd(m, n);
    if (g != 1)
        throw std::domain_error("derive_params: reduce m/n to lowest terms (" +
                                std::to_string(m / g) + "/" + std::to_string(n / g) + ")");
    SystemParams p;
    p.omega1 = omega1;
    p.omega2 = omega2;
    p.m = m;
    p.n = n;
    p.kappa = Rational(m, n);
    p.S = Rational(m * m) * omega1 / (Rational(n * n) * omega2);
    p.rho = omega1 * omega1 / (n * n) + omega2 * omega2 / (m * m);
    p.freq1 = QwScalar::root_multiple(m, p.rho);
    p.freq2 = QwScalar::root_multiple(n, p.rho);
    p.tau = QwScalar::root_multiple(m * n, p.rho);
    p.period = 2.0 * std::numbers::pi / std::sqrt(to_double(p.rho));
    return p;
}

struct SystemPolys {
    PhasePoly W;   // effective potential
    PhasePoly A3;  // third vector potential component; A = (0, 0, A3)
    PhasePoly H;
};

inline PhasePoly coordinate(Var v, const SystemParams& p) { return PhasePoly::variable(v, p.rho); }

inline PhasePoly constant(const Rational& c, const SystemParams& p) {
    return PhasePoly::constant(QwScalar::rational(c, p.rho));
}

inline SystemPolys build_system(const SystemParams& p) {
    const PhasePoly x = coordinate(Var::x, p), y = coordinate(Var::y, p);
    const PhasePoly p1 = coordinate(Var::p1, p), p2 = coordinate(Var::p2, p),
                    p3 = coordinate(Var::p3, p);
    const PhasePoly sx_y = constant(p.S, p) * x - y;
    SystemPolys sys{PhasePoly::zero(p.rho), PhasePoly::zero(p.rho), PhasePoly::zero(p.rho)};
    sys.W = constant(p.omega1 * p.omega2 / (2 * p.S), p) * sx_y * sx_y;
    sys.A3 = -(constant(p.omega2, p) * x) - constant(p.omega1, p) * y;
    const PhasePoly p3A = p3 + sys.A3;
    const Rational half(1, 2);
    sys.H = constant(half, p) * (p1 * p1 + p2 * p2 + p3A * p3A) + sys.W;
    return sys;
}

struct FirstIntegrals {
    PhasePoly X0, X1, X2, X3;
};

inline FirstIntegrals build_first_integrals(const SystemParams& p) {
    const PhasePoly x = coordinate(Var::x, p), y = coordinate(Var::y, p),
                    z = coordinate(Var::z, p);
    const PhasePoly p1 = coordinate(Var::p1, p), p2 = coordinate(Var::p2, p),
                    p3 = coordinate(Var::p3, p);
    const PhasePoly A3 = -(constant(p.omega2, p) * x) - constant(p.omega1, p) * y;
    const PhasePoly p3A = p3 + A3;
    const Rational O1 = p.omega1, O2 = p.omega2;
    FirstIntegrals fi{PhasePoly::zero(p.rho), PhasePoly::zero(p.rho), PhasePoly::zero(p.rho),
                      PhasePoly::zero(p.rho)};
    // in this gauge X0 collapses to p3
    fi.X0 = p3A + constant(O2, p) * x + constant(O1, p) * y;
    fi.X1 = p1 * p1 - constant(2 * O2, p) * x * p3A - constant(O2 * O2, p) * x * x +
            constant(O1 * O2, p) * x * (constant(p.S, p) * x - constant(Rational(2), p) * y);
    fi.X2 = p2 * p2 - constant(2 * O1, p) * y * p3A - constant(O1 * O1, p) * y * y +
            constant(O1 * O2 / p.S, p) * y * (y - constant(2 * p.S, p) * x);
    fi.X3 = p1 + constant(p.S, p) * p2 - constant(p.S * O1 + O2, p) * z;
    return fi;
}

// ---------------------------------------------------------------------------
// Chebyshev polynomials via the binomial sums
//   T_n(a) = sum_k C(n,2k)   a^{n-2k} (a^2-1)^k
//   U_n(a) = sum_k C(n+1,2k+1) a^{n-2k} (a^2-1)^k
// returned as coefficient lists, index = power of a.

inline Rational binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    Int num = 1, den = 1;
    for (int i = 0; i < k; ++i) {
        num *= n - i;
        den *= i + 1;
    }
    return Rational(num, den);
}

namespace detail {

using UniPoly = std::vector<Rational>;  // dense, index = power

inline UniPoly uni_mul(const UniPoly& a, const UniPoly& b) {
    if (a.empty() || b.empty()) return {};
    UniPoly out(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

inline void uni_add_scaled(UniPoly& a, const UniPoly& b, const Rational& s) {
    if (a.size() < b.size()) a.resize(b.size(), Rational(0));
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i] * s;
}

inline UniPoly chebyshev_sum(int degree, bool second_kind) {
    UniPoly out;
    UniPoly a2m1 = {Rational(-1), Rational(0), Rational(1)};  // a^2 - 1
    for (int k = 0; 2 * k <= degree; ++k) {
        UniPoly term = {Rational(1)};
        for (int i = 0; i < degree - 2 * k; ++i) term = uni_mul(term, {Rational(0), Rational(1)});
        for (int i = 0; i < k; ++i) term = uni_mul(term, a2m1);
        const Rational c =
            second_kind ? binomial(degree + 1, 2 * k + 1) : binomial(degree, 2 * k);
        uni_add_scaled(out, term, c);
    }
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
}

}  // namespace detail

inline std::vector<Rational> chebyshev_t(int degree) {
    if (degree < 0) throw std::domain_error("chebyshev_t: negative degree");
    return detail::chebyshev_sum(degree, false);
}

inline std::vector<Rational> chebyshev_u(int degree) {
    if (degree < 0) throw std::domain_error("chebyshev_u: negative degree");
    return detail::chebyshev_sum(degree, true);
}

// ---------------------------------------------------------------------------
// 2-dof anisotropic oscillator invariants. The shifted variables (X, Y, P1,
// P2) are embedded in the six-variable ring as (x, y, p1, p2); p3 plays the
// role of a parameter and z never appears.

struct OscillatorInvariants {
    PhasePoly I1, I2, I3, I4;
};

namespace detail {

struct ComplexPoly {
    PhasePoly re, im;

    ComplexPoly operator*(const ComplexPoly& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    ComplexPoly conj() const { return {re, -im}; }

    ComplexPoly pow(unsigned k) const {
        ComplexPoly acc{PhasePoly::constant(QwScalar::one(re.rho())), PhasePoly::zero(re.rho())};
        ComplexPoly base = *this;
        while (k) {
            if (k & 1u) acc = acc * base;
            k >>= 1u;
            if (k) base = base * base;
        }
        return acc;
    }
};

}  // namespace detail

// H2 = (P1^2 + P2^2)/2 + w^2 (m^2 X^2 + n^2 Y^2)/2, in the embedding
inline PhasePoly two_dof_hamiltonian(const SystemParams& p) {
    const PhasePoly x = coordinate(Var::x, p), y = coordinate(Var::y, p);
    const PhasePoly p1 = coordinate(Var::p1, p), p2 = coordinate(Var::p2, p);
    const Rational half(1, 2);
    return constant(half, p) * (p1 * p1 + p2 * p2) +
           constant(half * p.rho, p) *
               (constant(Rational(p.m * p.m), p) * x * x +
                constant(Rational(p.n * p.n), p) * y * y);
}

// I3 = Re(z1^n zbar2^m), I4 = Im(z1^n zbar2^m) by complex-pair powering,
// z1 = i P1 + m w X, z2 = i P2 + n w Y.
inline OscillatorInvariants build_oscillator_invariants(const SystemParams& p) {
    const PhasePoly x = coordinate(Var::x, p), y = coordinate(Var::y, p);
    const PhasePoly p1 = coordinate(Var::p1, p), p2 = coordinate(Var::p2, p);
    const detail::ComplexPoly z1{x * p.freq1, p1};
    const detail::ComplexPoly z2{y * p.freq2, p2};
    const detail::ComplexPoly prod = z1.pow(p.n) * z2.pow(p.m).conj();
    OscillatorInvariants inv{PhasePoly::zero(p.rho), PhasePoly::zero(p.rho), prod.re, prod.im};
    inv.I1 = p1 * p1 + constant(Rational(p.m * p.m) * p.rho, p) * x * x;
    inv.I2 = p2 * p2 + constant(Rational(p.n * p.n) * p.rho, p) * y * y;
    return inv;
}

// independent route to I3/I4: the explicit binomial double sums obtained by
// expanding Re/Im of z1^n and z2^m separately
inline std::pair<PhasePoly, PhasePoly> oscillator_i34_series(const SystemParams& p) {
    const PhasePoly x = coordinate(Var::x, p), y = coordinate(Var::y, p);
    const PhasePoly p1 = coordinate(Var::p1, p), p2 = coordinate(Var::p2, p);
    const PhasePoly mwX = x * p.freq1, nwY = y * p.freq2;

    auto re_sum = [&](int deg, const PhasePoly& q, const PhasePoly& mom) {
        PhasePoly acc = PhasePoly::zero(p.rho);
        for (int k = 0; 2 * k <= deg; ++k) {
            const Rational c = (k % 2 ? -1 : 1) * binomial(deg, 2 * k);
            acc += constant(c, p) * q.pow(deg - 2 * k) * mom.pow(2 * k);
        }
        return acc;
    };
    auto im_sum = [&](int deg, const PhasePoly& q, const PhasePoly& mom) {
        PhasePoly acc = PhasePoly::zero(p.rho);
        for (int k = 0; 2 * k + 1 <= deg; ++k) {
            const Rational c = (k % 2 ? -1 : 1) * binomial(deg, 2 * k + 1);
            acc += constant(c, p) * q.pow(deg - 2 * k - 1) * mom.pow(2 * k + 1);
        }
        return acc;
    };

    const PhasePoly re1 = re_sum(p.n, mwX, p1), im1 = im_sum(p.n, mwX, p1);
    const PhasePoly re2 = re_sum(p.m, nwY, p2), im2 = im_sum(p.m, nwY, p2);
    PhasePoly i3 = im1 * im2 + re1 * re2;
    PhasePoly i4 = im1 * re2 - re1 * im2;
    return {std::move(i3), std::move(i4)};
}

// ---------------------------------------------------------------------------
// lifting to the full system: invert the shift X = x - n^2 O2 p3 / D,
// Y = y - m^2 O1 p3 / D with D = n^2 O2^2 + m^2 O1^2 (p3 is conserved in the
// fixed gauge, so the gauge covariant X0 appearing in the paper's shift is
// just p3 here)

struct HigherIntegrals {
    PhasePoly X4_raw, X5;
};

inline PhasePoly invert_shift(const PhasePoly& f, const SystemParams& p) {
    const Rational D = Rational(p.n * p.n) * p.omega2 * p.omega2 +
                       Rational(p.m * p.m) * p.omega1 * p.omega1;
    const PhasePoly p3 = coordinate(Var::p3, p);
    const PhasePoly x_rep =
        coordinate(Var::x, p) - constant(Rational(p.n * p.n) * p.omega2 / D, p) * p3;
    const PhasePoly y_rep =
        coordinate(Var::y, p) - constant(Rational(p.m * p.m) * p.omega1 / D, p) * p3;
    return f.substitute_linear(Var::x, x_rep).substitute_linear(Var::y, y_rep);
}

inline HigherIntegrals build_higher_integrals(const SystemParams& p) {
    const OscillatorInvariants inv = build_oscillator_invariants(p);
    return {invert_shift(inv.I3, p), invert_shift(inv.I4, p)};
}

// ---------------------------------------------------------------------------
// order reduction of X4

struct ReductionTerm {
    int k = 0;
    int j = 0;
    bool uses_g = false;  // candidate carries the X3^2-combination factor G
    QwScalar coefficient;
};

struct ReductionReport {
    std::vector<ReductionTerm> terms;
    QwScalar normalization;  // X4_reduced was divided by this
    int raw_momentum_degree = 0;
    int reduced_momentum_degree = 0;
};

namespace detail {

struct Candidate {
    int k, j;
    bool uses_g;
    PhasePoly poly;
};

inline std::vector<Candidate> reduction_candidates(const FirstIntegrals& fi,
                                                   const SystemParams& p) {
    const Rational O1 = p.omega1, O2 = p.omega2;
    const Rational k2 = p.kappa * p.kappa;
    // G has momentum-leading part 2 p1 p2
    const PhasePoly G = PhasePoly::constant(QwScalar::rational(O2 / (k2 * O1), p.rho)) *
                            (fi.X3 * fi.X3 - fi.X1) -
                        PhasePoly::constant(QwScalar::rational(k2 * O1 / O2, p.rho)) * fi.X2;
    std::vector<Candidate> out;
    const int total = p.m + p.n;
    for (int k = 0; 2 * k <= p.n; ++k)
        for (int j = 0; 2 * j <= p.m; ++j) {
            const int e = total - 2 * k - 2 * j;
            if (e < 0) continue;
            out.push_back({k, j, false, fi.X0.pow(e) * fi.X1.pow(k) * fi.X2.pow(j)});
        }
    for (int k = 0; 2 * k + 1 <= p.n; ++k)
        for (int j = 0; 2 * j + 1 <= p.m; ++j) {
            const int e = total - 2 * (k + j + 1);
            if (e < 0) continue;
            out.push_back({k, j, true, fi.X0.pow(e) * fi.X1.pow(k) * fi.X2.pow(j) * G});
        }
    return out;
}

// match the degree-(m+n) momentum part monomial-by-monomial
inline std::optional<QwVector> solve_leading(const PhasePoly& target,
                                             const std::vector<Candidate>& cands,
                                             const SystemParams& p) {
    const PhasePoly lead = target.momentum_leading();
    std::vector<Monomial> monos;
    auto note = [&](const PhasePoly& q) {
        for (const auto& [mono, c] : q.terms())
            if (std::find(monos.begin(), monos.end(), mono) == monos.end())
                monos.push_back(mono);
    };
    note(lead);
    std::vector<PhasePoly> cand_leads;
    for (const auto& c : cands) {
        cand_leads.push_back(c.poly.momentum_leading());
        note(cand_leads.back());
    }
    QwMatrix a(monos.size(), QwVector(cands.size(), QwScalar::zero(p.rho)));
    QwVector b(monos.size(), QwScalar::zero(p.rho));
    auto coeff_of = [&](const PhasePoly& q, const Monomial& mono) {
        auto it = q.terms().find(mono);
        return it == q.terms().end() ? QwScalar::zero(p.rho) : it->second;
    };
    for (std::size_t r = 0; r < monos.size(); ++r) {
        b[r] = coeff_of(lead, monos[r]);
        for (std::size_t c = 0; c < cands.size(); ++c) a[r][c] = coeff_of(cand_leads[c], monos[r]);
    }
    return exact_solve(std::move(a), std::move(b), p.rho);
}

}  // namespace detail

inline std::pair<PhasePoly, ReductionReport> reduce_order(const PhasePoly& x4_raw,
                                                          const FirstIntegrals& fi,
                                                          const SystemParams& p) {
    ReductionReport report;
    report.normalization = QwScalar::one(p.rho);
    report.raw_momentum_degree = x4_raw.momentum_degree();
    if (report.raw_momentum_degree != p.m + p.n)
        throw std::domain_error("reduce_order: raw integral momentum degree is not m+n");
    const auto cands = detail::reduction_candidates(fi, p);
    const auto sol = detail::solve_leading(x4_raw, cands, p);
    if (!sol)
        throw invariant_violation_error(
            "reduce_order: leading part not spanned by X0/X1/X2/X3 combinations");
    PhasePoly reduced = x4_raw;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        if ((*sol)[i].is_zero()) continue;
        reduced -= cands[i].poly * (*sol)[i];
        report.terms.push_back({cands[i].k, cands[i].j, cands[i].uses_g, (*sol)[i]});
    }
    report.reduced_momentum_degree = reduced.momentum_degree();
    if (report.reduced_momentum_degree != p.m + p.n - 1)
        throw invariant_violation_error("reduce_order: reduction did not lower the order to m+n-1");
    // scale-free canonical form: unit coefficient on the graded-lex leading
    // monomial of the top momentum block
    report.normalization = reduced.momentum_leading().leading().second;
    reduced = reduced * report.normalization.inverse();
    return {std::move(reduced), std::move(report)};
}

struct X5ReductionAttempt {
    bool reducible = false;
};

// The leading monomials of X5 are jointly odd in (p1, p2) while every
// candidate's leading part is jointly even, so the solve must fail; a success
// would contradict the irreducibility of X5.
inline X5ReductionAttempt attempt_reduce_x5(const PhasePoly& x5, const FirstIntegrals& fi,
                                            const SystemParams& p) {
    if (x5.momentum_degree() != p.m + p.n)
        throw std::domain_error("attempt_reduce_x5: momentum degree is not m+n");
    const auto cands = detail::reduction_candidates(fi, p);
    const auto sol = detail::solve_leading(x5, cands, p);
    if (sol)
        throw invariant_violation_error(
            "attempt_reduce_x5: leading part unexpectedly reducible");
    return {false};
}

// ---------------------------------------------------------------------------

struct RotatedFrame {
    double omega_hat = 0.0;
    double b_hat = 0.0;
    double beta = 0.0;
};

// frame in which the potential acts along a single axis; the two oscillation
// frequencies recovered from (omega_hat, b_hat, beta) must reproduce m*w, n*w
inline RotatedFrame rotated_frame(const SystemParams& p) {
    const double O1 = to_double(p.omega1), O2 = to_double(p.omega2);
    const double k2 = to_double(p.kappa) * to_double(p.kappa);
    RotatedFrame f;
    f.omega_hat = std::sqrt(k2 * O1 * O1 + O2 * O2 / k2);
    const double scale = std::sqrt(O2 * O2 + k2 * k2 * O1 * O1);
    const double b1 = (-k2 * O1 * O1 - O2 * O2) / scale;
    const double b2 = O1 * O2 * (k2 - 1.0) / scale;
    f.b_hat = std::hypot(b1, b2);
    f.beta = std::atan2(b2, b1);
    return f;
}

// the two square-root frequency formulas; first >= second by construction
inline std::pair<double, double> rotated_frame_frequencies(const RotatedFrame& f) {
    const double s = f.b_hat * f.b_hat + f.omega_hat * f.omega_hat;
    const double c = std::cos(f.beta);
    const double disc = std::sqrt(s * s - 4.0 * f.b_hat * f.b_hat * f.omega_hat * f.omega_hat * c * c);
    return {std::sqrt((s + disc) / 2.0), std::sqrt((s - disc) / 2.0)};
}

// ---------------------------------------------------------------------------

struct IntegralSet {
    SystemParams params;
    PhasePoly H, X0, X1, X2, X3, X4_raw, X4_reduced, X5;
    ReductionReport reduction;

    IntegralSet(const SystemParams& p, SystemPolys sys, FirstIntegrals fi, HigherIntegrals hi,
                PhasePoly reduced, ReductionReport rep)
        : params(p),
          H(std::move(sys.H)),
          X0(std::move(fi.X0)),
          X1(std::move(fi.X1)),
          X2(std::move(fi.X2)),
          X3(std::move(fi.X3)),
          X4_raw(std::move(hi.X4_raw)),
          X4_reduced(std::move(reduced)),
          X5(std::move(hi.X5)),
          reduction(std::move(rep)) {}

    std::vector<std::pair<std::string, const PhasePoly*>> named() const {
        return {{"H", &H},           {"X0", &X0},         {"X1", &X1},
                {"X2", &X2},         {"X3", &X3},         {"X4_raw", &X4_raw},
                {"X4_reduced", &X4_reduced}, {"X5", &X5}};
    }
};

inline IntegralSet build_integral_set(const SystemParams& p) {
    SystemPolys sys = build_system(p);
    FirstIntegrals fi = build_first_integrals(p);
    HigherIntegrals hi = build_higher_integrals(p);
    auto [reduced, report] = reduce_order(hi.X4_raw, fi, p);
    return IntegralSet(p, std::move(sys), std::move(fi), std::move(hi), std::move(reduced),
                       std::move(report));
}

}  // namespace magosc

#endif
