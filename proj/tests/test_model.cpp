#include <magosc/system.hpp>

#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace magosc;
using magosc::testing::golden_x4_m3_n2;
using magosc::testing::random_rational;

namespace {

// the configuration grid exercised across the suite
const std::vector<std::pair<Rational, Rational>> kFields = {
    {Rational(1), Rational(1)}, {Rational(1), Rational(3, 2)}, {Rational(2), Rational(1, 3)}};
const std::vector<std::pair<int, int>> kRatios = {{1, 1}, {2, 1}, {3, 2}, {4, 3}, {5, 2}};

}  // namespace

TEST_CASE("derive_params worked examples") {
    SECTION("O1=1, O2=3/2, m=3, n=2") {
        const SystemParams p = derive_params(1, Rational(3, 2), 3, 2);
        CHECK(p.S == Rational(3, 2));
        CHECK(p.kappa == Rational(3, 2));
        CHECK(p.rho == Rational(1, 2));
        CHECK(p.freq1 == QwScalar::root_multiple(3, p.rho));
        CHECK(p.freq2 == QwScalar::root_multiple(2, p.rho));
        CHECK(p.tau * p.tau == QwScalar::rational(18, p.rho));  // 9 O1^2 + 4 O2^2
        CHECK(p.period == Catch::Approx(2.0 * std::numbers::pi * std::numbers::sqrt2).epsilon(1e-15));
    }
    SECTION("O1=1, O2=1, m=1, n=1") {
        const SystemParams p = derive_params(1, 1, 1, 1);
        CHECK(p.S == 1);
        CHECK(p.rho == 2);
    }
    SECTION("frequency squares are exact for the whole grid") {
        for (const auto& [O1, O2] : kFields)
            for (const auto& [m, n] : kRatios) {
                const SystemParams p = derive_params(O1, O2, m, n);
                CHECK(p.freq1 * p.freq1 == QwScalar::rational(m * m * p.rho, p.rho));
                CHECK(p.freq2 * p.freq2 == QwScalar::rational(n * n * p.rho, p.rho));
                CHECK(p.freq1 * p.freq1 - p.freq2 * p.freq2 ==
                      QwScalar::rational((m * m - n * n) * p.rho, p.rho));
            }
    }
    SECTION("guards") {
        CHECK_THROWS_WITH(derive_params(1, 1, 4, 2),
                          Catch::Matchers::ContainsSubstring("reduce m/n to lowest terms (2/1)"));
        CHECK_THROWS_AS(derive_params(0, 1, 1, 1), std::domain_error);
        CHECK_THROWS_AS(derive_params(1, Rational(-1, 2), 1, 1), std::domain_error);
        CHECK_THROWS_AS(derive_params(1, 1, 0, 1), std::domain_error);
    }
}

TEST_CASE("hamiltonian and potential") {
    SECTION("m=n=1, O1=O2=1") {
        const SystemParams p = derive_params(1, 1, 1, 1);
        const SystemPolys sys = build_system(p);
        const PhasePoly x = coordinate(Var::x, p), y = coordinate(Var::y, p);
        CHECK(sys.W == constant(Rational(1, 2), p) * (x - y) * (x - y));
        CHECK(sys.H.evaluate({Rational(1), 0, 0, 0, 0, 0}) == QwScalar::one(p.rho));
        // Hamilton equation for z: zdot = dH/dp3 = p3 - O2 x - O1 y
        CHECK(sys.H.derivative(Var::p3) == coordinate(Var::p3, p) + sys.A3);
    }
    SECTION("H is quadratic with no z dependence") {
        const SystemParams p = derive_params(2, Rational(1, 3), 5, 2);
        const SystemPolys sys = build_system(p);
        CHECK(sys.H.total_degree() == 2);
        CHECK(sys.H.derivative(Var::z).is_zero());
    }
}

TEST_CASE("first integrals") {
    for (const auto& [O1, O2] : kFields)
        for (const auto& [m, n] : kRatios) {
            const SystemParams p = derive_params(O1, O2, m, n);
            const SystemPolys sys = build_system(p);
            const FirstIntegrals fi = build_first_integrals(p);
            CAPTURE(format_rational(O1), format_rational(O2), m, n);
            CHECK(fi.X0 == coordinate(Var::p3, p));
            CHECK(poisson_bracket(sys.H, fi.X0).is_zero());
            CHECK(poisson_bracket(sys.H, fi.X1).is_zero());
            CHECK(poisson_bracket(sys.H, fi.X2).is_zero());
            CHECK(poisson_bracket(sys.H, fi.X3).is_zero());
            // H = (X0^2 + X1 + X2) / 2
            CHECK(sys.H ==
                  constant(Rational(1, 2), p) * (fi.X0 * fi.X0 + fi.X1 + fi.X2));
        }

    SECTION("X3 worked example, O1=1, O2=3/2, m=3, n=2") {
        const SystemParams p = derive_params(1, Rational(3, 2), 3, 2);
        const FirstIntegrals fi = build_first_integrals(p);
        CHECK(fi.X3 == coordinate(Var::p1, p) +
                           constant(Rational(3, 2), p) * coordinate(Var::p2, p) -
                           constant(Rational(3), p) * coordinate(Var::z, p));
    }
}

TEST_CASE("chebyshev coefficient lists") {
    auto value = [](const std::vector<Rational>& c, const Rational& a) {
        Rational acc = 0, pw = 1;
        for (const auto& ck : c) {
            acc += ck * pw;
            pw *= a;
        }
        return acc;
    };
    SECTION("small cases") {
        CHECK(chebyshev_t(0) == std::vector<Rational>{1});
        CHECK(chebyshev_t(2) == std::vector<Rational>({-1, 0, 2}));
        CHECK(chebyshev_t(3) == std::vector<Rational>({0, -3, 0, 4}));
        CHECK(chebyshev_u(1) == std::vector<Rational>({0, 2}));
        CHECK(chebyshev_u(2) == std::vector<Rational>({-1, 0, 4}));
    }
    SECTION("three-term recurrence up to degree 10") {
        for (int deg = 1; deg < 10; ++deg) {
            for (const Rational& a : {Rational(0), Rational(1), Rational(-2), Rational(3, 7)}) {
                CAPTURE(deg, format_rational(a));
                CHECK(value(chebyshev_t(deg + 1), a) ==
                      2 * a * value(chebyshev_t(deg), a) - value(chebyshev_t(deg - 1), a));
                CHECK(value(chebyshev_u(deg + 1), a) ==
                      2 * a * value(chebyshev_u(deg), a) - value(chebyshev_u(deg - 1), a));
            }
        }
    }
}

TEST_CASE("oscillator invariants") {
    SECTION("m=n=1 explicit forms") {
        const SystemParams p = derive_params(1, Rational(3, 2), 1, 1);
        const OscillatorInvariants inv = build_oscillator_invariants(p);
        const PhasePoly X = coordinate(Var::x, p), Y = coordinate(Var::y, p);
        const PhasePoly P1 = coordinate(Var::p1, p), P2 = coordinate(Var::p2, p);
        const PhasePoly w = PhasePoly::constant(QwScalar::root_multiple(1, p.rho));
        CHECK(inv.I3 == P1 * P2 + constant(p.rho, p) * X * Y);
        CHECK(inv.I4 == w * (Y * P1 - X * P2));
    }
    SECTION("syzygy and conservation across the grid") {
        for (const auto& [O1, O2] : kFields)
            for (const auto& [m, n] : kRatios) {
                const SystemParams p = derive_params(O1, O2, m, n);
                const OscillatorInvariants inv = build_oscillator_invariants(p);
                CAPTURE(format_rational(O1), format_rational(O2), m, n);
                CHECK(inv.I3 * inv.I3 + inv.I4 * inv.I4 ==
                      inv.I1.pow(static_cast<unsigned>(n)) * inv.I2.pow(static_cast<unsigned>(m)));
                const PhasePoly h2 = two_dof_hamiltonian(p);
                CHECK(poisson_bracket(h2, inv.I3).is_zero());
                CHECK(poisson_bracket(h2, inv.I4).is_zero());
            }
    }
    SECTION("binomial series route agrees for all m+n <= 7") {
        for (int m = 1; m <= 6; ++m)
            for (int n = 1; n + m <= 7; ++n) {
                if (std::gcd(m, n) != 1) continue;
                const SystemParams p = derive_params(1, Rational(3, 2), m, n);
                const OscillatorInvariants inv = build_oscillator_invariants(p);
                const auto [i3, i4] = oscillator_i34_series(p);
                CAPTURE(m, n);
                CHECK(inv.I3 == i3);
                CHECK(inv.I4 == i4);
            }
    }
}

TEST_CASE("higher integrals via the inverse shift") {
    for (const auto& [O1, O2] : kFields)
        for (const auto& [m, n] : kRatios) {
            const SystemParams p = derive_params(O1, O2, m, n);
            const SystemPolys sys = build_system(p);
            const HigherIntegrals hi = build_higher_integrals(p);
            CAPTURE(format_rational(O1), format_rational(O2), m, n);
            CHECK(hi.X4_raw.momentum_degree() == m + n);
            CHECK(hi.X5.momentum_degree() == m + n);
            CHECK(poisson_bracket(sys.H, hi.X4_raw).is_zero());
            CHECK(poisson_bracket(sys.H, hi.X5).is_zero());
        }

    SECTION("shift-inverted quadratic invariants differ from X1/X2 by X0^2 only") {
        for (const auto& [m, n] : kRatios) {
            const SystemParams p = derive_params(1, Rational(3, 2), m, n);
            const OscillatorInvariants inv = build_oscillator_invariants(p);
            const FirstIntegrals fi = build_first_integrals(p);
            const Rational D = Rational(n * n) * p.omega2 * p.omega2 +
                               Rational(m * m) * p.omega1 * p.omega1;
            const PhasePoly x02 = fi.X0 * fi.X0;
            CAPTURE(m, n);
            CHECK(invert_shift(inv.I1, p) ==
                  fi.X1 + constant(Rational(n * n) * p.omega2 * p.omega2 / D, p) * x02);
            CHECK(invert_shift(inv.I2, p) ==
                  fi.X2 + constant(Rational(m * m) * p.omega1 * p.omega1 / D, p) * x02);
        }
    }
}

TEST_CASE("order reduction") {
    SECTION("reduced degrees and conservation across the grid") {
        for (const auto& [O1, O2] : kFields)
            for (const auto& [m, n] : kRatios) {
                const SystemParams p = derive_params(O1, O2, m, n);
                const IntegralSet set = build_integral_set(p);
                CAPTURE(format_rational(O1), format_rational(O2), m, n);
                CHECK(set.reduction.raw_momentum_degree == m + n);
                CHECK(set.X4_reduced.momentum_degree() == m + n - 1);
                CHECK(set.reduction.reduced_momentum_degree == m + n - 1);
                CHECK(poisson_bracket(set.H, set.X4_reduced).is_zero());
                // canonical scale: unit leading coefficient of the top block
                CHECK(set.X4_reduced.momentum_leading().leading().second ==
                      QwScalar::one(p.rho));
            }
    }
    SECTION("X5 is not reducible by the same combinations") {
        for (const auto& [m, n] : kRatios) {
            const SystemParams p = derive_params(1, Rational(3, 2), m, n);
            const FirstIntegrals fi = build_first_integrals(p);
            const HigherIntegrals hi = build_higher_integrals(p);
            CAPTURE(m, n);
            CHECK_FALSE(attempt_reduce_x5(hi.X5, fi, p).reducible);
        }
    }
    SECTION("degenerate field (rho a perfect square) works end to end") {
        const SystemParams p = derive_params(3, 4, 1, 1);
        CHECK(p.rho == 25);
        CHECK(p.freq1 == QwScalar::rational(5, p.rho));
        const IntegralSet set = build_integral_set(p);
        CHECK(set.X4_reduced.momentum_degree() == 1);
        CHECK(poisson_bracket(set.H, set.X4_reduced).is_zero());
    }
}

TEST_CASE("m=3, n=2 reduced integral matches the explicit transcription") {
    for (const auto& [O1, O2] : kFields) {
        const SystemParams p = derive_params(O1, O2, 3, 2);
        const IntegralSet set = build_integral_set(p);
        const PhasePoly golden = golden_x4_m3_n2(p);
        CAPTURE(format_rational(O1), format_rational(O2));
        // both sides in the canonical unit-leading-coefficient scale
        const QwScalar lead = golden.momentum_leading().leading().second;
        CHECK(golden * lead.inverse() == set.X4_reduced);
        CHECK(golden.momentum_degree() == 4);
    }
}

TEST_CASE("rotated frame") {
    SECTION("worked example O1=1, O2=3/2, m=3, n=2") {
        const SystemParams p = derive_params(1, Rational(3, 2), 3, 2);
        const RotatedFrame f = rotated_frame(p);
        CHECK(f.omega_hat * f.omega_hat == Catch::Approx(13.0 / 4.0).epsilon(1e-14));
        const auto [w1, w2] = rotated_frame_frequencies(f);
        CHECK(w1 == Catch::Approx(3.0 / std::numbers::sqrt2).epsilon(1e-13));
        CHECK(w2 == Catch::Approx(2.0 / std::numbers::sqrt2).epsilon(1e-13));
    }
    SECTION("kappa = 1 aligns the frame") {
        const SystemParams p = derive_params(1, Rational(3, 2), 1, 1);
        const RotatedFrame f = rotated_frame(p);
        CHECK(std::abs(std::sin(f.beta)) < 1e-15);
    }
    SECTION("frequencies reproduce m*w, n*w across the grid") {
        for (const auto& [O1, O2] : kFields)
            for (const auto& [m, n] : kRatios) {
                const SystemParams p = derive_params(O1, O2, m, n);
                const auto [w1, w2] = rotated_frame_frequencies(rotated_frame(p));
                CAPTURE(format_rational(O1), format_rational(O2), m, n);
                CHECK(w1 >= w2);
                CHECK(w1 == Catch::Approx(p.freq1.to_double()).epsilon(1e-12));
                CHECK(w2 == Catch::Approx(p.freq2.to_double()).epsilon(1e-12));
            }
    }
}

TEST_CASE("conservation is gauge covariant") {
    const SystemParams p = derive_params(1, Rational(3, 2), 2, 1);
    const IntegralSet set = build_integral_set(p);
    const PhasePoly xy = coordinate(Var::x, p) * coordinate(Var::y, p);
    const PhasePoly z2 = coordinate(Var::z, p) * coordinate(Var::z, p);
    std::mt19937_64 rng(1717);
    for (int iter = 0; iter < 5; ++iter) {
        const PhasePoly chi =
            constant(random_rational(rng), p) * xy + constant(random_rational(rng), p) * z2;
        const PhasePoly hg = set.H.gauge_transform(chi);
        CAPTURE(iter, chi.str());
        for (const auto& [name, poly] : set.named()) {
            CAPTURE(name);
            CHECK(poisson_bracket(hg, poly->gauge_transform(chi)).is_zero());
        }
    }
}
