#ifndef MAGOSC_DYNAMICS_HPP
#define MAGOSC_DYNAMICS_HPP

#include <magosc/system.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

namespace magosc {

using StateD = std::array<double, 6>;  // (x, y, z, p1, p2, p3)

enum class Method { closed_form, rk4 };

struct TrajectorySpec {
    StateD initial{};
    double t_end = 0.0;
    double dt = 1e-3;
    Method method = Method::closed_form;
};

struct Sample {
    double t;
    StateD state;
};

// exact transcription of the closed-form solution; momenta are the time
// derivatives of the position formulas, p3 is constant in this gauge
inline StateD closed_form_state(const SystemParams& p, const StateD& s0, double t) {
    const double O1 = to_double(p.omega1), O2 = to_double(p.omega2), S = to_double(p.S);
    const double w = std::sqrt(to_double(p.rho));
    const double w1 = p.m * w, w2 = p.n * w;
    const double x0 = s0[0], y0 = s0[1], z0 = s0[2];
    const double p10 = s0[3], p20 = s0[4], p30 = s0[5];
    const double c1 = std::cos(w1 * t), s1 = std::sin(w1 * t);
    const double c2 = std::cos(w2 * t), s2 = std::sin(w2 * t);
    StateD s;
    s[0] = ((w1 * w1 * x0 - O2 * p30) * c1 + w1 * p10 * s1 + O2 * p30) / (w1 * w1);
    s[1] = ((w2 * w2 * y0 - O1 * p30) * c2 + w2 * p20 * s2 + O1 * p30) / (w2 * w2);
    s[2] = (p10 * (c1 - 1.0) + S * p20 * (c2 - 1.0) + (O2 * p30 - w1 * w1 * x0) / w1 * s1 +
            S * (O1 * p30 - w2 * w2 * y0) / w2 * s2) /
               (O1 * S + O2) +
           z0;
    s[3] = p10 * c1 - (w1 * w1 * x0 - O2 * p30) / w1 * s1;
    s[4] = p20 * c2 - (w2 * w2 * y0 - O1 * p30) / w2 * s2;
    s[5] = p30;
    return s;
}

// float-evaluable compiled form of a PhasePoly
struct CompiledPoly {
    struct Term {
        double c;
        std::array<std::uint8_t, 6> e;
    };
    std::vector<Term> terms;

    CompiledPoly() = default;
    explicit CompiledPoly(const PhasePoly& p) {
        terms.reserve(p.term_count());
        for (const auto& [mono, c] : p.terms()) terms.push_back({c.to_double(), mono.e});
    }

    double operator()(const StateD& s) const {
        double acc = 0.0;
        for (const auto& t : terms) {
            double v = t.c;
            for (int i = 0; i < 6; ++i)
                for (int k = 0; k < t.e[i]; ++k) v *= s[i];
            acc += v;
        }
        return acc;
    }
};

// Hamiltonian vector field (dH/dp, -dH/dx) with exact differentiation done
// once and float evaluation per step
struct HamiltonianField {
    std::array<CompiledPoly, 6> rhs;

    explicit HamiltonianField(const PhasePoly& h) {
        for (int i = 0; i < 3; ++i) {
            rhs[i] = CompiledPoly(h.derivative(static_cast<Var>(3 + i)));
            rhs[3 + i] = CompiledPoly(-h.derivative(static_cast<Var>(i)));
        }
    }

    StateD operator()(const StateD& s) const {
        StateD d;
        for (int i = 0; i < 6; ++i) d[i] = rhs[i](s);
        return d;
    }
};

inline StateD rk4_step(const HamiltonianField& f, const StateD& s, double dt) {
    if (!(dt > 0)) throw std::domain_error("rk4_step: dt must be positive");
    auto axpy = [](const StateD& a, const StateD& b, double h) {
        StateD r;
        for (int i = 0; i < 6; ++i) r[i] = a[i] + h * b[i];
        return r;
    };
    const StateD k1 = f(s);
    const StateD k2 = f(axpy(s, k1, dt / 2));
    const StateD k3 = f(axpy(s, k2, dt / 2));
    const StateD k4 = f(axpy(s, k3, dt));
    StateD r;
    for (int i = 0; i < 6; ++i) {
        r[i] = s[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (!std::isfinite(r[i])) throw std::runtime_error("rk4_step: state diverged");
    }
    return r;
}

inline std::vector<Sample> generate_trajectory(const SystemParams& p, const PhasePoly& h,
                                               const TrajectorySpec& spec) {
    if (!(spec.dt > 0)) throw std::domain_error("trajectory: dt must be positive");
    if (spec.t_end < 0) throw std::domain_error("trajectory: t_end must be non-negative");
    std::vector<Sample> out;
    if (spec.method == Method::closed_form) {
        double t = 0.0;
        while (t < spec.t_end) {
            out.push_back({t, closed_form_state(p, spec.initial, t)});
            t += spec.dt;
        }
        out.push_back({spec.t_end, closed_form_state(p, spec.initial, spec.t_end)});
    } else {
        const HamiltonianField field(h);
        StateD s = spec.initial;
        double t = 0.0;
        out.push_back({t, s});
        while (t + spec.dt <= spec.t_end * (1.0 + 1e-12)) {
            s = rk4_step(field, s, spec.dt);
            t += spec.dt;
            out.push_back({t, s});
        }
        if (t < spec.t_end) {
            s = rk4_step(field, s, spec.t_end - t);
            out.push_back({spec.t_end, s});
        }
    }
    return out;
}

struct DriftRecord {
    std::string name;
    double initial = 0.0;
    double max_abs_dev = 0.0;
    double rel_drift = 0.0;  // max_abs_dev / max(1, |initial|)
};

struct DriftReport {
    std::vector<DriftRecord> records;
    double closure_error = std::numeric_limits<double>::quiet_NaN();

    double max_rel_drift() const {
        double m = 0.0;
        for (const auto& r : records) m = std::max(m, r.rel_drift);
        return m;
    }
};

inline DriftReport conservation_drift(const SystemParams& p, const IntegralSet& integrals,
                                      const TrajectorySpec& spec) {
    const auto samples = generate_trajectory(p, integrals.H, spec);
    DriftReport report;
    for (const auto& [name, poly] : integrals.named()) {
        const CompiledPoly cp(*poly);
        DriftRecord rec;
        rec.name = name;
        rec.initial = cp(samples.front().state);
        for (const auto& s : samples)
            rec.max_abs_dev = std::max(rec.max_abs_dev, std::abs(cp(s.state) - rec.initial));
        rec.rel_drift = rec.max_abs_dev / std::max(1.0, std::abs(rec.initial));
        report.records.push_back(std::move(rec));
    }
    if (spec.t_end >= p.period - spec.dt / 2) {
        // state nearest the common period against the initial state
        const Sample* best = &samples.front();
        for (const auto& s : samples)
            if (std::abs(s.t - p.period) < std::abs(best->t - p.period)) best = &s;
        double err = 0.0;
        for (int i = 0; i < 6; ++i)
            err = std::max(err, std::abs(best->state[i] - samples.front().state[i]));
        report.closure_error = err;
    }
    return report;
}

// exact Jacobian rank of the given integrals at a rational phase point
inline int independence_rank(const std::vector<const PhasePoly*>& integrals,
                             const std::array<Rational, 6>& pt) {
    if (integrals.empty()) return 0;
    const Rational& rho = integrals.front()->rho();
    QwMatrix jac;
    for (const auto* f : integrals) {
        QwVector row;
        for (Var v : kAllVars) row.push_back(f->derivative(v).evaluate(pt));
        jac.push_back(std::move(row));
    }
    (void)rho;
    return exact_rank(std::move(jac));
}

inline void write_trajectory_csv(std::ostream& os, const std::vector<Sample>& samples) {
    os << "t,x,y,z,p1,p2,p3\n";
    char buf[32];
    for (const auto& s : samples) {
        std::snprintf(buf, sizeof buf, "%.17g", s.t);
        os << buf;
        for (double v : s.state) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            os << ',' << buf;
        }
        os << '\n';
    }
}

}  // namespace magosc

#endif
