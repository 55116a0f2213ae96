#include "muskat/evolution.hpp"

#include <cmath>

#include "muskat/curvature.hpp"
#include "muskat/errors.hpp"

namespace muskat {

namespace {

double phi1_fn(double x) {
    if (std::abs(x) < 0.1)
        return 1.0 + x / 2 + x * x / 6 + x * x * x / 24 + x * x * x * x / 120;
    return std::expm1(x) / x;
}

double phi2_fn(double x) {
    if (std::abs(x) < 0.1)
        return 0.5 + x / 6 + x * x / 24 + x * x * x / 120 + x * x * x * x / 720;
    return (std::expm1(x) - x) / (x * x);
}

double phi3_fn(double x) {
    if (std::abs(x) < 0.1)
        return 1.0 / 6 + x / 24 + x * x / 120 + x * x * x / 720 + x * x * x * x / 5040;
    return (std::expm1(x) - x - x * x / 2) / (x * x * x);
}

bool support_inside(const SpectralField& f, double radius) {
    const auto& g = *f.grid;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g.xi_abs(i) > radius && f.coeffs[i] != Complex(0.0)) return false;
    return true;
}

} // namespace

DnImage DnEvaluator::image(const SpectralField& f, const SpectralField& g) {
    if (cfg_.backend == DnBackend::Elliptic) {
        auto sol = solve_dn_elliptic(f, g, cfg_.strip, cfg_.elliptic);
        DnImage out{sol.dn, SpectralField(f.grid), sol.iterations};
        for (std::size_t i = 0; i < f.grid->size(); ++i)
            out.remainder.coeffs[i] =
                sol.dn.coeffs[i] - f.grid->xi_abs(i) * g.coeffs[i];
        return out;
    }
    DnWarmStart warm;
    if (w_ && v_) {
        warm.w = &*w_;
        warm.v = &*v_;
    }
    auto sol = solve_dn(f, g, cfg_.vertical, cfg_.options, warm);
    w_ = std::move(sol.w);
    v_ = std::move(sol.v);
    return DnImage{std::move(sol.dn), std::move(sol.remainder), sol.iterations};
}

RhsResult compute_rhs(const SpectralField& f, const MuskatParams& p, DnEvaluator& dn,
                      Nonlinearity mode) {
    const auto& g = *f.grid;
    const double R = p.cutoff_for(g);
    const double km = p.kappa / p.mu;
    SpectralField fr = fourier_truncate(f, R);

    RhsResult out;
    out.linear = scaled(apply_multiplier(fr, p.rate()), -1.0);
    if (mode == Nonlinearity::LinearOnly) {
        out.nonlinear = SpectralField(f.grid);
        out.total = out.linear;
        return out;
    }

    auto curv = mean_curvature(fr);
    // |grad| applied to the curvature's flux-divergence piece:
    // curv.nonlinear = -Div(grad f * h1), so -|grad| curv.nonlinear is the
    // +|grad| Div(...) term of the splitting
    SpectralField curv_term =
        fourier_truncate(scaled(abs_nabla(curv.nonlinear), -p.surface_tension * km), R);

    if (mode == Nonlinearity::NoRemainder) {
        out.nonlinear = curv_term;
        out.total = added(out.linear, out.nonlinear);
        return out;
    }

    // Dirichlet data rho*g*f + st*H(f) for the DN solve
    SpectralField data = scaled(fr, p.rho * p.gravity);
    axpy(data, p.surface_tension, curv.total);
    auto img = dn.image(fr, data);
    out.dn_iterations = img.iterations;

    out.total = fourier_truncate(scaled(img.dn, -km), R);
    out.nonlinear = curv_term;
    axpy(out.nonlinear, -km, fourier_truncate(img.remainder, R));
    return out;
}

RhsResult rhs_split(const SpectralField& f, const MuskatParams& p, const DnConfig& dn,
                    Nonlinearity mode) {
    DnEvaluator ev(dn);
    return compute_rhs(f, p, ev, mode);
}

SpectralField rhs_full(const SpectralField& f, const MuskatParams& p, const DnConfig& dn) {
    return rhs_split(f, p, dn).total;
}

struct Stepper::EtdTables {
    std::vector<double> e_full, e_half, phi1_half, alpha, beta, gamma, rate;
};

Stepper::Stepper(StepperSpec spec, MuskatParams params, DnConfig dn)
    : spec_(spec), params_(params), dn_(std::move(dn)) {
    if (!(spec_.dt > 0)) throw ValidationError("stepper.dt must be positive");
}

void Stepper::ensure_tables(const TorusGrid& g) {
    if (tables_ && tables_grid_ == &g) return;
    auto t = std::make_shared<EtdTables>();
    const double h = spec_.dt;
    t->rate.resize(g.size());
    t->e_full.resize(g.size());
    t->e_half.resize(g.size());
    t->phi1_half.resize(g.size());
    t->alpha.resize(g.size());
    t->beta.resize(g.size());
    t->gamma.resize(g.size());
    LinearRate rate = params_.rate();
    for (std::size_t i = 0; i < g.size(); ++i) {
        double a = symbol_value(rate, g.xi_abs(i));
        double x = -a * h;
        t->rate[i] = a;
        t->e_full[i] = std::exp(x);
        t->e_half[i] = std::exp(x / 2);
        t->phi1_half[i] = phi1_fn(x / 2);
        double p1 = phi1_fn(x), p2 = phi2_fn(x), p3 = phi3_fn(x);
        t->alpha[i] = p1 - 3 * p2 + 4 * p3;
        t->beta[i] = p2 - 2 * p3;
        t->gamma[i] = 4 * p3 - p2;
    }
    tables_ = std::move(t);
    tables_grid_ = &g;
}

RhsResult Stepper::evaluate(const SpectralField& f) {
    return compute_rhs(f, params_, dn_, spec_.nonlinearity);
}

EvolutionState Stepper::advance(const EvolutionState& state, const RhsResult* stage1) {
    const auto& g = *state.f.grid;
    const double h = spec_.dt;
    EvolutionState next;
    next.t = state.t + h;

    if (spec_.nonlinearity == Nonlinearity::LinearOnly) {
        // exact diagonal propagator, independent of the scheme
        next.f = apply_multiplier(state.f, LinearSemigroup{h, params_.rate()});
    } else if (spec_.scheme == Scheme::Rk4Explicit) {
        double limit = 2.785 / params_.max_rate(g);
        if (h > limit)
            throw ValidationError("RK4 stability requires dt <= " + std::to_string(limit) +
                                  " at this cutoff; got " + std::to_string(h));
        RhsResult k1 = stage1 ? *stage1 : evaluate(state.f);
        SpectralField f2 = state.f;
        axpy(f2, h / 2, k1.total);
        RhsResult k2 = evaluate(f2);
        SpectralField f3 = state.f;
        axpy(f3, h / 2, k2.total);
        RhsResult k3 = evaluate(f3);
        SpectralField f4 = state.f;
        axpy(f4, h, k3.total);
        RhsResult k4 = evaluate(f4);
        next.f = state.f;
        axpy(next.f, h / 6, k1.total);
        axpy(next.f, h / 3, k2.total);
        axpy(next.f, h / 3, k3.total);
        axpy(next.f, h / 6, k4.total);
    } else if (spec_.scheme == Scheme::ImexLinearImplicit) {
        RhsResult k1 = stage1 ? *stage1 : evaluate(state.f);
        LinearRate rate = params_.rate();
        next.f = SpectralField(state.f.grid);
        for (std::size_t i = 0; i < g.size(); ++i) {
            double a = symbol_value(rate, g.xi_abs(i));
            next.f.coeffs[i] =
                (state.f.coeffs[i] + h * k1.nonlinear.coeffs[i]) / (1.0 + h * a);
        }
    } else {
        ensure_tables(g);
        const auto& tb = *tables_;
        RhsResult k1 = stage1 ? *stage1 : evaluate(state.f);
        const auto& n1 = k1.nonlinear.coeffs;

        SpectralField fa(state.f.grid);
        for (std::size_t i = 0; i < g.size(); ++i)
            fa.coeffs[i] = tb.e_half[i] * state.f.coeffs[i] +
                           (h / 2) * tb.phi1_half[i] * n1[i];
        auto n2 = evaluate(fa).nonlinear.coeffs;

        SpectralField fb(state.f.grid);
        for (std::size_t i = 0; i < g.size(); ++i)
            fb.coeffs[i] = tb.e_half[i] * state.f.coeffs[i] +
                           (h / 2) * tb.phi1_half[i] * n2[i];
        auto n3 = evaluate(fb).nonlinear.coeffs;

        SpectralField fc(state.f.grid);
        for (std::size_t i = 0; i < g.size(); ++i)
            fc.coeffs[i] = tb.e_half[i] * fa.coeffs[i] +
                           (h / 2) * tb.phi1_half[i] * (2.0 * n3[i] - n1[i]);
        auto n4 = evaluate(fc).nonlinear.coeffs;

        next.f = SpectralField(state.f.grid);
        for (std::size_t i = 0; i < g.size(); ++i)
            next.f.coeffs[i] =
                tb.e_full[i] * state.f.coeffs[i] +
                h * (tb.alpha[i] * n1[i] + 2.0 * tb.beta[i] * (n2[i] + n3[i]) +
                     tb.gamma[i] * n4[i]);
    }

    if (spec_.enforce_decay) {
        double before = norm_l2(state.f), after = norm_l2(next.f);
        if (after > before * (1.0 + spec_.decay_slack))
            throw StepRejectedError(
                "L2 norm grew from " + std::to_string(before) + " to " +
                std::to_string(after) + " at t = " + std::to_string(next.t) +
                "; dt too large for this state");
    }
    next.in_vr = support_inside(next.f, params_.cutoff_for(g));
    return next;
}

EvolutionState step(const EvolutionState& state, const StepperSpec& spec,
                    const MuskatParams& p, const DnConfig& dn) {
    Stepper st(spec, p, dn);
    return st.advance(state);
}

RunOutcome run(const SpectralField& f0, double t_final, const StepperSpec& spec,
               const MuskatParams& p, const DnConfig& dn, const RunCallbacks& cb) {
    if (!(t_final > 0)) throw ValidationError("t_final must be positive");
    if (!(spec.dt > 0)) throw ValidationError("stepper.dt must be positive");
    double steps_real = t_final / spec.dt;
    auto steps = static_cast<long long>(std::llround(steps_real));
    if (steps < 1 || std::abs(steps_real - static_cast<double>(steps)) > 1e-9 * steps_real)
        throw ValidationError("t_final must be an integer multiple of dt");
    int cadence = cb.cadence > 0 ? cb.cadence : 1;

    Stepper st(spec, p, dn);
    EvolutionState state;
    state.f = fourier_truncate(f0, p.cutoff_for(*f0.grid));
    state.t = 0.0;
    state.in_vr = true;

    RunOutcome out;
    auto record = [&](const EvolutionState& s, const RhsResult& rhs) {
        out.traj.times.push_back(s.t);
        out.traj.states.push_back(s.f);
        if (cb.on_record) cb.on_record(s, rhs);
    };

    try {
        RhsResult rhs = st.evaluate(state.f);
        record(state, rhs);
        bool have_rhs = true;
        for (long long n = 0; n < steps; ++n) {
            if (!have_rhs) rhs = st.evaluate(state.f);
            state = st.advance(state, &rhs);
            state.t = (n + 1) * spec.dt; // avoid accumulation drift
            have_rhs = false;
            bool at_record = ((n + 1) % cadence == 0) || (n + 1 == steps);
            if (at_record) {
                rhs = st.evaluate(state.f);
                have_rhs = true;
                record(state, rhs);
            }
        }
        out.completed = true;
    } catch (const SolverRegimeError& e) {
        out.completed = false;
        out.error = e.what();
    }
    out.t_reached = state.t;
    return out;
}

} // namespace muskat
