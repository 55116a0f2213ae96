#include "muskat/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "muskat/curvature.hpp"
#include "muskat/errors.hpp"

namespace muskat {

DiagnosticsRow record(const EvolutionState& state, const RhsResult& rhs,
                      const MuskatParams& p, DnEvaluator& dn, double sobolev_s) {
    (void)p;
    DiagnosticsRow row;
    row.t = state.t;
    row.l2 = norm_l2(state.f);
    row.h_half = hom_sobolev_norm(state.f, 0.5);
    row.h_3half = hom_sobolev_norm(state.f, 1.5);
    row.hs = sobolev_norm(state.f, sobolev_s);
    row.lip = lipschitz_seminorm(state.f);
    row.mean = mean_value(state.f);
    double h2 = sobolev_norm(state.f, 2.0);
    row.h2_sq = h2 * h2;
    row.dissipation = -inner_l2(state.f, rhs.total);

    if (row.l2 == 0.0) {
        row.j = 0.0;
        row.a_min = 1.0;
        row.max_dn_ff = 0.0;
        return row;
    }
    auto img = dn.image(state.f, state.f);
    row.j = inner_l2(mean_curvature_total(state.f), img.dn);
    auto taylor = taylor_coefficient(state.f, img.dn);
    row.a_min = taylor.min_value;
    auto dn_s = state.f.grid->inverse_padded(img.dn.coeffs);
    row.max_dn_ff = *std::max_element(dn_s.begin(), dn_s.end());
    return row;
}

void fill_energy_residuals(std::vector<DiagnosticsRow>& rows) {
    const std::size_t m = rows.size();
    if (m < 2) {
        for (auto& r : rows) r.energy_residual = 0.0;
        return;
    }
    auto energy = [&](std::size_t i) { return 0.5 * rows[i].l2 * rows[i].l2; };
    auto one_sided = [&](std::size_t a, std::size_t b) {
        double h = rows[b].t - rows[a].t;
        return (energy(b) - energy(a)) / h +
               0.5 * (rows[a].dissipation + rows[b].dissipation);
    };
    rows[0].energy_residual = one_sided(0, 1);
    rows[m - 1].energy_residual = one_sided(m - 2, m - 1);
    for (std::size_t i = 1; i + 1 < m; ++i) {
        double hl = rows[i].t - rows[i - 1].t;
        double hr = rows[i + 1].t - rows[i].t;
        if (std::abs(hl - hr) <= 1e-12 * std::max(hl, hr)) {
            rows[i].energy_residual =
                (energy(i + 1) - energy(i - 1)) / (2.0 * hl) +
                (rows[i - 1].dissipation + 4.0 * rows[i].dissipation +
                 rows[i + 1].dissipation) /
                    6.0;
        } else {
            rows[i].energy_residual = one_sided(i - 1, i);
        }
    }
}

SimulationResult simulate(const SpectralField& f0, double t_final,
                          const StepperSpec& spec, const MuskatParams& p,
                          const DnConfig& dn, int cadence, double sobolev_s) {
    SimulationResult res;
    DnEvaluator recorder(dn);
    RunCallbacks cb;
    cb.cadence = cadence;
    int index = 0;
    cb.on_record = [&](const EvolutionState& s, const RhsResult& rhs) {
        auto row = record(s, rhs, p, recorder, sobolev_s);
        row.step_index = index++;
        res.rows.push_back(row);
    };
    auto outcome = run(f0, t_final, spec, p, dn, cb);
    res.traj = std::move(outcome.traj);
    res.completed = outcome.completed;
    res.error = outcome.error;
    res.t_reached = outcome.t_reached;
    fill_energy_residuals(res.rows);
    return res;
}

DecayFit fit_decay_rate(const std::vector<double>& times,
                        const std::vector<double>& values, double t0, double t1) {
    if (times.size() != values.size())
        throw ValidationError("fit_decay_rate: times/values length mismatch");
    std::vector<double> ts, ys;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t0 - 1e-12 || times[i] > t1 + 1e-12) continue;
        if (!(values[i] > 0.0))
            throw ValidationError("fit_decay_rate: nonpositive value in window");
        ts.push_back(times[i]);
        ys.push_back(std::log(values[i]));
    }
    if (ts.size() < 2)
        throw ValidationError("fit_decay_rate: window contains fewer than 2 samples");
    double n = static_cast<double>(ts.size());
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        st += ts[i];
        sy += ys[i];
        stt += ts[i] * ts[i];
        sty += ts[i] * ys[i];
    }
    double denom = n * stt - st * st;
    if (denom == 0.0) throw ValidationError("fit_decay_rate: degenerate time window");
    double slope = (n * sty - st * sy) / denom;
    double intercept = (sy - slope * st) / n;
    double ss_res = 0, ss_tot = 0, ybar = sy / n;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        double fit = intercept + slope * ts[i];
        ss_res += (ys[i] - fit) * (ys[i] - fit);
        ss_tot += (ys[i] - ybar) * (ys[i] - ybar);
    }
    DecayFit out;
    out.rate = -slope;
    out.r_squared = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
    return out;
}

double bootstrap_monitor(const Trajectory& traj, double s) {
    if (traj.states.empty()) throw ValidationError("bootstrap_monitor: empty trajectory");
    double base = sobolev_norm(traj.states.front(), s);
    if (base == 0.0) return 0.0;
    double sup = 0.0;
    for (const auto& f : traj.states) sup = std::max(sup, sobolev_norm(f, s) / base);
    return sup;
}

ContractionResult contraction_experiment(const SpectralField& f01,
                                         const SpectralField& f02, double t_final,
                                         const StepperSpec& spec, const MuskatParams& p,
                                         const DnConfig& dn, double s, int cadence) {
    ContractionResult res;
    double d0 = sobolev_norm(subtracted(f01, f02), s);
    if (d0 == 0.0) {
        res.degenerate = true;
        res.completed = true;
        return res;
    }
    auto r1 = run(f01, t_final, spec, p, dn, RunCallbacks{cadence, nullptr});
    auto r2 = run(f02, t_final, spec, p, dn, RunCallbacks{cadence, nullptr});
    res.completed = r1.completed && r2.completed;
    std::size_t m = std::min(r1.traj.states.size(), r2.traj.states.size());
    for (std::size_t i = 0; i < m; ++i) {
        double d = sobolev_norm(subtracted(r1.traj.states[i], r2.traj.states[i]), s);
        res.max_ratio = std::max(res.max_ratio, d / d0);
        if (i + 1 == m) {
            res.ratio_at_t = d / d0;
            res.terminal_distance = d;
        }
    }
    return res;
}

} // namespace muskat
