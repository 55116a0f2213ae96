#pragma once

#include <string>
#include <vector>

#include "muskat/evolution.hpp"

namespace muskat {

// Per-record observables of a run. The first ten fields are the CSV columns;
// the rest are internal (dissipation pairing, tolerance bases, telemetry).
struct DiagnosticsRow {
    double t = 0.0;
    double l2 = 0.0;
    double h_half = 0.0;  // homogeneous H^{1/2}
    double h_3half = 0.0; // homogeneous H^{3/2}
    double hs = 0.0;      // inhomogeneous H^s at the configured s
    double lip = 0.0;     // Lipschitz seminorm
    double j = 0.0;       // Lyapunov pairing <H(f), G(f)f>
    double a_min = 0.0;   // min of the Taylor coefficient
    double mean = 0.0;
    double energy_residual = 0.0; // filled by fill_energy_residuals

    double dissipation = 0.0; // -<f, rhs>
    double max_dn_ff = 0.0;   // max_x G(f)f (parabolicity margin)
    double h2_sq = 0.0;       // ||f||_{H^2}^2, tolerance basis
    int step_index = 0;
};

// One row; performs one extra DN solve with data g = f for J / a_min /
// max G(f)f. The rhs argument must be the evaluation at this state.
DiagnosticsRow record(const EvolutionState& state, const RhsResult& rhs,
                      const MuskatParams& p, DnEvaluator& dn, double sobolev_s);

// Discrete energy-balance residual dE/dt + D per row, E = l2^2/2. Uniformly
// spaced interior rows get a centered derivative with Simpson-averaged D
// (the pairing that cancels the stepper's own discretization error);
// boundary or unevenly spaced rows fall back to one-sided trapezoid.
void fill_energy_residuals(std::vector<DiagnosticsRow>& rows);

struct SimulationResult {
    Trajectory traj;
    std::vector<DiagnosticsRow> rows;
    bool completed = false;
    std::string error;
    double t_reached = 0.0;
};

SimulationResult simulate(const SpectralField& f0, double t_final,
                          const StepperSpec& spec, const MuskatParams& p,
                          const DnConfig& dn, int cadence = 10,
                          double sobolev_s = 4.0);

struct DecayFit {
    double rate = 0.0;      // positive for decay
    double r_squared = 0.0;
};

// least-squares fit of log(values) ~ -rate * t over times in [t0, t1]
DecayFit fit_decay_rate(const std::vector<double>& times,
                        const std::vector<double>& values, double t0, double t1);

// sup_t ||f(t)||_{H^s} / ||f(0)||_{H^s}
double bootstrap_monitor(const Trajectory& traj, double s);

struct ContractionResult {
    double ratio_at_t = 0.0; // ||f1-f2||_{H^s}(T) / same at 0
    double max_ratio = 0.0;
    bool degenerate = false; // identical initial data (0/0 -> 0)
    bool completed = false;  // both runs finished
    double terminal_distance = 0.0;
};

ContractionResult contraction_experiment(const SpectralField& f01,
                                         const SpectralField& f02, double t_final,
                                         const StepperSpec& spec, const MuskatParams& p,
                                         const DnConfig& dn, double s = 2.0,
                                         int cadence = 10);

} // namespace muskat
