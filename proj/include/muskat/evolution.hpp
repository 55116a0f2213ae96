#pragma once

#include <functional>
#include <optional>
#include <string>

#include "muskat/dn_elliptic.hpp"
#include "muskat/dn_fixed_point.hpp"
#include "muskat/norms.hpp"

namespace muskat {

// Galerkin-truncated interface evolution
//   dt f = -(kappa/mu) S_R [ G(S_R f) (rho*g*S_R f + st*H(S_R f)) ]
// split into the exact linear part -A f, A = (kappa/mu)|grad|(rho*g + st*|grad|^2),
// and a nonlinear remainder; steppers treat A exactly (ETD / IMEX) or
// explicitly (RK4).

struct MuskatParams {
    double kappa = 1.0, mu = 1.0, rho = 1.0, gravity = 1.0, surface_tension = 1.0;
    // sharp Fourier cutoff radius; 0 selects the dealiasing-aligned default
    // (2/3) * (n/2) * k_min
    double galerkin_r = 0.0;

    double cutoff_for(const TorusGrid& g) const {
        return galerkin_r > 0.0 ? galerkin_r : (2.0 / 3.0) * (g.n() / 2) * g.k_min();
    }
    LinearRate rate() const { return {kappa, mu, rho, gravity, surface_tension}; }
    double max_rate(const TorusGrid& g) const {
        double r = cutoff_for(g);
        return (kappa / mu) * r * (rho * gravity + surface_tension * r * r);
    }
};

enum class Scheme { Rk4Explicit, EtdExponential, ImexLinearImplicit };
enum class Nonlinearity { Full, LinearOnly, NoRemainder };
enum class DnBackend { FixedPoint, Elliptic };

struct StepperSpec {
    Scheme scheme = Scheme::EtdExponential;
    double dt = 1e-3;
    Nonlinearity nonlinearity = Nonlinearity::Full;
    // Lyapunov guard: reject a step that grows the L2 norm beyond the slack
    bool enforce_decay = true;
    double decay_slack = 1e-10;
};

struct DnConfig {
    DnBackend backend = DnBackend::FixedPoint;
    VerticalGrid vertical = VerticalGrid::geometric(40.0, 200, 1.05);
    DnOptions options = {};
    StripGrid strip = {};
    EllipticOptions elliptic = {};
};

// Uniform front end over the two DN backends; remembers the previous
// fixed-point layers and reuses them as the next initial guess.
struct DnImage {
    SpectralField dn;
    SpectralField remainder;
    int iterations = 0;
};

class DnEvaluator {
public:
    explicit DnEvaluator(DnConfig cfg) : cfg_(std::move(cfg)) {}
    DnImage image(const SpectralField& f, const SpectralField& g);
    const DnConfig& config() const { return cfg_; }
    void reset() { w_.reset(); v_.reset(); }

private:
    DnConfig cfg_;
    std::optional<LayeredField> w_, v_;
};

struct EvolutionState {
    double t = 0.0;
    SpectralField f;
    bool in_vr = true; // spectrum inside the Galerkin cutoff
};

struct RhsResult {
    SpectralField total;     // -(kappa/mu) S_R G(f)(rho*g*f + st*H(f))
    SpectralField linear;    // -A f
    SpectralField nonlinear; // total - linear, assembled from its own formula
    int dn_iterations = 0;
};

RhsResult compute_rhs(const SpectralField& f, const MuskatParams& p, DnEvaluator& dn,
                      Nonlinearity mode);
RhsResult rhs_split(const SpectralField& f, const MuskatParams& p, const DnConfig& dn,
                    Nonlinearity mode = Nonlinearity::Full);
SpectralField rhs_full(const SpectralField& f, const MuskatParams& p, const DnConfig& dn);

class Stepper {
public:
    Stepper(StepperSpec spec, MuskatParams params, DnConfig dn);

    // one dt step; stage1, if given, must be compute_rhs at state.f and is
    // reused as the first stage evaluation
    EvolutionState advance(const EvolutionState& state, const RhsResult* stage1 = nullptr);
    RhsResult evaluate(const SpectralField& f);

    const StepperSpec& spec() const { return spec_; }
    const MuskatParams& params() const { return params_; }

private:
    struct EtdTables;
    void ensure_tables(const TorusGrid& g);

    StepperSpec spec_;
    MuskatParams params_;
    DnEvaluator dn_;
    std::shared_ptr<EtdTables> tables_;
    const TorusGrid* tables_grid_ = nullptr;
};

EvolutionState step(const EvolutionState& state, const StepperSpec& spec,
                    const MuskatParams& p, const DnConfig& dn);

struct RunCallbacks {
    int cadence = 10; // record every this many steps (plus step 0 and the last)
    std::function<void(const EvolutionState&, const RhsResult&)> on_record;
};

struct RunOutcome {
    Trajectory traj;
    bool completed = false;
    std::string error;   // solver-regime failure message when !completed
    double t_reached = 0.0;
};

// Integrates to t_final (must be an integer number of dt steps); on a
// solver-regime failure returns the trajectory so far with completed = false.
RunOutcome run(const SpectralField& f0, double t_final, const StepperSpec& spec,
               const MuskatParams& p, const DnConfig& dn, const RunCallbacks& cb = {});

} // namespace muskat
