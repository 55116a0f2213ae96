#pragma once

#include <utility>
#include <vector>

#include "muskat/multipliers.hpp"

namespace muskat {

// Dirichlet-Neumann operator on the lower half space below the graph z = f(x),
// computed as G(f)g = |grad|g + R(f;g) where the remainder R is the boundary
// trace of the correction layer w. (w, v) solve a fixed-point system driven by
// two nonlinear layers Q_a, Q_b and two exponential integral operators (one
// integrating up from z = -infinity, one down from the surface). The iteration
// contracts for small interface slopes; the guard machinery below reports when
// the input leaves that regime instead of returning garbage.

struct VerticalGrid {
    std::vector<double> z; // strictly ascending, z.front() = -z_max, z.back() = 0

    double z_max() const { return -z.front(); }
    int levels() const { return static_cast<int>(z.size()) - 1; }

    // `levels` intervals whose spacings shrink geometrically toward z = 0 by
    // `ratio` per interval; the largest spacing sits at the bottom.
    static VerticalGrid geometric(double z_max, int levels, double ratio = 1.05);
    static VerticalGrid uniform(double z_max, int levels);
};

struct DnOptions {
    int max_iter = 30;
    double tol = 1e-12;
    // NoContraction fires after this many consecutive residual ratios > guard
    double contraction_guard = 0.9;
    int guard_patience = 5;
    // DegenerateJacobian fires when min(1 + dz P) falls to this floor
    double jacobian_floor = 0.05;
};

struct DnSolution {
    SpectralField dn;        // G(f) g
    SpectralField remainder; // R(f; g) = w at z = 0
    LayeredField w, v;
    int iterations = 0;
    std::vector<double> residual_history;
};

// Optional initial guess (previous solve on the same grids), cuts 2-3 Picard
// iterations inside time-stepping loops.
struct DnWarmStart {
    const LayeredField* w = nullptr;
    const LayeredField* v = nullptr;
};

DnSolution solve_dn(const SpectralField& f, const SpectralField& g,
                    const VerticalGrid& vg, const DnOptions& opts = {},
                    const DnWarmStart& warm = {});

// Harmonic extension P = e^{z|grad|} f and the layer
// B = (|grad P|^2 - dz P)/(1 + dz P), with dz P = |grad| P.
// Throws DegenerateJacobian when 1 + dz P reaches the floor.
std::pair<LayeredField, LayeredField> compute_layers_b(const SpectralField& f,
                                                       const VerticalGrid& vg,
                                                       double jacobian_floor = 0.05);

// Q_a = (1+B)^{-1} grad P . grad v - B (1+B)^{-1} (w + |grad| v)
LayeredField assemble_qa(const LayeredField& w, const LayeredField& v,
                         const LayeredField& P, const LayeredField& B);

// Q_b = (|grad| v + w + Q_a) grad P - (dz P) grad v, one component per x-axis
std::vector<LayeredField> assemble_qb(const LayeredField& w, const LayeredField& v,
                                      const LayeredField& P, const LayeredField& Qa);

// Pi1(Qa, Qb)(z) = int_{-inf}^z e^{-(z-tau)|grad|} (div Qb - |grad| Qa) dtau.
// The integrand has no mean mode (div and |grad| kill it); asserted inside.
LayeredField apply_pi1(const LayeredField& Qa, const std::vector<LayeredField>& Qb);

// Pi2(w, Qa)(z) = -int_z^0 e^{(z-tau)|grad|} (w + Qa) dtau
LayeredField apply_pi2(const LayeredField& w, const LayeredField& Qa);

// Exponential layer integrals, exposed for direct testing. Per Fourier mode,
//   up:   U(z_j) = int_{-inf}^{z_j} e^{-(z_j-tau)|xi|} h(tau) dtau
//   down: V(z_j) = int_{z_j}^0     e^{ (z_j-tau)|xi|} h(tau) dtau
// with h piecewise linear between levels (quadrature exact for that class);
// `up` closes the tail below the grid with h frozen at its bottom value and
// requires a mean-free integrand (the |xi| = 0 tail would diverge).
LayeredField integrate_exp_up(const LayeredField& h);
LayeredField integrate_exp_down(const LayeredField& h);

struct ContractionProbe {
    double ratio = 0.0;  // ||R(f1;g)-R(f2;g)||_{H^{sigma-1}} / (||f1-f2||_{H^s} ||g||_{H^sigma})
    bool degenerate = false; // f1 == f2 (0/0), ratio reported as 0
    double s = 2.0, sigma = 2.0;
};

ContractionProbe dn_contraction_probe(const SpectralField& f1, const SpectralField& f2,
                                      const SpectralField& g, const VerticalGrid& vg,
                                      const DnOptions& opts = {}, double s = 2.0,
                                      double sigma = 2.0);

} // namespace muskat
