#pragma once

#include <vector>

#include "muskat/field.hpp"

namespace muskat {

// Independent DN backend: straighten the fluid domain below z = f(x) onto a
// flat strip [-depth, 0], solve Div(A grad v) = 0 with the induced coefficient
// matrix A(x) = [I, -grad f; -(grad f)^T, 1 + |grad f|^2], and read the DN
// image off the conormal derivative at the surface. Spectral in x, staggered
// second-order finite differences in z, preconditioned BiCGStab for the
// linear system. Exists to cross-check the fixed-point expansion; shares no
// numerics with it beyond the FFT.

struct StripGrid {
    int nz = 400;       // uniform intervals; levels are 0..nz, bottom to surface
    double depth = 8.0; // strip is [-depth, 0]

    double dz() const { return depth / nz; }
    std::vector<double> levels() const;
    static StripGrid make(int nz, double depth); // validates nz >= 100, depth >= 6
};

struct EllipticOptions {
    double tol = 1e-12;
    int max_iter = 500;
};

struct EllipticSolution {
    GridPtr grid;
    StripGrid strip;
    std::vector<std::vector<Complex>> v; // v[l][mode], l = 0 bottom ... nz surface
    SpectralField dn;                    // G(f) g from the surface conormal trace
    int iterations = 0;
    double rel_residual = 0.0;
};

// Samples (nominal grid) of the straightening data entering A(x).
struct CoefficientField {
    std::vector<std::vector<double>> grad; // grad[axis][sample] of f
    std::vector<double> grad_sq;           // |grad f|^2 per sample
};

CoefficientField straighten_coefficients(const SpectralField& f);

// Bottom closure: exact flat-strip DN condition dz v = |k| v per mode at
// z = -depth (dz v = 0 for the mean mode). Surface: Dirichlet v = g.
EllipticSolution solve_dn_elliptic(const SpectralField& f, const SpectralField& g,
                                   const StripGrid& strip = {},
                                   const EllipticOptions& opts = {});

// (1 + |grad f|^2) dz v - grad f . grad v at z = 0, with a one-sided
// fourth-order dz stencil. solve_dn_elliptic already stores this in `dn`.
SpectralField dn_trace(const EllipticSolution& sol, const SpectralField& f);

// Hydraulic pressure diagnostics for the evolution potential (g = f):
// Q = v - (f + z) on the strip, Q = 0 at the surface by construction.
struct PressureDiagnostics {
    double min_q = 0.0;               // min over the strip
    double min_neg_dz = 0.0;          // min over the strip of -dz Q = 1 - dz v
    std::vector<double> surface_a;    // nominal samples of 1 - dz v(., 0)
    bool negative_pressure = false;   // min_q below -10 * solver tol
};

PressureDiagnostics hydraulic_pressure(const EllipticSolution& sol,
                                       const SpectralField& f,
                                       double solver_tol = 1e-12);

} // namespace muskat
