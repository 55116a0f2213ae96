#pragma once

#include "muskat/field.hpp"

namespace muskat {

// Nonlinearity profile of the mean curvature operator:
//   h1(p) = (1 + |p|^2)^{-1/2} - 1,
// expressed as a function of s = |p|^2. Vanishes like -s/2 at s = 0, which is
// what makes the curvature split below have a purely cubic remainder.
double h1_profile_sq(double grad_sq);

struct CurvatureDecomposition {
    SpectralField linear;     // -Laplacian f
    SpectralField nonlinear;  // -Div( grad f * h1(|grad f|^2) )
    SpectralField total;
};

// Mean curvature of the graph z = f(x), with the sign convention that makes
// it -Laplacian to leading order.
CurvatureDecomposition mean_curvature(const SpectralField& f);
SpectralField mean_curvature_total(const SpectralField& f);

// Surface coefficient a(x) = (1 - (Gf)(x)) / (1 + |grad f(x)|^2) evaluated for
// the Dirichlet data g = f; dn_ff is the Dirichlet-Neumann image G(f) f.
struct TaylorCoefficient {
    SpectralField field;
    double min_value;
    double max_value;
};

TaylorCoefficient taylor_coefficient(const SpectralField& f, const SpectralField& dn_ff);

// Lyapunov pairing J(f) = <mean_curvature(f), G(f) f>_{L^2}
double lyapunov_j(const SpectralField& f, const SpectralField& dn_ff);

} // namespace muskat
