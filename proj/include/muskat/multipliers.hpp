#pragma once

#include <variant>
#include <vector>

#include "muskat/field.hpp"

namespace muskat {

// Fourier multipliers m(xi) applied coefficient-wise. All symbols are radial
// except Gradient; every symbol vanishes (or is neutral) at xi = 0 in a way
// that keeps the mean mode exactly where it started.

struct AbsNabla {};                      // |xi|
struct AbsNablaPow { double s; };        // |xi|^s, zero mode untouched iff s>0 (s<0 kills it)
struct PoissonSemigroup { double z; };   // e^{z |xi|}, requires z <= 0
struct SharpCutoff { double radius; };   // indicator |xi| <= radius
struct LittlewoodPaley { int j; };       // P_j, j >= -1 (j = -1 is the low-pass)
struct Gradient { int axis; };           // i xi_axis (Nyquist zeroed)
struct Laplacian {};                     // -|xi|^2
struct LinearRate {                      // (kappa/mu) |xi| (rho*g + st*|xi|^2)
    double kappa = 1.0, mu = 1.0, rho = 1.0, gravity = 1.0, surface_tension = 1.0;
};
struct LinearSemigroup {                 // e^{-t * LinearRate(xi)}, t >= 0
    double t;
    LinearRate rate;
};

using MultiplierSpec =
    std::variant<AbsNabla, AbsNablaPow, PoissonSemigroup, SharpCutoff,
                 LittlewoodPaley, Gradient, Laplacian, LinearRate, LinearSemigroup>;

// scalar symbol value; for Gradient this returns the imaginary part's factor
// and is not used (apply handles it directly)
double symbol_value(const MultiplierSpec& spec, double xi_abs);

SpectralField apply_multiplier(const SpectralField& f, const MultiplierSpec& spec);

// convenience wrappers
SpectralField abs_nabla(const SpectralField& f);
SpectralField abs_nabla_pow(const SpectralField& f, double s);
SpectralField derivative(const SpectralField& f, int axis);
std::vector<SpectralField> gradient(const SpectralField& f);
SpectralField divergence(const std::vector<SpectralField>& v);
SpectralField fourier_truncate(const SpectralField& f, double radius);
SpectralField lp_project(const SpectralField& f, int j);

// Littlewood-Paley bump functions (C^infty, built from the standard
// exp(-1/t) smoothstep): phi = 1 on |xi| <= 5/4, 0 on |xi| >= 8/5;
// psi(xi) = phi(xi) - phi(2 xi) supported in [5/8, 8/5]; the low-pass block
// chi(xi) = phi(2 xi) makes chi + sum_{j>=0} psi(2^{-j} xi) = 1 exactly.
double lp_phi(double r);
double lp_psi(double r);
double lp_chi(double r);

// Harmonic extension to the lower half space sampled at heights z[l] <= 0:
// level l holds e^{z_l |xi|} f.
struct LayeredField {
    GridPtr grid;
    std::vector<double> z;
    std::vector<std::vector<Complex>> levels; // levels[l][mode]
};

LayeredField poisson_extend(const SpectralField& f, const std::vector<double>& z);

} // namespace muskat
