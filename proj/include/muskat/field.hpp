#pragma once

#include <functional>
#include <vector>

#include "muskat/grid.hpp"

namespace muskat {

// A real scalar field on a TorusGrid, stored by its Fourier coefficients.
struct SpectralField {
    GridPtr grid;
    std::vector<Complex> coeffs;

    SpectralField() = default;
    explicit SpectralField(GridPtr g) : grid(std::move(g)), coeffs(grid->size()) {}
    SpectralField(GridPtr g, std::vector<Complex> c) : grid(std::move(g)), coeffs(std::move(c)) {}
};

SpectralField field_from_samples(const GridPtr& grid, const std::vector<double>& samples);
std::vector<double> samples(const SpectralField& f);

// Builds a field from a mode map: for each flattened index the callback
// receives the integer wavevector (k[0..dim-1]) and returns the coefficient.
// The caller is responsible for Hermitian symmetry.
SpectralField field_from_modes(const GridPtr& grid,
                               const std::function<Complex(const int*)>& coeff_of_mode);

// Sets c_k and c_{-k} so that the field gains amplitude*cos(k.x + phase).
void add_cosine(SpectralField& f, const std::vector<int>& k, double amplitude,
                double phase = 0.0);

Complex coeff_at(const SpectralField& f, const std::vector<int>& k);

// in-place linear algebra on coefficients
void axpy(SpectralField& y, double a, const SpectralField& x);
SpectralField scaled(const SpectralField& f, double a);
SpectralField added(const SpectralField& a, const SpectralField& b);
SpectralField subtracted(const SpectralField& a, const SpectralField& b);

// L^2(T^d) inner product via Parseval: period^d * sum_k a_k conj(b_k)
double inner_l2(const SpectralField& a, const SpectralField& b);
double norm_l2(const SpectralField& f);
double mean_value(const SpectralField& f);
// max_k deviation from Hermitian symmetry, |c_k - conj(c_{-k})|
double hermitian_defect(const SpectralField& f);

// Dealiased pointwise compositions: operands are sampled on the 3n/2 grid,
// combined there, and transformed back with the Nyquist modes zeroed.
SpectralField pointwise(const SpectralField& a,
                        const std::function<double(double)>& op);
SpectralField pointwise(const SpectralField& a, const SpectralField& b,
                        const std::function<double(double, double)>& op);
SpectralField pointwise(const SpectralField& a, const SpectralField& b,
                        const SpectralField& c,
                        const std::function<double(double, double, double)>& op);
SpectralField product(const SpectralField& a, const SpectralField& b);

} // namespace muskat
