#include "muskat/field.hpp"

#include <cmath>
#include <cstdlib>

#include "muskat/errors.hpp"

namespace muskat {

namespace {

void require_same_grid(const SpectralField& a, const SpectralField& b) {
    if (a.grid.get() != b.grid.get())
        throw ValidationError("fields live on different grids");
}

std::size_t flat_of_mode(const TorusGrid& g, const std::vector<int>& k) {
    if (static_cast<int>(k.size()) != g.dim())
        throw ValidationError("mode vector length does not match grid dimension");
    std::size_t flat = 0;
    for (int a = 0; a < g.dim(); ++a) {
        int ka = k[a];
        if (ka < -g.n() / 2 || ka > g.n() / 2)
            throw ValidationError("mode outside grid band");
        int idx = ka >= 0 ? ka : ka + g.n();
        if (idx == g.n()) idx = 0;
        flat = flat * static_cast<std::size_t>(g.n()) + static_cast<std::size_t>(idx);
    }
    return flat;
}

} // namespace

SpectralField field_from_samples(const GridPtr& grid, const std::vector<double>& s) {
    if (s.size() != grid->size())
        throw ValidationError("sample array size does not match grid");
    return SpectralField(grid, grid->forward(s));
}

std::vector<double> samples(const SpectralField& f) { return f.grid->inverse(f.coeffs); }

SpectralField field_from_modes(const GridPtr& grid,
                               const std::function<Complex(const int*)>& coeff_of_mode) {
    SpectralField f(grid);
    int k[2] = {0, 0};
    for (std::size_t i = 0; i < grid->size(); ++i) {
        for (int a = 0; a < grid->dim(); ++a) k[a] = grid->mode(i, a);
        f.coeffs[i] = coeff_of_mode(k);
    }
    return f;
}

void add_cosine(SpectralField& f, const std::vector<int>& k, double amplitude,
                double phase) {
    const auto& g = *f.grid;
    std::vector<int> neg(k.size());
    bool zero = true;
    for (std::size_t a = 0; a < k.size(); ++a) {
        neg[a] = -k[a];
        if (k[a] != 0) zero = false;
    }
    Complex half = 0.5 * amplitude * Complex(std::cos(phase), std::sin(phase));
    if (zero) {
        f.coeffs[flat_of_mode(g, k)] += amplitude * std::cos(phase);
        return;
    }
    f.coeffs[flat_of_mode(g, k)] += half;
    f.coeffs[flat_of_mode(g, neg)] += std::conj(half);
}

Complex coeff_at(const SpectralField& f, const std::vector<int>& k) {
    return f.coeffs[flat_of_mode(*f.grid, k)];
}

void axpy(SpectralField& y, double a, const SpectralField& x) {
    require_same_grid(y, x);
    for (std::size_t i = 0; i < y.coeffs.size(); ++i) y.coeffs[i] += a * x.coeffs[i];
}

SpectralField scaled(const SpectralField& f, double a) {
    SpectralField out = f;
    for (auto& c : out.coeffs) c *= a;
    return out;
}

SpectralField added(const SpectralField& a, const SpectralField& b) {
    require_same_grid(a, b);
    SpectralField out = a;
    for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] += b.coeffs[i];
    return out;
}

SpectralField subtracted(const SpectralField& a, const SpectralField& b) {
    require_same_grid(a, b);
    SpectralField out = a;
    for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] -= b.coeffs[i];
    return out;
}

double inner_l2(const SpectralField& a, const SpectralField& b) {
    require_same_grid(a, b);
    double acc = 0.0;
    for (std::size_t i = 0; i < a.coeffs.size(); ++i)
        acc += (a.coeffs[i] * std::conj(b.coeffs[i])).real();
    return acc * std::pow(a.grid->period(), a.grid->dim());
}

double norm_l2(const SpectralField& f) { return std::sqrt(std::max(0.0, inner_l2(f, f))); }

double mean_value(const SpectralField& f) { return f.coeffs[0].real(); }

double hermitian_defect(const SpectralField& f) {
    const auto& g = *f.grid;
    double worst = 0.0;
    std::vector<int> k(g.dim()), neg(g.dim());
    for (std::size_t i = 0; i < g.size(); ++i) {
        bool skip = false;
        for (int a = 0; a < g.dim(); ++a) {
            k[a] = g.mode(i, a);
            if (k[a] == g.n() / 2) skip = true; // Nyquist is self-paired
            neg[a] = -k[a];
        }
        if (skip) continue;
        Complex other = f.coeffs[flat_of_mode(g, neg)];
        worst = std::max(worst, std::abs(f.coeffs[i] - std::conj(other)));
    }
    return worst;
}

SpectralField pointwise(const SpectralField& a,
                        const std::function<double(double)>& op) {
    auto sa = a.grid->inverse_padded(a.coeffs);
    for (auto& x : sa) x = op(x);
    return SpectralField(a.grid, a.grid->forward_padded(sa));
}

SpectralField pointwise(const SpectralField& a, const SpectralField& b,
                        const std::function<double(double, double)>& op) {
    require_same_grid(a, b);
    auto sa = a.grid->inverse_padded(a.coeffs);
    auto sb = b.grid->inverse_padded(b.coeffs);
    for (std::size_t i = 0; i < sa.size(); ++i) sa[i] = op(sa[i], sb[i]);
    return SpectralField(a.grid, a.grid->forward_padded(sa));
}

SpectralField pointwise(const SpectralField& a, const SpectralField& b,
                        const SpectralField& c,
                        const std::function<double(double, double, double)>& op) {
    require_same_grid(a, b);
    require_same_grid(a, c);
    auto sa = a.grid->inverse_padded(a.coeffs);
    auto sb = b.grid->inverse_padded(b.coeffs);
    auto sc = c.grid->inverse_padded(c.coeffs);
    for (std::size_t i = 0; i < sa.size(); ++i) sa[i] = op(sa[i], sb[i], sc[i]);
    return SpectralField(a.grid, a.grid->forward_padded(sa));
}

SpectralField product(const SpectralField& a, const SpectralField& b) {
    return pointwise(a, b, [](double x, double y) { return x * y; });
}

} // namespace muskat
