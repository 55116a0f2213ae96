#include "muskat/curvature.hpp"

#include <cmath>
#include <limits>

#include "muskat/multipliers.hpp"

namespace muskat {

double h1_profile_sq(double grad_sq) {
    // 1/sqrt(1+s) - 1, stable for tiny s via expm1-style rewrite
    if (grad_sq < 1e-8) return -0.5 * grad_sq + 0.375 * grad_sq * grad_sq;
    return 1.0 / std::sqrt(1.0 + grad_sq) - 1.0;
}

CurvatureDecomposition mean_curvature(const SpectralField& f) {
    const auto& g = *f.grid;
    CurvatureDecomposition out;
    out.linear = scaled(apply_multiplier(f, Laplacian{}), -1.0);

    auto grads = gradient(f);
    std::vector<std::vector<double>> gs;
    gs.reserve(grads.size());
    for (const auto& d : grads) gs.push_back(g.inverse_padded(d.coeffs));

    // flux components grad f * h1(|grad f|^2), assembled on the padded grid
    std::vector<SpectralField> flux;
    std::vector<double> work(g.padded_size());
    for (int a = 0; a < g.dim(); ++a) {
        for (std::size_t i = 0; i < g.padded_size(); ++i) {
            double s = 0.0;
            for (const auto& comp : gs) s += comp[i] * comp[i];
            work[i] = gs[a][i] * h1_profile_sq(s);
        }
        flux.emplace_back(f.grid, g.forward_padded(work));
    }
    out.nonlinear = scaled(divergence(flux), -1.0);
    out.total = added(out.linear, out.nonlinear);
    return out;
}

SpectralField mean_curvature_total(const SpectralField& f) {
    return mean_curvature(f).total;
}

TaylorCoefficient taylor_coefficient(const SpectralField& f, const SpectralField& dn_ff) {
    const auto& g = *f.grid;
    auto dn_s = g.inverse_padded(dn_ff.coeffs);
    std::vector<std::vector<double>> gs;
    for (int a = 0; a < g.dim(); ++a)
        gs.push_back(g.inverse_padded(derivative(f, a).coeffs));

    std::vector<double> ratio(g.padded_size());
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < g.padded_size(); ++i) {
        double grad_sq = 0.0;
        for (const auto& comp : gs) grad_sq += comp[i] * comp[i];
        ratio[i] = (1.0 - dn_s[i]) / (1.0 + grad_sq);
        lo = std::min(lo, ratio[i]);
        hi = std::max(hi, ratio[i]);
    }
    return TaylorCoefficient{SpectralField(f.grid, g.forward_padded(ratio)), lo, hi};
}

double lyapunov_j(const SpectralField& f, const SpectralField& dn_ff) {
    return inner_l2(mean_curvature_total(f), dn_ff);
}

} // namespace muskat
