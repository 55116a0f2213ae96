#include "muskat/norms.hpp"

#include <algorithm>
#include <cmath>

#include "muskat/errors.hpp"
#include "muskat/multipliers.hpp"

namespace muskat {

namespace {

bool mean_is_negligible(const SpectralField& f) {
    double scale = std::max(1.0, norm_l2(f));
    return std::abs(f.coeffs[0]) <= 1e-13 * scale;
}

// l2 norm of one dyadic block without materialising a field per block
double block_l2(const SpectralField& f, int j) {
    const auto& g = *f.grid;
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double w = j == -1 ? lp_chi(g.xi_abs(i)) : lp_psi(std::ldexp(g.xi_abs(i), -j));
        if (w == 0.0) continue;
        acc += w * w * std::norm(f.coeffs[i]);
    }
    return std::sqrt(acc * std::pow(g.period(), g.dim()));
}

double lq_accumulate(const std::vector<double>& terms, double q) {
    if (q == kInf) {
        double m = 0.0;
        for (double t : terms) m = std::max(m, t);
        return m;
    }
    double acc = 0.0;
    for (double t : terms) acc += std::pow(t, q);
    return std::pow(acc, 1.0 / q);
}

} // namespace

int lp_block_ceiling(const TorusGrid& grid) {
    double xi_max = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) xi_max = std::max(xi_max, grid.xi_abs(i));
    if (xi_max <= 0.0) return -1;
    // psi(2^{-j} xi) vanishes once 2^{-j} xi < 5/8
    return static_cast<int>(std::ceil(std::log2(xi_max / 0.625)));
}

double lebesgue_norm(const SpectralField& f, double p) {
    if (p < 1.0) throw ValidationError("Lebesgue exponent must satisfy p >= 1");
    const auto& g = *f.grid;
    if (p == kInf) {
        auto s = g.inverse_padded(f.coeffs);
        double m = 0.0;
        for (double x : s) m = std::max(m, std::abs(x));
        return m;
    }
    if (p == 2.0) return norm_l2(f);
    auto s = samples(f);
    double acc = 0.0;
    for (double x : s) acc += std::pow(std::abs(x), p);
    double cell = std::pow(g.dx(), g.dim());
    return std::pow(acc * cell, 1.0 / p);
}

double sobolev_norm(const SpectralField& f, double s) {
    const auto& g = *f.grid;
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double xi2 = g.xi_abs(i) * g.xi_abs(i);
        acc += std::pow(1.0 + xi2, s) * std::norm(f.coeffs[i]);
    }
    return std::sqrt(acc * std::pow(g.period(), g.dim()));
}

double hom_sobolev_norm(const SpectralField& f, double s) {
    const auto& g = *f.grid;
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double xi = g.xi_abs(i);
        if (xi == 0.0) continue;
        acc += std::pow(xi, 2.0 * s) * std::norm(f.coeffs[i]);
    }
    return std::sqrt(acc * std::pow(g.period(), g.dim()));
}

double besov_norm(const SpectralField& f, double s, double q) {
    if (q < 1.0) throw ValidationError("Besov exponent must satisfy q >= 1");
    int j_hi = lp_block_ceiling(*f.grid);
    std::vector<double> terms;
    terms.push_back(block_l2(f, -1));
    for (int j = 0; j <= j_hi; ++j)
        terms.push_back(std::pow(2.0, s * j) * block_l2(f, j));
    return lq_accumulate(terms, q);
}

double lipschitz_seminorm(const SpectralField& f) {
    const auto& g = *f.grid;
    std::vector<std::vector<double>> comps;
    for (int a = 0; a < g.dim(); ++a)
        comps.push_back(g.inverse_padded(derivative(f, a).coeffs));
    double m = 0.0;
    for (std::size_t i = 0; i < g.padded_size(); ++i) {
        double s2 = 0.0;
        for (const auto& c : comps) s2 += c[i] * c[i];
        m = std::max(m, std::sqrt(s2));
    }
    return m;
}

NormResult evaluate_norm(const SpectralField& f, const NormSpec& spec) {
    NormResult r;
    switch (spec.family) {
        case NormFamily::Lebesgue:
            r.value = lebesgue_norm(f, spec.p);
            break;
        case NormFamily::Sobolev:
            r.value = sobolev_norm(f, spec.s);
            break;
        case NormFamily::HomSobolev:
            r.value = hom_sobolev_norm(f, spec.s);
            r.mean_ignored = !mean_is_negligible(f);
            break;
        case NormFamily::Besov:
            r.value = besov_norm(f, spec.s, spec.q);
            break;
        case NormFamily::HomBesov: {
            if (spec.q < 1.0) throw ValidationError("Besov exponent must satisfy q >= 1");
            const auto& g = *f.grid;
            int j_hi = lp_block_ceiling(g);
            // blocks below log2(k_min) - 1 see only the zero mode, where psi = 0
            int j_lo = static_cast<int>(std::floor(std::log2(g.k_min()))) - 2;
            std::vector<double> terms;
            for (int j = j_lo; j <= j_hi; ++j) {
                double b = 0.0;
                for (std::size_t i = 0; i < g.size(); ++i) {
                    double w = lp_psi(std::ldexp(g.xi_abs(i), -j));
                    if (w != 0.0) b += w * w * std::norm(f.coeffs[i]);
                }
                terms.push_back(std::pow(2.0, spec.s * j) *
                                std::sqrt(b * std::pow(g.period(), g.dim())));
            }
            r.value = lq_accumulate(terms, spec.q);
            r.mean_ignored = !mean_is_negligible(f);
            break;
        }
        case NormFamily::Lipschitz:
            r.value = lipschitz_seminorm(f);
            break;
    }
    return r;
}

double norm_value(const SpectralField& f, const NormSpec& spec) {
    return evaluate_norm(f, spec).value;
}

double chemin_lerner_norm(const Trajectory& traj, double s, double q) {
    if (q < 1.0) throw ValidationError("Besov exponent must satisfy q >= 1");
    if (traj.states.empty()) throw ValidationError("empty trajectory");
    int j_hi = lp_block_ceiling(*traj.states.front().grid);
    std::vector<double> terms;
    for (int j = -1; j <= j_hi; ++j) {
        double sup = 0.0;
        for (const auto& f : traj.states) sup = std::max(sup, block_l2(f, j));
        terms.push_back(j == -1 ? sup : std::pow(2.0, s * j) * sup);
    }
    return lq_accumulate(terms, q);
}

} // namespace muskat
