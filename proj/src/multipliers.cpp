#include "muskat/multipliers.hpp"

#include <cmath>

#include "muskat/errors.hpp"

namespace muskat {

namespace {

// smoothstep on [0,1] from the flat bump b(t) = exp(-1/t)
double bump(double t) { return t <= 0.0 ? 0.0 : std::exp(-1.0 / t); }

double smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double a = bump(t), b = bump(1.0 - t);
    return a / (a + b);
}

constexpr double kPhiInner = 1.25;  // 5/4
constexpr double kPhiOuter = 1.6;   // 8/5

double rate_value(const LinearRate& r, double xi) {
    return (r.kappa / r.mu) * xi * (r.rho * r.gravity + r.surface_tension * xi * xi);
}

} // namespace

double lp_phi(double r) {
    r = std::abs(r);
    if (r <= kPhiInner) return 1.0;
    if (r >= kPhiOuter) return 0.0;
    return smoothstep((kPhiOuter - r) / (kPhiOuter - kPhiInner));
}

double lp_psi(double r) { return lp_phi(r) - lp_phi(2.0 * r); }

double lp_chi(double r) { return lp_phi(2.0 * r); }

double symbol_value(const MultiplierSpec& spec, double xi) {
    return std::visit(
        [xi](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, AbsNabla>) {
                return xi;
            } else if constexpr (std::is_same_v<T, AbsNablaPow>) {
                if (xi == 0.0) return 0.0; // homogeneous symbols annihilate the mean
                return std::pow(xi, s.s);
            } else if constexpr (std::is_same_v<T, PoissonSemigroup>) {
                if (s.z > 0.0) throw ValidationError("PoissonSemigroup requires z <= 0");
                return std::exp(s.z * xi);
            } else if constexpr (std::is_same_v<T, SharpCutoff>) {
                return xi <= s.radius ? 1.0 : 0.0;
            } else if constexpr (std::is_same_v<T, LittlewoodPaley>) {
                if (s.j < -1) throw ValidationError("LittlewoodPaley block index must be >= -1");
                if (s.j == -1) return lp_chi(xi);
                return lp_psi(std::ldexp(xi, -s.j)); // psi(2^{-j} xi)
            } else if constexpr (std::is_same_v<T, Gradient>) {
                throw ValidationError("Gradient has no radial symbol");
            } else if constexpr (std::is_same_v<T, Laplacian>) {
                return -xi * xi;
            } else if constexpr (std::is_same_v<T, LinearRate>) {
                return rate_value(s, xi);
            } else {
                static_assert(std::is_same_v<T, LinearSemigroup>);
                if (s.t < 0.0) throw ValidationError("LinearSemigroup requires t >= 0");
                return std::exp(-s.t * rate_value(s.rate, xi));
            }
        },
        spec);
}

SpectralField apply_multiplier(const SpectralField& f, const MultiplierSpec& spec) {
    const auto& g = *f.grid;
    SpectralField out(f.grid);
    if (const auto* grad = std::get_if<Gradient>(&spec)) {
        if (grad->axis < 0 || grad->axis >= g.dim())
            throw ValidationError("Gradient axis out of range");
        for (std::size_t i = 0; i < g.size(); ++i) {
            int k = g.mode(i, grad->axis);
            // the unpaired Nyquist mode has no real-valued derivative; drop it
            if (k == g.n() / 2) {
                out.coeffs[i] = 0.0;
                continue;
            }
            out.coeffs[i] = Complex(0.0, g.k_min() * k) * f.coeffs[i];
        }
        return out;
    }
    for (std::size_t i = 0; i < g.size(); ++i)
        out.coeffs[i] = symbol_value(spec, g.xi_abs(i)) * f.coeffs[i];
    return out;
}

SpectralField abs_nabla(const SpectralField& f) { return apply_multiplier(f, AbsNabla{}); }

SpectralField abs_nabla_pow(const SpectralField& f, double s) {
    return apply_multiplier(f, AbsNablaPow{s});
}

SpectralField derivative(const SpectralField& f, int axis) {
    return apply_multiplier(f, Gradient{axis});
}

std::vector<SpectralField> gradient(const SpectralField& f) {
    std::vector<SpectralField> g;
    g.reserve(f.grid->dim());
    for (int a = 0; a < f.grid->dim(); ++a) g.push_back(derivative(f, a));
    return g;
}

SpectralField divergence(const std::vector<SpectralField>& v) {
    if (v.empty()) throw ValidationError("divergence of empty vector field");
    SpectralField out = derivative(v[0], 0);
    for (std::size_t a = 1; a < v.size(); ++a)
        axpy(out, 1.0, derivative(v[a], static_cast<int>(a)));
    return out;
}

SpectralField fourier_truncate(const SpectralField& f, double radius) {
    return apply_multiplier(f, SharpCutoff{radius});
}

SpectralField lp_project(const SpectralField& f, int j) {
    return apply_multiplier(f, LittlewoodPaley{j});
}

LayeredField poisson_extend(const SpectralField& f, const std::vector<double>& z) {
    LayeredField lf;
    lf.grid = f.grid;
    lf.z = z;
    lf.levels.reserve(z.size());
    const auto& g = *f.grid;
    for (double zl : z) {
        if (zl > 1e-14) throw ValidationError("poisson_extend requires z <= 0");
        std::vector<Complex> lvl(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            lvl[i] = std::exp(std::min(zl, 0.0) * g.xi_abs(i)) * f.coeffs[i];
        lf.levels.push_back(std::move(lvl));
    }
    return lf;
}

} // namespace muskat
