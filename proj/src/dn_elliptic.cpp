#include "muskat/dn_elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "muskat/errors.hpp"
#include "muskat/multipliers.hpp"

namespace muskat {

namespace {

using Vec = std::vector<Complex>;

double dot_re(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (std::conj(a[i]) * b[i]).real();
    return s;
}

Complex dot_c(const Vec& a, const Vec& b) {
    Complex s(0.0);
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double nrm(const Vec& a) { return std::sqrt(std::max(0.0, dot_re(a, a))); }

// Discrete operator and its flat-coefficient preconditioner. Unknown layout:
// x[l * nm + mode], l = 0 (bottom) .. nz (surface).
struct StripOperator {
    const TorusGrid& g;
    StripGrid strip;
    std::vector<std::vector<double>> gf; // padded samples of grad f per axis
    std::vector<double> one_plus_gsq;    // padded samples of 1 + |grad f|^2

    std::size_t nm() const { return g.size(); }
    std::size_t unknowns() const { return (strip.nz + 1) * nm(); }

    StripOperator(const SpectralField& f, const StripGrid& s) : g(*f.grid), strip(s) {
        for (int a = 0; a < g.dim(); ++a)
            gf.push_back(g.inverse_padded(derivative(f, a).coeffs));
        one_plus_gsq.resize(g.padded_size());
        for (std::size_t i = 0; i < g.padded_size(); ++i) {
            double s2 = 0.0;
            for (const auto& c : gf) s2 += c[i] * c[i];
            one_plus_gsq[i] = 1.0 + s2;
        }
    }

    // multiply level coefficients by i xi_a (Nyquist dropped)
    void spectral_dx(const Complex* in, int axis, Vec& out) const {
        for (std::size_t i = 0; i < nm(); ++i) {
            int k = g.mode(i, axis);
            out[i] = k == g.n() / 2 ? Complex(0.0)
                                    : Complex(0.0, g.k_min() * k) * in[i];
        }
    }

    void apply(const Vec& x, Vec& y) const {
        const int nz = strip.nz;
        const double dz = strip.dz();
        const std::size_t m = nm();

        // horizontal derivative samples per level
        std::vector<std::vector<std::vector<double>>> u1(nz + 1);
        Vec tmp(m);
        for (int l = 0; l <= nz; ++l) {
            u1[l].resize(g.dim());
            for (int a = 0; a < g.dim(); ++a) {
                spectral_dx(&x[l * m], a, tmp);
                u1[l][a] = g.inverse_padded(tmp);
            }
        }

        // vertical flux F2 at half levels l+1/2, l = 0..nz-1
        std::vector<Vec> f2(nz);
        std::vector<double> work(g.padded_size());
        for (int l = 0; l < nz; ++l) {
            for (std::size_t i = 0; i < m; ++i)
                tmp[i] = (x[(l + 1) * m + i] - x[l * m + i]) / dz;
            auto u2h = g.inverse_padded(tmp);
            for (std::size_t i = 0; i < g.padded_size(); ++i) {
                double cross = 0.0;
                for (int a = 0; a < g.dim(); ++a)
                    cross += gf[a][i] * 0.5 * (u1[l][a][i] + u1[l + 1][a][i]);
                work[i] = one_plus_gsq[i] * u2h[i] - cross;
            }
            f2[l] = g.forward_padded(work);
        }

        // bottom row: one-sided dz v = |k| v (mean mode: dz v = 0)
        for (std::size_t i = 0; i < m; ++i) {
            Complex dzv = (-3.0 * x[i] + 4.0 * x[m + i] - x[2 * m + i]) / (2.0 * dz);
            y[i] = dzv - g.xi_abs(i) * x[i];
        }
        // interior rows
        Vec f1_hat(m);
        for (int l = 1; l < nz; ++l) {
            for (std::size_t i = 0; i < m; ++i)
                y[l * m + i] = (f2[l][i] - f2[l - 1][i]) / dz;
            // horizontal divergence of F1 = u1 - grad f * u2(central)
            for (std::size_t i = 0; i < m; ++i)
                tmp[i] = (x[(l + 1) * m + i] - x[(l - 1) * m + i]) / (2.0 * dz);
            auto u2c = g.inverse_padded(tmp);
            for (int a = 0; a < g.dim(); ++a) {
                for (std::size_t i = 0; i < g.padded_size(); ++i)
                    work[i] = u1[l][a][i] - gf[a][i] * u2c[i];
                auto fa = g.forward_padded(work);
                spectral_dx(fa.data(), a, f1_hat);
                for (std::size_t i = 0; i < m; ++i) y[l * m + i] += f1_hat[i];
            }
        }
        // surface row: Dirichlet
        for (std::size_t i = 0; i < m; ++i) y[nz * m + i] = x[nz * m + i];
    }

    // flat-coefficient (f = 0) solve, used as preconditioner: per mode a real
    // tridiagonal system with first-order Robin bottom row
    void precondition(const Vec& r, Vec& zout) const {
        const int nz = strip.nz;
        const double dz = strip.dz();
        const std::size_t m = nm();
        std::vector<double> diag(nz + 1), upper(nz + 1), lower(nz + 1);
        Vec rhs(nz + 1), sol(nz + 1);
        for (std::size_t i = 0; i < m; ++i) {
            double xi = g.xi_abs(i);
            lower[0] = 0.0;
            diag[0] = -1.0 / dz - xi;
            upper[0] = 1.0 / dz;
            for (int l = 1; l < nz; ++l) {
                lower[l] = 1.0 / (dz * dz);
                diag[l] = -2.0 / (dz * dz) - xi * xi;
                upper[l] = 1.0 / (dz * dz);
            }
            lower[nz] = 0.0;
            diag[nz] = 1.0;
            upper[nz] = 0.0;
            for (int l = 0; l <= nz; ++l) rhs[l] = r[l * m + i];
            // Thomas sweep
            double piv = diag[0];
            sol[0] = rhs[0] / piv;
            std::vector<double> cp(nz + 1);
            cp[0] = upper[0] / piv;
            for (int l = 1; l <= nz; ++l) {
                piv = diag[l] - lower[l] * cp[l - 1];
                cp[l] = upper[l] / piv;
                sol[l] = (rhs[l] - lower[l] * sol[l - 1]) / piv;
            }
            for (int l = nz - 1; l >= 0; --l) sol[l] -= cp[l] * sol[l + 1];
            for (int l = 0; l <= nz; ++l) zout[l * m + i] = sol[l];
        }
    }
};

// textbook preconditioned BiCGStab; returns iterations used
int bicgstab(const StripOperator& op, const Vec& b, Vec& x, double tol, int max_iter,
             double* rel_out) {
    const std::size_t n = b.size();
    Vec r(n), rhat(n), p(n, Complex(0.0)), vv(n, Complex(0.0)), s(n), t(n), phat(n),
        shat(n), ax(n);
    op.apply(x, ax);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ax[i];
    rhat = r;
    double bnorm = nrm(b);
    if (bnorm == 0.0) bnorm = 1.0;
    Complex rho(1.0), alpha(1.0), omega(1.0);
    int it = 0;
    double rel = nrm(r) / bnorm;
    while (rel > tol && it < max_iter) {
        ++it;
        Complex rho1 = dot_c(rhat, r);
        if (std::abs(rho1) < 1e-300)
            throw NonConvergenceError("elliptic solve: BiCGStab breakdown (rho)");
        if (it == 1) {
            p = r;
        } else {
            Complex beta = (rho1 / rho) * (alpha / omega);
            for (std::size_t i = 0; i < n; ++i)
                p[i] = r[i] + beta * (p[i] - omega * vv[i]);
        }
        rho = rho1;
        op.precondition(p, phat);
        op.apply(phat, vv);
        alpha = rho / dot_c(rhat, vv);
        for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * vv[i];
        if (nrm(s) / bnorm <= tol) {
            for (std::size_t i = 0; i < n; ++i) x[i] += alpha * phat[i];
            rel = nrm(s) / bnorm;
            break;
        }
        op.precondition(s, shat);
        op.apply(shat, t);
        double tt = dot_re(t, t);
        if (tt == 0.0)
            throw NonConvergenceError("elliptic solve: BiCGStab breakdown (t)");
        omega = dot_c(t, s) / tt;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * phat[i] + omega * shat[i];
            r[i] = s[i] - omega * t[i];
        }
        rel = nrm(r) / bnorm;
        if (std::abs(omega) < 1e-300)
            throw NonConvergenceError("elliptic solve: BiCGStab breakdown (omega)");
    }
    if (rel > tol)
        throw NonConvergenceError("elliptic solve did not converge: rel residual " +
                                  std::to_string(rel) + " after " +
                                  std::to_string(it) + " iterations");
    if (rel_out) *rel_out = rel;
    return it;
}

// one-sided fourth-order dz at the surface, per mode
Vec surface_dz(const std::vector<std::vector<Complex>>& v, double dz) {
    const int top = static_cast<int>(v.size()) - 1;
    const std::size_t m = v[0].size();
    Vec out(m);
    for (std::size_t i = 0; i < m; ++i)
        out[i] = (25.0 * v[top][i] - 48.0 * v[top - 1][i] + 36.0 * v[top - 2][i] -
                  16.0 * v[top - 3][i] + 3.0 * v[top - 4][i]) /
                 (12.0 * dz);
    return out;
}

} // namespace

std::vector<double> StripGrid::levels() const {
    std::vector<double> z(nz + 1);
    for (int l = 0; l <= nz; ++l) z[l] = -depth + l * (depth / nz);
    z[nz] = 0.0;
    return z;
}

StripGrid StripGrid::make(int nz, double depth) {
    std::vector<std::string> bad;
    if (nz < 100) bad.push_back("strip.nz must be >= 100");
    if (!(depth >= 6.0)) bad.push_back("strip.depth must be >= 6");
    if (!bad.empty()) throw ValidationError(std::move(bad));
    return StripGrid{nz, depth};
}

CoefficientField straighten_coefficients(const SpectralField& f) {
    const auto& g = *f.grid;
    CoefficientField c;
    for (int a = 0; a < g.dim(); ++a) c.grad.push_back(samples(derivative(f, a)));
    c.grad_sq.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        double s2 = 0.0;
        for (const auto& comp : c.grad) s2 += comp[i] * comp[i];
        c.grad_sq[i] = s2;
    }
    return c;
}

EllipticSolution solve_dn_elliptic(const SpectralField& f, const SpectralField& g_data,
                                   const StripGrid& strip, const EllipticOptions& opts) {
    if (f.grid.get() != g_data.grid.get())
        throw ValidationError("solve_dn_elliptic: f and g must share a grid");
    if (strip.nz < 100 || !(strip.depth >= 6.0))
        throw ValidationError("solve_dn_elliptic: strip must satisfy nz >= 100, depth >= 6");
    if (!(opts.tol > 0) || opts.max_iter < 1)
        throw ValidationError("solve_dn_elliptic: tol > 0 and max_iter >= 1 required");

    const auto& g = *f.grid;
    StripOperator op(f, strip);
    const std::size_t m = g.size();
    Vec b(op.unknowns(), Complex(0.0));
    for (std::size_t i = 0; i < m; ++i) b[strip.nz * m + i] = g_data.coeffs[i];

    // warm start from the flat-coefficient solution
    Vec x(op.unknowns(), Complex(0.0));
    op.precondition(b, x);

    EllipticSolution sol;
    sol.grid = f.grid;
    sol.strip = strip;
    sol.iterations = bicgstab(op, b, x, opts.tol, opts.max_iter, &sol.rel_residual);
    sol.v.resize(strip.nz + 1);
    for (int l = 0; l <= strip.nz; ++l)
        sol.v[l] = Vec(x.begin() + l * m, x.begin() + (l + 1) * m);
    sol.dn = dn_trace(sol, f);
    return sol;
}

SpectralField dn_trace(const EllipticSolution& sol, const SpectralField& f) {
    const auto& g = *sol.grid;
    auto dzv = surface_dz(sol.v, sol.strip.dz());
    auto dzv_s = g.inverse_padded(dzv);
    std::vector<std::vector<double>> gv, gf;
    for (int a = 0; a < g.dim(); ++a) {
        Vec tmp(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            int k = g.mode(i, a);
            Complex ik = k == g.n() / 2 ? Complex(0.0) : Complex(0.0, g.k_min() * k);
            tmp[i] = ik * sol.v.back()[i];
        }
        gv.push_back(g.inverse_padded(tmp));
        gf.push_back(g.inverse_padded(derivative(f, a).coeffs));
    }
    std::vector<double> out(g.padded_size());
    for (std::size_t i = 0; i < g.padded_size(); ++i) {
        double gsq = 0.0, cross = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            gsq += gf[a][i] * gf[a][i];
            cross += gf[a][i] * gv[a][i];
        }
        out[i] = (1.0 + gsq) * dzv_s[i] - cross;
    }
    return SpectralField(sol.grid, g.forward_padded(out));
}

PressureDiagnostics hydraulic_pressure(const EllipticSolution& sol,
                                       const SpectralField& f, double solver_tol) {
    const auto& g = *sol.grid;
    const int nz = sol.strip.nz;
    const double dz = sol.strip.dz();
    auto zs = sol.strip.levels();
    auto f_s = samples(f);

    PressureDiagnostics d;
    d.min_q = std::numeric_limits<double>::infinity();
    d.min_neg_dz = d.min_q;

    Vec dzv(g.size());
    for (int l = 0; l <= nz; ++l) {
        // vertical derivative: central inside, one-sided at the strip ends
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (l == 0)
                dzv[i] = (-3.0 * sol.v[0][i] + 4.0 * sol.v[1][i] - sol.v[2][i]) / (2.0 * dz);
            else if (l == nz)
                dzv[i] = (25.0 * sol.v[nz][i] - 48.0 * sol.v[nz - 1][i] +
                          36.0 * sol.v[nz - 2][i] - 16.0 * sol.v[nz - 3][i] +
                          3.0 * sol.v[nz - 4][i]) /
                         (12.0 * dz);
            else
                dzv[i] = (sol.v[l + 1][i] - sol.v[l - 1][i]) / (2.0 * dz);
        }
        auto dzv_s = g.inverse(dzv);
        auto v_s = g.inverse(sol.v[l]);
        for (std::size_t i = 0; i < g.size(); ++i) {
            double q = v_s[i] - (f_s[i] + zs[l]);
            d.min_q = std::min(d.min_q, q);
            d.min_neg_dz = std::min(d.min_neg_dz, 1.0 - dzv_s[i]);
            if (l == nz) d.surface_a.push_back(1.0 - dzv_s[i]);
        }
    }
    d.negative_pressure = d.min_q < -10.0 * solver_tol;
    return d;
}

} // namespace muskat
