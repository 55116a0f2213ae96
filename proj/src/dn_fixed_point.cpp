#include "muskat/dn_fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "muskat/errors.hpp"

namespace muskat {

namespace {

// phi1(u) = (1 - e^{-u})/u and psi(u) = int_0^1 s e^{-u s} ds, the weights of
// the exponentially-exact rule for a linear integrand on one interval. Series
// below u = 0.1 to dodge cancellation.
double phi1_w(double u) {
    if (u < 0.1) return 1.0 - u / 2 + u * u / 6 - u * u * u / 24 + u * u * u * u / 120;
    return -std::expm1(-u) / u;
}

double psi_w(double u) {
    if (u < 0.1)
        return 0.5 - u / 3 + u * u / 8 - u * u * u / 30 + u * u * u * u / 144;
    return (1.0 - (1.0 + u) * std::exp(-u)) / (u * u);
}

void check_layer_shapes(const LayeredField& a, const LayeredField& b, const char* who) {
    if (a.grid.get() != b.grid.get() || a.z.size() != b.z.size())
        throw ValidationError(std::string(who) + ": layered fields disagree on grids");
}

// Padded samples of the f-dependent layers, computed once per solve.
struct SurfaceLayers {
    GridPtr grid;
    std::vector<double> z;
    // per level: gradP[axis], dzP, B, 1/(1+B); all on the padded grid
    std::vector<std::vector<std::vector<double>>> grad_p;
    std::vector<std::vector<double>> dz_p;
    std::vector<std::vector<double>> b;
    std::vector<std::vector<Complex>> p_hat;
    double jac_min = 1.0;
};

SurfaceLayers build_surface_layers(const SpectralField& f, const VerticalGrid& vg,
                                   double jacobian_floor) {
    const auto& g = *f.grid;
    SurfaceLayers s;
    s.grid = f.grid;
    s.z = vg.z;
    const std::size_t nl = vg.z.size();
    s.grad_p.resize(nl);
    s.dz_p.resize(nl);
    s.b.resize(nl);
    s.p_hat.resize(nl);
    for (std::size_t l = 0; l < nl; ++l) {
        std::vector<Complex> p(g.size()), dz(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            double e = std::exp(vg.z[l] * g.xi_abs(i));
            p[i] = e * f.coeffs[i];
            dz[i] = g.xi_abs(i) * p[i];
        }
        s.p_hat[l] = p;
        s.grad_p[l].resize(g.dim());
        for (int a = 0; a < g.dim(); ++a) {
            std::vector<Complex> d(g.size());
            for (std::size_t i = 0; i < g.size(); ++i) {
                int k = g.mode(i, a);
                d[i] = k == g.n() / 2 ? Complex(0.0)
                                      : Complex(0.0, g.k_min() * k) * p[i];
            }
            s.grad_p[l][a] = g.inverse_padded(d);
        }
        s.dz_p[l] = g.inverse_padded(dz);
        auto& bl = s.b[l];
        bl.resize(g.padded_size());
        for (std::size_t i = 0; i < g.padded_size(); ++i) {
            double grad_sq = 0.0;
            for (int a = 0; a < g.dim(); ++a)
                grad_sq += s.grad_p[l][a][i] * s.grad_p[l][a][i];
            double denom = 1.0 + s.dz_p[l][i];
            s.jac_min = std::min(s.jac_min, denom);
            bl[i] = (grad_sq - s.dz_p[l][i]) / denom;
        }
    }
    if (s.jac_min <= jacobian_floor)
        throw DegenerateJacobianError(
            "interface too steep: min(1 + dzP) = " + std::to_string(s.jac_min));
    return s;
}

void validate_vertical(const VerticalGrid& vg, const TorusGrid& g) {
    std::vector<std::string> bad;
    if (vg.z.size() < 3) bad.push_back("vertical grid needs at least 2 intervals");
    for (std::size_t l = 1; l < vg.z.size(); ++l)
        if (!(vg.z[l] > vg.z[l - 1])) {
            bad.push_back("vertical levels must be strictly ascending");
            break;
        }
    if (!vg.z.empty() && std::abs(vg.z.back()) > 1e-14)
        bad.push_back("vertical grid must end at z = 0");
    if (!vg.z.empty() && vg.z_max() < 20.0 / g.k_min() - 1e-12)
        bad.push_back("vertical extent too small: need z_max >= 20/k_min = " +
                      std::to_string(20.0 / g.k_min()));
    if (!bad.empty()) throw ValidationError(std::move(bad));
}

// recurrence core shared by the public integral operators
std::vector<std::vector<Complex>> exp_integrate(const std::vector<std::vector<Complex>>& h,
                                                const std::vector<double>& z,
                                                const TorusGrid& g, bool upward) {
    const std::size_t nl = z.size();
    std::vector<std::vector<Complex>> out(nl, std::vector<Complex>(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) {
        double xi = g.xi_abs(i);
        if (upward) {
            // tail closure: integrand frozen below the grid; requires xi > 0,
            // enforced upstream by the mean-free precondition
            out[0][i] = xi > 0.0 ? h[0][i] / xi : Complex(0.0);
            for (std::size_t l = 1; l < nl; ++l) {
                double dz = z[l] - z[l - 1];
                double u = xi * dz;
                out[l][i] = out[l - 1][i] * std::exp(-u) +
                            dz * (h[l][i] * (phi1_w(u) - psi_w(u)) + h[l - 1][i] * psi_w(u));
            }
            if (xi == 0.0)
                for (std::size_t l = 0; l < nl; ++l) out[l][i] = 0.0;
        } else {
            out[nl - 1][i] = 0.0;
            for (std::size_t l = nl - 1; l-- > 0;) {
                double dz = z[l + 1] - z[l];
                double u = xi * dz;
                out[l][i] = out[l + 1][i] * std::exp(-u) +
                            dz * (h[l][i] * (phi1_w(u) - psi_w(u)) + h[l + 1][i] * psi_w(u));
            }
        }
    }
    return out;
}

double level_l2_sq(const TorusGrid& g, const std::vector<Complex>& c, bool gradient_weight) {
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double w = gradient_weight ? g.xi_abs(i) * g.xi_abs(i) : 1.0;
        acc += w * std::norm(c[i]);
    }
    return acc * std::pow(g.period(), g.dim());
}

} // namespace

VerticalGrid VerticalGrid::geometric(double z_max, int levels, double ratio) {
    std::vector<std::string> bad;
    if (!(z_max > 0)) bad.push_back("z_max must be positive");
    if (levels < 2) bad.push_back("need at least 2 vertical intervals");
    if (!(ratio >= 1.0)) bad.push_back("geometric ratio must be >= 1");
    if (!bad.empty()) throw ValidationError(std::move(bad));

    // spacings in ratio r from bottom to surface give the closed form
    //   z_j = -z_max r^{-j} (1 - r^{-(L-j)}) / (1 - r^{-L}),
    // evaluated per level (no running sum) so both endpoints are exact and
    // consecutive spacings keep the ratio to rounding precision
    VerticalGrid vg;
    vg.z.resize(levels + 1);
    if (ratio == 1.0) {
        for (int j = 0; j <= levels; ++j)
            vg.z[j] = -z_max * double(levels - j) / levels;
    } else {
        const double lr = std::log(ratio);
        const double denom = -std::expm1(-levels * lr);
        for (int j = 0; j <= levels; ++j)
            vg.z[j] = -z_max * std::exp(-j * lr) * -std::expm1(-(levels - j) * lr) / denom;
    }
    return vg;
}

VerticalGrid VerticalGrid::uniform(double z_max, int levels) {
    return geometric(z_max, levels, 1.0);
}

std::pair<LayeredField, LayeredField> compute_layers_b(const SpectralField& f,
                                                       const VerticalGrid& vg,
                                                       double jacobian_floor) {
    auto s = build_surface_layers(f, vg, jacobian_floor);
    const auto& g = *f.grid;
    LayeredField P{f.grid, vg.z, std::move(s.p_hat)};
    LayeredField B{f.grid, vg.z, {}};
    B.levels.reserve(vg.z.size());
    for (const auto& bl : s.b) B.levels.push_back(g.forward_padded(bl));
    return {std::move(P), std::move(B)};
}

LayeredField assemble_qa(const LayeredField& w, const LayeredField& v,
                         const LayeredField& P, const LayeredField& B) {
    check_layer_shapes(w, v, "assemble_qa");
    check_layer_shapes(w, P, "assemble_qa");
    check_layer_shapes(w, B, "assemble_qa");
    const auto& g = *w.grid;
    LayeredField qa{w.grid, w.z, {}};
    qa.levels.reserve(w.z.size());
    std::vector<Complex> tmp(g.size());
    for (std::size_t l = 0; l < w.z.size(); ++l) {
        auto ws = g.inverse_padded(w.levels[l]);
        for (std::size_t i = 0; i < g.size(); ++i) tmp[i] = g.xi_abs(i) * v.levels[l][i];
        auto avs = g.inverse_padded(tmp);
        auto bs = g.inverse_padded(B.levels[l]);
        std::vector<double> acc(g.padded_size(), 0.0);
        for (int a = 0; a < g.dim(); ++a) {
            for (std::size_t i = 0; i < g.size(); ++i) {
                int k = g.mode(i, a);
                Complex ik = k == g.n() / 2 ? Complex(0.0) : Complex(0.0, g.k_min() * k);
                tmp[i] = ik * P.levels[l][i];
            }
            auto gps = g.inverse_padded(tmp);
            for (std::size_t i = 0; i < g.size(); ++i) {
                int k = g.mode(i, a);
                Complex ik = k == g.n() / 2 ? Complex(0.0) : Complex(0.0, g.k_min() * k);
                tmp[i] = ik * v.levels[l][i];
            }
            auto gvs = g.inverse_padded(tmp);
            for (std::size_t i = 0; i < g.padded_size(); ++i) acc[i] += gps[i] * gvs[i];
        }
        for (std::size_t i = 0; i < g.padded_size(); ++i)
            acc[i] = (acc[i] - bs[i] * (ws[i] + avs[i])) / (1.0 + bs[i]);
        qa.levels.push_back(g.forward_padded(acc));
    }
    return qa;
}

std::vector<LayeredField> assemble_qb(const LayeredField& w, const LayeredField& v,
                                      const LayeredField& P, const LayeredField& Qa) {
    check_layer_shapes(w, v, "assemble_qb");
    check_layer_shapes(w, P, "assemble_qb");
    check_layer_shapes(w, Qa, "assemble_qb");
    const auto& g = *w.grid;
    std::vector<LayeredField> qb(g.dim(), LayeredField{w.grid, w.z, {}});
    std::vector<Complex> tmp(g.size());
    for (std::size_t l = 0; l < w.z.size(); ++l) {
        auto ws = g.inverse_padded(w.levels[l]);
        auto qas = g.inverse_padded(Qa.levels[l]);
        for (std::size_t i = 0; i < g.size(); ++i) tmp[i] = g.xi_abs(i) * v.levels[l][i];
        auto avs = g.inverse_padded(tmp);
        for (std::size_t i = 0; i < g.size(); ++i) tmp[i] = g.xi_abs(i) * P.levels[l][i];
        auto dzps = g.inverse_padded(tmp);
        for (int a = 0; a < g.dim(); ++a) {
            for (std::size_t i = 0; i < g.size(); ++i) {
                int k = g.mode(i, a);
                Complex ik = k == g.n() / 2 ? Complex(0.0) : Complex(0.0, g.k_min() * k);
                tmp[i] = ik * P.levels[l][i];
            }
            auto gps = g.inverse_padded(tmp);
            for (std::size_t i = 0; i < g.size(); ++i) {
                int k = g.mode(i, a);
                Complex ik = k == g.n() / 2 ? Complex(0.0) : Complex(0.0, g.k_min() * k);
                tmp[i] = ik * v.levels[l][i];
            }
            auto gvs = g.inverse_padded(tmp);
            std::vector<double> comp(g.padded_size());
            for (std::size_t i = 0; i < g.padded_size(); ++i)
                comp[i] = (avs[i] + ws[i] + qas[i]) * gps[i] - dzps[i] * gvs[i];
            qb[a].levels.push_back(g.forward_padded(comp));
        }
    }
    return qb;
}

LayeredField apply_pi1(const LayeredField& Qa, const std::vector<LayeredField>& Qb) {
    const auto& g = *Qa.grid;
    if (static_cast<int>(Qb.size()) != g.dim())
        throw ValidationError("apply_pi1: Qb component count must match dimension");
    std::vector<std::vector<Complex>> integrand(Qa.z.size(),
                                                std::vector<Complex>(g.size()));
    for (std::size_t l = 0; l < Qa.z.size(); ++l) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            Complex div(0.0);
            for (int a = 0; a < g.dim(); ++a) {
                int k = g.mode(i, a);
                Complex ik = k == g.n() / 2 ? Complex(0.0) : Complex(0.0, g.k_min() * k);
                div += ik * Qb[a].levels[l][i];
            }
            integrand[l][i] = div - g.xi_abs(i) * Qa.levels[l][i];
        }
        // both terms carry a derivative factor, so the mean mode is exactly 0
        integrand[l][0] = 0.0;
    }
    LayeredField out{Qa.grid, Qa.z, exp_integrate(integrand, Qa.z, g, true)};
    return out;
}

LayeredField apply_pi2(const LayeredField& w, const LayeredField& Qa) {
    check_layer_shapes(w, Qa, "apply_pi2");
    const auto& g = *w.grid;
    std::vector<std::vector<Complex>> integrand(w.z.size(), std::vector<Complex>(g.size()));
    for (std::size_t l = 0; l < w.z.size(); ++l)
        for (std::size_t i = 0; i < g.size(); ++i)
            integrand[l][i] = w.levels[l][i] + Qa.levels[l][i];
    auto v = exp_integrate(integrand, w.z, g, false);
    for (auto& lvl : v)
        for (auto& c : lvl) c = -c;
    return LayeredField{w.grid, w.z, std::move(v)};
}

LayeredField integrate_exp_up(const LayeredField& h) {
    return LayeredField{h.grid, h.z, exp_integrate(h.levels, h.z, *h.grid, true)};
}

LayeredField integrate_exp_down(const LayeredField& h) {
    return LayeredField{h.grid, h.z, exp_integrate(h.levels, h.z, *h.grid, false)};
}

DnSolution solve_dn(const SpectralField& f, const SpectralField& g_data,
                    const VerticalGrid& vg, const DnOptions& opts,
                    const DnWarmStart& warm) {
    if (f.grid.get() != g_data.grid.get())
        throw ValidationError("solve_dn: f and g must share a grid");
    const auto& g = *f.grid;
    validate_vertical(vg, g);
    if (opts.max_iter < 1 || !(opts.tol > 0))
        throw ValidationError("solve_dn: max_iter >= 1 and tol > 0 required");

    auto layers = build_surface_layers(f, vg, opts.jacobian_floor);
    const std::size_t nl = vg.z.size();
    const std::size_t nm = g.size();

    // v0 = Poisson extension of g, w0 = 0 (or the caller's warm start)
    std::vector<std::vector<Complex>> ext_g(nl, std::vector<Complex>(nm));
    for (std::size_t l = 0; l < nl; ++l)
        for (std::size_t i = 0; i < nm; ++i)
            ext_g[l][i] = std::exp(vg.z[l] * g.xi_abs(i)) * g_data.coeffs[i];

    std::vector<std::vector<Complex>> w(nl, std::vector<Complex>(nm, Complex(0.0)));
    std::vector<std::vector<Complex>> v = ext_g;
    bool have_warm = warm.w && warm.v && warm.w->grid.get() == f.grid.get() &&
                     warm.w->z.size() == nl && warm.v->z.size() == nl;
    if (have_warm) {
        w = warm.w->levels;
        v = warm.v->levels;
    }

    DnSolution sol;
    std::vector<std::vector<Complex>> integrand1(nl, std::vector<Complex>(nm));
    std::vector<std::vector<Complex>> integrand2(nl, std::vector<Complex>(nm));
    std::vector<Complex> tmp(nm);
    std::vector<double> qa_s(g.padded_size());

    int bad_streak = 0;
    bool converged = false;
    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        for (std::size_t l = 0; l < nl; ++l) {
            auto ws = g.inverse_padded(w[l]);
            for (std::size_t i = 0; i < nm; ++i) tmp[i] = g.xi_abs(i) * v[l][i];
            auto avs = g.inverse_padded(tmp);
            std::vector<std::vector<double>> gvs(g.dim());
            for (int a = 0; a < g.dim(); ++a) {
                for (std::size_t i = 0; i < nm; ++i) {
                    int k = g.mode(i, a);
                    Complex ik = k == g.n() / 2 ? Complex(0.0)
                                                : Complex(0.0, g.k_min() * k);
                    tmp[i] = ik * v[l][i];
                }
                gvs[a] = g.inverse_padded(tmp);
            }
            const auto& bl = layers.b[l];
            for (std::size_t i = 0; i < g.padded_size(); ++i) {
                double dot = 0.0;
                for (int a = 0; a < g.dim(); ++a) dot += layers.grad_p[l][a][i] * gvs[a][i];
                qa_s[i] = (dot - bl[i] * (ws[i] + avs[i])) / (1.0 + bl[i]);
            }
            auto qa_hat = g.forward_padded(qa_s);

            // integrand for Pi1: div Qb - |grad| Qa, assembled in spectral space
            std::vector<Complex> div_qb(nm, Complex(0.0));
            std::vector<double> comp(g.padded_size());
            for (int a = 0; a < g.dim(); ++a) {
                for (std::size_t i = 0; i < g.padded_size(); ++i)
                    comp[i] = (avs[i] + ws[i] + qa_s[i]) * layers.grad_p[l][a][i] -
                              layers.dz_p[l][i] * gvs[a][i];
                auto qb_hat = g.forward_padded(comp);
                for (std::size_t i = 0; i < nm; ++i) {
                    int k = g.mode(i, a);
                    Complex ik = k == g.n() / 2 ? Complex(0.0)
                                                : Complex(0.0, g.k_min() * k);
                    div_qb[i] += ik * qb_hat[i];
                }
            }
            for (std::size_t i = 0; i < nm; ++i)
                integrand1[l][i] = div_qb[i] - g.xi_abs(i) * qa_hat[i];
            integrand1[l][0] = 0.0;
            for (std::size_t i = 0; i < nm; ++i) integrand2[l][i] = w[l][i] + qa_hat[i];
        }

        auto w_new = exp_integrate(integrand1, vg.z, g, true);
        auto pi2 = exp_integrate(integrand2, vg.z, g, false);
        double resid = 0.0;
        for (std::size_t l = 0; l < nl; ++l) {
            std::vector<Complex> dw(nm), dv(nm);
            for (std::size_t i = 0; i < nm; ++i) {
                Complex v_new = ext_g[l][i] - pi2[l][i];
                dw[i] = w_new[l][i] - w[l][i];
                dv[i] = v_new - v[l][i];
                w[l][i] = w_new[l][i];
                v[l][i] = v_new;
            }
            resid = std::max(resid, std::sqrt(level_l2_sq(g, dw, false) +
                                              level_l2_sq(g, dv, true)));
        }
        sol.residual_history.push_back(resid);
        sol.iterations = iter;
        if (resid < opts.tol) {
            converged = true;
            break;
        }
        if (iter >= 2) {
            double prev = sol.residual_history[iter - 2];
            if (prev > 0 && resid / prev > opts.contraction_guard)
                ++bad_streak;
            else
                bad_streak = 0;
            if (bad_streak >= opts.guard_patience)
                throw NoContractionError(
                    "Picard iteration not contracting (residual ratio > " +
                    std::to_string(opts.contraction_guard) + " for " +
                    std::to_string(bad_streak) + " iterations)");
        }
    }
    if (!converged)
        throw NoContractionError("Picard iteration did not reach tol within " +
                                 std::to_string(opts.max_iter) + " iterations");

    sol.w = LayeredField{f.grid, vg.z, std::move(w)};
    sol.v = LayeredField{f.grid, vg.z, std::move(v)};
    sol.remainder = SpectralField(f.grid, sol.w.levels.back());
    sol.dn = SpectralField(f.grid);
    for (std::size_t i = 0; i < nm; ++i)
        sol.dn.coeffs[i] = g.xi_abs(i) * g_data.coeffs[i] + sol.remainder.coeffs[i];
    return sol;
}

ContractionProbe dn_contraction_probe(const SpectralField& f1, const SpectralField& f2,
                                      const SpectralField& g, const VerticalGrid& vg,
                                      const DnOptions& opts, double s, double sigma) {
    ContractionProbe probe;
    probe.s = s;
    probe.sigma = sigma;
    SpectralField df = subtracted(f1, f2);
    double dist = 0.0;
    {
        const auto& gr = *f1.grid;
        for (std::size_t i = 0; i < gr.size(); ++i) {
            double xi2 = gr.xi_abs(i) * gr.xi_abs(i);
            dist += std::pow(1.0 + xi2, s) * std::norm(df.coeffs[i]);
        }
        dist = std::sqrt(dist * std::pow(gr.period(), gr.dim()));
    }
    if (dist == 0.0) {
        probe.degenerate = true;
        probe.ratio = 0.0;
        return probe;
    }
    auto s1 = solve_dn(f1, g, vg, opts);
    auto s2 = solve_dn(f2, g, vg, opts);
    SpectralField dr = subtracted(s1.remainder, s2.remainder);
    const auto& gr = *f1.grid;
    double num = 0.0, gn = 0.0;
    for (std::size_t i = 0; i < gr.size(); ++i) {
        double xi2 = gr.xi_abs(i) * gr.xi_abs(i);
        num += std::pow(1.0 + xi2, sigma - 1.0) * std::norm(dr.coeffs[i]);
        gn += std::pow(1.0 + xi2, sigma) * std::norm(g.coeffs[i]);
    }
    double vol = std::pow(gr.period(), gr.dim());
    probe.ratio = std::sqrt(num * vol) / (dist * std::sqrt(gn * vol));
    return probe;
}

} // namespace muskat
