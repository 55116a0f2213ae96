// numpy-facing bindings: real sample arrays in, real sample arrays out.
// The grid is inferred from the array shape ((n,) or (n, n)); everything else
// mirrors the C++ entry points.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "muskat/curvature.hpp"
#include "muskat/diagnostics.hpp"
#include "muskat/dn_elliptic.hpp"
#include "muskat/dn_fixed_point.hpp"
#include "muskat/errors.hpp"
#include "muskat/evolution.hpp"
#include "muskat/multipliers.hpp"
#include "muskat/norms.hpp"

namespace py = pybind11;
using namespace muskat;

namespace {

GridPtr grid_of(const py::array_t<double>& a, double period) {
    if (a.ndim() == 1) return make_grid(1, static_cast<int>(a.shape(0)), period);
    if (a.ndim() == 2) {
        if (a.shape(0) != a.shape(1))
            throw ValidationError("2d sample arrays must be square");
        return make_grid(2, static_cast<int>(a.shape(0)), period);
    }
    throw ValidationError("sample arrays must be 1d or 2d");
}

SpectralField field_on(const GridPtr& g, const py::array_t<double>& a) {
    auto r = py::array_t<double, py::array::c_style | py::array::forcecast>::ensure(a);
    if (static_cast<std::size_t>(r.size()) != g->size())
        throw ValidationError("sample arrays must share one grid shape");
    std::vector<double> s(r.data(), r.data() + r.size());
    return field_from_samples(g, s);
}

SpectralField as_field(const py::array_t<double>& a, double period) {
    return field_on(grid_of(a, period), a);
}

py::array_t<double> as_array(const SpectralField& f) {
    auto s = samples(f);
    const int n = f.grid->n();
    py::array_t<double> out(f.grid->dim() == 1 ? std::vector<py::ssize_t>{n}
                                               : std::vector<py::ssize_t>{n, n});
    std::copy(s.begin(), s.end(), out.mutable_data());
    return out;
}

MuskatParams params_of(double kappa, double mu, double rho, double gravity,
                       double surface_tension, double galerkin_r) {
    return {kappa, mu, rho, gravity, surface_tension, galerkin_r};
}

DnConfig dn_config_of(const std::string& backend, int levels, double z_max,
                      double ratio, int nz, double depth) {
    DnConfig cfg;
    if (backend == "fixed_point")
        cfg.backend = DnBackend::FixedPoint;
    else if (backend == "elliptic")
        cfg.backend = DnBackend::Elliptic;
    else
        throw ValidationError("backend must be \"fixed_point\" or \"elliptic\"");
    cfg.vertical = VerticalGrid::geometric(z_max, levels, ratio);
    cfg.strip = StripGrid::make(nz, depth);
    return cfg;
}

StepperSpec spec_of(const std::string& scheme, double dt, const std::string& nonlinearity,
                    bool enforce_decay) {
    StepperSpec sp;
    sp.dt = dt;
    sp.enforce_decay = enforce_decay;
    if (scheme == "etd")
        sp.scheme = Scheme::EtdExponential;
    else if (scheme == "rk4")
        sp.scheme = Scheme::Rk4Explicit;
    else if (scheme == "imex")
        sp.scheme = Scheme::ImexLinearImplicit;
    else
        throw ValidationError("scheme must be \"etd\", \"rk4\" or \"imex\"");
    if (nonlinearity == "full")
        sp.nonlinearity = Nonlinearity::Full;
    else if (nonlinearity == "linear_only")
        sp.nonlinearity = Nonlinearity::LinearOnly;
    else if (nonlinearity == "no_remainder")
        sp.nonlinearity = Nonlinearity::NoRemainder;
    else
        throw ValidationError(
            "nonlinearity must be \"full\", \"linear_only\" or \"no_remainder\"");
    return sp;
}

} // namespace

PYBIND11_MODULE(_muskat, m) {
    m.doc() = "one-phase Muskat interface simulator (pseudo-spectral core)";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<SolverRegimeError>(m, "SolverRegimeError", PyExc_RuntimeError);

    m.def(
        "dn_image",
        [](py::array_t<double> f, py::array_t<double> g, double period,
           const std::string& backend, int levels, double z_max, double ratio, int nz,
           double depth) {
            auto grid = grid_of(f, period);
            auto ff = field_on(grid, f);
            auto gg = field_on(grid, g);
            DnEvaluator ev(dn_config_of(backend, levels, z_max, ratio, nz, depth));
            auto img = ev.image(ff, gg);
            py::dict out;
            out["dn"] = as_array(img.dn);
            out["remainder"] = as_array(img.remainder);
            out["iterations"] = img.iterations;
            return out;
        },
        py::arg("f"), py::arg("g"), py::kw_only(), py::arg("period") = 2.0 * M_PI,
        py::arg("backend") = "fixed_point", py::arg("levels") = 200,
        py::arg("z_max") = 40.0, py::arg("ratio") = 1.05, py::arg("nz") = 400,
        py::arg("depth") = 8.0,
        "Dirichlet-Neumann image G(f) g and the deviation from |grad| g.");

    m.def(
        "curvature",
        [](py::array_t<double> f, double period) {
            auto parts = mean_curvature(as_field(f, period));
            py::dict out;
            out["total"] = as_array(parts.total);
            out["linear"] = as_array(parts.linear);
            out["nonlinear"] = as_array(parts.nonlinear);
            return out;
        },
        py::arg("f"), py::kw_only(), py::arg("period") = 2.0 * M_PI,
        "Mean curvature of the graph z = f(x), split into -Laplacian and the rest.");

    m.def(
        "norms",
        [](py::array_t<double> f, double period, double s) {
            auto ff = as_field(f, period);
            py::dict out;
            out["l2"] = norm_l2(ff);
            out["h_half"] = hom_sobolev_norm(ff, 0.5);
            out["h_3half"] = hom_sobolev_norm(ff, 1.5);
            out["hs"] = sobolev_norm(ff, s);
            out["lip"] = lipschitz_seminorm(ff);
            out["besov_half"] = besov_norm(ff, 0.5, 1.0);
            out["mean"] = mean_value(ff);
            return out;
        },
        py::arg("f"), py::kw_only(), py::arg("period") = 2.0 * M_PI, py::arg("s") = 2.0);

    m.def(
        "lyapunov_j",
        [](py::array_t<double> f, double period, int levels, double z_max, double ratio) {
            auto ff = as_field(f, period);
            DnEvaluator ev(dn_config_of("fixed_point", levels, z_max, ratio, 400, 8.0));
            auto img = ev.image(ff, ff);
            return lyapunov_j(ff, img.dn);
        },
        py::arg("f"), py::kw_only(), py::arg("period") = 2.0 * M_PI,
        py::arg("levels") = 200, py::arg("z_max") = 40.0, py::arg("ratio") = 1.05,
        "Lyapunov pairing <H(f), G(f) f>.");

    m.def(
        "linear_rate",
        [](double k, double kappa, double mu, double rho, double gravity,
           double surface_tension) {
            LinearRate r{kappa, mu, rho, gravity, surface_tension};
            return symbol_value(r, std::abs(k));
        },
        py::arg("k"), py::kw_only(), py::arg("kappa") = 1.0, py::arg("mu") = 1.0,
        py::arg("rho") = 1.0, py::arg("gravity") = 1.0, py::arg("surface_tension") = 1.0,
        "Decay rate (kappa/mu)|k|(rho g + st k^2) of the linearized equation.");

    m.def(
        "simulate",
        [](py::array_t<double> f0, double t_final, double dt, double period,
           const std::string& scheme, const std::string& nonlinearity, bool enforce_decay,
           int cadence, double s, double kappa, double mu, double rho, double gravity,
           double surface_tension, double galerkin_r, const std::string& backend,
           int levels, double z_max, double ratio, int nz, double depth) {
            auto ff = as_field(f0, period);
            auto res = simulate(ff, t_final, spec_of(scheme, dt, nonlinearity, enforce_decay),
                                params_of(kappa, mu, rho, gravity, surface_tension, galerkin_r),
                                dn_config_of(backend, levels, z_max, ratio, nz, depth),
                                cadence, s);
            const auto rows = static_cast<py::ssize_t>(res.rows.size());
            py::array_t<double> times(rows);
            std::copy(res.traj.times.begin(), res.traj.times.end(), times.mutable_data());

            std::vector<py::ssize_t> shape{rows};
            const int n = ff.grid->n();
            if (ff.grid->dim() == 1)
                shape.push_back(n);
            else
                shape.insert(shape.end(), {py::ssize_t(n), py::ssize_t(n)});
            py::array_t<double> states(shape);
            double* dst = states.mutable_data();
            for (const auto& st : res.traj.states) {
                auto sm = samples(st);
                dst = std::copy(sm.begin(), sm.end(), dst);
            }

            auto column = [&](auto get) {
                py::array_t<double> col(rows);
                double* p = col.mutable_data();
                for (const auto& r : res.rows) *p++ = get(r);
                return col;
            };
            py::dict diag;
            diag["l2"] = column([](const DiagnosticsRow& r) { return r.l2; });
            diag["h_half"] = column([](const DiagnosticsRow& r) { return r.h_half; });
            diag["h_3half"] = column([](const DiagnosticsRow& r) { return r.h_3half; });
            diag["hs"] = column([](const DiagnosticsRow& r) { return r.hs; });
            diag["lip"] = column([](const DiagnosticsRow& r) { return r.lip; });
            diag["j"] = column([](const DiagnosticsRow& r) { return r.j; });
            diag["a_min"] = column([](const DiagnosticsRow& r) { return r.a_min; });
            diag["mean"] = column([](const DiagnosticsRow& r) { return r.mean; });
            diag["energy_residual"] =
                column([](const DiagnosticsRow& r) { return r.energy_residual; });
            diag["max_dn_ff"] = column([](const DiagnosticsRow& r) { return r.max_dn_ff; });

            py::dict out;
            out["times"] = times;
            out["states"] = states;
            out["diagnostics"] = diag;
            out["completed"] = res.completed;
            out["t_reached"] = res.t_reached;
            out["error"] = res.error;
            return out;
        },
        py::arg("f0"), py::arg("t_final"), py::arg("dt"), py::kw_only(),
        py::arg("period") = 2.0 * M_PI, py::arg("scheme") = "etd",
        py::arg("nonlinearity") = "full", py::arg("enforce_decay") = true,
        py::arg("cadence") = 10, py::arg("s") = 4.0, py::arg("kappa") = 1.0,
        py::arg("mu") = 1.0, py::arg("rho") = 1.0, py::arg("gravity") = 1.0,
        py::arg("surface_tension") = 1.0, py::arg("galerkin_r") = 0.0,
        py::arg("backend") = "fixed_point", py::arg("levels") = 200,
        py::arg("z_max") = 40.0, py::arg("ratio") = 1.05, py::arg("nz") = 400,
        py::arg("depth") = 8.0,
        "Galerkin-truncated evolution with per-record diagnostics.");

    m.def(
        "fit_decay_rate",
        [](const std::vector<double>& times, const std::vector<double>& values, double t0,
           double t1) {
            auto fit = fit_decay_rate(times, values, t0, t1);
            return py::make_tuple(fit.rate, fit.r_squared);
        },
        py::arg("times"), py::arg("values"), py::arg("t0"), py::arg("t1"),
        "Least-squares decay rate of log(values) over [t0, t1]; returns (rate, r^2).");

    m.def(
        "lp_project",
        [](py::array_t<double> f, int j, double period) {
            return as_array(lp_project(as_field(f, period), j));
        },
        py::arg("f"), py::arg("j"), py::kw_only(), py::arg("period") = 2.0 * M_PI,
        "Littlewood-Paley block P_j f (j = -1 is the low-frequency part).");
}
