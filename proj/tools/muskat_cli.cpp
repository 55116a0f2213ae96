// Command line front end. Subcommands mirror the experiment types; every run
// reads an optional JSON config, applies flag overrides, validates once, and
// writes its outputs (result.json, diagnostics.csv, snapshots, manifest.json)
// into the configured output directory.
//
// Exit codes: 0 ok, 2 invalid input or config, 3 solver left its trusted
// regime, 4 I/O failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "muskat/config.hpp"
#include "muskat/curvature.hpp"
#include "muskat/diagnostics.hpp"
#include "muskat/errors.hpp"
#include "muskat/io.hpp"
#include "muskat/presets.hpp"

namespace {

using muskat::RunConfig;
using nlohmann::json;

struct Overrides {
    std::string config_path;
    std::optional<double> dt, t_final, amplitude;
    std::optional<int> n;
    std::optional<std::string> preset, out;
    std::optional<unsigned> seed;
};

void add_common_flags(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("--config", ov.config_path, "JSON config file");
    cmd->add_option("--dt", ov.dt, "time step override");
    cmd->add_option("--t-final", ov.t_final, "final time override");
    cmd->add_option("--n", ov.n, "grid points per axis override");
    cmd->add_option("--preset", ov.preset, "initial data preset override");
    cmd->add_option("--amplitude", ov.amplitude, "initial amplitude override");
    cmd->add_option("--seed", ov.seed, "random preset seed override");
    cmd->add_option("--out", ov.out, "output directory override");
}

// Overrides are spliced into the JSON document before the single validation
// pass, so a bad --dt is rejected with the same message as a bad config field.
RunConfig load_config(const Overrides& ov, const std::string& experiment) {
    json doc = json::object();
    if (!ov.config_path.empty()) {
        // an unreadable file is an io error, but unparsable or non-object
        // content is invalid user input like any other config violation
        std::ifstream in(ov.config_path, std::ios::binary);
        if (!in) throw muskat::IoError(ov.config_path + ": cannot open for reading");
        std::stringstream ss;
        ss << in.rdbuf();
        try {
            doc = json::parse(ss.str());
        } catch (const json::parse_error& e) {
            throw muskat::ValidationError(ov.config_path + ": config is not valid JSON: " +
                                          e.what());
        }
        if (!doc.is_object())
            throw muskat::ValidationError(ov.config_path + ": config root must be an object");
    }
    doc["experiment"] = experiment;
    if (ov.dt) doc["stepper"]["dt"] = *ov.dt;
    if (ov.t_final) doc["stepper"]["t_final"] = *ov.t_final;
    if (ov.n) doc["grid"]["n"] = *ov.n;
    if (ov.preset) doc["init"]["preset"] = *ov.preset;
    if (ov.amplitude) doc["init"]["amplitude"] = *ov.amplitude;
    if (ov.seed) doc["init"]["seed"] = *ov.seed;
    if (ov.out) doc["output"]["dir"] = *ov.out;
    return muskat::parse_config(doc);
}

struct OutputSink {
    std::string dir;
    std::vector<std::string> files;

    explicit OutputSink(const RunConfig& cfg) : dir(cfg.output.dir) {
        muskat::ensure_dir(dir);
    }
    std::string path(const std::string& name) {
        files.push_back(name);
        return dir + "/" + name;
    }
    void finish(const RunConfig& cfg) {
        muskat::write_manifest(dir, muskat::config_to_json(cfg), files);
        std::cout << "wrote " << dir << "/manifest.json\n";
    }
};

json norm_table(const muskat::SpectralField& f, double s) {
    using muskat::NormFamily;
    using muskat::NormSpec;
    return json{
        {"L2", muskat::norm_value(f, {NormFamily::Lebesgue, 0, 2, 2})},
        {"Hhalf", muskat::hom_sobolev_norm(f, 0.5)},
        {"H3half", muskat::hom_sobolev_norm(f, 1.5)},
        {"H2", muskat::sobolev_norm(f, 2.0)},
        {"Hs", muskat::sobolev_norm(f, s)},
        {"Lip", muskat::lipschitz_seminorm(f)},
        {"B_half_21", muskat::besov_norm(f, 0.5, 1.0)},
        {"B_3half_21", muskat::besov_norm(f, 1.5, 1.0)},
        {"mean", muskat::mean_value(f)},
    };
}

int cmd_run(const RunConfig& cfg) {
    auto grid = muskat::build_grid(cfg.grid);
    auto params = muskat::build_params(cfg.params);
    auto spec = muskat::build_stepper(cfg.stepper);
    auto dn = muskat::build_dn(cfg.dn);
    auto f0 = muskat::make_initial(grid, cfg.init);

    OutputSink sink(cfg);
    auto res = muskat::simulate(f0, cfg.stepper.t_final, spec, params, dn,
                                cfg.output.cadence, cfg.output.sobolev_s);
    muskat::write_diagnostics_csv(sink.path("diagnostics.csv"), res.rows);

    if (res.rows.empty()) { // solver failed before the first record
        muskat::write_json_file(
            sink.path("result.json"),
            json{{"completed", false}, {"t_reached", 0.0}, {"error", res.error}});
        sink.finish(cfg);
        std::cout << "stopped before the first step: " << res.error << "\n";
        return 3;
    }

    // endpoints always, interior records only when snapshot_every is set
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        const int step = res.rows[i].step_index;
        const bool endpoint = i == 0 || i + 1 == res.rows.size();
        const bool periodic =
            cfg.output.snapshot_every > 0 && step % cfg.output.snapshot_every == 0;
        if (!endpoint && !periodic) continue;
        char name[64];
        std::snprintf(name, sizeof name, "snapshot_%06d.json", step);
        muskat::write_snapshot(sink.path(name), res.traj.states[i], res.traj.times[i],
                               params);
    }

    const auto& back = res.rows.back();
    json result{{"completed", res.completed},
                {"t_reached", res.t_reached},
                {"error", res.error},
                {"records", res.rows.size()},
                {"final", {{"t", back.t},
                           {"L2", back.l2},
                           {"Hs", back.hs},
                           {"J", back.j},
                           {"a_min", back.a_min},
                           {"mean", back.mean}}},
                {"max_abs_energy_residual", [&] {
                     double m = 0.0;
                     for (const auto& r : res.rows)
                         m = std::max(m, std::abs(r.energy_residual));
                     return m;
                 }()}};
    muskat::write_json_file(sink.path("result.json"), result);
    sink.finish(cfg);

    std::cout << (res.completed ? "completed" : "stopped: " + res.error) << "  t="
              << back.t << "  L2=" << back.l2 << "  J=" << back.j << "\n";
    return res.completed ? 0 : 3;
}

int cmd_dn_check(const RunConfig& cfg) {
    auto grid = muskat::build_grid(cfg.grid);
    auto dn = muskat::build_dn(cfg.dn);
    auto f = muskat::make_initial(grid, cfg.init);
    auto g = muskat::make_initial(grid, cfg.data);

    OutputSink sink(cfg);
    json result;
    if (dn.backend == muskat::DnBackend::Elliptic) {
        auto sol = muskat::solve_dn_elliptic(f, g, dn.strip, dn.elliptic);
        result = {{"backend", "elliptic"},
                  {"iterations", sol.iterations},
                  {"rel_residual", sol.rel_residual},
                  {"dn_l2", muskat::norm_l2(sol.dn)},
                  {"dn_mean", muskat::mean_value(sol.dn)}};
        std::cout << "elliptic solve: " << sol.iterations
                  << " iterations, rel residual " << sol.rel_residual << "\n";
    } else {
        auto sol = muskat::solve_dn(f, g, dn.vertical, dn.options);
        result = {{"backend", "fixed_point"},
                  {"iterations", sol.iterations},
                  {"residual_history", sol.residual_history},
                  {"dn_l2", muskat::norm_l2(sol.dn)},
                  {"remainder_l2", muskat::norm_l2(sol.remainder)},
                  {"dn_mean", muskat::mean_value(sol.dn)},
                  {"pairing", muskat::inner_l2(sol.dn, g)}};
        std::cout << "fixed point converged in " << sol.iterations
                  << " iterations, final residual "
                  << (sol.residual_history.empty() ? 0.0 : sol.residual_history.back())
                  << "\n";
    }
    muskat::write_json_file(sink.path("result.json"), result);
    sink.finish(cfg);
    return 0;
}

int cmd_oracle_compare(const RunConfig& cfg) {
    auto grid = muskat::build_grid(cfg.grid);
    auto dn = muskat::build_dn(cfg.dn);
    auto f = muskat::make_initial(grid, cfg.init);
    auto g = muskat::make_initial(grid, cfg.data);

    OutputSink sink(cfg);
    auto fp = muskat::solve_dn(f, g, dn.vertical, dn.options);
    auto el = muskat::solve_dn_elliptic(f, g, dn.strip, dn.elliptic);
    auto el2 = muskat::solve_dn_elliptic(
        f, g, muskat::StripGrid{2 * dn.strip.nz, dn.strip.depth}, dn.elliptic);

    const double ref = muskat::norm_l2(fp.dn);
    const double e1 = muskat::norm_l2(muskat::subtracted(fp.dn, el.dn)) / ref;
    const double e2 = muskat::norm_l2(muskat::subtracted(fp.dn, el2.dn)) / ref;
    // e ~ C dz^p against the mesh-free reference, so halving dz gives
    // p = log2(e1/e2)
    const double order = std::log2(e1 / e2);

    json result{{"rel_error", e1},
                {"rel_error_refined", e2},
                {"order_estimate", order},
                {"fixed_point_iterations", fp.iterations},
                {"elliptic_iterations", el.iterations}};
    muskat::write_json_file(sink.path("result.json"), result);
    sink.finish(cfg);
    std::cout << "backends agree to rel error " << e1 << " (refined " << e2
              << ", order " << order << ")\n";
    return 0;
}

int cmd_lyapunov_scan(const RunConfig& cfg) {
    auto grid = muskat::build_grid(cfg.grid);
    auto dn = muskat::build_dn(cfg.dn);
    muskat::DnEvaluator eval(dn);

    OutputSink sink(cfg);
    json rows = json::array();
    std::cout << "epsilon        J              J/eps^2\n";
    for (double eps : cfg.scan.epsilons) {
        muskat::InitConfig scaled = cfg.init;
        scaled.amplitude = eps * cfg.init.amplitude;
        auto f = muskat::make_initial(grid, scaled);
        auto img = eval.image(f, f);
        const double j = muskat::lyapunov_j(f, img.dn);
        const double h2 = muskat::sobolev_norm(f, 2.0);
        rows.push_back({{"epsilon", eps},
                        {"J", j},
                        {"J_over_eps_sq", j / (eps * eps)},
                        {"h2_sq", h2 * h2}});
        std::printf("%-14.6g %-14.6g %-14.6g\n", eps, j, j / (eps * eps));
    }
    muskat::write_json_file(sink.path("result.json"), json{{"rows", rows}});
    sink.finish(cfg);
    return 0;
}

int cmd_contraction(const RunConfig& cfg) {
    auto grid = muskat::build_grid(cfg.grid);
    auto params = muskat::build_params(cfg.params);
    auto spec = muskat::build_stepper(cfg.stepper);
    auto dn = muskat::build_dn(cfg.dn);

    auto f01 = muskat::make_initial(grid, cfg.init);
    auto f02 = f01;
    muskat::add_cosine(f02, cfg.contraction.mode, cfg.contraction.perturbation);

    OutputSink sink(cfg);
    auto res = muskat::contraction_experiment(f01, f02, cfg.stepper.t_final, spec,
                                              params, dn, cfg.contraction.sobolev_s,
                                              cfg.output.cadence);
    json result{{"ratio_at_t", res.ratio_at_t},
                {"max_ratio", res.max_ratio},
                {"terminal_distance", res.terminal_distance},
                {"completed", res.completed},
                {"degenerate", res.degenerate}};
    muskat::write_json_file(sink.path("result.json"), result);
    sink.finish(cfg);
    std::cout << "distance ratio at T: " << res.ratio_at_t << " (max "
              << res.max_ratio << ")\n";
    return res.completed ? 0 : 3;
}

int cmd_norms(const RunConfig& cfg) {
    auto grid = muskat::build_grid(cfg.grid);
    auto f = muskat::make_initial(grid, cfg.init);

    OutputSink sink(cfg);
    json table = norm_table(f, cfg.output.sobolev_s);
    for (const auto& item : table.items())
        std::printf("%-12s %.12g\n", item.key().c_str(),
                    item.value().get<double>());
    muskat::write_json_file(sink.path("result.json"), table);
    sink.finish(cfg);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"one-phase Muskat interface simulator"};
    app.require_subcommand(1);

    Overrides ov;
    int (*handler)(const RunConfig&) = nullptr;
    std::string experiment;

    auto hook = [&](CLI::App* cmd, const char* name, int (*fn)(const RunConfig&)) {
        add_common_flags(cmd, ov);
        cmd->callback([&, name, fn] {
            experiment = name;
            handler = fn;
        });
    };
    hook(app.add_subcommand("run", "integrate the interface evolution"), "evolve",
         cmd_run);
    hook(app.add_subcommand("dn-check", "solve one Dirichlet-Neumann problem"),
         "dn-check", cmd_dn_check);
    hook(app.add_subcommand("oracle-compare",
                            "fixed-point vs elliptic DN cross-check"),
         "oracle-compare", cmd_oracle_compare);
    hook(app.add_subcommand("lyapunov-scan",
                            "Lyapunov functional across amplitudes"),
         "lyapunov-scan", cmd_lyapunov_scan);
    hook(app.add_subcommand("contraction", "distance between two nearby runs"),
         "contraction", cmd_contraction);
    hook(app.add_subcommand("norms", "norm table of the configured initial data"),
         "norms", cmd_norms);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2; // help/version exit 0, any parse failure 2
    }

    try {
        return handler(load_config(ov, experiment));
    } catch (const muskat::ValidationError& e) {
        std::cerr << "invalid input:\n";
        for (const auto& v : e.violations()) std::cerr << "  - " << v << "\n";
        return 2;
    } catch (const muskat::SolverRegimeError& e) {
        std::cerr << "solver stopped: " << e.what() << "\n";
        return 3;
    } catch (const muskat::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    }
}
