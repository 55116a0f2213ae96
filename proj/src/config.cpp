#include "muskat/config.hpp"

#include <cmath>
#include <set>

#include "muskat/errors.hpp"

namespace muskat {

namespace {

using nlohmann::json;

struct Ctx {
    std::vector<std::string> bad;
    void fail(const std::string& msg) { bad.push_back(msg); }
};

void check_keys(const json& j, const std::string& path,
                const std::set<std::string>& known, Ctx& ctx) {
    for (const auto& item : j.items())
        if (!known.count(item.key()))
            ctx.fail(path + ": unknown key \"" + item.key() + "\"");
}

bool section(const json& doc, const char* name, Ctx& ctx, const json** out) {
    if (!doc.contains(name)) return false;
    const auto& j = doc.at(name);
    if (!j.is_object()) {
        ctx.fail(std::string(name) + " must be an object");
        return false;
    }
    *out = &j;
    return true;
}

void get_num(const json& j, const std::string& path, const char* key, double& out,
             Ctx& ctx) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_number()) {
        ctx.fail(path + "." + key + " must be a number");
        return;
    }
    out = j.at(key).get<double>();
}

void get_int(const json& j, const std::string& path, const char* key, int& out,
             Ctx& ctx) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_number_integer()) {
        ctx.fail(path + "." + key + " must be an integer");
        return;
    }
    out = j.at(key).get<int>();
}

void get_uint(const json& j, const std::string& path, const char* key, unsigned& out,
              Ctx& ctx) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_number_integer() || j.at(key).get<long long>() < 0) {
        ctx.fail(path + "." + key + " must be a nonnegative integer");
        return;
    }
    out = j.at(key).get<unsigned>();
}

void get_bool(const json& j, const std::string& path, const char* key, bool& out,
              Ctx& ctx) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_boolean()) {
        ctx.fail(path + "." + key + " must be a boolean");
        return;
    }
    out = j.at(key).get<bool>();
}

void get_str(const json& j, const std::string& path, const char* key, std::string& out,
             Ctx& ctx) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_string()) {
        ctx.fail(path + "." + key + " must be a string");
        return;
    }
    out = j.at(key).get<std::string>();
}

void get_ivec(const json& j, const std::string& path, const char* key,
              std::vector<int>& out, Ctx& ctx) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (v.is_number_integer()) {
        out = {v.get<int>()};
        return;
    }
    if (!v.is_array() || v.empty()) {
        ctx.fail(path + "." + key + " must be an integer or integer array");
        return;
    }
    std::vector<int> tmp;
    for (const auto& e : v) {
        if (!e.is_number_integer()) {
            ctx.fail(path + "." + key + " must contain only integers");
            return;
        }
        tmp.push_back(e.get<int>());
    }
    out = std::move(tmp);
}

void get_dvec(const json& j, const std::string& path, const char* key,
              std::vector<double>& out, Ctx& ctx) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    if (!v.is_array() || v.empty()) {
        ctx.fail(path + "." + key + " must be a nonempty array of numbers");
        return;
    }
    std::vector<double> tmp;
    for (const auto& e : v) {
        if (!e.is_number()) {
            ctx.fail(path + "." + key + " must contain only numbers");
            return;
        }
        tmp.push_back(e.get<double>());
    }
    out = std::move(tmp);
}

void parse_init(const json& j, const std::string& path, InitConfig& c, Ctx& ctx) {
    check_keys(j, path,
               {"preset", "amplitude", "mode", "mode2", "amplitude2", "phase", "seed",
                "band_lo", "band_hi", "width", "normalize"},
               ctx);
    get_str(j, path, "preset", c.preset, ctx);
    get_num(j, path, "amplitude", c.amplitude, ctx);
    get_ivec(j, path, "mode", c.mode, ctx);
    get_ivec(j, path, "mode2", c.mode2, ctx);
    get_num(j, path, "amplitude2", c.amplitude2, ctx);
    get_num(j, path, "phase", c.phase, ctx);
    get_uint(j, path, "seed", c.seed, ctx);
    get_int(j, path, "band_lo", c.band_lo, ctx);
    get_int(j, path, "band_hi", c.band_hi, ctx);
    get_num(j, path, "width", c.width, ctx);
    get_str(j, path, "normalize", c.normalize, ctx);
}

void validate_init(const InitConfig& c, const std::string& path, int dim, Ctx& ctx) {
    static const std::set<std::string> presets{"single_mode", "two_mode", "random_band",
                                              "gaussian_bump"};
    if (!presets.count(c.preset)) ctx.fail(path + ".preset: unknown preset \"" + c.preset + "\"");
    if (!(c.amplitude > 0)) ctx.fail(path + ".amplitude must be > 0");
    if (static_cast<int>(c.mode.size()) != dim)
        ctx.fail(path + ".mode must have one entry per grid dimension");
    if (c.preset == "two_mode" && static_cast<int>(c.mode2.size()) != dim)
        ctx.fail(path + ".mode2 must have one entry per grid dimension");
    if (c.band_lo < 1 || c.band_hi < c.band_lo)
        ctx.fail(path + ": need 1 <= band_lo <= band_hi");
    if (!(c.width > 0)) ctx.fail(path + ".width must be > 0");
    if (c.normalize != "none" && c.normalize != "l2" && c.normalize != "h2")
        ctx.fail(path + ".normalize must be one of none|l2|h2");
}

} // namespace

RunConfig parse_config(const json& doc) {
    Ctx ctx;
    RunConfig cfg;
    if (!doc.is_object()) throw ValidationError("config root must be a JSON object");
    check_keys(doc, "config",
               {"experiment", "grid", "params", "stepper", "dn", "init", "data",
                "output", "contraction", "scan"},
               ctx);
    if (doc.contains("experiment")) {
        if (!doc.at("experiment").is_string())
            ctx.fail("experiment must be a string");
        else
            cfg.experiment = doc.at("experiment").get<std::string>();
    }
    static const std::set<std::string> experiments{
        "evolve", "dn-check", "oracle-compare", "lyapunov-scan", "contraction", "norms"};
    if (!experiments.count(cfg.experiment))
        ctx.fail("experiment: unknown value \"" + cfg.experiment + "\"");

    const json* j = nullptr;
    if (section(doc, "grid", ctx, &j)) {
        check_keys(*j, "grid", {"dim", "n", "period"}, ctx);
        get_int(*j, "grid", "dim", cfg.grid.dim, ctx);
        get_int(*j, "grid", "n", cfg.grid.n, ctx);
        get_num(*j, "grid", "period", cfg.grid.period, ctx);
    }
    if (cfg.grid.dim != 1 && cfg.grid.dim != 2) ctx.fail("grid.dim must be 1 or 2");
    if (cfg.grid.n < 8 || (cfg.grid.n & (cfg.grid.n - 1)) != 0)
        ctx.fail("grid.n must be a power of two >= 8");
    if (!(cfg.grid.period > 0)) ctx.fail("grid.period must be > 0");

    if (section(doc, "params", ctx, &j)) {
        check_keys(*j, "params",
                   {"kappa", "mu", "rho", "gravity", "surface_tension", "galerkin_r"},
                   ctx);
        get_num(*j, "params", "kappa", cfg.params.kappa, ctx);
        get_num(*j, "params", "mu", cfg.params.mu, ctx);
        get_num(*j, "params", "rho", cfg.params.rho, ctx);
        get_num(*j, "params", "gravity", cfg.params.gravity, ctx);
        get_num(*j, "params", "surface_tension", cfg.params.surface_tension, ctx);
        get_num(*j, "params", "galerkin_r", cfg.params.galerkin_r, ctx);
    }
    if (!(cfg.params.kappa > 0)) ctx.fail("params.kappa must be > 0");
    if (!(cfg.params.mu > 0)) ctx.fail("params.mu must be > 0");
    if (!(cfg.params.rho > 0)) ctx.fail("params.rho must be > 0");
    if (!(cfg.params.gravity > 0)) ctx.fail("params.gravity must be > 0");
    if (cfg.params.surface_tension < 0) ctx.fail("params.surface_tension must be >= 0");
    if (cfg.params.galerkin_r < 0) ctx.fail("params.galerkin_r must be >= 0");

    if (section(doc, "stepper", ctx, &j)) {
        check_keys(*j, "stepper",
                   {"scheme", "dt", "t_final", "nonlinearity", "enforce_decay",
                    "decay_slack"},
                   ctx);
        get_str(*j, "stepper", "scheme", cfg.stepper.scheme, ctx);
        get_num(*j, "stepper", "dt", cfg.stepper.dt, ctx);
        get_num(*j, "stepper", "t_final", cfg.stepper.t_final, ctx);
        get_str(*j, "stepper", "nonlinearity", cfg.stepper.nonlinearity, ctx);
        get_bool(*j, "stepper", "enforce_decay", cfg.stepper.enforce_decay, ctx);
        get_num(*j, "stepper", "decay_slack", cfg.stepper.decay_slack, ctx);
    }
    if (cfg.stepper.scheme != "RK4_explicit" && cfg.stepper.scheme != "ETD_exponential" &&
        cfg.stepper.scheme != "IMEX_linear_implicit")
        ctx.fail("stepper.scheme must be RK4_explicit | ETD_exponential | IMEX_linear_implicit");
    if (!(cfg.stepper.dt > 0)) ctx.fail("stepper.dt must be > 0");
    if (!(cfg.stepper.t_final > 0)) ctx.fail("stepper.t_final must be > 0");
    if (cfg.stepper.nonlinearity != "full" && cfg.stepper.nonlinearity != "linear_only" &&
        cfg.stepper.nonlinearity != "no_remainder")
        ctx.fail("stepper.nonlinearity must be full | linear_only | no_remainder");
    if (cfg.stepper.decay_slack < 0) ctx.fail("stepper.decay_slack must be >= 0");

    if (section(doc, "dn", ctx, &j)) {
        check_keys(*j, "dn",
                   {"backend", "levels", "z_max", "ratio", "tol", "max_iter",
                    "contraction_guard", "elliptic_nz", "elliptic_depth", "elliptic_tol",
                    "elliptic_max_iter"},
                   ctx);
        get_str(*j, "dn", "backend", cfg.dn.backend, ctx);
        get_int(*j, "dn", "levels", cfg.dn.levels, ctx);
        get_num(*j, "dn", "z_max", cfg.dn.z_max, ctx);
        get_num(*j, "dn", "ratio", cfg.dn.ratio, ctx);
        get_num(*j, "dn", "tol", cfg.dn.tol, ctx);
        get_int(*j, "dn", "max_iter", cfg.dn.max_iter, ctx);
        get_num(*j, "dn", "contraction_guard", cfg.dn.contraction_guard, ctx);
        get_int(*j, "dn", "elliptic_nz", cfg.dn.elliptic_nz, ctx);
        get_num(*j, "dn", "elliptic_depth", cfg.dn.elliptic_depth, ctx);
        get_num(*j, "dn", "elliptic_tol", cfg.dn.elliptic_tol, ctx);
        get_int(*j, "dn", "elliptic_max_iter", cfg.dn.elliptic_max_iter, ctx);
    }
    if (cfg.dn.backend != "fixed_point" && cfg.dn.backend != "elliptic")
        ctx.fail("dn.backend must be fixed_point | elliptic");
    if (cfg.dn.levels < 2) ctx.fail("dn.levels must be >= 2");
    if (!(cfg.dn.z_max > 0)) ctx.fail("dn.z_max must be > 0");
    if (!(cfg.dn.ratio >= 1.0)) ctx.fail("dn.ratio must be >= 1");
    if (!(cfg.dn.tol > 0)) ctx.fail("dn.tol must be > 0");
    if (cfg.dn.max_iter < 1) ctx.fail("dn.max_iter must be >= 1");
    if (!(cfg.dn.contraction_guard > 0)) ctx.fail("dn.contraction_guard must be > 0");
    if (cfg.dn.elliptic_nz < 100) ctx.fail("dn.elliptic_nz must be >= 100");
    if (!(cfg.dn.elliptic_depth >= 6)) ctx.fail("dn.elliptic_depth must be >= 6");
    if (!(cfg.dn.elliptic_tol > 0)) ctx.fail("dn.elliptic_tol must be > 0");
    if (cfg.dn.elliptic_max_iter < 1) ctx.fail("dn.elliptic_max_iter must be >= 1");

    if (section(doc, "init", ctx, &j)) parse_init(*j, "init", cfg.init, ctx);
    validate_init(cfg.init, "init", cfg.grid.dim, ctx);
    if (section(doc, "data", ctx, &j)) parse_init(*j, "data", cfg.data, ctx);
    validate_init(cfg.data, "data", cfg.grid.dim, ctx);

    if (section(doc, "output", ctx, &j)) {
        check_keys(*j, "output", {"dir", "cadence", "snapshot_every", "sobolev_s"}, ctx);
        get_str(*j, "output", "dir", cfg.output.dir, ctx);
        get_int(*j, "output", "cadence", cfg.output.cadence, ctx);
        get_int(*j, "output", "snapshot_every", cfg.output.snapshot_every, ctx);
        get_num(*j, "output", "sobolev_s", cfg.output.sobolev_s, ctx);
    }
    if (cfg.output.cadence < 1) ctx.fail("output.cadence must be >= 1");
    if (cfg.output.snapshot_every < 0) ctx.fail("output.snapshot_every must be >= 0");
    if (cfg.output.dir.empty()) ctx.fail("output.dir must be nonempty");

    if (section(doc, "contraction", ctx, &j)) {
        check_keys(*j, "contraction", {"perturbation", "mode", "sobolev_s"}, ctx);
        get_num(*j, "contraction", "perturbation", cfg.contraction.perturbation, ctx);
        get_ivec(*j, "contraction", "mode", cfg.contraction.mode, ctx);
        get_num(*j, "contraction", "sobolev_s", cfg.contraction.sobolev_s, ctx);
    }
    if (!(cfg.contraction.perturbation > 0)) ctx.fail("contraction.perturbation must be > 0");
    if (static_cast<int>(cfg.contraction.mode.size()) != cfg.grid.dim)
        ctx.fail("contraction.mode must have one entry per grid dimension");

    if (section(doc, "scan", ctx, &j)) {
        check_keys(*j, "scan", {"epsilons"}, ctx);
        get_dvec(*j, "scan", "epsilons", cfg.scan.epsilons, ctx);
    }
    for (double e : cfg.scan.epsilons)
        if (!(e > 0)) {
            ctx.fail("scan.epsilons must all be > 0");
            break;
        }

    if (!ctx.bad.empty()) throw ValidationError(std::move(ctx.bad));
    return cfg;
}

RunConfig parse_config_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(doc);
}

nlohmann::json config_to_json(const RunConfig& c) {
    auto init_json = [](const InitConfig& i) {
        return json{{"preset", i.preset},     {"amplitude", i.amplitude},
                    {"mode", i.mode},         {"mode2", i.mode2},
                    {"amplitude2", i.amplitude2}, {"phase", i.phase},
                    {"seed", i.seed},         {"band_lo", i.band_lo},
                    {"band_hi", i.band_hi},   {"width", i.width},
                    {"normalize", i.normalize}};
    };
    return json{
        {"experiment", c.experiment},
        {"grid", {{"dim", c.grid.dim}, {"n", c.grid.n}, {"period", c.grid.period}}},
        {"params",
         {{"kappa", c.params.kappa},
          {"mu", c.params.mu},
          {"rho", c.params.rho},
          {"gravity", c.params.gravity},
          {"surface_tension", c.params.surface_tension},
          {"galerkin_r", c.params.galerkin_r}}},
        {"stepper",
         {{"scheme", c.stepper.scheme},
          {"dt", c.stepper.dt},
          {"t_final", c.stepper.t_final},
          {"nonlinearity", c.stepper.nonlinearity},
          {"enforce_decay", c.stepper.enforce_decay},
          {"decay_slack", c.stepper.decay_slack}}},
        {"dn",
         {{"backend", c.dn.backend},
          {"levels", c.dn.levels},
          {"z_max", c.dn.z_max},
          {"ratio", c.dn.ratio},
          {"tol", c.dn.tol},
          {"max_iter", c.dn.max_iter},
          {"contraction_guard", c.dn.contraction_guard},
          {"elliptic_nz", c.dn.elliptic_nz},
          {"elliptic_depth", c.dn.elliptic_depth},
          {"elliptic_tol", c.dn.elliptic_tol},
          {"elliptic_max_iter", c.dn.elliptic_max_iter}}},
        {"init", init_json(c.init)},
        {"data", init_json(c.data)},
        {"output",
         {{"dir", c.output.dir},
          {"cadence", c.output.cadence},
          {"snapshot_every", c.output.snapshot_every},
          {"sobolev_s", c.output.sobolev_s}}},
        {"contraction",
         {{"perturbation", c.contraction.perturbation},
          {"mode", c.contraction.mode},
          {"sobolev_s", c.contraction.sobolev_s}}},
        {"scan", {{"epsilons", c.scan.epsilons}}}};
}

GridPtr build_grid(const GridConfig& g) { return make_grid(g.dim, g.n, g.period); }

MuskatParams build_params(const ParamsConfig& p) {
    return MuskatParams{p.kappa, p.mu, p.rho, p.gravity, p.surface_tension, p.galerkin_r};
}

StepperSpec build_stepper(const StepperConfig& s) {
    StepperSpec spec;
    if (s.scheme == "RK4_explicit")
        spec.scheme = Scheme::Rk4Explicit;
    else if (s.scheme == "IMEX_linear_implicit")
        spec.scheme = Scheme::ImexLinearImplicit;
    else
        spec.scheme = Scheme::EtdExponential;
    spec.dt = s.dt;
    if (s.nonlinearity == "linear_only")
        spec.nonlinearity = Nonlinearity::LinearOnly;
    else if (s.nonlinearity == "no_remainder")
        spec.nonlinearity = Nonlinearity::NoRemainder;
    else
        spec.nonlinearity = Nonlinearity::Full;
    spec.enforce_decay = s.enforce_decay;
    spec.decay_slack = s.decay_slack;
    return spec;
}

DnConfig build_dn(const DnSectionConfig& d) {
    DnConfig cfg;
    cfg.backend = d.backend == "elliptic" ? DnBackend::Elliptic : DnBackend::FixedPoint;
    cfg.vertical = VerticalGrid::geometric(d.z_max, d.levels, d.ratio);
    cfg.options.tol = d.tol;
    cfg.options.max_iter = d.max_iter;
    cfg.options.contraction_guard = d.contraction_guard;
    cfg.strip = StripGrid{d.elliptic_nz, d.elliptic_depth};
    cfg.elliptic.tol = d.elliptic_tol;
    cfg.elliptic.max_iter = d.elliptic_max_iter;
    return cfg;
}

} // namespace muskat
