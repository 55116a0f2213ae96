#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "muskat/evolution.hpp"

namespace muskat {

// Experiment configuration, mirroring the JSON schema one-to-one. Parsing is
// strict: unknown keys anywhere are rejected, and every violation found is
// reported at once with its field path.

struct GridConfig {
    int dim = 1;
    int n = 256;
    double period = 6.283185307179586476925286766559;
};

struct ParamsConfig {
    double kappa = 1.0, mu = 1.0, rho = 1.0, gravity = 1.0, surface_tension = 1.0;
    double galerkin_r = 0.0; // 0 = dealiasing-aligned default
};

struct StepperConfig {
    std::string scheme = "ETD_exponential"; // RK4_explicit | ETD_exponential | IMEX_linear_implicit
    double dt = 1e-3;
    double t_final = 1.0;
    std::string nonlinearity = "full"; // full | linear_only | no_remainder
    bool enforce_decay = true;
    double decay_slack = 1e-10;
};

struct DnSectionConfig {
    std::string backend = "fixed_point"; // fixed_point | elliptic
    int levels = 200;
    double z_max = 40.0;
    double ratio = 1.05;
    double tol = 1e-12;
    int max_iter = 30;
    double contraction_guard = 0.9;
    int elliptic_nz = 400;
    double elliptic_depth = 8.0;
    double elliptic_tol = 1e-12;
    int elliptic_max_iter = 500;
};

struct InitConfig {
    std::string preset = "single_mode"; // single_mode | two_mode | random_band | gaussian_bump
    double amplitude = 0.01;
    std::vector<int> mode{1};
    std::vector<int> mode2{2};
    double amplitude2 = 0.0;
    double phase = 0.0;
    unsigned seed = 1234;
    int band_lo = 1, band_hi = 4;
    double width = 0.5;
    std::string normalize = "none"; // none | l2 | h2 (rescale to `amplitude`)
};

struct OutputConfig {
    std::string dir = "out";
    int cadence = 10;
    int snapshot_every = 0; // every this many records; 0 = initial+final only
    double sobolev_s = 4.0;
};

struct ContractionConfig {
    double perturbation = 1e-4;
    std::vector<int> mode{2};
    double sobolev_s = 2.0;
};

struct ScanConfig {
    std::vector<double> epsilons{0.1, 0.05, 0.025};
};

struct RunConfig {
    std::string experiment = "evolve";
    GridConfig grid;
    ParamsConfig params;
    StepperConfig stepper;
    DnSectionConfig dn;
    InitConfig init;
    // Dirichlet data for dn-check / oracle-compare
    InitConfig data = InitConfig{.preset = "single_mode", .amplitude = 1.0, .mode = {2}};
    OutputConfig output;
    ContractionConfig contraction;
    ScanConfig scan;
};

RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config_text(const std::string& text);
nlohmann::json config_to_json(const RunConfig& cfg);

// converters to the compute-layer types (validate on the way)
GridPtr build_grid(const GridConfig& g);
MuskatParams build_params(const ParamsConfig& p);
StepperSpec build_stepper(const StepperConfig& s);
DnConfig build_dn(const DnSectionConfig& d);

} // namespace muskat
