#include "muskat/io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "muskat/errors.hpp"

namespace muskat {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(path + ": cannot open for writing");
    return out;
}

// flattened index of the FFTW slot holding integer mode k
std::size_t slot_of(const TorusGrid& g, int k0, int k1) {
    const int n = g.n();
    const std::size_t i0 = static_cast<std::size_t>(k0 >= 0 ? k0 : k0 + n);
    if (g.dim() == 1) return i0;
    const std::size_t i1 = static_cast<std::size_t>(k1 >= 0 ? k1 : k1 + n);
    return i0 * n + i1;
}

template <typename Fn>
void for_modes_ascending(const TorusGrid& g, Fn&& fn) {
    const int n = g.n();
    if (g.dim() == 1) {
        for (int k0 = -n / 2 + 1; k0 <= n / 2; ++k0) fn(slot_of(g, k0, 0));
    } else {
        for (int k0 = -n / 2 + 1; k0 <= n / 2; ++k0)
            for (int k1 = -n / 2 + 1; k1 <= n / 2; ++k1) fn(slot_of(g, k0, k1));
    }
}

json params_json(const MuskatParams& p) {
    return json{{"kappa", p.kappa},
                {"mu", p.mu},
                {"rho", p.rho},
                {"gravity", p.gravity},
                {"surface_tension", p.surface_tension},
                {"galerkin_r", p.galerkin_r}};
}

MuskatParams params_from_json(const json& j, const std::string& path) {
    MuskatParams p;
    try {
        p.kappa = j.at("kappa").get<double>();
        p.mu = j.at("mu").get<double>();
        p.rho = j.at("rho").get<double>();
        p.gravity = j.at("gravity").get<double>();
        p.surface_tension = j.at("surface_tension").get<double>();
        p.galerkin_r = j.at("galerkin_r").get<double>();
    } catch (const json::exception& e) {
        throw IoError(path + ": malformed params block: " + e.what());
    }
    return p;
}

} // namespace

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_diagnostics_csv(const std::string& path,
                           const std::vector<DiagnosticsRow>& rows) {
    auto out = open_out(path);
    out << "t,L2,Hhalf,H3half,Hs,Lip,J,a_min,mean,energy_residual\n";
    for (const auto& r : rows) {
        out << format_g17(r.t) << ',' << format_g17(r.l2) << ','
            << format_g17(r.h_half) << ',' << format_g17(r.h_3half) << ','
            << format_g17(r.hs) << ',' << format_g17(r.lip) << ','
            << format_g17(r.j) << ',' << format_g17(r.a_min) << ','
            << format_g17(r.mean) << ',' << format_g17(r.energy_residual) << '\n';
    }
    if (!out) throw IoError(path + ": write failed");
}

void write_snapshot(const std::string& path, const SpectralField& f, double t,
                    const MuskatParams& params) {
    const TorusGrid& g = *f.grid;
    json coeffs = json::array();
    for_modes_ascending(g, [&](std::size_t slot) {
        coeffs.push_back(json::array({f.coeffs[slot].real(), f.coeffs[slot].imag()}));
    });
    json doc{{"meta",
              {{"t", t},
               {"grid", {{"dim", g.dim()}, {"n", g.n()}, {"period", g.period()}}},
               {"params", params_json(params)}}},
             {"coeffs", std::move(coeffs)}};
    write_json_file(path, doc);
}

Snapshot read_snapshot(const std::string& path) {
    const json doc = read_json_file(path);
    Snapshot snap;
    GridPtr grid;
    try {
        const auto& meta = doc.at("meta");
        snap.t = meta.at("t").get<double>();
        const auto& jg = meta.at("grid");
        grid = make_grid(jg.at("dim").get<int>(), jg.at("n").get<int>(),
                         jg.at("period").get<double>());
        snap.params = params_from_json(meta.at("params"), path);
    } catch (const json::exception& e) {
        throw IoError(path + ": malformed snapshot meta: " + e.what());
    }
    const auto& coeffs = doc.at("coeffs");
    if (!coeffs.is_array() || coeffs.size() != grid->size())
        throw IoError(path + ": snapshot has wrong coefficient count");
    snap.f = SpectralField(grid);
    std::size_t next = 0;
    try {
        for_modes_ascending(*grid, [&](std::size_t slot) {
            const auto& pair = coeffs.at(next++);
            snap.f.coeffs[slot] = Complex(pair.at(0).get<double>(),
                                          pair.at(1).get<double>());
        });
    } catch (const json::exception& e) {
        throw IoError(path + ": malformed coefficient entry: " + e.what());
    }
    return snap;
}

void write_json_file(const std::string& path, const json& doc) {
    auto out = open_out(path);
    out << doc.dump(2) << '\n';
    if (!out) throw IoError(path + ": write failed");
}

json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path + ": cannot open for reading");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return json::parse(ss.str());
    } catch (const json::parse_error& e) {
        throw IoError(path + ": not valid JSON: " + e.what());
    }
}

void write_manifest(const std::string& dir, const json& config_echo,
                    std::vector<std::string> files) {
    std::sort(files.begin(), files.end());
    write_json_file(
        dir + "/manifest.json",
        json{{"config", config_echo},
             {"files", std::move(files)},
             {"formats",
              json{{"snapshot_coeffs",
                    "[re, im] pairs ascending k = -n/2+1 .. n/2 per axis, "
                    "lexicographic across axes"},
                   {"diagnostics_csv", "one row per record, %.17g columns"}}}});
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError(dir + ": cannot create directory: " + ec.message());
}

} // namespace muskat
