#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "muskat/diagnostics.hpp"
#include "muskat/field.hpp"

namespace muskat {

// All writers are deterministic: fixed column order, fixed key order (JSON keys
// are emitted sorted), %.17g floats, no timestamps. Failures throw IoError
// naming the offending path.

std::string format_g17(double v);

void write_diagnostics_csv(const std::string& path,
                           const std::vector<DiagnosticsRow>& rows);

struct Snapshot {
    double t = 0.0;
    SpectralField f;
    MuskatParams params;
};

// Coefficients are serialized as [re, im] pairs in ascending-wavenumber order
// (k from -n/2+1 to n/2 per axis, row-major for d = 2), independent of the
// in-memory FFTW layout. Round trips are bit exact.
void write_snapshot(const std::string& path, const SpectralField& f, double t,
                    const MuskatParams& params);
Snapshot read_snapshot(const std::string& path);

void write_json_file(const std::string& path, const nlohmann::json& doc);
nlohmann::json read_json_file(const std::string& path);

// manifest.json for an output directory: config echo plus the sorted list of
// files the run produced.
void write_manifest(const std::string& dir, const nlohmann::json& config_echo,
                    std::vector<std::string> files);

void ensure_dir(const std::string& dir);

} // namespace muskat
