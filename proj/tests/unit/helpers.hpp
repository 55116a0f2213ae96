#pragma once

#include <cmath>
#include <vector>

#include "muskat/evolution.hpp"
#include "muskat/field.hpp"

namespace testutil {

inline muskat::GridPtr grid1(int n = 64) { return muskat::make_grid(1, n); }
inline muskat::GridPtr grid2(int n = 16) { return muskat::make_grid(2, n); }

inline muskat::SpectralField cosine(const muskat::GridPtr& g, int k, double amp,
                                    double phase = 0.0) {
    muskat::SpectralField f(g);
    if (g->dim() == 1)
        muskat::add_cosine(f, {k}, amp, phase);
    else
        muskat::add_cosine(f, {k, 0}, amp, phase);
    return f;
}

inline double max_coeff_diff(const muskat::SpectralField& a,
                             const muskat::SpectralField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.coeffs.size(); ++i)
        m = std::max(m, std::abs(a.coeffs[i] - b.coeffs[i]));
    return m;
}

// light but spec-conforming vertical grid for fast DN solves in unit tests
inline muskat::VerticalGrid fast_vertical() {
    return muskat::VerticalGrid::geometric(25.0, 60, 1.1);
}

inline muskat::DnConfig fast_dn() {
    muskat::DnConfig cfg;
    cfg.vertical = fast_vertical();
    return cfg;
}

} // namespace testutil
