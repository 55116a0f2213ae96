#include "muskat/presets.hpp"

#include <cmath>
#include <random>

#include "muskat/errors.hpp"
#include "muskat/norms.hpp"

namespace muskat {

namespace {

// Periodized centered Gaussian, summed over enough image charges that the
// truncation error is below double precision for width >= 0.05.
double periodized_gaussian(double x, double center, double period, double width) {
    double acc = 0.0;
    for (int m = -8; m <= 8; ++m) {
        const double d = x - center - m * period;
        acc += std::exp(-d * d / (2.0 * width * width));
    }
    return acc;
}

void apply_normalization(SpectralField& f, const InitConfig& init) {
    if (init.normalize == "none") {
        for (auto& c : f.coeffs) c *= init.amplitude;
        return;
    }
    const double target = init.amplitude;
    const double current = init.normalize == "l2"
                               ? norm_l2(f)
                               : norm_value(f, NormSpec{NormFamily::Sobolev, 2.0, 2.0, 2.0});
    if (!(current > 0)) throw ValidationError("init: cannot normalize a zero field");
    const double scale = target / current;
    for (auto& c : f.coeffs) c *= scale;
}

SpectralField random_band_field(const GridPtr& grid, const InitConfig& init) {
    SpectralField f(grid);
    std::mt19937 rng(init.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int n = grid->n();
    // Fixed-order sweep over canonical half-space representatives: draws are
    // consumed for every candidate mode whether or not it lands in the band,
    // so the field for a given (seed, n) does not depend on band_lo/band_hi
    // ordering details.
    auto canonical = [](int k0, int k1) { return k0 > 0 || (k0 == 0 && k1 > 0); };
    auto visit = [&](int k0, int k1) {
        if (!canonical(k0, k1)) return;
        const double r = unit(rng);
        const double theta = 2.0 * M_PI * unit(rng);
        const double kk = std::sqrt(static_cast<double>(k0) * k0 +
                                    static_cast<double>(k1) * k1);
        if (kk < init.band_lo - 0.5 || kk > init.band_hi + 0.5) return;
        std::vector<int> mode;
        if (grid->dim() == 1)
            mode = {k0};
        else
            mode = {k0, k1};
        add_cosine(f, mode, r, theta);
    };
    if (grid->dim() == 1) {
        for (int k0 = -n / 2 + 1; k0 <= n / 2 - 1; ++k0) visit(k0, 0);
    } else {
        for (int k0 = -n / 2 + 1; k0 <= n / 2 - 1; ++k0)
            for (int k1 = -n / 2 + 1; k1 <= n / 2 - 1; ++k1) visit(k0, k1);
    }
    return f;
}

} // namespace

SpectralField make_initial(const GridPtr& grid, const InitConfig& init) {
    if (init.preset == "single_mode") {
        SpectralField f(grid);
        add_cosine(f, init.mode, init.amplitude, init.phase);
        return f;
    }
    if (init.preset == "two_mode") {
        SpectralField f(grid);
        add_cosine(f, init.mode, init.amplitude, init.phase);
        add_cosine(f, init.mode2, init.amplitude2);
        return f;
    }
    if (init.preset == "random_band") {
        SpectralField f = random_band_field(grid, init);
        apply_normalization(f, init);
        f.coeffs[0] = 0.0;
        return f;
    }
    if (init.preset == "gaussian_bump") {
        const double L = grid->period();
        std::vector<double> s(grid->size());
        for (std::size_t i = 0; i < grid->size(); ++i) {
            double v = periodized_gaussian(grid->coord(i, 0), L / 2, L, init.width);
            if (grid->dim() == 2)
                v *= periodized_gaussian(grid->coord(i, 1), L / 2, L, init.width);
            s[i] = init.amplitude * v;
        }
        SpectralField f = field_from_samples(grid, s);
        f.coeffs[0] = 0.0; // recenter: interface graphs here are mean-free
        return f;
    }
    throw ValidationError("init.preset: unknown preset \"" + init.preset + "\"");
}

} // namespace muskat
