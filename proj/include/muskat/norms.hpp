#pragma once

#include <limits>
#include <vector>

#include "muskat/field.hpp"

namespace muskat {

// Norm evaluation on spectral fields. Conventions:
//   * L^2-based quantities use Parseval with the period^d factor, so they are
//     genuine integrals over the torus, not per-sample averages;
//   * finite-p Lebesgue norms use the trapezoid rule on the nominal grid,
//     p = inf takes the max over the dealiasing grid (denser sampling);
//   * homogeneous families skip the zero mode; if the input carries a mean
//     that is not negligible the result is flagged (mean_ignored).
enum class NormFamily { Lebesgue, Sobolev, HomSobolev, Besov, HomBesov, Lipschitz };

constexpr double kInf = std::numeric_limits<double>::infinity();

struct NormSpec {
    NormFamily family = NormFamily::Sobolev;
    double s = 0.0;    // regularity index (Sobolev/Besov families)
    double p = 2.0;    // Lebesgue exponent
    double q = 2.0;    // Besov summation exponent, may be kInf
};

struct NormResult {
    double value = 0.0;
    bool mean_ignored = false;
};

NormResult evaluate_norm(const SpectralField& f, const NormSpec& spec);
double norm_value(const SpectralField& f, const NormSpec& spec);

double lebesgue_norm(const SpectralField& f, double p);
double sobolev_norm(const SpectralField& f, double s);
double hom_sobolev_norm(const SpectralField& f, double s);
double besov_norm(const SpectralField& f, double s, double q);
double lipschitz_seminorm(const SpectralField& f);

// block index range [j_lo, j_hi] that can intersect the grid's spectrum;
// j = -1 (the low-pass) is always included for the inhomogeneous family
int lp_block_ceiling(const TorusGrid& grid);

// A time-indexed sequence of states, as produced by the evolution loop.
struct Trajectory {
    std::vector<double> times;
    std::vector<SpectralField> states;
};

// Chemin-Lerner style mixed norm L^inf_t B^s_{2,q}: the time sup is taken
// inside each dyadic block, then blocks are summed in l^q. Always at least
// as large as sup_t of the instantaneous Besov norm.
double chemin_lerner_norm(const Trajectory& traj, double s, double q);

} // namespace muskat
