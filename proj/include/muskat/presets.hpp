#pragma once

#include "muskat/config.hpp"
#include "muskat/field.hpp"

namespace muskat {

// Deterministic initial data factory. Every preset returns a mean-free field;
// random_band commits to a fixed mode iteration order so a given seed gives the
// same field on every platform.
SpectralField make_initial(const GridPtr& grid, const InitConfig& init);

} // namespace muskat
