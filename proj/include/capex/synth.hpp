#pragma once

#include "capex/types.hpp"

#include <cstdint>

namespace capex {

/// Default dataset: the 14 bundled generation/storage technologies and 4
/// fuels with synthetic weather/load years (sinusoidal daily and seasonal
/// shapes plus seeded noise, scaled to the bundled average availability
/// factors). Deterministic for a given seed.
SystemSpec default_system(int num_years = 11, std::uint64_t seed = 1, int hours = 8760);

/// Synthetic profiles only, attached to an existing spec's technology set.
YearData synth_year(const SystemSpec& spec, const std::string& label,
                    std::uint64_t seed, int hours);

} // namespace capex
