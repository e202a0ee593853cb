#pragma once

#include <span>
#include <vector>

namespace uavnet {

/// Empirical P[X >= x] at every grid point. Throws std::invalid_argument on
/// empty samples or an unsorted grid.
std::vector<double> ccdf(std::span<const double> samples, std::span<const double> grid);

/// min, min + step, ... up to max inclusive (within half a step).
std::vector<double> make_grid(double min, double max, double step);

}  // namespace uavnet
