#include "uavnet/ccdf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uavnet {

std::vector<double> ccdf(std::span<const double> samples, std::span<const double> grid) {
  if (samples.empty()) throw std::invalid_argument("ccdf: no samples");
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw std::invalid_argument("ccdf: grid must be sorted ascending");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<double> out;
  out.reserve(grid.size());
  for (double x : grid) {
    const auto first = std::lower_bound(sorted.begin(), sorted.end(), x);
    out.push_back(static_cast<double>(sorted.end() - first) / n);
  }
  return out;
}

std::vector<double> make_grid(double min, double max, double step) {
  if (!(step > 0.0) || !(max >= min)) throw std::invalid_argument("make_grid: bad range");
  const auto count = static_cast<long>(std::floor((max - min) / step + 0.5)) + 1;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) grid.push_back(min + static_cast<double>(i) * step);
  return grid;
}

}  // namespace uavnet
