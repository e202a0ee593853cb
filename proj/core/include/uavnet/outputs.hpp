#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "uavnet/config.hpp"
#include "uavnet/experiment.hpp"

namespace uavnet {

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

/// Creates `dir` if needed and proves it is writable. Throws OutputError.
void prepare_output_dir(const std::filesystem::path& dir);

/// summary.csv, ccdf_<method>_L<L>.csv per curve, skipped.csv when any cell
/// was skipped, and config_echo (the resolved config as JSON). UTF-8, LF.
void write_outputs(const MetricsTable& table, const ExperimentConfig& config,
                   const std::filesystem::path& dir);

}  // namespace uavnet
