#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "uavnet/mlp.hpp"

namespace uavnet {

/// Flat binary network format, little-endian:
///   8 bytes  magic "UAVMLP01"
///   u32      number of widths n
///   n x u32  widths (input, hidden..., output)
///   per layer: weight (out x in, row-major f64), then bias (out x f64)
void write_mlp(std::ostream& out, const Mlp& net);
Mlp read_mlp(std::istream& in);

/// Header prepended to agent checkpoints:
///   8 bytes  magic "UAVCKPT1"
///   u32 + bytes  agent kind
///   u32 x 4  num_cells, antennas, codebook_size, power_levels
///   u32      number of networks that follow (each in write_mlp format)
struct CheckpointHeader {
  std::string agent_kind;
  std::uint32_t num_cells = 0;
  std::uint32_t antennas = 0;
  std::uint32_t codebook_size = 0;
  std::uint32_t power_levels = 0;

  friend bool operator==(const CheckpointHeader&, const CheckpointHeader&) = default;
};

void write_checkpoint(std::ostream& out, const CheckpointHeader& header,
                      const std::vector<const Mlp*>& nets);
std::vector<Mlp> read_checkpoint(std::istream& in, CheckpointHeader& header);

}  // namespace uavnet
