#include "uavnet/serialization.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace uavnet {

namespace {

constexpr std::array<char, 8> kMlpMagic{'U', 'A', 'V', 'M', 'L', 'P', '0', '1'};
constexpr std::array<char, 8> kCheckpointMagic{'U', 'A', 'V', 'C', 'K', 'P', 'T', '1'};

static_assert(std::endian::native == std::endian::little,
              "serialization assumes a little-endian host");

void put_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_f64(std::ostream& out, double v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t get_u32(std::istream& in) {
  std::uint32_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v))
    throw std::runtime_error("read: truncated stream");
  return v;
}

double get_f64(std::istream& in) {
  double v = 0.0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v))
    throw std::runtime_error("read: truncated stream");
  return v;
}

void expect_magic(std::istream& in, const std::array<char, 8>& magic) {
  std::array<char, 8> got{};
  if (!in.read(got.data(), got.size()) || got != magic)
    throw std::runtime_error("read: bad magic bytes");
}

}  // namespace

void write_mlp(std::ostream& out, const Mlp& net) {
  out.write(kMlpMagic.data(), kMlpMagic.size());
  put_u32(out, static_cast<std::uint32_t>(net.widths().size()));
  for (int w : net.widths()) put_u32(out, static_cast<std::uint32_t>(w));
  for (const auto& layer : net.layers()) {
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) put_f64(out, layer.weight(r, c));
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) put_f64(out, layer.bias[r]);
  }
  if (!out) throw std::runtime_error("write_mlp: stream error");
}

Mlp read_mlp(std::istream& in) {
  expect_magic(in, kMlpMagic);
  const std::uint32_t n = get_u32(in);
  if (n < 2 || n > 64) throw std::runtime_error("read_mlp: implausible layer count");
  std::vector<int> widths;
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::uint32_t w = get_u32(in);
    if (w == 0 || w > (1U << 24)) throw std::runtime_error("read_mlp: implausible width");
    widths.push_back(static_cast<int>(w));
  }
  Mlp net(widths);
  for (auto& layer : net.layers()) {
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) layer.weight(r, c) = get_f64(in);
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) layer.bias[r] = get_f64(in);
  }
  return net;
}

void write_checkpoint(std::ostream& out, const CheckpointHeader& header,
                      const std::vector<const Mlp*>& nets) {
  out.write(kCheckpointMagic.data(), kCheckpointMagic.size());
  put_u32(out, static_cast<std::uint32_t>(header.agent_kind.size()));
  out.write(header.agent_kind.data(), static_cast<std::streamsize>(header.agent_kind.size()));
  put_u32(out, header.num_cells);
  put_u32(out, header.antennas);
  put_u32(out, header.codebook_size);
  put_u32(out, header.power_levels);
  put_u32(out, static_cast<std::uint32_t>(nets.size()));
  for (const Mlp* net : nets) write_mlp(out, *net);
}

std::vector<Mlp> read_checkpoint(std::istream& in, CheckpointHeader& header) {
  expect_magic(in, kCheckpointMagic);
  const std::uint32_t len = get_u32(in);
  if (len > 256) throw std::runtime_error("read_checkpoint: implausible kind length");
  header.agent_kind.assign(len, '\0');
  if (!in.read(header.agent_kind.data(), len)) throw std::runtime_error("read: truncated stream");
  header.num_cells = get_u32(in);
  header.antennas = get_u32(in);
  header.codebook_size = get_u32(in);
  header.power_levels = get_u32(in);
  const std::uint32_t count = get_u32(in);
  if (count > 1024) throw std::runtime_error("read_checkpoint: implausible network count");
  std::vector<Mlp> nets;
  for (std::uint32_t i = 0; i < count; ++i) nets.push_back(read_mlp(in));
  return nets;
}

}  // namespace uavnet
