#include "uavnet/outputs.hpp"

#include <charconv>
#include <fstream>
#include <system_error>

namespace uavnet {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.close();
  if (!out) throw OutputError("cannot write '" + path.string() + "'");
}

// Keeps commas and newlines out of a CSV field.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c == '\n' ? ' ' : c;
  }
  return q + "\"";
}

}  // namespace

void prepare_output_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw OutputError("cannot create output dir '" + dir.string() + "': " + ec.message());
  const auto probe = dir / ".write_probe";
  {
    std::ofstream out(probe, std::ios::binary | std::ios::trunc);
    out << "ok\n";
    if (!out) throw OutputError("output dir '" + dir.string() + "' is not writable");
  }
  std::filesystem::remove(probe, ec);
}

void write_outputs(const MetricsTable& table, const ExperimentConfig& config,
                   const std::filesystem::path& dir) {
  prepare_output_dir(dir);

  std::string summary = "method,L,seed,mean_sum_rate,std_sum_rate,mean_reward\n";
  for (const auto& r : table.rows)
    summary += r.method + "," + std::to_string(r.num_cells) + "," + std::to_string(r.seed) + "," +
               format_double(r.mean_sum_rate) + "," + format_double(r.std_sum_rate) + "," +
               format_double(r.mean_reward) + "\n";
  write_file(dir / "summary.csv", summary);

  for (const auto& c : table.curves) {
    std::string text = "sinr_db,ccdf\n";
    for (std::size_t i = 0; i < c.grid_db.size(); ++i)
      text += format_double(c.grid_db[i]) + "," + format_double(c.ccdf[i]) + "\n";
    write_file(dir / ("ccdf_" + c.method + "_L" + std::to_string(c.num_cells) + ".csv"), text);
  }

  std::error_code ec;
  std::filesystem::remove(dir / "skipped.csv", ec);
  if (!table.skipped.empty()) {
    std::string text = "method,L,seed,reason\n";
    for (const auto& s : table.skipped)
      text += s.method + "," + std::to_string(s.num_cells) + "," + std::to_string(s.seed) + "," +
              csv_field(s.reason) + "\n";
    write_file(dir / "skipped.csv", text);
  }

  write_file(dir / "config_echo", to_json(config));
}

}  // namespace uavnet
