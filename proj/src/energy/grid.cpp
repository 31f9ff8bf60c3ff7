#include <array>
#include <charconv>
#include <random>
#include <sstream>

#include "core/bitvector.hpp"
#include "core/error.hpp"
#include "energy/energy.hpp"

namespace cswp::energy {

namespace {

std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

std::vector<Measurement> gen_synthetic_grid(Mnemonic op, unsigned width, const EnergyModel& model, double base_mw,
                                            double noise_sigma_mw, uint64_t seed) {
  if (arity(op) != 2 || op == Mnemonic::Load || op == Mnemonic::Store) {
    throw Error(ErrorCode::InvalidArgument,
                "grid generation needs a two-operand mnemonic, got '" + std::string(mnemonic_name(op)) + "'");
  }
  if (width < 1 || width > kMaxGridWidth) {
    throw Error(ErrorCode::InvalidArgument, "grid width " + std::to_string(width) + " outside [1, " +
                                                std::to_string(kMaxGridWidth) + "]");
  }
  if (!(noise_sigma_mw >= 0)) throw Error(ErrorCode::InvalidArgument, "noise sigma must be non-negative");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, noise_sigma_mw);
  const uint64_t side = uint64_t{1} << width;
  std::vector<Measurement> grid;
  grid.reserve(side * side);
  for (uint64_t a = 0; a < side; ++a) {
    for (uint64_t b = 0; b < side; ++b) {
      const std::array<uint64_t, 2> operands{a, b};
      const uint64_t result = apply_op(op, operands, width);
      Measurement m{a, b, hamming_weight(a) + hamming_weight(b), hamming_weight(result), 0.0};
      m.power_mw = predict_power(model, base_mw, m.h_in, m.h_out);
      if (noise_sigma_mw > 0) m.power_mw += noise(rng);
      grid.push_back(m);
    }
  }
  return grid;
}

std::string format_grid_csv(std::span<const Measurement> grid) {
  std::string out = "op_a,op_b,h_in,h_out,power_mw\n";
  for (const auto& m : grid) {
    out += to_hex(m.op_a) + "," + to_hex(m.op_b) + "," + std::to_string(m.h_in) + "," + std::to_string(m.h_out) +
           "," + shortest(m.power_mw) + "\n";
  }
  return out;
}

std::vector<Measurement> parse_grid_csv(std::string_view csv) {
  std::istringstream in{std::string(csv)};
  std::string line;
  std::size_t line_no = 1;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorCode::Parse, "csv line " + std::to_string(line_no) + ": " + msg);
  };
  if (!std::getline(in, line)) fail("empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "op_a,op_b,h_in,h_out,power_mw") fail("expected header 'op_a,op_b,h_in,h_out,power_mw'");

  std::vector<Measurement> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::array<std::string_view, 5> fields;
    std::string_view rest = line;
    for (std::size_t k = 0; k < fields.size(); ++k) {
      const auto comma = rest.find(',');
      if ((comma == std::string_view::npos) != (k + 1 == fields.size())) fail("expected 5 fields");
      fields[k] = rest.substr(0, comma);
      if (comma != std::string_view::npos) rest = rest.substr(comma + 1);
    }
    auto unsigned_field = [&](std::string_view f, std::string_view name) {
      int base = 10;
      if (f.starts_with("0x") || f.starts_with("0X")) {
        f.remove_prefix(2);
        base = 16;
      }
      uint64_t v = 0;
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v, base);
      if (f.empty() || ec != std::errc{} || ptr != f.data() + f.size()) fail("bad " + std::string(name));
      return v;
    };
    Measurement m;
    m.op_a = unsigned_field(fields[0], "op_a");
    m.op_b = unsigned_field(fields[1], "op_b");
    m.h_in = static_cast<unsigned>(unsigned_field(fields[2], "h_in"));
    m.h_out = static_cast<unsigned>(unsigned_field(fields[3], "h_out"));
    auto [ptr, ec] = std::from_chars(fields[4].data(), fields[4].data() + fields[4].size(), m.power_mw);
    if (fields[4].empty() || ec != std::errc{} || ptr != fields[4].data() + fields[4].size()) fail("bad power_mw");
    out.push_back(m);
  }
  return out;
}

}  // namespace cswp::energy
