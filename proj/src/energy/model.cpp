#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "core/error.hpp"
#include "energy/energy.hpp"

namespace cswp::energy {

std::string format_fixed(double v, int decimals) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
  if (ec != std::errc{}) return std::to_string(v);
  std::string out(buf, ptr);
  if (out.starts_with("-") && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
  return out;
}

void validate(const EnergyModel& m) {
  if (m.p_idle_single_mw < 0 || m.c_in_mw < 0 || m.c_out_mw < 0) {
    throw Error(ErrorCode::InvalidArgument, "energy model powers must be non-negative");
  }
  if (!(m.f_hz > 0)) throw Error(ErrorCode::InvalidArgument, "energy model frequency must be positive");
}

EnergyModel preset_model(std::string_view name) {
  if (name == "xs1l-paper") return {164.0, 1.3, 4.4, 1.0, 500e6};
  throw Error(ErrorCode::InvalidArgument, "unknown model preset '" + std::string(name) + "'");
}

EnergyModel parse_model(std::string_view text) {
  EnergyModel m;
  std::istringstream in{std::string(text)};
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line.erase(std::remove_if(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\t' || c == '\r'; }),
               line.end());
    if (line.empty()) continue;
    const auto eq = line.find('=');
    auto fail = [&](const std::string& msg) {
      throw Error(ErrorCode::Parse, "model line " + std::to_string(line_no) + ": " + msg);
    };
    if (eq == std::string::npos) fail("expected key=value");
    const auto key = line.substr(0, eq);
    const auto value = line.substr(eq + 1);
    double v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size()) fail("bad number '" + value + "'");
    if (key == "p_idle_mw") m.p_idle_single_mw = v;
    else if (key == "c_in_mw") m.c_in_mw = v;
    else if (key == "c_out_mw") m.c_out_mw = v;
    else if (key == "v_dd") m.v_dd = v;
    else if (key == "f_hz") m.f_hz = v;
    else fail("unknown key '" + key + "'");
  }
  validate(m);
  return m;
}

double predict_power(const EnergyModel& model, double base_mw, double h_in, double h_out) {
  return base_mw + model.c_in_mw * h_in + model.c_out_mw * h_out;
}

double trace_energy_nj(const ExecutionTrace& trace, const EnergyModel& model, bool include_input_term) {
  validate(model);
  // mW * (1/f) s = 1e-3 J/f; in nJ that is 1e6/f per mW.
  const double nj_per_mw = 1e6 / model.f_hz;
  double total = 0;
  for (std::size_t i = 0; i + 1 < trace.outputs.size(); ++i) {
    double power = model.p_idle_single_mw + model.c_out_mw * hamming_distance(trace.outputs[i], trace.outputs[i + 1]);
    if (include_input_term) {
      const auto& prev = trace.operands[i];
      const auto& next = trace.operands[i + 1];
      unsigned h_in = 0;
      for (std::size_t k = 0; k < std::max(prev.size(), next.size()); ++k) {
        const uint64_t a = k < prev.size() ? prev[k].value() : 0;
        const uint64_t b = k < next.size() ? next[k].value() : 0;
        h_in += hamming_weight(a ^ b);
      }
      power += model.c_in_mw * h_in;
    }
    total += power * nj_per_mw;
  }
  return total;
}

double trace_energy_nj(const Program& program, std::span<const uint64_t> assignment, const EnergyModel& model,
                       bool include_input_term) {
  return trace_energy_nj(execute(program, assignment), model, include_input_term);
}

double dynamic_power(double alpha, double c_sw_farads, double v_dd, double f_hz) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::Domain, "activity factor " + std::to_string(alpha) + " outside [0, 1]");
  }
  return alpha * c_sw_farads * v_dd * v_dd * f_hz;
}

PowerSummary summarize_power(double p_tdual_mw, std::span<const double> powers) {
  if (powers.empty()) throw Error(ErrorCode::InvalidArgument, "no test powers to summarize");
  if (p_tdual_mw < 0 || std::any_of(powers.begin(), powers.end(), [](double p) { return !(p >= 0); })) {
    throw Error(ErrorCode::InvalidArgument, "powers must be non-negative");
  }
  const auto [lo, hi] = std::minmax_element(powers.begin(), powers.end());
  PowerSummary s;
  s.p_tdual = p_tdual_mw;
  s.p_tsingle = p_tdual_mw / 2;
  s.p_dmin = *lo - p_tdual_mw;
  s.p_dmax = *hi - p_tdual_mw;
  s.p_drng = s.p_dmax - s.p_dmin;
  auto pct = [&](double px) {
    const double denom = s.p_tsingle + px;
    return denom == 0 ? 0.0 : px / denom;
  };
  s.pct_min = pct(s.p_dmin);
  s.pct_max = pct(s.p_dmax);
  return s;
}

std::string render_power_summary(const PowerSummary& s) {
  std::string out;
  out += "p_tdual_mw=" + format_fixed(s.p_tdual, 3) + "\n";
  out += "p_tsingle_mw=" + format_fixed(s.p_tsingle, 3) + "\n";
  out += "p_dmin_mw=" + format_fixed(s.p_dmin, 3) + "\n";
  out += "p_dmax_mw=" + format_fixed(s.p_dmax, 3) + "\n";
  out += "p_drng_mw=" + format_fixed(s.p_drng, 3) + "\n";
  out += "pct_min=" + format_fixed(s.pct_min, 4) + "\n";
  out += "pct_max=" + format_fixed(s.pct_max, 4) + "\n";
  return out;
}

}  // namespace cswp::energy
