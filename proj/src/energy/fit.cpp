#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "core/bitvector.hpp"
#include "core/error.hpp"
#include "energy/energy.hpp"

namespace cswp::energy {

namespace {

bool is_constant(const Eigen::VectorXd& v) { return (v.array() == v(0)).all(); }

}  // namespace

FitResult fit_hamming_model(std::span<const Measurement> ms) {
  if (ms.size() < 3) {
    throw Error(ErrorCode::InvalidArgument, "fit needs at least 3 measurements, got " + std::to_string(ms.size()));
  }
  const auto n = static_cast<Eigen::Index>(ms.size());
  Eigen::MatrixXd x(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i, 0) = 1.0;
    x(i, 1) = ms[i].h_in;
    x(i, 2) = ms[i].h_out;
    y(i) = ms[i].power_mw;
  }

  if (is_constant(x.col(1))) {
    throw Error(ErrorCode::RankDeficient, "design matrix is rank deficient: h_in is constant (collinear with intercept)");
  }
  if (is_constant(x.col(2))) {
    throw Error(ErrorCode::RankDeficient, "design matrix is rank deficient: h_out is constant (collinear with intercept)");
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  if (qr.rank() < 3) {
    throw Error(ErrorCode::RankDeficient, "design matrix is rank deficient: h_out is collinear with h_in");
  }
  const Eigen::Vector3d beta = qr.solve(y);

  FitResult fit;
  fit.base_mw = beta(0);
  fit.c_in_mw = beta(1);
  fit.c_out_mw = beta(2);
  fit.residuals.resize(ms.size());
  double abs_sum = 0;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    fit.residuals[i] = ms[i].power_mw - fit.base_mw - fit.c_in_mw * ms[i].h_in - fit.c_out_mw * ms[i].h_out;
    abs_sum += std::abs(fit.residuals[i]);
  }
  fit.mean_abs_error_mw = abs_sum / static_cast<double>(ms.size());
  return fit;
}

std::string render_fit_report(const FitResult& fit) {
  return "base_mw=" + format_fixed(fit.base_mw, 3) + "\nc_in_mw=" + format_fixed(fit.c_in_mw, 3) +
         "\nc_out_mw=" + format_fixed(fit.c_out_mw, 3) + "\nmae_mw=" + format_fixed(fit.mean_abs_error_mw, 3) + "\n";
}

HeatmapStage heatmap_stage_from_name(std::string_view name) {
  if (name == "raw") return HeatmapStage::Raw;
  if (name == "minus-out") return HeatmapStage::MinusOut;
  if (name == "minus-in") return HeatmapStage::MinusIn;
  if (name == "residual") return HeatmapStage::Residual;
  throw Error(ErrorCode::InvalidArgument, "unknown heatmap stage '" + std::string(name) + "'");
}

std::string render_heatmap_csv(std::span<const Measurement> grid, const FitResult& fit, HeatmapStage stage) {
  if (fit.residuals.size() != grid.size()) {
    throw Error(ErrorCode::InvalidArgument, "fit does not match the grid");
  }
  const auto side = static_cast<uint64_t>(std::llround(std::sqrt(static_cast<double>(grid.size()))));
  if (side == 0 || side * side != grid.size()) {
    throw Error(ErrorCode::InvalidArgument, "heat map needs a complete square grid");
  }
  std::vector<double> cells(grid.size());
  std::vector<bool> seen(grid.size(), false);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& m = grid[i];
    if (m.op_a >= side || m.op_b >= side || seen[m.op_a * side + m.op_b]) {
      throw Error(ErrorCode::InvalidArgument, "heat map needs each operand pair exactly once");
    }
    double v = m.power_mw;
    switch (stage) {
      case HeatmapStage::Raw: break;
      case HeatmapStage::MinusOut: v -= fit.c_out_mw * m.h_out; break;
      case HeatmapStage::MinusIn: v -= fit.c_in_mw * m.h_in; break;
      case HeatmapStage::Residual: v = fit.residuals[i]; break;
    }
    cells[m.op_a * side + m.op_b] = v;
    seen[m.op_a * side + m.op_b] = true;
  }

  std::string out = "op_a\\op_b";
  for (uint64_t b = 0; b < side; ++b) out += "," + to_hex(b);
  out += "\n";
  for (uint64_t a = 0; a < side; ++a) {
    out += to_hex(a);
    for (uint64_t b = 0; b < side; ++b) out += "," + format_fixed(cells[a * side + b], 3);
    out += "\n";
  }
  return out;
}

}  // namespace cswp::energy
