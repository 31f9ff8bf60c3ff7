#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "core/error.hpp"
#include "core/text_format.hpp"
#include "energy/energy.hpp"
#include "support/reference.hpp"

using namespace cswp;
using namespace cswp::energy;

namespace {

const EnergyModel kPaper = preset_model("xs1l-paper");

std::vector<Measurement> add_grid(double sigma, uint64_t seed = 0) {
  EnergyModel m = kPaper;
  return gen_synthetic_grid(Mnemonic::Add, 8, m, 50.0, sigma, seed);
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Model, Preset) {
  EXPECT_DOUBLE_EQ(kPaper.p_idle_single_mw, 164.0);
  EXPECT_DOUBLE_EQ(kPaper.c_in_mw, 1.3);
  EXPECT_DOUBLE_EQ(kPaper.c_out_mw, 4.4);
  EXPECT_DOUBLE_EQ(kPaper.f_hz, 500e6);
  EXPECT_THROW(preset_model("nope"), Error);
}

TEST(Model, ParseAndValidate) {
  const auto m = parse_model("# comment\np_idle_mw=10\nc_in_mw = 1\nc_out_mw=2\nf_hz=1e9\n");
  EXPECT_DOUBLE_EQ(m.p_idle_single_mw, 10);
  EXPECT_DOUBLE_EQ(m.c_out_mw, 2);
  EXPECT_DOUBLE_EQ(m.f_hz, 1e9);
  EXPECT_THROW(parse_model("c_in_mw=-1\n"), Error);
  EXPECT_THROW(parse_model("f_hz=0\n"), Error);
  EXPECT_THROW(parse_model("bogus=1\n"), Error);
}

TEST(Model, PredictPower) {
  EXPECT_NEAR(predict_power(kPaper, 0, 0, 1), 4.4, 1e-12);
  EXPECT_NEAR(predict_power(kPaper, 0, 1, 0), 1.3, 1e-12);
  EXPECT_NEAR(predict_power(kPaper, 164, 2, 8), 201.8, 1e-12);
}

TEST(Model, TraceEnergy) {
  const auto p = parse_program("width 8\no1: mov #0x0\no2: mov #0xff\n");
  EXPECT_NEAR(trace_energy_nj(p, {}, kPaper), (164 + 35.2) * 2e-9 * 1e-3 * 1e9, 1e-12);
  EXPECT_NEAR(trace_energy_nj(p, {}, kPaper), 0.3984, 1e-12);
  const auto nop = parse_program("width 8\no1: mov #0x3\no2: mov o1\no3: mov o2\no4: mov o3\n");
  EXPECT_NEAR(trace_energy_nj(nop, {}, kPaper), 3 * 164 * 2e-3, 1e-12);
}

TEST(Model, TraceEnergyInputTerm) {
  const auto p = parse_program("width 8\no1: mov #0x0\no2: add #0x3, #0x1\n");
  const double base = trace_energy_nj(p, {}, kPaper);
  const double with = trace_energy_nj(p, {}, kPaper, true);
  EXPECT_GT(with, base);
}

TEST(Model, DynamicPower) {
  EXPECT_EQ(dynamic_power(0, 1e-9, 1.0, 5e8), 0.0);
  EXPECT_NEAR(dynamic_power(0.5, 1e-9, 1.0, 5e8), 0.25, 1e-15);
  EXPECT_EQ(code_of([] { dynamic_power(1.5, 1e-9, 1.0, 5e8); }), ErrorCode::Domain);
  EXPECT_EQ(code_of([] { dynamic_power(-0.1, 1e-9, 1.0, 5e8); }), ErrorCode::Domain);
}

TEST(Summary, PaperFigures) {
  const auto s = summarize_power(328, std::vector<double>{328 + 34, 328 + 60, 328 + 96});
  EXPECT_DOUBLE_EQ(s.p_tsingle, 164);
  EXPECT_NEAR(s.p_dmin, 34, 1e-12);
  EXPECT_NEAR(s.p_dmax, 96, 1e-12);
  EXPECT_NEAR(s.p_drng, 62, 1e-12);
  EXPECT_NEAR(s.pct_min, 34.0 / 198, 1e-12);
  EXPECT_NEAR(s.pct_max, 96.0 / 260, 1e-12);
  const auto sub = summarize_power(328, std::vector<double>{328 + 123});
  EXPECT_NEAR(sub.pct_max, 123.0 / 287, 1e-12);
  const auto flat = summarize_power(328, std::vector<double>{328, 328});
  EXPECT_EQ(flat.p_dmin, 0);
  EXPECT_EQ(flat.p_dmax, 0);
  EXPECT_EQ(flat.pct_max, 0);
  EXPECT_THROW(summarize_power(328, std::vector<double>{}), Error);
  EXPECT_NE(render_power_summary(s).find("pct_min=0.1717"), std::string::npos);
}

TEST(Grid, Examples) {
  const auto g = add_grid(0);
  ASSERT_EQ(g.size(), 65536u);
  EXPECT_EQ(g[0].h_in, 0u);
  EXPECT_EQ(g[0].h_out, 0u);
  EXPECT_DOUBLE_EQ(g[0].power_mw, 50.0);
  const auto& m = g[0x80 * 256 + 0x80];
  EXPECT_EQ(m.h_in, 2u);
  EXPECT_EQ(m.h_out, 0u);

  const auto sub = gen_synthetic_grid(Mnemonic::Sub, 8, kPaper, 50, 0, 0);
  EXPECT_EQ(sub[1].h_out, 8u);
  unsigned max_out = 0;
  for (const auto& s : sub) max_out = std::max(max_out, s.h_out);
  EXPECT_EQ(max_out, 8u);
  EXPECT_THROW(gen_synthetic_grid(Mnemonic::Not, 8, kPaper, 50, 0, 0), Error);
  EXPECT_THROW(gen_synthetic_grid(Mnemonic::Add, 9, kPaper, 50, 0, 0), Error);
}

TEST(Grid, SeedDeterminesNoise) {
  EXPECT_EQ(add_grid(1.5, 3), add_grid(1.5, 3));
  EXPECT_NE(add_grid(1.5, 3), add_grid(1.5, 4));
}

TEST(Grid, CsvRoundTrip) {
  const auto g = gen_synthetic_grid(Mnemonic::Xor, 4, kPaper, 50, 1.5, 2);
  const auto csv = format_grid_csv(g);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "op_a,op_b,h_in,h_out,power_mw");
  EXPECT_EQ(parse_grid_csv(csv), g);
  EXPECT_THROW(parse_grid_csv("a,b\n"), Error);
  EXPECT_THROW(parse_grid_csv("op_a,op_b,h_in,h_out,power_mw\n0x1,0x2,3\n"), Error);
}

TEST(Fit, NoiselessRecoveryMatchesReference) {
  const auto g = add_grid(0);
  const auto fit = fit_hamming_model(g);
  EXPECT_NEAR(fit.base_mw, 50, 1e-9);
  EXPECT_NEAR(fit.c_in_mw, 1.3, 1e-9);
  EXPECT_NEAR(fit.c_out_mw, 4.4, 1e-9);
  EXPECT_NEAR(fit.mean_abs_error_mw, 0, 1e-9);
  EXPECT_NE(render_fit_report(fit).find("c_in_mw=1.300"), std::string::npos);
}

TEST(Fit, NoisyFitAgreesWithNormalEquations) {
  for (uint64_t seed : {0u, 1u, 2u}) {
    const auto g = add_grid(1.5, seed);
    const auto fit = fit_hamming_model(g);
    std::vector<double> x1, x2, y;
    for (const auto& m : g) {
      x1.push_back(m.h_in);
      x2.push_back(m.h_out);
      y.push_back(m.power_mw);
    }
    const auto ref = testkit::reference_ols(x1, x2, y);
    ASSERT_TRUE(ref.has_value());
    EXPECT_NEAR(fit.base_mw, ref->b0, 1e-6);
    EXPECT_NEAR(fit.c_in_mw, ref->b1, 1e-6);
    EXPECT_NEAR(fit.c_out_mw, ref->b2, 1e-6);
    // Mean absolute deviation of a normal variable.
    EXPECT_NEAR(fit.mean_abs_error_mw, 1.5 * std::sqrt(2 / M_PI), 0.05);
    ASSERT_EQ(fit.residuals.size(), g.size());
    for (std::size_t i = 0; i < g.size(); i += 997) {
      EXPECT_NEAR(fit.residuals[i], g[i].power_mw - fit.base_mw - fit.c_in_mw * g[i].h_in - fit.c_out_mw * g[i].h_out,
                  1e-9);
    }
  }
}

TEST(Fit, RankDeficiency) {
  const std::vector<Measurement> same_in{{0, 0, 2, 0, 1.0}, {0, 0, 2, 1, 2.0}, {0, 0, 2, 2, 3.0}};
  try {
    fit_hamming_model(same_in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RankDeficient);
    EXPECT_NE(std::string(e.what()).find("h_in"), std::string::npos);
  }
  const std::vector<Measurement> collinear{{0, 0, 1, 2, 1.0}, {0, 0, 2, 4, 2.0}, {0, 0, 3, 6, 3.5}};
  EXPECT_EQ(code_of([&] { fit_hamming_model(collinear); }), ErrorCode::RankDeficient);
  EXPECT_EQ(code_of([&] { fit_hamming_model(std::span<const Measurement>(same_in).first(2)); }),
            ErrorCode::InvalidArgument);
}

TEST(Heatmap, DecompositionShrinksRange) {
  const auto g = add_grid(1.5);
  const auto fit = fit_hamming_model(g);
  auto range = [&](HeatmapStage stage) {
    const auto csv = render_heatmap_csv(g, fit, stage);
    double lo = 1e300, hi = -1e300;
    std::size_t rows = 0;
    std::size_t pos = csv.find('\n') + 1;
    while (pos < csv.size()) {
      const auto end = csv.find('\n', pos);
      std::string line = csv.substr(pos, end - pos);
      ++rows;
      std::size_t c = line.find(',');
      while (c != std::string::npos) {
        const auto next = line.find(',', c + 1);
        const double v = std::stod(line.substr(c + 1, next - c - 1));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        c = next;
      }
      pos = end + 1;
    }
    EXPECT_EQ(rows, 256u);
    return hi - lo;
  };
  const double raw = range(HeatmapStage::Raw);
  const double minus_out = range(HeatmapStage::MinusOut);
  const double residual = range(HeatmapStage::Residual);
  EXPECT_LT(minus_out, raw);
  EXPECT_LT(residual, minus_out);
  EXPECT_LT(range(HeatmapStage::MinusIn), raw);
  EXPECT_EQ(heatmap_stage_from_name("minus-in"), HeatmapStage::MinusIn);
  EXPECT_THROW(heatmap_stage_from_name("bad"), Error);
  EXPECT_EQ(render_heatmap_csv(g, fit, HeatmapStage::Raw).substr(0, 14), "op_a\\op_b,0x0,");
}
