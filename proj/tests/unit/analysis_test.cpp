#include <gtest/gtest.h>

#include <random>

#include "analysis/known_bits.hpp"
#include "analysis/worst_case.hpp"
#include "core/error.hpp"
#include "core/machine.hpp"
#include "core/text_format.hpp"
#include "reductions/reductions.hpp"
#include "support/random_program.hpp"
#include "support/reference.hpp"

using namespace cswp;
using namespace cswp::analysis;
using reductions::Literal;

namespace {

KnownBits kb(std::string_view msb_first) {
  KnownBits k(static_cast<unsigned>(msb_first.size()));
  for (std::size_t i = 0; i < msb_first.size(); ++i) {
    const char c = msb_first[msb_first.size() - 1 - i];
    k.set(static_cast<unsigned>(i), c == '0' ? BitState::Zero : c == '1' ? BitState::One : BitState::Unknown);
  }
  return k;
}

KnownBits transfer(Mnemonic op, std::vector<KnownBits> in) { return knownbits_transfer(op, in); }

}  // namespace

TEST(KnownBits, Basics) {
  const auto c = KnownBits::constant(0b1010, 4);
  EXPECT_TRUE(c.is_constant());
  EXPECT_EQ(c.to_string(), "1010");
  EXPECT_TRUE(c.contains(0b1010));
  EXPECT_FALSE(c.contains(0b1011));
  EXPECT_EQ(KnownBits::unknown(3).to_string(), "???");
  EXPECT_EQ(c.join(KnownBits::constant(0b1000, 4)).to_string(), "10?0");
  EXPECT_THROW(KnownBits::from_masks(1, 1, 4), Error);
}

TEST(KnownBits, TransferExamples) {
  EXPECT_EQ(transfer(Mnemonic::And, {KnownBits::unknown(8), KnownBits::constant(1, 8)}).to_string(), "0000000?");
  const auto k = KnownBits::constant(0x5a, 8);
  EXPECT_EQ(transfer(Mnemonic::Xor, {k, k}), KnownBits::constant(0, 8));
  EXPECT_EQ(transfer(Mnemonic::Add, {KnownBits::constant(1, 4), kb("000?")}).to_string(), "00??");
  EXPECT_EQ(transfer(Mnemonic::Sub, {KnownBits::constant(0, 4), KnownBits::constant(1, 4)}),
            KnownBits::constant(0xf, 4));
  EXPECT_EQ(transfer(Mnemonic::Not, {kb("01?1")}).to_string(), "10?0");
  EXPECT_EQ(transfer(Mnemonic::Shl, {kb("1?01"), KnownBits::constant(1, 4)}).to_string(), "?010");
  EXPECT_EQ(transfer(Mnemonic::Eqz, {kb("1???")}).to_string(), "0000");
  EXPECT_EQ(transfer(Mnemonic::Ite, {KnownBits::constant(0, 4), kb("1111"), kb("0000")}).to_string(), "0000");
  EXPECT_THROW(transfer(Mnemonic::Add, {KnownBits::unknown(4)}), Error);
}

// Exhaustive soundness of each transfer function at width 3 over all
// abstract operand pairs and all their concretizations.
TEST(KnownBits, TransferSoundnessExhaustive) {
  const unsigned w = 3;
  std::vector<KnownBits> all;
  for (uint64_t z = 0; z < 8; ++z) {
    for (uint64_t o = 0; o < 8; ++o) {
      if ((z & o) == 0) all.push_back(KnownBits::from_masks(z, o, w));
    }
  }
  auto concretize = [&](const KnownBits& k) {
    std::vector<uint64_t> out;
    for (uint64_t v = 0; v < 8; ++v) {
      if (k.contains(v)) out.push_back(v);
    }
    return out;
  };
  for (auto op : {Mnemonic::Add, Mnemonic::Sub, Mnemonic::And, Mnemonic::Or, Mnemonic::Xor, Mnemonic::Shl,
                  Mnemonic::Shr}) {
    for (const auto& a : all) {
      for (const auto& b : all) {
        const auto r = transfer(op, {a, b});
        for (auto va : concretize(a)) {
          for (auto vb : concretize(b)) {
            ASSERT_TRUE(r.contains(apply_op(op, std::array<uint64_t, 2>{va, vb}, w)))
                << mnemonic_name(op) << " " << a.to_string() << " " << b.to_string();
          }
        }
      }
    }
  }
  for (auto op : {Mnemonic::Mov, Mnemonic::Not, Mnemonic::Eqz}) {
    for (const auto& a : all) {
      const auto r = transfer(op, {a});
      for (auto va : concretize(a)) ASSERT_TRUE(r.contains(apply_op(op, std::array<uint64_t, 1>{va}, w)));
    }
  }
}

TEST(Bounds, Examples) {
  const auto coarse3 = parse_program("width 4\no1: mov #0x0\no2: mov #0x1\no3: mov #0x2\n");
  EXPECT_EQ(coarse_upper_bound(coarse3), 8u);
  EXPECT_EQ(coarse_upper_bound(parse_program("width 4\no1: mov #0x0\n")), 0u);
  EXPECT_EQ(knownbits_upper_bound(parse_program("width 8\nfree 0 full\no1: mov #0x0\no2: and free0, #0x1\n")), 1u);
  EXPECT_EQ(knownbits_upper_bound(parse_program("width 8\no1: mov #0x5\no2: mov #0x5\n")), 0u);
}

TEST(Bounds, AbstractExecutionUsesDomains) {
  const auto p = parse_program("width 4\nfree b 01\nfree f full\no1: mov freeb\no2: mov freef\n");
  const auto states = abstract_execute(p);
  EXPECT_EQ(states[0].to_string(), "000?");
  EXPECT_EQ(states[1].to_string(), "????");
}

TEST(WorstCase, Examples) {
  const auto xor3 = parse_program("width 2\nfree 0 full\no1: mov free0\no2: xor o1, #0x3\n");
  auto r = brute_force_worst_case(xor3);
  EXPECT_EQ(r.max_switching, 2u);
  EXPECT_EQ(r.witness, (Assignment{0}));
  EXPECT_EQ(r.explored, 4u);

  const auto add = parse_program("width 2\nfree 0 full\no1: mov free0\no2: add o1, o1\n");
  r = brute_force_worst_case(add);
  EXPECT_EQ(r.max_switching, 2u);
  EXPECT_EQ(r.witness, (Assignment{1}));
}

TEST(WorstCase, NoFreeInputs) {
  const auto p = parse_program("width 4\no1: mov #0x0\no2: mov #0xf\n");
  const auto r = brute_force_worst_case(p);
  EXPECT_EQ(r.max_switching, 4u);
  EXPECT_TRUE(r.witness.empty());
  EXPECT_EQ(r.explored, 1u);
}

TEST(WorstCase, BudgetExceededNamesCount) {
  const auto p = parse_program("width 16\nfree a full\nfree b full\no1: add freea, freeb\n");
  EXPECT_EQ(enumeration_size(p), std::optional<uint64_t>{uint64_t{1} << 32});
  try {
    brute_force_worst_case(p, 1000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BudgetExceeded);
    EXPECT_NE(std::string(e.what()).find("4294967296"), std::string::npos) << e.what();
  }
  const auto huge = parse_program("width 64\nfree a full\nfree b full\no1: add freea, freeb\n");
  EXPECT_FALSE(enumeration_size(huge).has_value());
  EXPECT_THROW(brute_force_worst_case(huge), Error);
}

TEST(WorstCase, MatchesReferenceAndIsWorkerIndependent) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 150; ++i) {
    const auto p = testkit::random_program(rng, {.max_len = 8, .max_width = 5, .max_full = 2, .max_binary = 2});
    const auto seq = brute_force_worst_case(p, kDefaultBudget, 1);
    ASSERT_EQ(seq.max_switching, testkit::reference_worst_case(p));
    ASSERT_EQ(testkit::reference_switching(p, seq.witness), seq.max_switching);
    for (unsigned workers : {2u, 3u, 8u}) {
      const auto par = brute_force_worst_case(p, kDefaultBudget, workers);
      ASSERT_EQ(par.max_switching, seq.max_switching);
      ASSERT_EQ(par.witness, seq.witness);
      ASSERT_EQ(par.explored, seq.explored);
    }
  }
}

TEST(Oracles, MaxSat) {
  using reductions::MaxSat2Instance;
  auto r = maxsat_oracle(MaxSat2Instance{1, {{Literal{1, false}}, {Literal{1, true}}}});
  EXPECT_EQ(r.best_count, 1u);
  EXPECT_EQ(r.assignment, std::vector<bool>{false});
  r = maxsat_oracle(MaxSat2Instance{2, {{Literal{1, false}, Literal{2, false}}}});
  EXPECT_EQ(r.best_count, 1u);
  EXPECT_EQ(r.assignment, (std::vector<bool>{false, true}));
  r = maxsat_oracle(MaxSat2Instance{3, {}});
  EXPECT_EQ(r.best_count, 0u);
  EXPECT_EQ(r.assignment, (std::vector<bool>{false, false, false}));
}

TEST(Oracles, Sat) {
  using reductions::SatInstance;
  EXPECT_EQ(sat_oracle(SatInstance{1, {{Literal{1, false}}}}), std::optional<std::vector<bool>>{{true}});
  EXPECT_FALSE(sat_oracle(SatInstance{1, {{Literal{1, false}}, {Literal{1, true}}}}).has_value());
  // Two pigeons, one hole, plus a third variable forced both ways.
  const SatInstance php{3,
                        {{Literal{1, false}}, {Literal{2, false}}, {Literal{1, true}, Literal{2, true}},
                         {Literal{3, false}, Literal{1, true}}}};
  EXPECT_FALSE(sat_oracle(php).has_value());
}

TEST(Oracles, AgreeWithReference) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 100; ++i) {
    const uint32_t n = 1 + i % 6;
    const auto clauses = testkit::random_clauses(rng, n, i % 9, 2);
    const auto r = maxsat_oracle({n, clauses});
    ASSERT_EQ(r.best_count, testkit::ref_max_sat(n, clauses));
    std::size_t sat = 0;
    for (const auto& c : clauses) sat += testkit::ref_clause(c, r.assignment);
    ASSERT_EQ(sat, r.best_count);
  }
}

TEST(Report, Format) {
  const auto p = parse_program("width 2\nfree 0 full\no1: mov free0\no2: add o1, o1\n");
  const auto r = brute_force_worst_case(p);
  EXPECT_EQ(render_worst_case_report(p, r, coarse_upper_bound(p), knownbits_upper_bound(p)),
            "max=2\nwitness.free0=0x1\ncoarse=2\nknownbits=2\nexplored=4\n");
}
