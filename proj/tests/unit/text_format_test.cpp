#include <gtest/gtest.h>

#include <random>

#include "core/error.hpp"
#include "core/text_format.hpp"
#include "reductions/reductions.hpp"
#include "support/random_program.hpp"
#include "support/reference.hpp"

using namespace cswp;

namespace {

std::string parse_error(std::string_view text) {
  try {
    parse_program(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Parse);
    return e.what();
  }
  ADD_FAILURE() << "no parse error";
  return {};
}

}  // namespace

TEST(TextFormat, MinimalProgram) {
  const auto p = parse_program("width 4\no1: mov #0x0\n");
  EXPECT_EQ(p.width, 4u);
  ASSERT_EQ(p.instructions.size(), 1u);
  EXPECT_EQ(p.instructions[0].op, Mnemonic::Mov);
  EXPECT_EQ(p.instructions[0].inputs[0], Source{ConstSource{0}});
}

TEST(TextFormat, WrongArityReportsLine) {
  const auto msg = parse_error("width 4\no1: add free0\n");
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
}

TEST(TextFormat, AllSourceKindsAndDestination) {
  const auto p = parse_program(
      "# header comment\n"
      "width 8\n"
      "mem 4\n"
      "free a full\n"
      "free b 01\n"
      "o1: add freea, #0x10   # trailing\n"
      "o2: store o1 -> m[3]\n"
      "o3: ite freeb, m[3], #0xff\n");
  EXPECT_EQ(p.mem_size, 4u);
  ASSERT_EQ(p.free_inputs.size(), 2u);
  EXPECT_EQ(p.free_inputs[1].domain, Domain::Binary01);
  EXPECT_EQ(p.instructions[1].mem_dest, std::optional<uint64_t>{3});
  EXPECT_EQ(p.instructions[2].inputs[1], Source{MemSource{3}});
  EXPECT_EQ(p.instructions[2].inputs[0], Source{FreeSource{"b"}});
}

TEST(TextFormat, Errors) {
  EXPECT_NE(parse_error("o1: mov #0x0\n").find("width"), std::string::npos);
  parse_error("width 4\no2: mov #0x0\n");
  parse_error("width 4\no1: frob #0x0\n");
  parse_error("width 4\no1: mov #zz\n");
  parse_error("width 4\no1: mov #0x0\nwidth 8\n");
  parse_error("width 4\nfree a sometimes\n");
  parse_error("width 4\no1: mov m[\n");
}

TEST(TextFormat, CanonicalSerialization) {
  const auto text = "width 8\nmem 2\nfree x full\no1: mov freex\no2: xor o1, #0x1 -> m[1]\n";
  EXPECT_EQ(serialize_program(parse_program(text)), text);
}

TEST(Properties, RoundTripOnRandomPrograms) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    const auto p = testkit::random_program(rng, {.max_len = 12, .max_width = 64});
    const auto text = serialize_program(p);
    ASSERT_EQ(parse_program(text), p) << text;
    ASSERT_EQ(serialize_program(parse_program(text)), text);
  }
}

TEST(Properties, RoundTripOnReductionPrograms) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 50; ++i) {
    const uint32_t n = 1 + i % 4;
    const auto clauses = testkit::random_clauses(rng, n, i % 6, 2);
    const auto r = reductions::reduce_maxsat2({n, clauses}, 8);
    ASSERT_EQ(parse_program(serialize_program(r.program)), r.program);
    const auto g = reductions::reduce_sat_gap({n, testkit::random_clauses(rng, n, 1 + i % 5, 3)}, 4, {3, 2});
    ASSERT_EQ(parse_program(serialize_program(g.program)), g.program);
    const auto with_meta = reductions::serialize_with_meta(g.program, reductions::meta_of(g));
    ASSERT_EQ(parse_program(with_meta), g.program);
    ASSERT_EQ(reductions::parse_meta(with_meta), reductions::meta_of(g));
  }
}
