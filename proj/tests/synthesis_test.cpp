#include <gtest/gtest.h>

#include <algorithm>

#include "wordqe/synthesis.hpp"

using namespace wordqe;

namespace {

using Inputs = std::map<std::string, CorpusFile, std::less<>>;

CorpusFile file(const std::string& name, std::vector<std::string> lines) { return {name, std::move(lines)}; }

}  // namespace

TEST(Assemble, SrcMtTgtKeepsLinesVerbatim) {
  Inputs in{{"src", file("s", {"s1", "s2", "s3"})},
            {"mt", file("m", {"m 1", "m  2", "m3"})},
            {"tgt", file("t", {"t1", "t2", "t3"})}};
  auto t = assemble(RecipeKind::SrcMtTgt, in);
  EXPECT_EQ(t.src, in["src"].lines);
  EXPECT_EQ(t.mt, in["mt"].lines);
  EXPECT_EQ(t.pe, in["tgt"].lines);
}

TEST(Assemble, WorseSystemIsMtBetterIsPe) {
  Inputs in{{"src", file("s", {"x"})}, {"mt1", file("worse", {"w"})}, {"mt2", file("better", {"b"})}};
  auto t = assemble(RecipeKind::SrcMt1Mt2, in);
  EXPECT_EQ(t.mt, std::vector<std::string>{"w"});
  EXPECT_EQ(t.pe, std::vector<std::string>{"b"});
}

TEST(Assemble, RoleMappingPerRecipe) {
  EXPECT_EQ(roles(RecipeKind::BtRtTgt).src, "bt");
  EXPECT_EQ(roles(RecipeKind::BtRtTgt).mt, "rt");
  EXPECT_EQ(roles(RecipeKind::SrcRtFt).pe, "ft");
  EXPECT_EQ(roles(RecipeKind::Mvppe).pe, "pe");
  EXPECT_EQ(roles(RecipeKind::BtNoisyTgt).mt, "noisy");
  EXPECT_EQ(parse_recipe("bt-noisy-tgt"), RecipeKind::BtNoisyTgt);
  EXPECT_FALSE(parse_recipe("tgt-mt").has_value());
}

TEST(Assemble, LineCountMismatchNamesFiles) {
  std::vector<std::string> hundred(100, "x"), ninety_nine(99, "x");
  Inputs in{{"src", file("a.src", hundred)}, {"mt", file("a.mt", ninety_nine)}, {"tgt", file("a.tgt", hundred)}};
  try {
    assemble(RecipeKind::SrcMtTgt, in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LineCountMismatch);
    const std::string msg = e.what();
    EXPECT_NE(msg.find("a.src"), std::string::npos);
    EXPECT_NE(msg.find("a.mt"), std::string::npos);
    EXPECT_NE(msg.find("100"), std::string::npos);
    EXPECT_NE(msg.find("99"), std::string::npos);
  }
}

TEST(Assemble, EmptyLineReportsLineNumber) {
  Inputs in{{"src", file("s", {"a", "b"})}, {"mt", file("m", {"a", " "})}, {"tgt", file("t", {"a", "b"})}};
  try {
    assemble(RecipeKind::SrcMtTgt, in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyLine);
    EXPECT_NE(std::string(e.what()).find("m:2"), std::string::npos);
  }
}

TEST(Assemble, MissingRole) {
  Inputs in{{"src", file("s", {"a"})}, {"mt", file("m", {"a"})}};
  EXPECT_THROW(assemble(RecipeKind::SrcMtTgt, in), Error);
}

TEST(MaskWords, RoundsToZero) {
  EXPECT_EQ(mask_words({"a"}, 0.1, std::uint64_t{3}), (TokenSequence{"a"}));
}

TEST(MaskWords, ExactCountAndLength) {
  TokenSequence t{"a", "b", "c", "d", "e", "f", "g", "h", "i", "j"};
  auto m = mask_words(t, 0.3, std::uint64_t{7});
  ASSERT_EQ(m.size(), t.size());
  EXPECT_EQ(std::count(m.begin(), m.end(), "<mask>"), 3);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (m[i] != "<mask>") {
      EXPECT_EQ(m[i], t[i]);
    }
  }
}

TEST(MaskWords, SeedDeterminism) {
  TokenSequence t(25, "w");
  for (std::size_t i = 0; i < t.size(); ++i) t[i] += std::to_string(i);
  EXPECT_EQ(mask_words(t, 0.4, std::uint64_t{11}), mask_words(t, 0.4, std::uint64_t{11}));
  EXPECT_NE(mask_words(t, 0.4, std::uint64_t{11}), mask_words(t, 0.4, std::uint64_t{12}));
  EXPECT_EQ(mask_words(t, 0.4, std::uint64_t{11}, "[M]").size(), t.size());
}

TEST(MaskWords, CountPropertyOverRatios) {
  std::mt19937_64 rng(1);
  for (std::size_t n = 1; n <= 40; ++n) {
    TokenSequence t(n, "x");
    for (double ratio : {0.05, 0.15, 0.5, 0.95}) {
      auto m = mask_words(t, ratio, rng);
      EXPECT_EQ(static_cast<std::size_t>(std::count(m.begin(), m.end(), "<mask>")),
                static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n))));
    }
  }
}

TEST(MaskWords, Errors) {
  EXPECT_THROW(mask_words({}, 0.5, std::uint64_t{1}), Error);
  EXPECT_THROW(mask_words({"a"}, 0.0, std::uint64_t{1}), Error);
  EXPECT_THROW(mask_words({"a"}, 1.0, std::uint64_t{1}), Error);
}
