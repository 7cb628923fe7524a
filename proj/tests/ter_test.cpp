#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "wordqe/ter.hpp"

using namespace wordqe;

namespace {

constexpr Label O = Label::OK;
constexpr Label B = Label::BAD;

std::vector<EditKind> kinds(const EditScript& s) {
  std::vector<EditKind> out;
  for (const auto& e : s.edits) out.push_back(e.kind);
  return out;
}

TokenSequence random_seq(std::mt19937_64& rng, std::size_t max_len, int alphabet) {
  std::uniform_int_distribution<std::size_t> len(1, max_len);
  std::uniform_int_distribution<int> sym(0, alphabet - 1);
  TokenSequence s(len(rng));
  for (auto& t : s) t = std::string(1, static_cast<char>('a' + sym(rng)));
  return s;
}

}  // namespace

TEST(LevenshteinAlign, IdenticalSequencesAreAllMatches) {
  auto s = levenshtein_align({"a", "b", "c"}, {"a", "b", "c"});
  EXPECT_EQ(s.total_cost, 0u);
  EXPECT_EQ(kinds(s), (std::vector<EditKind>(3, EditKind::Match)));
}

TEST(LevenshteinAlign, Substitution) {
  auto s = levenshtein_align({"a", "x", "c"}, {"a", "b", "c"});
  EXPECT_EQ(s.total_cost, 1u);
  ASSERT_EQ(kinds(s), (std::vector<EditKind>{EditKind::Match, EditKind::Substitution, EditKind::Match}));
  EXPECT_EQ(s.edits[1].mt_index, 1u);
  EXPECT_EQ(s.edits[1].pe_index, 1u);
  EXPECT_EQ(s.edits[1].token, "b");
}

TEST(LevenshteinAlign, MissingTokenIsDeletionWithPeIndexOnly) {
  auto s = levenshtein_align({"a", "c"}, {"a", "b", "c"});
  EXPECT_EQ(s.total_cost, 1u);
  ASSERT_EQ(kinds(s), (std::vector<EditKind>{EditKind::Match, EditKind::Deletion, EditKind::Match}));
  EXPECT_FALSE(s.edits[1].mt_index.has_value());
  EXPECT_EQ(s.edits[1].pe_index, 1u);
}

TEST(LevenshteinAlign, ExtraTokenIsInsertionWithMtIndexOnly) {
  auto s = levenshtein_align({"a", "z", "c"}, {"a", "c"});
  ASSERT_EQ(kinds(s), (std::vector<EditKind>{EditKind::Match, EditKind::Insertion, EditKind::Match}));
  EXPECT_EQ(s.edits[1].mt_index, 1u);
  EXPECT_FALSE(s.edits[1].pe_index.has_value());
}

TEST(LevenshteinAlign, EmptyInputIsAnError) {
  try {
    levenshtein_align({}, {"a"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptySegment);
  }
  EXPECT_THROW(levenshtein_align({"a"}, {}), Error);
}

TEST(LevenshteinAlign, CostMatchesRecursiveOracleExhaustively) {
  // Lengths 1..4 over {a,b,c}; the acceptance suite covers lengths up to 6.
  auto seqs = oracle::enumerate({"a", "b", "c"}, 1, 4);
  for (const auto& mt : seqs) {
    for (const auto& pe : seqs) {
      auto s = levenshtein_align(mt, pe);
      ASSERT_EQ(s.total_cost, oracle::edit_distance(mt, pe));
      ASSERT_EQ(replay(mt, s), pe);
    }
  }
}

TEST(TerAlign, IdentityHasZeroTer) {
  auto r = ter_align({"a", "b", "c"}, {"a", "b", "c"});
  EXPECT_EQ(r.ter, 0.0);
  EXPECT_EQ(r.script.shift_count(), 0u);
}

TEST(TerAlign, SingleShiftToEnd) {
  auto r = ter_align({"c", "a", "b"}, {"a", "b", "c"});
  EXPECT_EQ(r.script.total_cost, 1u);
  EXPECT_DOUBLE_EQ(r.ter, 1.0 / 3.0);
  ASSERT_EQ(r.script.shift_count(), 1u);
  EXPECT_EQ(*r.script.edits[0].shift_span, (ShiftSpan{0, 1, 2}));
  EXPECT_EQ(replay({"c", "a", "b"}, r.script), (TokenSequence{"a", "b", "c"}));
}

TEST(TerAlign, SubstitutionPlusDeletion) {
  auto r = ter_align({"a", "x"}, {"a", "b", "c"});
  EXPECT_EQ(r.script.total_cost, 2u);
  EXPECT_DOUBLE_EQ(r.ter, 2.0 / 3.0);
}

TEST(TerAlign, ShiftsDisabledFallsBackToEditDistance) {
  auto r = ter_align({"c", "a", "b"}, {"a", "b", "c"}, ShiftParams{false, 10, 50});
  EXPECT_EQ(r.script.total_cost, 2u);
  EXPECT_EQ(r.script.shift_count(), 0u);
}

TEST(TerAlign, ShiftLimitsAreHonoured) {
  // Moving a 3-token block costs 1 but exceeds max_span=2.
  TokenSequence mt{"x", "y", "z", "a", "b", "c"}, pe{"a", "b", "c", "x", "y", "z"};
  EXPECT_EQ(ter_align(mt, pe).script.total_cost, 1u);
  auto limited = ter_align(mt, pe, ShiftParams{true, 2, 50});
  EXPECT_GT(limited.script.total_cost, 1u);
  for (const auto& e : limited.script.edits) {
    if (e.kind == EditKind::Shift) {
      EXPECT_LE(e.shift_span->length, 2u);
    }
  }
  auto near = ter_align(mt, pe, ShiftParams{true, 10, 1});
  for (const auto& e : near.script.edits) {
    if (e.kind == EditKind::Shift) {
      const auto& s = *e.shift_span;
      EXPECT_LE(s.start > s.destination ? s.start - s.destination : s.destination - s.start, 1u);
    }
  }
}

TEST(TerAlign, NoWorseThanBestSingleShiftOracle) {
  auto seqs = oracle::enumerate({"a", "b", "c"}, 1, 4);
  for (const auto& mt : seqs) {
    for (const auto& pe : seqs) {
      auto r = ter_align(mt, pe);
      ASSERT_LE(r.script.total_cost, oracle::best_single_shift_cost(mt, pe));
      ASSERT_LE(r.script.total_cost, oracle::edit_distance(mt, pe));
      ASSERT_EQ(replay(mt, r.script), pe);
    }
  }
}

TEST(TerAlign, RandomPairsReplayAndNeverExceedEditDistance) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    auto mt = random_seq(rng, 12, 5), pe = random_seq(rng, 12, 5);
    auto r = ter_align(mt, pe);
    ASSERT_LE(r.script.total_cost, levenshtein_align(mt, pe).total_cost);
    ASSERT_EQ(replay(mt, r.script), pe);
  }
}

TEST(EditsToTags, IdentityIsAllOk) {
  auto s = levenshtein_align({"a", "b", "c"}, {"a", "b", "c"});
  EXPECT_EQ(edits_to_tags(s, 3), TagSequence(7, O));
}

TEST(EditsToTags, SubstitutedWordIsBad) {
  auto s = levenshtein_align({"a", "x", "c"}, {"a", "b", "c"});
  EXPECT_EQ(edits_to_tags(s, 3), (TagSequence{O, O, O, B, O, O, O}));
}

TEST(EditsToTags, MissingWordMarksGap) {
  auto s = levenshtein_align({"a", "c"}, {"a", "b", "c"});
  EXPECT_EQ(edits_to_tags(s, 2), (TagSequence{O, O, B, O, O}));
}

TEST(EditsToTags, ConsecutiveMissingWordsCollapseToOneGap) {
  auto s = levenshtein_align({"a", "e"}, {"a", "b", "c", "d", "e"});
  EXPECT_EQ(s.count(EditKind::Deletion), 3u);
  EXPECT_EQ(edits_to_tags(s, 2), (TagSequence{O, O, B, O, O}));
}

TEST(EditsToTags, LeadingAndTrailingGaps) {
  auto s = levenshtein_align({"b"}, {"a", "b", "c"});
  EXPECT_EQ(edits_to_tags(s, 1), (TagSequence{B, O, B}));
}

TEST(EditsToTags, ShiftedWordsAreBad) {
  auto r = ter_align({"c", "a", "b"}, {"a", "b", "c"});
  EXPECT_EQ(edits_to_tags(r.script, 3), (TagSequence{O, B, O, O, O, O, O}));
}

TEST(EditsToTags, LengthMismatchIsScriptMismatch) {
  auto s = levenshtein_align({"a", "b"}, {"a", "b"});
  try {
    edits_to_tags(s, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ScriptMismatch);
  }
  EXPECT_THROW(edits_to_tags(s, 1), Error);
}

TEST(GenerateReferenceTags, Examples) {
  EXPECT_EQ(generate_reference_tags({{}, {"a", "b"}, {"a", "b"}}), TagSequence(5, O));
  auto sub = generate_reference_tags({{"s"}, {"the", "cat", "sat"}, {"the", "dog", "sat"}});
  EXPECT_EQ(sub, (TagSequence{O, O, O, B, O, O, O}));
  auto miss = generate_reference_tags({{}, {"the", "sat"}, {"the", "cat", "sat"}});
  EXPECT_EQ(miss, (TagSequence{O, O, B, O, O}));
  EXPECT_THROW(generate_reference_tags({{"s"}, {}, {"a"}}), Error);
}

TEST(GenerateReferenceTags, ArityAndAllOkIffZeroTer) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    auto mt = random_seq(rng, 8, 3), pe = random_seq(rng, 8, 3);
    auto tags = generate_reference_tags({{}, mt, pe});
    ASSERT_EQ(tags.size(), 2 * mt.size() + 1);
    const bool all_ok = std::all_of(tags.begin(), tags.end(), [](Label l) { return l == Label::OK; });
    ASSERT_EQ(all_ok, ter_align(mt, pe).ter == 0.0);
  }
}

TEST(Replay, RejectsForeignScript) {
  auto s = levenshtein_align({"a", "b"}, {"c"});
  EXPECT_THROW(replay({"a"}, s), Error);
}
