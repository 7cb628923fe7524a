#ifndef WORDQE_SUBWORD_HPP
#define WORDQE_SUBWORD_HPP

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "wordqe/core.hpp"
#include "wordqe/ter.hpp"

namespace wordqe {

enum class MarkerPosition {
  SuffixOfNonFinal,   // BPE style: "he@@ llo"
  PrefixOfContinuation,  // WordPiece style: "he ##llo"
};

struct SubwordConvention {
  std::string marker = "@@";
  MarkerPosition position = MarkerPosition::SuffixOfNonFinal;
};

/// Removes the continuation marker at its conventional position. A piece
/// equal to the bare marker is kept literally.
inline std::string_view strip_marker(std::string_view piece, const SubwordConvention& conv) {
  const std::string_view m = conv.marker;
  if (m.empty() || piece.size() <= m.size()) return piece;
  if (conv.position == MarkerPosition::SuffixOfNonFinal) {
    if (piece.substr(piece.size() - m.size()) == m) return piece.substr(0, piece.size() - m.size());
  } else if (piece.substr(0, m.size()) == m) {
    return piece.substr(m.size());
  }
  return piece;
}

/// Greedy left-to-right alignment of subword pieces to words.
inline SubwordMap build_subword_map(const TokenSequence& words, const TokenSequence& subwords,
                                    const SubwordConvention& conv = {}) {
  if (conv.marker.empty()) throw Error(ErrorCode::InvalidArgument, "subword marker must be non-empty");
  if (words.empty() || subwords.empty()) throw Error(ErrorCode::EmptySegment, "word or subword sequence is empty");

  std::vector<Span> spans;
  spans.reserve(words.size());
  std::size_t pos = 0;
  for (std::size_t k = 0; k < words.size(); ++k) {
    const std::string& word = words[k];
    std::string acc;
    const std::size_t begin = pos;
    while (acc.size() < word.size()) {
      if (pos >= subwords.size()) {
        throw Error(ErrorCode::SegmentationMismatch,
                    "subwords exhausted while matching word " + std::to_string(k) + " '" + word + "'");
      }
      acc += strip_marker(subwords[pos++], conv);
      if (word.compare(0, acc.size(), acc) != 0) {
        throw Error(ErrorCode::SegmentationMismatch,
                    "pieces '" + acc + "' do not spell word " + std::to_string(k) + " '" + word + "'");
      }
    }
    if (pos == begin) {
      throw Error(ErrorCode::SegmentationMismatch, "word " + std::to_string(k) + " has no pieces");
    }
    spans.push_back({begin, pos});
  }
  if (pos != subwords.size()) {
    throw Error(ErrorCode::SegmentationMismatch,
                std::to_string(subwords.size() - pos) + " trailing subwords left after the last word");
  }
  return SubwordMap(std::move(spans));
}

/// Projects subword-level tags up to word level.
///
/// For each word: its gap tag is the subword gap before the span, and its
/// word tag is OK only if every piece tag and every gap inside the span is OK.
inline TagSequence subword_tags_to_word_tags(const TagSequence& subword_tags, const SubwordMap& map) {
  if (subword_tags.size() != 2 * map.subword_count() + 1) {
    throw Error(ErrorCode::ArityMismatch, "subword tags have length " + std::to_string(subword_tags.size()) +
                                              ", map expects " + std::to_string(2 * map.subword_count() + 1));
  }
  TagSequence out;
  out.reserve(2 * map.word_count() + 1);
  for (const auto& span : map.spans()) {
    out.push_back(subword_tags[gap_slot(span.begin)]);
    const auto first = subword_tags.begin() + static_cast<std::ptrdiff_t>(word_slot(span.begin));
    const auto last = subword_tags.begin() + static_cast<std::ptrdiff_t>(gap_slot(span.end));
    const bool ok = std::all_of(first, last, [](Label l) { return l == Label::OK; });
    out.push_back(ok ? Label::OK : Label::BAD);
  }
  out.push_back(subword_tags.back());
  return out;
}

/// Reference tags computed directly by TER over subword sequences.
inline TagSequence naive_subword_tags(const TokenSequence& mt_subwords, const TokenSequence& pe_subwords,
                                      const ShiftParams& params = {}) {
  return generate_reference_tags({{}, mt_subwords, pe_subwords}, params);
}

/// Builds subword-level reference tags that project back onto `word_tags`
/// exactly.
///
/// Gaps before words come from the word level. An OK word makes its whole
/// span OK. A BAD word keeps the naive span when it already contains a BAD,
/// otherwise the span is forced to all BAD.
inline TagSequence heuristic_subword_tags(const TagSequence& word_tags, const TagSequence& naive_tags,
                                          const SubwordMap& map) {
  if (word_tags.size() != 2 * map.word_count() + 1) {
    throw Error(ErrorCode::ArityMismatch, "word tags have length " + std::to_string(word_tags.size()) +
                                              ", map expects " + std::to_string(2 * map.word_count() + 1));
  }
  if (naive_tags.size() != 2 * map.subword_count() + 1) {
    throw Error(ErrorCode::ArityMismatch, "naive subword tags have length " + std::to_string(naive_tags.size()) +
                                              ", map expects " + std::to_string(2 * map.subword_count() + 1));
  }
  TagSequence out;
  out.reserve(naive_tags.size());
  for (std::size_t k = 0; k < map.word_count(); ++k) {
    const Span& span = map[k];
    const std::size_t inner = 2 * span.size() - 1;
    out.push_back(word_tags[gap_slot(k)]);
    if (word_tags[word_slot(k)] == Label::OK) {
      out.insert(out.end(), inner, Label::OK);
      continue;
    }
    const auto first = naive_tags.begin() + static_cast<std::ptrdiff_t>(word_slot(span.begin));
    const auto last = naive_tags.begin() + static_cast<std::ptrdiff_t>(gap_slot(span.end));
    if (std::find(first, last, Label::BAD) != last) {
      out.insert(out.end(), first, last);
    } else {
      out.insert(out.end(), inner, Label::BAD);
    }
  }
  out.push_back(word_tags.back());
  return out;
}

/// Fraction of word-level slots where the naive subword reference, projected
/// to word level, disagrees with the word-level reference.
struct DisagreementReport {
  std::size_t slots = 0;
  std::size_t disagreements = 0;
  double rate() const { return slots == 0 ? 0.0 : static_cast<double>(disagreements) / static_cast<double>(slots); }
};

inline DisagreementReport naive_disagreement(const std::vector<TagSequence>& word_tags,
                                             const std::vector<TagSequence>& naive_tags,
                                             const std::vector<SubwordMap>& maps) {
  if (word_tags.size() != naive_tags.size() || word_tags.size() != maps.size()) {
    throw Error(ErrorCode::LengthMismatch, "segment counts differ");
  }
  DisagreementReport r;
  for (std::size_t i = 0; i < word_tags.size(); ++i) {
    auto projected = subword_tags_to_word_tags(naive_tags[i], maps[i]);
    if (projected.size() != word_tags[i].size()) {
      throw Error(ErrorCode::ArityMismatch, "segment " + std::to_string(i + 1) + " word tag arity differs from map");
    }
    for (std::size_t j = 0; j < projected.size(); ++j) {
      r.disagreements += projected[j] != word_tags[i][j] ? 1 : 0;
    }
    r.slots += projected.size();
  }
  return r;
}

}  // namespace wordqe

#endif  // WORDQE_SUBWORD_HPP
