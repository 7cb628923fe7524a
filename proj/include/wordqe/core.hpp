#ifndef WORDQE_CORE_HPP
#define WORDQE_CORE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wordqe {

/// Error categories raised across the toolkit.
enum class ErrorCode {
  EmptySegment,
  ScriptMismatch,
  SegmentationMismatch,
  ArityMismatch,
  LengthMismatch,
  ShapeMismatch,
  DegenerateSimplex,
  InvalidArgument,
  LineCountMismatch,
  EmptyLine,
  BadLabel,
  BadFloat,
  UnevenArity,
  IoError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptySegment: return "EmptySegment";
    case ErrorCode::ScriptMismatch: return "ScriptMismatch";
    case ErrorCode::SegmentationMismatch: return "SegmentationMismatch";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::DegenerateSimplex: return "DegenerateSimplex";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::LineCountMismatch: return "LineCountMismatch";
    case ErrorCode::EmptyLine: return "EmptyLine";
    case ErrorCode::BadLabel: return "BadLabel";
    case ErrorCode::BadFloat: return "BadFloat";
    case ErrorCode::UnevenArity: return "UnevenArity";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

enum class Label : std::uint8_t { OK, BAD };

inline std::string_view to_string(Label l) { return l == Label::OK ? "OK" : "BAD"; }

inline std::optional<Label> parse_label(std::string_view s) {
  if (s == "OK") return Label::OK;
  if (s == "BAD") return Label::BAD;
  return std::nullopt;
}

inline Label flip(Label l) { return l == Label::OK ? Label::BAD : Label::OK; }

using Token = std::string;

/// A tokenized segment. Tokens are non-empty and carry no spaces.
using TokenSequence = std::vector<Token>;

inline bool is_valid_token(std::string_view t) {
  return !t.empty() && t.find(' ') == std::string_view::npos;
}

/// Interleaved gap/word tags: gap, word, gap, ..., word, gap.
/// Even indices are gap tags, odd indices word tags.
using TagSequence = std::vector<Label>;

/// Number of words annotated by a tag sequence of the given length.
inline std::size_t tag_arity(std::size_t tag_count) { return (tag_count - 1) / 2; }

inline bool is_gap_slot(std::size_t i) { return i % 2 == 0; }
inline std::size_t word_slot(std::size_t word) { return 2 * word + 1; }
inline std::size_t gap_slot(std::size_t gap) { return 2 * gap; }

inline bool validate_tag_sequence(const TagSequence& tags, std::size_t n) {
  // Labels are an enum, so membership in {OK, BAD} holds by construction.
  return tags.size() == 2 * n + 1;
}

inline TagSequence all_ok(std::size_t n) { return TagSequence(2 * n + 1, Label::OK); }

struct TranslationTriplet {
  TokenSequence src;
  TokenSequence mt;
  TokenSequence pe;
};

/// Half-open subword index range [begin, end) covering one word.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  friend bool operator==(const Span&, const Span&) = default;
};

/// Per-word contiguous spans partitioning [0, subword_count()).
class SubwordMap {
 public:
  SubwordMap() = default;

  /// Throws SegmentationMismatch unless spans partition a prefix of the
  /// subword axis with non-empty, contiguous ranges starting at 0.
  explicit SubwordMap(std::vector<Span> spans) : spans_(std::move(spans)) {
    std::size_t expect = 0;
    for (const auto& s : spans_) {
      if (s.begin != expect || s.end <= s.begin) {
        throw Error(ErrorCode::SegmentationMismatch, "spans must be non-empty and contiguous from 0");
      }
      expect = s.end;
    }
  }

  /// Builds a map from per-word piece counts.
  static SubwordMap from_lengths(const std::vector<std::size_t>& lengths) {
    std::vector<Span> spans;
    spans.reserve(lengths.size());
    std::size_t pos = 0;
    for (auto len : lengths) {
      spans.push_back({pos, pos + len});
      pos += len;
    }
    return SubwordMap(std::move(spans));
  }

  const std::vector<Span>& spans() const { return spans_; }
  std::size_t word_count() const { return spans_.size(); }
  std::size_t subword_count() const { return spans_.empty() ? 0 : spans_.back().end; }
  const Span& operator[](std::size_t k) const { return spans_[k]; }

  friend bool operator==(const SubwordMap&, const SubwordMap&) = default;

 private:
  std::vector<Span> spans_;
};

enum class EditKind : std::uint8_t { Match, Substitution, Insertion, Deletion, Shift };

inline std::string_view to_string(EditKind k) {
  switch (k) {
    case EditKind::Match: return "match";
    case EditKind::Substitution: return "substitution";
    case EditKind::Insertion: return "insertion";
    case EditKind::Deletion: return "deletion";
    case EditKind::Shift: return "shift";
  }
  return "?";
}

/// Block move applied to the working MT sequence: remove `length` tokens at
/// `start`, then reinsert them before index `destination` of the remainder.
struct ShiftSpan {
  std::size_t start = 0;
  std::size_t length = 0;
  std::size_t destination = 0;
  friend bool operator==(const ShiftSpan&, const ShiftSpan&) = default;
};

/// One alignment record.
///
/// Insertion is a token present in MT but absent from PE (it must be removed);
/// deletion is a PE token missing from MT (it must be added). Indices refer to
/// the original, unshifted MT sequence. `token` holds the PE token for
/// substitutions and deletions so the script can be replayed on its own.
struct Edit {
  EditKind kind = EditKind::Match;
  std::optional<std::size_t> mt_index;
  std::optional<std::size_t> pe_index;
  std::optional<ShiftSpan> shift_span;
  Token token;

  friend bool operator==(const Edit&, const Edit&) = default;
};

/// Shift records come first, in application order, followed by the
/// match/substitution/insertion/deletion records in shifted-MT order.
struct EditScript {
  std::vector<Edit> edits;
  std::size_t total_cost = 0;

  std::size_t count(EditKind k) const {
    std::size_t n = 0;
    for (const auto& e : edits) n += e.kind == k ? 1 : 0;
    return n;
  }
  std::size_t shift_count() const { return count(EditKind::Shift); }
};

/// Per-segment p(OK) scores; row k has 2*n_k+1 entries.
using PredictionMatrix = std::vector<std::vector<double>>;

/// BAD is the positive class.
struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const { return tp + tn + fp + fn; }

  ConfusionCounts& operator+=(const ConfusionCounts& o) {
    tp += o.tp;
    tn += o.tn;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  friend ConfusionCounts operator+(ConfusionCounts a, const ConfusionCounts& b) { return a += b; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct EnsembleWeights {
  std::vector<double> lambdas;
};

}  // namespace wordqe

#endif  // WORDQE_CORE_HPP
