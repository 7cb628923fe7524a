#ifndef WORDQE_SYNTHESIS_HPP
#define WORDQE_SYNTHESIS_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "wordqe/core.hpp"

namespace wordqe {

/// Synthetic triplet recipes. Decoding (translation, back-translation,
/// round-trip, MVPPE, mask infilling) happens upstream; these only decide
/// which input file fills which triplet slot.
enum class RecipeKind { SrcMtTgt, SrcMt1Mt2, BtRtTgt, SrcRtFt, Mvppe, BtNoisyTgt };

struct RecipeRoles {
  std::string_view src;
  std::string_view mt;
  std::string_view pe;
};

inline RecipeRoles roles(RecipeKind kind) {
  switch (kind) {
    case RecipeKind::SrcMtTgt: return {"src", "mt", "tgt"};
    // mt1 is the weaker system's output, mt2 the stronger one used as pseudo-PE.
    case RecipeKind::SrcMt1Mt2: return {"src", "mt1", "mt2"};
    case RecipeKind::BtRtTgt: return {"bt", "rt", "tgt"};
    case RecipeKind::SrcRtFt: return {"src", "rt", "ft"};
    case RecipeKind::Mvppe: return {"src", "mt", "pe"};
    case RecipeKind::BtNoisyTgt: return {"bt", "noisy", "tgt"};
  }
  throw Error(ErrorCode::InvalidArgument, "unknown recipe");
}

inline constexpr std::array<std::pair<std::string_view, RecipeKind>, 6> kRecipeNames{{
    {"src-mt-tgt", RecipeKind::SrcMtTgt},
    {"src-mt1-mt2", RecipeKind::SrcMt1Mt2},
    {"bt-rt-tgt", RecipeKind::BtRtTgt},
    {"src-rt-ft", RecipeKind::SrcRtFt},
    {"mvppe", RecipeKind::Mvppe},
    {"bt-noisy-tgt", RecipeKind::BtNoisyTgt},
}};

inline std::optional<RecipeKind> parse_recipe(std::string_view name) {
  for (const auto& [n, k] : kRecipeNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

/// A line-oriented corpus file already loaded into memory.
struct CorpusFile {
  std::string path;
  std::vector<std::string> lines;
};

/// Aligned (src, mt, pe) lines, untokenized.
struct TripletLines {
  std::vector<std::string> src;
  std::vector<std::string> mt;
  std::vector<std::string> pe;
};

/// Maps recipe input files onto triplet slots. `inputs` is keyed by role
/// name. Files must have equal line counts and no empty lines.
inline TripletLines assemble(RecipeKind kind, const std::map<std::string, CorpusFile, std::less<>>& inputs) {
  const RecipeRoles r = roles(kind);
  const std::array<std::string_view, 3> needed{r.src, r.mt, r.pe};
  std::array<const CorpusFile*, 3> files{};
  for (std::size_t i = 0; i < needed.size(); ++i) {
    auto it = inputs.find(needed[i]);
    if (it == inputs.end()) {
      throw Error(ErrorCode::InvalidArgument, "recipe requires input role '" + std::string(needed[i]) + "'");
    }
    files[i] = &it->second;
  }
  for (std::size_t i = 1; i < files.size(); ++i) {
    if (files[i]->lines.size() != files[0]->lines.size()) {
      throw Error(ErrorCode::LineCountMismatch, files[0]->path + " has " + std::to_string(files[0]->lines.size()) +
                                                    " lines but " + files[i]->path + " has " +
                                                    std::to_string(files[i]->lines.size()));
    }
  }
  for (const auto* f : files) {
    for (std::size_t n = 0; n < f->lines.size(); ++n) {
      if (f->lines[n].find_first_not_of(" \t") == std::string::npos) {
        throw Error(ErrorCode::EmptyLine, f->path + ":" + std::to_string(n + 1) + ": empty line");
      }
    }
  }
  return {files[0]->lines, files[1]->lines, files[2]->lines};
}

namespace detail {

/// Unbiased integer in [0, bound) from raw engine output.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % bound;
}

}  // namespace detail

inline constexpr std::string_view kDefaultMaskToken = "<mask>";

/// Replaces round(ratio * n) distinct positions, chosen uniformly, with
/// `mask_token`. Draws from `rng`, so consecutive calls continue one stream.
inline TokenSequence mask_words(const TokenSequence& tgt, double ratio, std::mt19937_64& rng,
                                std::string_view mask_token = kDefaultMaskToken) {
  if (tgt.empty()) throw Error(ErrorCode::EmptySegment, "cannot mask an empty sequence");
  if (!(ratio > 0.0 && ratio < 1.0)) throw Error(ErrorCode::InvalidArgument, "mask ratio must lie in (0,1)");
  const auto count = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(tgt.size())));

  std::vector<std::size_t> positions(tgt.size());
  for (std::size_t i = 0; i < positions.size(); ++i) positions[i] = i;
  // Partial Fisher-Yates: the first `count` entries become the sample.
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(detail::bounded(rng, positions.size() - i));
    std::swap(positions[i], positions[j]);
  }
  TokenSequence out = tgt;
  for (std::size_t i = 0; i < count; ++i) out[positions[i]] = std::string(mask_token);
  return out;
}

inline TokenSequence mask_words(const TokenSequence& tgt, double ratio, std::uint64_t seed,
                                std::string_view mask_token = kDefaultMaskToken) {
  std::mt19937_64 rng(seed);
  return mask_words(tgt, ratio, rng, mask_token);
}

}  // namespace wordqe

#endif  // WORDQE_SYNTHESIS_HPP
