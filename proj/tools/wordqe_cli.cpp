// Command-line front end for the wordqe toolkit.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "wordqe/wordqe.hpp"

namespace {

using namespace wordqe;

constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;

/// Writes to the file named by `path`, or stdout when it is empty.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw Error(ErrorCode::IoError, "cannot write " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void require_same_count(const std::string& a, std::size_t na, const std::string& b, std::size_t nb) {
  if (na != nb) {
    throw Error(ErrorCode::LineCountMismatch,
                a + " has " + std::to_string(na) + " lines but " + b + " has " + std::to_string(nb));
  }
}

template <typename Fn>
auto at_line(std::size_t index, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), "line " + std::to_string(index + 1) + ": " + e.what());
  }
}

struct ShiftOptions {
  bool no_shifts = false;
  std::size_t max_span = ShiftParams{}.max_span;
  std::size_t max_distance = ShiftParams{}.max_distance;

  void attach(CLI::App* cmd) {
    cmd->add_flag("--no-shifts", no_shifts, "Disable block shifts (plain edit distance)");
    cmd->add_option("--max-shift-span", max_span, "Longest block a shift may move")->check(CLI::PositiveNumber);
    cmd->add_option("--max-shift-distance", max_distance, "Farthest a block may move");
  }
  ShiftParams params() const { return {!no_shifts, max_span, max_distance}; }
};

struct MarkerOptions {
  std::string marker = "@@";
  std::string position = "suffix";

  void attach(CLI::App* cmd) {
    cmd->add_option("--marker", marker, "Subword continuation marker");
    cmd->add_option("--marker-position", position, "suffix: marker ends non-final pieces; prefix: marker starts "
                                                   "continuation pieces")
        ->check(CLI::IsMember({"suffix", "prefix"}));
  }
  SubwordConvention convention() const {
    return {marker, position == "suffix" ? MarkerPosition::SuffixOfNonFinal : MarkerPosition::PrefixOfContinuation};
  }
};

std::vector<TagSequence> tag_corpus(const std::string& mt_path, const std::string& pe_path,
                                    const ShiftParams& params) {
  const auto mt = read_corpus(mt_path);
  const auto pe = read_corpus(pe_path);
  require_same_count(mt_path, mt.size(), pe_path, pe.size());
  std::vector<TagSequence> tags(mt.size());
  std::vector<std::exception_ptr> errors(mt.size());
  std::atomic<std::size_t> next{0};
  {
    const unsigned workers = std::max(1u, std::min(std::thread::hardware_concurrency(), 16u));
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < mt.size(); i = next++) {
          try {
            tags[i] = at_line(i, [&] { return generate_reference_tags({{}, mt[i], pe[i]}, params); });
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return tags;
}

std::vector<SubwordMap> build_maps(const std::string& words_path, const std::string& subwords_path,
                                   const SubwordConvention& conv) {
  const auto words = read_corpus(words_path);
  const auto subwords = read_corpus(subwords_path);
  require_same_count(words_path, words.size(), subwords_path, subwords.size());
  std::vector<SubwordMap> maps;
  maps.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    maps.push_back(at_line(i, [&] { return build_subword_map(words[i], subwords[i], conv); }));
  }
  return maps;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Word-level MT quality estimation: reference tags, subword projection, evaluation, ensembles"};
  app.set_version_flag("--version", "wordqe " + std::string(kVersion) + " (format " + std::string(kFormatVersion) + ")");
  app.require_subcommand(1);
  std::string output;

  // tags
  auto* tags_cmd = app.add_subcommand("tags", "Derive OK/BAD reference tags from MT and post-edited files");
  std::string mt_path, pe_path, src_path;
  ShiftOptions tags_shift;
  tags_cmd->add_option("--mt", mt_path, "MT output, one tokenized segment per line")->required();
  tags_cmd->add_option("--pe", pe_path, "Post-edited output")->required();
  tags_cmd->add_option("--src", src_path, "Source file (line count checked only)");
  tags_shift.attach(tags_cmd);
  tags_cmd->add_option("-o,--output", output, "Output file (default stdout)");

  // naive-subword-tags
  auto* naive_cmd = app.add_subcommand("naive-subword-tags", "TER tags computed directly on subword sequences");
  std::string mt_sw_path, pe_sw_path;
  ShiftOptions naive_shift;
  naive_cmd->add_option("--mt", mt_sw_path, "Subword-segmented MT")->required();
  naive_cmd->add_option("--pe", pe_sw_path, "Subword-segmented post-edit")->required();
  naive_shift.attach(naive_cmd);
  naive_cmd->add_option("-o,--output", output, "Output file (default stdout)");

  // subword-up
  auto* up_cmd = app.add_subcommand("subword-up", "Project subword-level tags to word-level tags");
  std::string up_tags, words_path, subwords_path;
  MarkerOptions up_marker;
  up_cmd->add_option("--tags", up_tags, "Subword-level tags")->required();
  up_cmd->add_option("--words", words_path, "Word-level MT")->required();
  up_cmd->add_option("--subwords", subwords_path, "Subword-level MT")->required();
  up_marker.attach(up_cmd);
  up_cmd->add_option("-o,--output", output, "Output file (default stdout)");

  // subword-ref
  auto* ref_cmd = app.add_subcommand("subword-ref", "Build heuristic subword reference tags from word-level tags");
  std::string word_tags_path, naive_tags_path;
  MarkerOptions ref_marker;
  ref_cmd->add_option("--word-tags", word_tags_path, "Word-level reference tags")->required();
  ref_cmd->add_option("--naive-tags", naive_tags_path, "Naive subword-level tags")->required();
  ref_cmd->add_option("--words", words_path, "Word-level MT")->required();
  ref_cmd->add_option("--subwords", subwords_path, "Subword-level MT")->required();
  ref_marker.attach(ref_cmd);
  ref_cmd->add_option("-o,--output", output, "Output file (default stdout)");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "MCC and per-class P/R/F1 for Target, MT and GAP slots");
  std::string pred_path, gold_path, format = "text";
  eval_cmd->add_option("--pred", pred_path, "Predicted tags")->required();
  eval_cmd->add_option("--ref", gold_path, "Reference tags")->required();
  eval_cmd->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  eval_cmd->add_option("-o,--output", output, "Output file (default stdout)");

  // ensemble-combine
  auto* comb_cmd = app.add_subcommand("ensemble-combine", "Linearly combine p(OK) score files");
  std::vector<std::string> score_paths;
  std::string weights_path;
  bool comb_binarize = false;
  double threshold = 0.5;
  comb_cmd->add_option("--scores", score_paths, "Score files, one per model")->required();
  comb_cmd->add_option("--weights", weights_path, "Weight file, one value per line")->required();
  comb_cmd->add_flag("--binarize", comb_binarize, "Emit OK/BAD tags instead of scores");
  comb_cmd->add_option("--threshold", threshold, "OK iff p(OK) >= threshold");
  comb_cmd->add_option("-o,--output", output, "Output file (default stdout)");

  // ensemble-optimize
  auto* opt_cmd = app.add_subcommand("ensemble-optimize", "Tune ensemble weights for dev-set Target MCC");
  std::string method = "nelder-mead", trace_path;
  OptimizerConfig opt_cfg;
  opt_cmd->add_option("--scores", score_paths, "Dev score files, one per model")->required();
  opt_cmd->add_option("--ref", gold_path, "Dev reference tags")->required();
  opt_cmd->add_option("--method", method, "nelder-mead or powell")->check(CLI::IsMember({"nelder-mead", "powell"}));
  opt_cmd->add_option("--threshold", threshold, "OK iff p(OK) >= threshold");
  opt_cmd->add_option("--max-iter", opt_cfg.max_iterations, "Iteration budget");
  opt_cmd->add_option("--seed", opt_cfg.seed, "Seed for simplex jitter");
  opt_cmd->add_option("--jitter", opt_cfg.jitter, "Perturb flat Nelder-Mead simplices by this much (0 = off)");
  opt_cmd->add_option("--trace", trace_path, "Write the optimizer trace here");
  opt_cmd->add_option("-o,--output", output, "Weight file (default stdout)");

  // loss
  auto* loss_cmd = app.add_subcommand("loss", "Label-balanced NLL of p(OK) scores against reference tags");
  double mu = 1.0;
  bool loss_sum = false;
  loss_cmd->add_option("--scores", pred_path, "Score file")->required();
  loss_cmd->add_option("--ref", gold_path, "Reference tags")->required();
  loss_cmd->add_option("--mu", mu, "BAD-class weight")->check(CLI::PositiveNumber);
  loss_cmd->add_flag("--sum", loss_sum, "Sum per-class terms instead of averaging");
  loss_cmd->add_option("-o,--output", output, "Output file (default stdout)");

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Assemble synthetic (src, mt, pe) triplets from decoded files");
  std::string recipe_name, out_prefix;
  std::map<std::string, std::string> role_paths;
  synth_cmd->add_option("--recipe", recipe_name, "src-mt-tgt | src-mt1-mt2 | bt-rt-tgt | src-rt-ft | mvppe | bt-noisy-tgt")
      ->required();
  for (const char* role : {"src", "mt", "tgt", "mt1", "mt2", "bt", "rt", "ft", "pe", "noisy"}) {
    synth_cmd->add_option(std::string("--") + role, role_paths[role], std::string(role) + " input file");
  }
  synth_cmd->add_option("--out-prefix", out_prefix, "Writes PREFIX.src, PREFIX.mt, PREFIX.pe")->required();

  // mask
  auto* mask_cmd = app.add_subcommand("mask", "Randomly mask target words");
  std::string mask_input, mask_token{kDefaultMaskToken};
  double ratio = 0.0;
  std::uint64_t seed = 0;
  mask_cmd->add_option("--input", mask_input, "Tokenized target corpus")->required();
  mask_cmd->add_option("--ratio", ratio, "Fraction of words to mask, in (0,1)")->required();
  mask_cmd->add_option("--seed", seed, "Random seed");
  mask_cmd->add_option("--mask-token", mask_token, "Replacement token");
  mask_cmd->add_option("-o,--output", output, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (tags_cmd->parsed()) {
      auto tags = tag_corpus(mt_path, pe_path, tags_shift.params());
      if (!src_path.empty()) require_same_count(src_path, read_lines(src_path).size(), mt_path, tags.size());
      Output out(output);
      write_tags(out.stream(), tags);
    } else if (naive_cmd->parsed()) {
      auto tags = tag_corpus(mt_sw_path, pe_sw_path, naive_shift.params());
      Output out(output);
      write_tags(out.stream(), tags);
    } else if (up_cmd->parsed()) {
      const auto maps = build_maps(words_path, subwords_path, up_marker.convention());
      const auto sw_tags = read_tags(up_tags);
      require_same_count(up_tags, sw_tags.size(), words_path, maps.size());
      std::vector<TagSequence> word_tags;
      for (std::size_t i = 0; i < maps.size(); ++i) {
        word_tags.push_back(at_line(i, [&] { return subword_tags_to_word_tags(sw_tags[i], maps[i]); }));
      }
      Output out(output);
      write_tags(out.stream(), word_tags);
    } else if (ref_cmd->parsed()) {
      const auto maps = build_maps(words_path, subwords_path, ref_marker.convention());
      const auto word_tags = read_tags(word_tags_path);
      const auto naive = read_tags(naive_tags_path);
      require_same_count(word_tags_path, word_tags.size(), words_path, maps.size());
      require_same_count(naive_tags_path, naive.size(), words_path, maps.size());
      std::vector<TagSequence> heuristic;
      for (std::size_t i = 0; i < maps.size(); ++i) {
        heuristic.push_back(at_line(i, [&] { return heuristic_subword_tags(word_tags[i], naive[i], maps[i]); }));
      }
      Output out(output);
      write_tags(out.stream(), heuristic);
    } else if (eval_cmd->parsed()) {
      const auto report = breakdown_report(read_tags(pred_path), read_tags(gold_path));
      Output out(output);
      if (format == "json") {
        out.stream() << to_json(report).dump(2) << '\n';
      } else {
        out.stream() << format_text(report);
      }
    } else if (comb_cmd->parsed()) {
      std::vector<PredictionMatrix> preds;
      for (const auto& p : score_paths) preds.push_back(read_scores(p));
      const auto combined = combine(preds, read_weights(weights_path));
      Output out(output);
      if (comb_binarize) {
        write_tags(out.stream(), binarize(combined, threshold));
      } else {
        write_scores(out.stream(), combined);
      }
    } else if (opt_cmd->parsed()) {
      std::vector<PredictionMatrix> preds;
      for (const auto& p : score_paths) preds.push_back(read_scores(p));
      EnsembleOptions opts;
      opts.method = method == "powell" ? OptimizerMethod::Powell : OptimizerMethod::NelderMead;
      opts.threshold = threshold;
      opts.optimizer = opt_cfg;
      const auto result = optimize_weights(preds, read_tags(gold_path), opts);
      if (result.below_best_single) {
        std::cerr << "warning: ensemble MCC is below the best single model\n";
      }
      std::fprintf(stderr, "dev target MCC %.6f\n", result.mcc);
      if (!trace_path.empty()) {
        Output trace(trace_path);
        trace.stream() << format_trace(result.optimizer.trace);
      }
      Output out(output);
      write_weights(out.stream(), result.weights);
    } else if (loss_cmd->parsed()) {
      const auto r = balanced_nll(read_scores(pred_path), read_tags(gold_path), mu,
                                  loss_sum ? LossReduction::Sum : LossReduction::Mean);
      Output out(output);
      char buf[160];
      std::snprintf(buf, sizeof buf, "total=%.10f\nl_ok=%.10f\nl_bad=%.10f\n", r.total, r.l_ok, r.l_bad);
      out.stream() << buf;
    } else if (synth_cmd->parsed()) {
      auto kind = parse_recipe(recipe_name);
      if (!kind) throw Error(ErrorCode::InvalidArgument, "unknown recipe '" + recipe_name + "'");
      std::map<std::string, CorpusFile, std::less<>> inputs;
      for (const auto& [role, path] : role_paths) {
        if (!path.empty()) inputs[role] = CorpusFile{path, read_lines(path)};
      }
      const auto triplets = assemble(*kind, inputs);
      auto write = [&](const std::string& suffix, const std::vector<std::string>& lines) {
        Output out(out_prefix + suffix);
        for (const auto& l : lines) out.stream() << l << '\n';
      };
      write(".src", triplets.src);
      write(".mt", triplets.mt);
      write(".pe", triplets.pe);
    } else if (mask_cmd->parsed()) {
      const auto corpus = read_corpus(mask_input);
      std::mt19937_64 rng(seed);
      std::vector<TokenSequence> masked;
      for (std::size_t i = 0; i < corpus.size(); ++i) {
        masked.push_back(at_line(i, [&] { return mask_words(corpus[i], ratio, rng, mask_token); }));
      }
      Output out(output);
      write_corpus(out.stream(), masked);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
