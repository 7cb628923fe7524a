#ifndef WORDQE_METRICS_HPP
#define WORDQE_METRICS_HPP

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wordqe/core.hpp"

namespace wordqe {

enum class SlotFilter { All, Words, Gaps };

inline bool selects(SlotFilter f, std::size_t slot) {
  switch (f) {
    case SlotFilter::All: return true;
    case SlotFilter::Words: return !is_gap_slot(slot);
    case SlotFilter::Gaps: return is_gap_slot(slot);
  }
  return false;
}

inline ConfusionCounts confusion(const TagSequence& pred, const TagSequence& ref, SlotFilter filter = SlotFilter::All) {
  if (pred.size() != ref.size()) {
    throw Error(ErrorCode::ArityMismatch,
                "prediction has " + std::to_string(pred.size()) + " tags, reference " + std::to_string(ref.size()));
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!selects(filter, i)) continue;
    const bool p = pred[i] == Label::BAD, r = ref[i] == Label::BAD;
    if (p && r) ++c.tp;
    else if (!p && !r) ++c.tn;
    else if (p) ++c.fp;
    else ++c.fn;
  }
  return c;
}

/// Pooled counts over a corpus.
inline ConfusionCounts confusion(const std::vector<TagSequence>& pred, const std::vector<TagSequence>& ref,
                                 SlotFilter filter = SlotFilter::All) {
  if (pred.size() != ref.size()) {
    throw Error(ErrorCode::LengthMismatch,
                std::to_string(pred.size()) + " predicted segments vs " + std::to_string(ref.size()) + " reference");
  }
  ConfusionCounts total;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i].size() != ref[i].size()) {
      throw Error(ErrorCode::ArityMismatch, "segment " + std::to_string(i + 1) + ": prediction has " +
                                                std::to_string(pred[i].size()) + " tags, reference " +
                                                std::to_string(ref[i].size()));
    }
    total += confusion(pred[i], ref[i], filter);
  }
  return total;
}

/// Matthews correlation coefficient; 0 when any marginal is empty.
inline double mcc(const ConfusionCounts& c) {
  const long double tp = c.tp, tn = c.tn, fp = c.fp, fn = c.fn;
  const long double a = tp + fp, b = tp + fn, d1 = tn + fp, d2 = tn + fn;
  if (a == 0 || b == 0 || d1 == 0 || d2 == 0) return 0.0;
  const long double num = tp * tn - fp * fn;
  // Factors are paired so that swapping the classes (a<->d2, b<->d1) yields a
  // bit-identical denominator.
  long double den;
  if (c.total() > 1'000'000) {
    den = std::exp(0.5L * ((std::log(a) + std::log(d2)) + (std::log(b) + std::log(d1))));
  } else {
    den = std::sqrt((a * d2) * (b * d1));
  }
  return static_cast<double>(num / den);
}

struct PrecisionRecallF1 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Precision, recall and F1 treating `cls` as the positive class.
inline PrecisionRecallF1 prf(const ConfusionCounts& c, Label cls) {
  const double tp = static_cast<double>(cls == Label::BAD ? c.tp : c.tn);
  const double fp = static_cast<double>(cls == Label::BAD ? c.fp : c.fn);
  const double fn = static_cast<double>(cls == Label::BAD ? c.fn : c.fp);
  auto ratio = [](double x, double y) { return y == 0.0 ? 0.0 : x / y; };
  PrecisionRecallF1 r;
  r.precision = ratio(tp, tp + fp);
  r.recall = ratio(tp, tp + fn);
  r.f1 = ratio(2.0 * r.precision * r.recall, r.precision + r.recall);
  return r;
}

struct SlotClassReport {
  ConfusionCounts counts;
  double mcc = 0.0;
  PrecisionRecallF1 bad;
  PrecisionRecallF1 ok;
};

/// Target (all slots), MT (word slots) and GAP (gap slots) breakdown.
struct BreakdownReport {
  SlotClassReport target;
  SlotClassReport mt;
  SlotClassReport gap;
};

inline SlotClassReport slot_class_report(const ConfusionCounts& c) {
  return {c, mcc(c), prf(c, Label::BAD), prf(c, Label::OK)};
}

inline BreakdownReport breakdown_report(const std::vector<TagSequence>& pred, const std::vector<TagSequence>& ref) {
  return {slot_class_report(confusion(pred, ref, SlotFilter::All)),
          slot_class_report(confusion(pred, ref, SlotFilter::Words)),
          slot_class_report(confusion(pred, ref, SlotFilter::Gaps))};
}

namespace detail {

inline std::string fixed6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace detail

/// Aligned plain-text table, one row per slot class.
inline std::string format_text(const BreakdownReport& r) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-8s %10s %10s %10s %10s %10s %10s %10s\n", "slots", "MCC", "BAD-P", "BAD-R",
                "BAD-F1", "OK-P", "OK-R", "OK-F1");
  out += line;
  auto row = [&](const char* name, const SlotClassReport& s) {
    std::snprintf(line, sizeof line, "%-8s %10s %10s %10s %10s %10s %10s %10s\n", name, detail::fixed6(s.mcc).c_str(),
                  detail::fixed6(s.bad.precision).c_str(), detail::fixed6(s.bad.recall).c_str(),
                  detail::fixed6(s.bad.f1).c_str(), detail::fixed6(s.ok.precision).c_str(),
                  detail::fixed6(s.ok.recall).c_str(), detail::fixed6(s.ok.f1).c_str());
    out += line;
  };
  row("target", r.target);
  row("mt", r.mt);
  row("gap", r.gap);
  return out;
}

inline nlohmann::ordered_json to_json(const SlotClassReport& s) {
  auto prf_json = [](const PrecisionRecallF1& p) {
    return nlohmann::ordered_json{{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}};
  };
  return {{"mcc", s.mcc},
          {"counts", {{"tp", s.counts.tp}, {"tn", s.counts.tn}, {"fp", s.counts.fp}, {"fn", s.counts.fn}}},
          {"BAD", prf_json(s.bad)},
          {"OK", prf_json(s.ok)}};
}

inline nlohmann::ordered_json to_json(const BreakdownReport& r) {
  return {{"target", to_json(r.target)}, {"mt", to_json(r.mt)}, {"gap", to_json(r.gap)}};
}

}  // namespace wordqe

#endif  // WORDQE_METRICS_HPP
