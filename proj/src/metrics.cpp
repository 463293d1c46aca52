#include "nlpkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace nlpkit {

namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

std::vector<std::string> ClassCounts::classes() const {
  std::set<std::string> names;
  for (const auto& [k, v] : tp) names.insert(k);
  for (const auto& [k, v] : fp) names.insert(k);
  for (const auto& [k, v] : fn) names.insert(k);
  return {names.begin(), names.end()};
}

void EvalReport::set_with_percent(const std::string& key, double value) {
  scalars[key] = value;
  scalars[key + "_percent"] = percent_round(value);
}

std::string EvalReport::to_json() const {
  nlohmann::json j;
  for (const auto& [k, v] : scalars) j["scores"][k] = v;
  for (const auto& [cls, vals] : per_class) {
    for (const auto& [k, v] : vals) j["per_class"][cls][k] = v;
  }
  j["flags"] = flags;
  return j.dump(2);
}

std::string EvalReport::to_table() const {
  std::size_t width = 0;
  for (const auto& [k, v] : scalars) width = std::max(width, k.size());
  std::ostringstream os;
  for (const auto& [k, v] : scalars) {
    os << std::left << std::setw(static_cast<int>(width) + 2) << k
       << format_double(v) << "\n";
  }
  for (const auto& [cls, vals] : per_class) {
    for (const auto& [k, v] : vals) {
      os << std::left << std::setw(static_cast<int>(width) + 2)
         << (cls + "/" + k) << format_double(v) << "\n";
    }
  }
  for (const auto& f : flags) os << "# " << f << "\n";
  return os.str();
}

std::pair<double, double> seg_precision_recall(const SegCounts& counts) {
  if (counts.N == 0) throw std::invalid_argument("no output segments (N=0)");
  if (counts.M == 0) throw std::invalid_argument("no gold segments (M=0)");
  if (counts.n > counts.N || counts.n > counts.M) {
    throw std::invalid_argument("n exceeds N or M");
  }
  const double p = static_cast<double>(counts.n) / counts.N;
  const double r = static_cast<double>(counts.n) / counts.M;
  return {p, r};
}

int percent_round(double x) {
  if (x < 0.0 || x > 1.0) throw std::invalid_argument("value outside [0,1]");
  return static_cast<int>(std::floor(x * 100.0 + 0.5));
}

SegCounts count_segments(const std::vector<SegmentedSentence>& gold,
                         const std::vector<SegmentedSentence>& pred) {
  if (gold.size() != pred.size()) {
    throw std::invalid_argument("gold/pred sentence count mismatch");
  }
  SegCounts counts;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    auto spans = [](const SegmentedSentence& sent) {
      std::set<std::pair<std::size_t, std::size_t>> out;
      std::size_t pos = 0;
      for (const auto& tok : sent.tokens) {
        out.emplace(pos, pos + tok.size());
        pos += tok.size();
      }
      return out;
    };
    const auto gold_spans = spans(gold[s]);
    const auto pred_spans = spans(pred[s]);
    counts.M += gold_spans.size();
    counts.N += pred_spans.size();
    for (const auto& sp : pred_spans) {
      if (gold_spans.count(sp) > 0) ++counts.n;
    }
  }
  return counts;
}

double per_class_f1(double p, double r) {
  if (p < 0.0 || p > 1.0 || r < 0.0 || r > 1.0) {
    throw std::invalid_argument("precision/recall outside [0,1]");
  }
  if (p + r == 0.0) return 0.0;
  return 2.0 * p * r / (p + r);
}

PrfScores macro_prf(const std::vector<PrfScores>& per_class) {
  if (per_class.empty()) throw std::invalid_argument("no classes");
  PrfScores out;
  for (const PrfScores& c : per_class) {
    out.precision += c.precision;
    out.recall += c.recall;
    out.f1 += c.f1;
  }
  const double n = static_cast<double>(per_class.size());
  out.precision /= n;
  out.recall /= n;
  out.f1 /= n;
  return out;
}

PrfScores micro_prf(const ClassCounts& counts) {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  for (const auto& [k, v] : counts.tp) tp += v;
  for (const auto& [k, v] : counts.fp) fp += v;
  for (const auto& [k, v] : counts.fn) fn += v;
  PrfScores out;
  out.precision = (tp + fp == 0) ? 0.0 : static_cast<double>(tp) / (tp + fp);
  out.recall = (tp + fn == 0) ? 0.0 : static_cast<double>(tp) / (tp + fn);
  out.f1 = per_class_f1(out.precision, out.recall);
  return out;
}

std::map<std::string, PrfScores> per_class_prf(const ClassCounts& counts) {
  std::map<std::string, PrfScores> out;
  for (const std::string& cls : counts.classes()) {
    auto get = [&](const std::map<std::string, std::size_t>& m) {
      auto it = m.find(cls);
      return it == m.end() ? std::size_t{0} : it->second;
    };
    const std::size_t tp = get(counts.tp);
    const std::size_t fp = get(counts.fp);
    const std::size_t fn = get(counts.fn);
    PrfScores s;
    s.precision = (tp + fp == 0) ? 0.0 : static_cast<double>(tp) / (tp + fp);
    s.recall = (tp + fn == 0) ? 0.0 : static_cast<double>(tp) / (tp + fn);
    s.f1 = per_class_f1(s.precision, s.recall);
    out[cls] = s;
  }
  return out;
}

std::size_t lcs_length(const std::vector<std::string>& a,
                       const std::vector<std::string>& b) {
  if (a.empty() || b.empty()) return 0;
  // Two-row DP over |a| x |b|.
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      if (a[i - 1] == b[j - 1]) {
        cur[j] = prev[j - 1] + 1;
      } else {
        cur[j] = std::max(prev[j], cur[j - 1]);
      }
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double rouge_l(const std::vector<std::string>& candidate,
               const std::vector<std::string>& reference,
               const RougeParams& params) {
  if (reference.empty()) throw std::invalid_argument("empty reference");
  if (params.beta <= 0.0) throw std::invalid_argument("beta must be positive");
  const double lcs = static_cast<double>(lcs_length(candidate, reference));
  const double r = lcs / static_cast<double>(reference.size());
  const double p =
      candidate.empty() ? 0.0 : lcs / static_cast<double>(candidate.size());
  const double b2 = params.beta * params.beta;
  const double denom = r + b2 * p;
  if (denom == 0.0) return 0.0;
  return (1.0 + b2) * r * p / denom;
}

namespace {

// Modified n-gram precision counts: clipped hits and total candidate
// n-grams of the given order.
std::pair<std::size_t, std::size_t> clipped_ngram_counts(
    const std::vector<std::string>& candidate,
    const std::vector<std::vector<std::string>>& references,
    std::size_t order) {
  if (candidate.size() < order) return {0, 0};
  auto ngrams = [order](const std::vector<std::string>& toks) {
    std::map<std::vector<std::string>, std::size_t> counts;
    for (std::size_t i = 0; i + order <= toks.size(); ++i) {
      counts[{toks.begin() + i, toks.begin() + i + order}] += 1;
    }
    return counts;
  };
  const auto cand_counts = ngrams(candidate);
  std::map<std::vector<std::string>, std::size_t> ref_max;
  for (const auto& ref : references) {
    for (const auto& [gram, cnt] : ngrams(ref)) {
      ref_max[gram] = std::max(ref_max[gram], cnt);
    }
  }
  std::size_t hits = 0;
  std::size_t total = 0;
  for (const auto& [gram, cnt] : cand_counts) {
    total += cnt;
    auto it = ref_max.find(gram);
    if (it != ref_max.end()) hits += std::min(cnt, it->second);
  }
  return {hits, total};
}

}  // namespace

BleuResult bleu(const std::vector<std::string>& candidate,
                const std::vector<std::vector<std::string>>& references,
                const BleuParams& params) {
  if (references.empty()) throw std::invalid_argument("no references");
  for (const auto& ref : references) {
    if (ref.empty()) throw std::invalid_argument("empty reference");
  }
  if (params.max_order == 0) throw std::invalid_argument("max_order is zero");
  std::vector<double> weights = params.weights;
  if (weights.empty()) {
    weights.assign(params.max_order, 1.0 / static_cast<double>(params.max_order));
  }
  if (weights.size() != params.max_order) {
    throw std::invalid_argument("weight count != max_order");
  }
  double weight_sum = 0.0;
  for (double w : weights) {
    if (w <= 0.0) throw std::invalid_argument("weights must be positive");
    weight_sum += w;
  }
  if (std::abs(weight_sum - 1.0) > 1e-12) {
    throw std::invalid_argument("weights must sum to 1");
  }

  BleuResult result;
  if (candidate.empty()) {
    result.empty_candidate = true;
    result.zero_order = true;
    return result;
  }

  // Brevity penalty against the closest reference length, ties broken
  // toward the shorter reference.
  const std::size_t c = candidate.size();
  std::size_t r = references.front().size();
  for (const auto& ref : references) {
    const std::size_t len = ref.size();
    const auto dist = [&](std::size_t l) {
      return l > c ? l - c : c - l;
    };
    if (dist(len) < dist(r) || (dist(len) == dist(r) && len < r)) r = len;
  }
  result.brevity_penalty =
      c >= r ? 1.0 : std::exp(1.0 - static_cast<double>(r) / c);

  double log_sum = 0.0;
  for (std::size_t order = 1; order <= params.max_order; ++order) {
    const auto [hits, total] = clipped_ngram_counts(candidate, references, order);
    const double p =
        total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
    result.precisions.push_back(p);
    if (p == 0.0) {
      result.zero_order = true;
    } else {
      log_sum += weights[order - 1] * std::log(p);
    }
  }
  result.score = result.zero_order ? 0.0 : result.brevity_penalty * std::exp(log_sum);
  return result;
}

}  // namespace nlpkit
