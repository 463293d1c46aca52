#ifndef NLPKIT_METRICS_HPP_
#define NLPKIT_METRICS_HPP_

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "nlpkit/corpus.hpp"

namespace nlpkit {

// Segmentation counts: n matching output segments, N total output
// segments, M gold segments.
struct SegCounts {
  std::size_t n = 0;
  std::size_t N = 0;
  std::size_t M = 0;
};

// Per-class confusion counts keyed by class name.
struct ClassCounts {
  std::map<std::string, std::size_t> tp;
  std::map<std::string, std::size_t> fp;
  std::map<std::string, std::size_t> fn;

  std::vector<std::string> classes() const;
};

struct PrfScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct RougeParams {
  double beta = 1.0;
};

struct BleuParams {
  std::size_t max_order = 4;
  // Per-order weights; empty means uniform 1/max_order.
  std::vector<double> weights;
};

struct BleuResult {
  double score = 0.0;
  std::vector<double> precisions;  // clipped modified n-gram precisions
  double brevity_penalty = 1.0;
  bool zero_order = false;  // some p_n was zero, score forced to 0
  bool empty_candidate = false;
};

// Score container: raw values plus rounded-percent forms, emitted as
// key-sorted JSON or an aligned table. Rounding happens only here.
struct EvalReport {
  std::map<std::string, double> scalars;
  std::map<std::string, std::map<std::string, double>> per_class;
  std::vector<std::string> flags;

  void set(const std::string& key, double value) { scalars[key] = value; }
  // Stores <key> and <key>_percent (round-half-up at two decimals x100).
  void set_with_percent(const std::string& key, double value);

  std::string to_json() const;
  std::string to_table() const;
};

// P = n/N, R = n/M. N or M of zero for the requested ratio is an error.
std::pair<double, double> seg_precision_recall(const SegCounts& counts);

// Round-half-up at two decimal places, then x100: 0.720199 -> 72.
int percent_round(double x);

// Matches predicted segment boundaries against gold per sentence:
// a predicted token is correct when its [start,end) character span equals
// some gold token span. Sentence lists must be the same length.
SegCounts count_segments(const std::vector<SegmentedSentence>& gold,
                         const std::vector<SegmentedSentence>& pred);

// 2PR/(P+R), 0 when P+R == 0.
double per_class_f1(double p, double r);

// Unweighted means of per-class P/R/F.
PrfScores macro_prf(const std::vector<PrfScores>& per_class);

// Pooled-count P/R/F over all classes.
PrfScores micro_prf(const ClassCounts& counts);

// Per-class P/R/F from confusion counts (P = tp/(tp+fp), R = tp/(tp+fn),
// with the defined-zero convention on empty denominators).
std::map<std::string, PrfScores> per_class_prf(const ClassCounts& counts);

// Longest common subsequence length by dynamic programming.
std::size_t lcs_length(const std::vector<std::string>& a,
                       const std::vector<std::string>& b);

// (1+B^2)RP / (R+B^2 P) with R = LCS/|ref|, P = LCS/|cand|.
double rouge_l(const std::vector<std::string>& candidate,
               const std::vector<std::string>& reference,
               const RougeParams& params = {});

BleuResult bleu(const std::vector<std::string>& candidate,
                const std::vector<std::vector<std::string>>& references,
                const BleuParams& params = {});

}  // namespace nlpkit

#endif  // NLPKIT_METRICS_HPP_
