#ifndef NLPKIT_HMM_HPP_
#define NLPKIT_HMM_HPP_

#include <string>
#include <vector>

#include "nlpkit/corpus.hpp"

namespace nlpkit {

struct PoissonMleResult {
  double phi = 0.0;
  std::size_t n = 0;
  double log_likelihood = 0.0;
};

// phi is the sample mean; the log-likelihood is evaluated at phi.
PoissonMleResult mle_poisson(const std::vector<std::size_t>& samples);

// -n*phi + (sum x_i) ln phi - sum ln(x_i!). phi == 0 is only valid when
// every sample is zero (limit convention, value uses 0*ln 0 = 0).
double poisson_log_likelihood(const std::vector<std::size_t>& samples,
                              double phi);

enum class UnkPolicy {
  // Unknown units emit through a reserved column that receives the bare
  // smoothing mass alpha / (row_total + alpha*(V+1)).
  kReservedColumn,
};

// BMES hidden Markov model with log-domain tables. Vocabulary is closed
// and sorted; the reserved unknown column sits past the end of it.
class HmmModel {
 public:
  HmmModel() = default;
  HmmModel(std::vector<std::string> states, std::vector<std::string> vocab,
           std::vector<double> log_pi, std::vector<double> log_trans,
           std::vector<double> log_emit, double smoothing_alpha,
           UnkPolicy unk_policy);

  const std::vector<std::string>& states() const { return states_; }
  const std::vector<std::string>& vocabulary() const { return vocab_; }
  double smoothing_alpha() const { return alpha_; }
  UnkPolicy unk_policy() const { return unk_policy_; }

  double log_pi(std::size_t state) const { return log_pi_[state]; }
  double log_trans(std::size_t from, std::size_t to) const {
    return log_trans_[from * states_.size() + to];
  }
  // Looks the unit up in the vocabulary; unseen units read the reserved
  // unknown column.
  double log_emit(std::size_t state, const std::string& unit) const;

  const std::vector<double>& log_pi_table() const { return log_pi_; }
  const std::vector<double>& log_trans_table() const { return log_trans_; }
  const std::vector<double>& log_emit_table() const { return log_emit_; }

 private:
  std::vector<std::string> states_;
  std::vector<std::string> vocab_;  // sorted
  std::vector<double> log_pi_;      // [K]
  std::vector<double> log_trans_;   // [K*K]
  std::vector<double> log_emit_;    // [K*(V+1)], last column = unknown
  double alpha_ = 0.0;
  UnkPolicy unk_policy_ = UnkPolicy::kReservedColumn;
};

// Count-ratio estimation with additive smoothing over a BMES corpus.
HmmModel train_hmm(const std::vector<TaggedSentence>& corpus,
                   double smoothing_alpha);

// Max-probability state path; ties prefer the smaller state index.
std::vector<std::string> viterbi_decode(const HmmModel& model,
                                        const std::vector<std::string>& units);

// Grapheme split -> Viterbi -> BMES decode with repair.
SegmentedSentence segment_text(const HmmModel& model,
                               const std::string& sentence);

// Segments each sentence; output order matches input order. Sentences are
// independent so the loop fans out across threads.
std::vector<SegmentedSentence> segment_corpus(
    const HmmModel& model, const std::vector<std::string>& sentences);

}  // namespace nlpkit

#endif  // NLPKIT_HMM_HPP_
