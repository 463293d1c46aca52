#ifndef NLPKIT_SEQMODEL_HPP_
#define NLPKIT_SEQMODEL_HPP_

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "nlpkit/corpus.hpp"

namespace nlpkit {

// A window template reads unit unigrams/bigrams at fixed offsets around
// the current position; out-of-range offsets read boundary sentinels.
struct FeatureTemplate {
  std::string id;
  std::vector<int> offsets;  // one offset = unigram, two = bigram
};

// Unigrams at -2..+2 and bigrams at (-1,0) and (0,+1).
std::vector<FeatureTemplate> default_templates();

std::vector<std::string> extract_features(
    const std::vector<std::string>& units, std::size_t pos,
    const std::vector<FeatureTemplate>& templates);

struct TrainParams {
  double learning_rate = 0.5;
  std::size_t epochs = 50;
  double l2 = 0.0;
  std::uint64_t seed = 1;
};

// Log-linear per-position classifier: p(y|x) = exp(sum_i w_{i,y} f_i) / Z.
class MaxEntModel {
 public:
  MaxEntModel() = default;
  explicit MaxEntModel(std::vector<std::string> labels,
                       std::vector<FeatureTemplate> templates = default_templates())
      : labels_(std::move(labels)), templates_(std::move(templates)) {}

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<FeatureTemplate>& templates() const { return templates_; }

  double weight(const std::string& feature, std::size_t label) const;
  void add_weight(const std::string& feature, std::size_t label, double delta);

  const std::unordered_map<std::string, std::vector<double>>& weights() const {
    return weights_;
  }
  std::unordered_map<std::string, std::vector<double>>& mutable_weights() {
    return weights_;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<FeatureTemplate> templates_;
  // feature id -> one weight per label; missing entries read as zero.
  std::unordered_map<std::string, std::vector<double>> weights_;
};

std::vector<double> maxent_distribution(const MaxEntModel& model,
                                        const std::vector<std::string>& features);

// Linear-chain CRF: emission features per position plus a position-
// independent label transition table.
class CrfModel {
 public:
  CrfModel() = default;
  explicit CrfModel(std::vector<std::string> labels,
                    std::vector<FeatureTemplate> templates = default_templates());

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<FeatureTemplate>& templates() const { return templates_; }
  std::size_t label_count() const { return labels_.size(); }

  double emission_weight(const std::string& feature, std::size_t label) const;
  void add_emission_weight(const std::string& feature, std::size_t label,
                           double delta);
  double transition(std::size_t from, std::size_t to) const {
    return transitions_[from * labels_.size() + to];
  }
  void add_transition(std::size_t from, std::size_t to, double delta) {
    transitions_[from * labels_.size() + to] += delta;
  }

  // Per-position emission scores for a unit sequence: [len x K].
  std::vector<std::vector<double>> emission_scores(
      const std::vector<std::string>& units) const;

  const std::unordered_map<std::string, std::vector<double>>& emissions() const {
    return emissions_;
  }
  std::unordered_map<std::string, std::vector<double>>& mutable_emissions() {
    return emissions_;
  }
  const std::vector<double>& transition_table() const { return transitions_; }
  std::vector<double>& mutable_transition_table() { return transitions_; }

 private:
  std::vector<std::string> labels_;
  std::vector<FeatureTemplate> templates_;
  std::unordered_map<std::string, std::vector<double>> emissions_;
  std::vector<double> transitions_;  // [K*K]
};

// log sum over all label paths of exp(path score), forward recursion.
double crf_log_partition(const CrfModel& model,
                         const std::vector<std::string>& units);

// Path score of a fixed labeling: sum of emissions plus transitions.
double crf_path_score(const CrfModel& model,
                      const std::vector<std::string>& units,
                      const std::vector<std::size_t>& path);

// Argmax path; ties prefer the smaller label index.
std::vector<std::string> crf_decode(const CrfModel& model,
                                    const std::vector<std::string>& units);

// Same decoder over externally produced emission scores [len x K].
std::vector<std::size_t> crf_decode_from_scores(
    const std::vector<std::vector<double>>& emissions,
    const std::vector<double>& transitions, std::size_t label_count);

enum class SequenceModelKind { kMaxEnt, kCrf };

// Full-batch gradient ascent. MaxEnt maximizes per-position conditional
// log-likelihood; CRF maximizes sequence log-likelihood with expected
// counts from forward-backward. Deterministic for a fixed seed.
MaxEntModel train_maxent(const std::vector<TaggedSentence>& corpus,
                         const TrainParams& params,
                         std::vector<FeatureTemplate> templates = default_templates());

CrfModel train_crf(const std::vector<TaggedSentence>& corpus,
                   const TrainParams& params,
                   std::vector<FeatureTemplate> templates = default_templates());

// Mean per-position conditional log-likelihood (maxent) on a corpus.
double maxent_log_likelihood(const MaxEntModel& model,
                             const std::vector<TaggedSentence>& corpus);

// Total sequence log-likelihood (crf) minus nothing; regularizer excluded.
double crf_log_likelihood(const CrfModel& model,
                          const std::vector<TaggedSentence>& corpus);

// One full-batch CRF gradient of the total sequence log-likelihood:
// observed minus expected feature counts, no regularizer. Exposed for
// gradient verification.
struct CrfGradient {
  std::unordered_map<std::string, std::vector<double>> emissions;
  std::vector<double> transitions;
};
CrfGradient crf_gradient(const CrfModel& model,
                         const std::vector<TaggedSentence>& corpus);

// Per-position argmax labeling with a maxent model.
std::vector<std::string> maxent_decode(const MaxEntModel& model,
                                       const std::vector<std::string>& units);

}  // namespace nlpkit

#endif  // NLPKIT_SEQMODEL_HPP_
