#include "nlpkit/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <map>
#include <stdexcept>

#include "nlpkit/utf8.hpp"

namespace nlpkit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

}  // namespace

PoissonMleResult mle_poisson(const std::vector<std::size_t>& samples) {
  if (samples.empty()) throw std::invalid_argument("empty sample list");
  double sum = 0.0;
  for (std::size_t x : samples) sum += static_cast<double>(x);
  PoissonMleResult result;
  result.n = samples.size();
  result.phi = sum / static_cast<double>(samples.size());
  result.log_likelihood = poisson_log_likelihood(samples, result.phi);
  return result;
}

double poisson_log_likelihood(const std::vector<std::size_t>& samples,
                              double phi) {
  if (phi < 0.0) throw std::invalid_argument("phi must be nonnegative");
  double sum_x = 0.0;
  double log_fact = 0.0;
  for (std::size_t x : samples) {
    sum_x += static_cast<double>(x);
    log_fact += std::lgamma(static_cast<double>(x) + 1.0);
  }
  if (phi == 0.0) {
    if (sum_x > 0.0) {
      throw std::invalid_argument("phi == 0 with nonzero samples");
    }
    return 0.0;  // -n*0 + 0*ln(0) - 0 by the limit convention
  }
  const double n = static_cast<double>(samples.size());
  return -n * phi + sum_x * std::log(phi) - log_fact;
}

HmmModel::HmmModel(std::vector<std::string> states,
                   std::vector<std::string> vocab, std::vector<double> log_pi,
                   std::vector<double> log_trans, std::vector<double> log_emit,
                   double smoothing_alpha, UnkPolicy unk_policy)
    : states_(std::move(states)),
      vocab_(std::move(vocab)),
      log_pi_(std::move(log_pi)),
      log_trans_(std::move(log_trans)),
      log_emit_(std::move(log_emit)),
      alpha_(smoothing_alpha),
      unk_policy_(unk_policy) {
  const std::size_t k = states_.size();
  if (log_pi_.size() != k || log_trans_.size() != k * k ||
      log_emit_.size() != k * (vocab_.size() + 1)) {
    throw std::invalid_argument("table shape mismatch");
  }
  if (!std::is_sorted(vocab_.begin(), vocab_.end())) {
    throw std::invalid_argument("vocabulary must be sorted");
  }
}

double HmmModel::log_emit(std::size_t state, const std::string& unit) const {
  const std::size_t cols = vocab_.size() + 1;
  auto it = std::lower_bound(vocab_.begin(), vocab_.end(), unit);
  if (it != vocab_.end() && *it == unit) {
    return log_emit_[state * cols +
                     static_cast<std::size_t>(it - vocab_.begin())];
  }
  return log_emit_[state * cols + vocab_.size()];  // unknown column
}

HmmModel train_hmm(const std::vector<TaggedSentence>& corpus,
                   double smoothing_alpha) {
  if (corpus.empty()) throw std::invalid_argument("empty corpus");
  if (smoothing_alpha < 0.0) {
    throw std::invalid_argument("smoothing alpha must be nonnegative");
  }
  const TagScheme scheme = TagScheme::bmes();
  const std::size_t k = scheme.labels.size();
  auto state_index = [&](const std::string& label) -> std::size_t {
    for (std::size_t i = 0; i < k; ++i) {
      if (scheme.labels[i] == label) return i;
    }
    throw std::invalid_argument("label `" + label + "` outside BMES");
  };

  std::map<std::string, std::size_t> vocab_ids;
  for (const TaggedSentence& sent : corpus) {
    if (sent.units.size() != sent.labels.size()) {
      throw std::invalid_argument("unit/label length mismatch");
    }
    for (const std::string& u : sent.units) {
      vocab_ids.emplace(u, 0);
    }
  }
  std::vector<std::string> vocab;
  vocab.reserve(vocab_ids.size());
  for (auto& [unit, id] : vocab_ids) {
    id = vocab.size();
    vocab.push_back(unit);
  }
  const std::size_t v = vocab.size();

  std::vector<double> pi_count(k, 0.0);
  std::vector<double> trans_count(k * k, 0.0);
  std::vector<double> emit_count(k * (v + 1), 0.0);

  for (const TaggedSentence& sent : corpus) {
    if (sent.units.empty()) continue;
    std::size_t prev = 0;
    for (std::size_t i = 0; i < sent.units.size(); ++i) {
      const std::size_t s = state_index(sent.labels[i]);
      if (i == 0) {
        pi_count[s] += 1.0;
      } else {
        trans_count[prev * k + s] += 1.0;
      }
      emit_count[s * (v + 1) + vocab_ids[sent.units[i]]] += 1.0;
      prev = s;
    }
  }

  const double alpha = smoothing_alpha;
  std::vector<double> log_pi(k);
  std::vector<double> log_trans(k * k);
  std::vector<double> log_emit(k * (v + 1));

  double pi_total = 0.0;
  for (double c : pi_count) pi_total += c;
  for (std::size_t s = 0; s < k; ++s) {
    log_pi[s] = safe_log((pi_count[s] + alpha) /
                         (pi_total + alpha * static_cast<double>(k)));
  }
  for (std::size_t from = 0; from < k; ++from) {
    double row = 0.0;
    for (std::size_t to = 0; to < k; ++to) row += trans_count[from * k + to];
    for (std::size_t to = 0; to < k; ++to) {
      log_trans[from * k + to] =
          safe_log((trans_count[from * k + to] + alpha) /
                   (row + alpha * static_cast<double>(k)));
    }
  }
  // Emission rows span the vocabulary plus the reserved unknown column.
  for (std::size_t s = 0; s < k; ++s) {
    double row = 0.0;
    for (std::size_t j = 0; j <= v; ++j) row += emit_count[s * (v + 1) + j];
    const double denom = row + alpha * static_cast<double>(v + 1);
    for (std::size_t j = 0; j <= v; ++j) {
      log_emit[s * (v + 1) + j] =
          safe_log((emit_count[s * (v + 1) + j] + alpha) / denom);
    }
  }

  return HmmModel(scheme.labels, std::move(vocab), std::move(log_pi),
                  std::move(log_trans), std::move(log_emit), alpha,
                  UnkPolicy::kReservedColumn);
}

std::vector<std::string> viterbi_decode(
    const HmmModel& model, const std::vector<std::string>& units) {
  if (units.empty()) throw std::invalid_argument("empty unit sequence");
  const std::size_t k = model.states().size();
  const std::size_t len = units.size();

  std::vector<double> score(len * k, kNegInf);
  std::vector<std::size_t> back(len * k, 0);

  for (std::size_t s = 0; s < k; ++s) {
    score[s] = model.log_pi(s) + model.log_emit(s, units[0]);
  }
  for (std::size_t t = 1; t < len; ++t) {
    for (std::size_t s = 0; s < k; ++s) {
      double best = kNegInf;
      std::size_t best_prev = 0;
      for (std::size_t p = 0; p < k; ++p) {
        const double cand = score[(t - 1) * k + p] + model.log_trans(p, s);
        if (cand > best) {  // ties keep the smaller p
          best = cand;
          best_prev = p;
        }
      }
      score[t * k + s] = best + model.log_emit(s, units[t]);
      back[t * k + s] = best_prev;
    }
  }

  std::size_t best_last = 0;
  for (std::size_t s = 1; s < k; ++s) {
    if (score[(len - 1) * k + s] > score[(len - 1) * k + best_last]) {
      best_last = s;
    }
  }
  std::vector<std::string> labels(len);
  std::size_t cur = best_last;
  for (std::size_t t = len; t-- > 0;) {
    labels[t] = model.states()[cur];
    cur = back[t * k + cur];
  }
  return labels;
}

SegmentedSentence segment_text(const HmmModel& model,
                               const std::string& sentence) {
  const std::vector<std::string> units = split_graphemes(sentence);
  if (units.empty()) throw std::invalid_argument("empty input sentence");
  TaggedSentence tagged;
  tagged.units = units;
  tagged.labels = viterbi_decode(model, units);
  return decode_bmes(tagged);
}

std::vector<SegmentedSentence> segment_corpus(
    const HmmModel& model, const std::vector<std::string>& sentences) {
  std::vector<SegmentedSentence> out(sentences.size());
  const std::int64_t count = static_cast<std::int64_t>(sentences.size());
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] =
          segment_text(model, sentences[static_cast<std::size_t>(i)]);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace nlpkit
