#include "nlpkit/seqmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nlpkit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr char kJoin = '\x1f';

double log_sum_exp(const std::vector<double>& xs) {
  double m = kNegInf;
  for (double x : xs) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double x : xs) sum += std::exp(x - m);
  return m + std::log(sum);
}

std::string unit_at(const std::vector<std::string>& units, std::size_t pos,
                    int offset) {
  const long long idx = static_cast<long long>(pos) + offset;
  if (idx < 0) return "<BOS>";
  if (idx >= static_cast<long long>(units.size())) return "<EOS>";
  return units[static_cast<std::size_t>(idx)];
}

std::size_t label_index(const std::vector<std::string>& labels,
                        const std::string& label) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return i;
  }
  throw std::invalid_argument("label `" + label + "` not in model labels");
}

std::vector<std::string> collect_labels(
    const std::vector<TaggedSentence>& corpus) {
  std::vector<std::string> labels;
  for (const TaggedSentence& sent : corpus) {
    if (sent.units.size() != sent.labels.size()) {
      throw std::invalid_argument("unit/label length mismatch");
    }
    for (const std::string& l : sent.labels) {
      if (std::find(labels.begin(), labels.end(), l) == labels.end()) {
        labels.push_back(l);
      }
    }
  }
  std::sort(labels.begin(), labels.end());
  return labels;
}

}  // namespace

std::vector<FeatureTemplate> default_templates() {
  std::vector<FeatureTemplate> templates;
  for (int o = -2; o <= 2; ++o) {
    templates.push_back({"u" + std::to_string(o), {o}});
  }
  templates.push_back({"b-1:0", {-1, 0}});
  templates.push_back({"b0:1", {0, 1}});
  return templates;
}

std::vector<std::string> extract_features(
    const std::vector<std::string>& units, std::size_t pos,
    const std::vector<FeatureTemplate>& templates) {
  if (pos >= units.size()) throw std::out_of_range("position out of range");
  std::vector<std::string> features;
  features.reserve(templates.size());
  for (const FeatureTemplate& t : templates) {
    std::string value;
    for (std::size_t i = 0; i < t.offsets.size(); ++i) {
      if (i > 0) value += kJoin;
      value += unit_at(units, pos, t.offsets[i]);
    }
    features.push_back(t.id + "=" + value);
  }
  return features;
}

double MaxEntModel::weight(const std::string& feature,
                           std::size_t label) const {
  auto it = weights_.find(feature);
  if (it == weights_.end()) return 0.0;
  return it->second[label];
}

void MaxEntModel::add_weight(const std::string& feature, std::size_t label,
                             double delta) {
  auto [it, inserted] = weights_.try_emplace(
      feature, std::vector<double>(labels_.size(), 0.0));
  it->second[label] += delta;
}

std::vector<double> maxent_distribution(
    const MaxEntModel& model, const std::vector<std::string>& features) {
  const std::size_t k = model.labels().size();
  std::vector<double> scores(k, 0.0);
  for (const std::string& f : features) {
    auto it = model.weights().find(f);
    if (it == model.weights().end()) continue;
    for (std::size_t y = 0; y < k; ++y) scores[y] += it->second[y];
  }
  double m = *std::max_element(scores.begin(), scores.end());
  double z = 0.0;
  for (std::size_t y = 0; y < k; ++y) {
    scores[y] = std::exp(scores[y] - m);
    z += scores[y];
  }
  for (std::size_t y = 0; y < k; ++y) scores[y] /= z;
  return scores;
}

CrfModel::CrfModel(std::vector<std::string> labels,
                   std::vector<FeatureTemplate> templates)
    : labels_(std::move(labels)),
      templates_(std::move(templates)),
      transitions_(labels_.size() * labels_.size(), 0.0) {}

double CrfModel::emission_weight(const std::string& feature,
                                 std::size_t label) const {
  auto it = emissions_.find(feature);
  if (it == emissions_.end()) return 0.0;
  return it->second[label];
}

void CrfModel::add_emission_weight(const std::string& feature,
                                   std::size_t label, double delta) {
  auto [it, inserted] = emissions_.try_emplace(
      feature, std::vector<double>(labels_.size(), 0.0));
  it->second[label] += delta;
}

std::vector<std::vector<double>> CrfModel::emission_scores(
    const std::vector<std::string>& units) const {
  std::vector<std::vector<double>> scores(
      units.size(), std::vector<double>(labels_.size(), 0.0));
  for (std::size_t t = 0; t < units.size(); ++t) {
    for (const std::string& f : extract_features(units, t, templates_)) {
      auto it = emissions_.find(f);
      if (it == emissions_.end()) continue;
      for (std::size_t y = 0; y < labels_.size(); ++y) {
        scores[t][y] += it->second[y];
      }
    }
  }
  return scores;
}

double crf_log_partition(const CrfModel& model,
                         const std::vector<std::string>& units) {
  if (units.empty()) throw std::invalid_argument("empty unit sequence");
  const std::size_t k = model.label_count();
  const auto em = model.emission_scores(units);
  std::vector<double> alpha = em[0];
  std::vector<double> next(k);
  std::vector<double> terms(k);
  for (std::size_t t = 1; t < units.size(); ++t) {
    for (std::size_t y = 0; y < k; ++y) {
      for (std::size_t p = 0; p < k; ++p) {
        terms[p] = alpha[p] + model.transition(p, y);
      }
      next[y] = log_sum_exp(terms) + em[t][y];
    }
    alpha = next;
  }
  return log_sum_exp(alpha);
}

double crf_path_score(const CrfModel& model,
                      const std::vector<std::string>& units,
                      const std::vector<std::size_t>& path) {
  if (units.size() != path.size()) {
    throw std::invalid_argument("path length mismatch");
  }
  const auto em = model.emission_scores(units);
  double score = 0.0;
  for (std::size_t t = 0; t < path.size(); ++t) {
    score += em[t][path[t]];
    if (t > 0) score += model.transition(path[t - 1], path[t]);
  }
  return score;
}

std::vector<std::size_t> crf_decode_from_scores(
    const std::vector<std::vector<double>>& emissions,
    const std::vector<double>& transitions, std::size_t label_count) {
  if (emissions.empty()) throw std::invalid_argument("empty emission matrix");
  const std::size_t k = label_count;
  if (transitions.size() != k * k) {
    throw std::invalid_argument("transition table shape mismatch");
  }
  for (const auto& row : emissions) {
    if (row.size() != k) {
      throw std::invalid_argument("emission row shape mismatch");
    }
  }
  const std::size_t len = emissions.size();
  std::vector<double> score(len * k, kNegInf);
  std::vector<std::size_t> back(len * k, 0);
  for (std::size_t y = 0; y < k; ++y) score[y] = emissions[0][y];
  for (std::size_t t = 1; t < len; ++t) {
    for (std::size_t y = 0; y < k; ++y) {
      double best = kNegInf;
      std::size_t best_prev = 0;
      for (std::size_t p = 0; p < k; ++p) {
        const double cand = score[(t - 1) * k + p] + transitions[p * k + y];
        if (cand > best) {  // ties keep the smaller p
          best = cand;
          best_prev = p;
        }
      }
      score[t * k + y] = best + emissions[t][y];
      back[t * k + y] = best_prev;
    }
  }
  std::size_t best_last = 0;
  for (std::size_t y = 1; y < k; ++y) {
    if (score[(len - 1) * k + y] > score[(len - 1) * k + best_last]) {
      best_last = y;
    }
  }
  std::vector<std::size_t> path(len);
  std::size_t cur = best_last;
  for (std::size_t t = len; t-- > 0;) {
    path[t] = cur;
    cur = back[t * k + cur];
  }
  return path;
}

std::vector<std::string> crf_decode(const CrfModel& model,
                                    const std::vector<std::string>& units) {
  if (units.empty()) throw std::invalid_argument("empty unit sequence");
  const auto path = crf_decode_from_scores(
      model.emission_scores(units), model.transition_table(),
      model.label_count());
  std::vector<std::string> labels(path.size());
  for (std::size_t t = 0; t < path.size(); ++t) {
    labels[t] = model.labels()[path[t]];
  }
  return labels;
}

namespace {

// Forward-backward tables in log domain for one sentence.
struct ForwardBackward {
  std::vector<std::vector<double>> alpha;
  std::vector<std::vector<double>> beta;
  double log_z = 0.0;
};

ForwardBackward run_forward_backward(
    const CrfModel& model, const std::vector<std::vector<double>>& em) {
  const std::size_t len = em.size();
  const std::size_t k = model.label_count();
  ForwardBackward fb;
  fb.alpha.assign(len, std::vector<double>(k, kNegInf));
  fb.beta.assign(len, std::vector<double>(k, 0.0));
  fb.alpha[0] = em[0];
  std::vector<double> terms(k);
  for (std::size_t t = 1; t < len; ++t) {
    for (std::size_t y = 0; y < k; ++y) {
      for (std::size_t p = 0; p < k; ++p) {
        terms[p] = fb.alpha[t - 1][p] + model.transition(p, y);
      }
      fb.alpha[t][y] = log_sum_exp(terms) + em[t][y];
    }
  }
  for (std::size_t t = len - 1; t-- > 0;) {
    for (std::size_t y = 0; y < k; ++y) {
      for (std::size_t n = 0; n < k; ++n) {
        terms[n] = model.transition(y, n) + em[t + 1][n] + fb.beta[t + 1][n];
      }
      fb.beta[t][y] = log_sum_exp(terms);
    }
  }
  fb.log_z = log_sum_exp(fb.alpha[len - 1]);
  return fb;
}

}  // namespace

double crf_log_likelihood(const CrfModel& model,
                          const std::vector<TaggedSentence>& corpus) {
  double total = 0.0;
  for (const TaggedSentence& sent : corpus) {
    std::vector<std::size_t> path(sent.labels.size());
    for (std::size_t t = 0; t < sent.labels.size(); ++t) {
      path[t] = label_index(model.labels(), sent.labels[t]);
    }
    total += crf_path_score(model, sent.units, path) -
             crf_log_partition(model, sent.units);
  }
  return total;
}

CrfGradient crf_gradient(const CrfModel& model,
                         const std::vector<TaggedSentence>& corpus) {
  const std::size_t k = model.label_count();
  CrfGradient grad;
  grad.transitions.assign(k * k, 0.0);

  auto bump = [&](const std::string& feature, std::size_t y, double delta) {
    auto [it, inserted] =
        grad.emissions.try_emplace(feature, std::vector<double>(k, 0.0));
    it->second[y] += delta;
  };

  for (const TaggedSentence& sent : corpus) {
    const std::size_t len = sent.units.size();
    if (len == 0) continue;
    std::vector<std::vector<std::string>> features(len);
    for (std::size_t t = 0; t < len; ++t) {
      features[t] = extract_features(sent.units, t, model.templates());
    }
    const auto em = model.emission_scores(sent.units);
    const ForwardBackward fb = run_forward_backward(model, em);

    // Observed counts.
    std::size_t prev = 0;
    for (std::size_t t = 0; t < len; ++t) {
      const std::size_t y = label_index(model.labels(), sent.labels[t]);
      for (const std::string& f : features[t]) bump(f, y, 1.0);
      if (t > 0) grad.transitions[prev * k + y] += 1.0;
      prev = y;
    }

    // Expected counts from marginals.
    for (std::size_t t = 0; t < len; ++t) {
      for (std::size_t y = 0; y < k; ++y) {
        const double gamma =
            std::exp(fb.alpha[t][y] + fb.beta[t][y] - fb.log_z);
        if (gamma == 0.0) continue;
        for (const std::string& f : features[t]) bump(f, y, -gamma);
      }
    }
    for (std::size_t t = 1; t < len; ++t) {
      for (std::size_t p = 0; p < k; ++p) {
        for (std::size_t y = 0; y < k; ++y) {
          const double xi =
              std::exp(fb.alpha[t - 1][p] + model.transition(p, y) +
                       em[t][y] + fb.beta[t][y] - fb.log_z);
          grad.transitions[p * k + y] -= xi;
        }
      }
    }
  }
  return grad;
}

CrfModel train_crf(const std::vector<TaggedSentence>& corpus,
                   const TrainParams& params,
                   std::vector<FeatureTemplate> templates) {
  if (corpus.empty()) throw std::invalid_argument("empty corpus");
  CrfModel model(collect_labels(corpus), std::move(templates));
  const std::size_t k = model.label_count();
  const double scale = 1.0 / static_cast<double>(corpus.size());

  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    const CrfGradient grad = crf_gradient(model, corpus);
    for (const auto& [feature, g] : grad.emissions) {
      for (std::size_t y = 0; y < k; ++y) {
        const double current = model.emission_weight(feature, y);
        const double step = g[y] * scale - params.l2 * current;
        if (!std::isfinite(step)) {
          throw std::runtime_error("non-finite gradient at epoch " +
                                   std::to_string(epoch) + " feature `" +
                                   feature + "`");
        }
        model.add_emission_weight(feature, y, params.learning_rate * step);
      }
    }
    for (std::size_t i = 0; i < k * k; ++i) {
      const double step = grad.transitions[i] * scale -
                          params.l2 * model.transition_table()[i];
      if (!std::isfinite(step)) {
        throw std::runtime_error("non-finite transition gradient at epoch " +
                                 std::to_string(epoch));
      }
      model.mutable_transition_table()[i] += params.learning_rate * step;
    }
  }
  return model;
}

double maxent_log_likelihood(const MaxEntModel& model,
                             const std::vector<TaggedSentence>& corpus) {
  double total = 0.0;
  std::size_t positions = 0;
  for (const TaggedSentence& sent : corpus) {
    for (std::size_t t = 0; t < sent.units.size(); ++t) {
      const auto features = extract_features(sent.units, t, model.templates());
      const auto dist = maxent_distribution(model, features);
      const std::size_t y = label_index(model.labels(), sent.labels[t]);
      total += std::log(std::max(dist[y], 1e-300));
      ++positions;
    }
  }
  return positions == 0 ? 0.0 : total / static_cast<double>(positions);
}

MaxEntModel train_maxent(const std::vector<TaggedSentence>& corpus,
                         const TrainParams& params,
                         std::vector<FeatureTemplate> templates) {
  if (corpus.empty()) throw std::invalid_argument("empty corpus");
  MaxEntModel model(collect_labels(corpus), std::move(templates));
  const std::size_t k = model.labels().size();

  // Feature extraction is position-local, so cache it once.
  struct Example {
    std::vector<std::string> features;
    std::size_t label;
  };
  std::vector<Example> examples;
  for (const TaggedSentence& sent : corpus) {
    for (std::size_t t = 0; t < sent.units.size(); ++t) {
      examples.push_back({extract_features(sent.units, t, model.templates()),
                          label_index(model.labels(), sent.labels[t])});
    }
  }
  if (examples.empty()) throw std::invalid_argument("corpus has no units");
  const double scale = 1.0 / static_cast<double>(examples.size());

  std::unordered_map<std::string, std::vector<double>> grad;
  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    grad.clear();
    auto bump = [&](const std::string& f, std::size_t y, double delta) {
      auto [it, inserted] =
          grad.try_emplace(f, std::vector<double>(k, 0.0));
      it->second[y] += delta;
    };
    for (const Example& ex : examples) {
      const auto dist = maxent_distribution(model, ex.features);
      for (const std::string& f : ex.features) {
        bump(f, ex.label, 1.0);
        for (std::size_t y = 0; y < k; ++y) bump(f, y, -dist[y]);
      }
    }
    for (const auto& [feature, g] : grad) {
      for (std::size_t y = 0; y < k; ++y) {
        const double current = model.weight(feature, y);
        const double step = g[y] * scale - params.l2 * current;
        if (!std::isfinite(step)) {
          throw std::runtime_error("non-finite gradient at epoch " +
                                   std::to_string(epoch) + " feature `" +
                                   feature + "`");
        }
        model.add_weight(feature, y, params.learning_rate * step);
      }
    }
  }
  return model;
}

std::vector<std::string> maxent_decode(const MaxEntModel& model,
                                       const std::vector<std::string>& units) {
  std::vector<std::string> labels(units.size());
  for (std::size_t t = 0; t < units.size(); ++t) {
    const auto dist = maxent_distribution(
        model, extract_features(units, t, model.templates()));
    std::size_t best = 0;
    for (std::size_t y = 1; y < dist.size(); ++y) {
      if (dist[y] > dist[best]) best = y;
    }
    labels[t] = model.labels()[best];
  }
  return labels;
}

}  // namespace nlpkit
