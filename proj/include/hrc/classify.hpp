#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hrc/gateway.hpp"
#include "hrc/util.hpp"

namespace hrc::classify {

/// The five input sections of the instruction format plus the candidate.
struct ClassifierExample {
  std::string profile;
  std::string big5;
  std::string prev_intentions;
  std::string prev_tasks;
  std::string current_time;
  int hour_slot = 0;
  std::string candidate;
  bool label = false;

  Json to_json() const;
  static ClassifierExample from_json(const Json& j);
};

/// Instruction-format text (template `classifier_instruction`). With
/// `with_label` false the response line is left empty for inference.
std::string instruction_text(const ClassifierExample& ex, bool with_label = true);

struct Prediction {
  bool label = true;
  double score = 0.5;
};

/// Which context blocks the featurizer may use.
struct FeatureMask {
  bool profile = true;
  bool big5 = true;
  bool history = true;

  static FeatureMask all() { return {}; }
  static FeatureMask time_only() { return {false, false, false}; }
};

using SparseVec = std::vector<std::pair<std::uint32_t, double>>;

struct FeatureConfig {
  FeatureMask mask;
  /// Scale applied to the candidate-vs-context similarity features.
  double similarity_scale = 4.0;
  /// Candidate embedding crossed with the hour one-hot.
  bool hour_cross = true;

  Json to_json() const;
  static FeatureConfig from_json(const Json& j);
};

/// Layout: profile | big5 | intentions | tasks | candidate | hour one-hot |
/// similarities (3 joined, 2 best-item cosine, 2 best-item word share) |
/// candidate x hour | bias. Empty sections give zero blocks.
class Featurizer {
 public:
  Featurizer(gw::Gateway& g, FeatureConfig cfg);
  SparseVec featurize(const ClassifierExample& ex) const;
  std::size_t dim() const;
  int embed_dim() const { return d_; }
  const FeatureConfig& config() const { return cfg_; }

  /// Offsets of each block, exposed for tests and inspection.
  struct Layout {
    std::size_t profile, big5, intentions, tasks, candidate, hour, sims, cross, bias, total;
  };
  Layout layout() const;
  static constexpr std::size_t kSims = 7;

 private:
  gw::Vec embed_or_zero(const std::string& s) const;
  std::pair<double, double> best_item_match(const gw::Vec& cand, const std::string& candidate,
                                            const std::string& joined) const;
  gw::Gateway& g_;
  FeatureConfig cfg_;
  int d_;
};

struct TrainConfig {
  double lr = 0.1;
  int epochs = 200;
  double l2 = 1e-4;
  std::uint64_t seed = 0;
  double threshold = 0.5;
  /// Inverse class-frequency example weights.
  bool balance = true;

  Json to_json() const;
  static TrainConfig from_json(const Json& j);
};

/// Logistic-regression weights. An empty weight vector means untrained.
struct LinearModel {
  std::vector<double> w;
  double threshold = 0.5;

  double score(const SparseVec& x) const;
  Prediction predict(const SparseVec& x) const;
  Json to_json() const;
  static LinearModel from_json(const Json& j);
};

/// Seeded SGD with lazily applied L2 shrinkage.
LinearModel train_logistic(const std::vector<SparseVec>& X, const std::vector<bool>& y,
                           std::size_t dim, const TrainConfig& cfg);

/// Common interface for the reference learner and a remote model.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual Prediction predict(const ClassifierExample& ex) = 0;
  /// Replaces the model with one fitted on `examples`.
  virtual void train(const std::vector<ClassifierExample>& examples) = 0;
  virtual bool trained() const = 0;
  virtual Json state() const = 0;
  virtual std::string kind() const = 0;
};

class ReferenceClassifier final : public Classifier {
 public:
  ReferenceClassifier(gw::Gateway& g, FeatureConfig fcfg = {}, TrainConfig tcfg = {});

  Prediction predict(const ClassifierExample& ex) override;
  void train(const std::vector<ClassifierExample>& examples) override;
  bool trained() const override { return !model_.w.empty(); }
  Json state() const override;
  std::string kind() const override { return "reference"; }

  void load_state(const Json& j);
  const LinearModel& model() const { return model_; }
  const Featurizer& featurizer() const { return feat_; }

 private:
  Featurizer feat_;
  TrainConfig tcfg_;
  LinearModel model_;
};

/// Asks a chat backend (template `classifier_instruction`) for Yes/No.
/// Training only records the examples; fitting happens outside this process.
class RemoteClassifier final : public Classifier {
 public:
  explicit RemoteClassifier(gw::Gateway& g) : g_(g) {}
  Prediction predict(const ClassifierExample& ex) override;
  void train(const std::vector<ClassifierExample>& examples) override { seen_ = examples.size(); }
  bool trained() const override { return seen_ > 0; }
  Json state() const override { return Json{{"kind", kind()}, {"examples_seen", seen_}}; }
  std::string kind() const override { return "remote"; }

 private:
  gw::Gateway& g_;
  std::size_t seen_ = 0;
};

/// Writes one instruction-format record per line: {"text": ..., "label": "Yes"|"No"}.
void export_examples(const std::filesystem::path& file, const std::vector<ClassifierExample>& ex);

double accuracy(Classifier& c, const std::vector<ClassifierExample>& ex);

}  // namespace hrc::classify
