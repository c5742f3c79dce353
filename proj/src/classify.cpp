#include "hrc/classify.hpp"

#include <cmath>
#include <random>
#include <set>

#include "hrc/error.hpp"
#include "hrc/prompts.hpp"
#include "hrc/world.hpp"

namespace hrc::classify {

Json ClassifierExample::to_json() const {
  return Json{{"profile", profile},         {"big5", big5},
              {"prev_intentions", prev_intentions}, {"prev_tasks", prev_tasks},
              {"current_time", current_time}, {"hour_slot", hour_slot},
              {"candidate", candidate},     {"label", label}};
}

ClassifierExample ClassifierExample::from_json(const Json& j) {
  ClassifierExample e;
  e.profile = j.value("profile", "");
  e.big5 = j.value("big5", "");
  e.prev_intentions = j.value("prev_intentions", "");
  e.prev_tasks = j.value("prev_tasks", "");
  e.current_time = j.value("current_time", "");
  e.hour_slot = j.value("hour_slot", 0);
  e.candidate = j.at("candidate").get<std::string>();
  e.label = j.value("label", false);
  return e;
}

std::string instruction_text(const ClassifierExample& ex, bool with_label) {
  return prompts::render("classifier_instruction",
                         {{"candidate", ex.candidate},
                          {"profile", ex.profile},
                          {"big5", ex.big5},
                          {"prev_intentions", ex.prev_intentions},
                          {"prev_tasks", ex.prev_tasks},
                          {"time", ex.current_time},
                          {"label", with_label ? (ex.label ? "Yes" : "No") : ""}});
}

// ------------------------------------------------------------- features

Json FeatureConfig::to_json() const {
  return Json{{"profile", mask.profile},
              {"big5", mask.big5},
              {"history", mask.history},
              {"similarity_scale", similarity_scale},
              {"hour_cross", hour_cross}};
}

FeatureConfig FeatureConfig::from_json(const Json& j) {
  FeatureConfig c;
  c.mask.profile = j.value("profile", true);
  c.mask.big5 = j.value("big5", true);
  c.mask.history = j.value("history", true);
  c.similarity_scale = j.value("similarity_scale", c.similarity_scale);
  c.hour_cross = j.value("hour_cross", c.hour_cross);
  return c;
}

Featurizer::Featurizer(gw::Gateway& g, FeatureConfig cfg)
    : g_(g), cfg_(cfg), d_(static_cast<int>(g.embed("dimension probe").size())) {}

Featurizer::Layout Featurizer::layout() const {
  Layout l{};
  auto d = static_cast<std::size_t>(d_);
  constexpr std::size_t H = world::DayClock::kSlots;
  l.profile = 0;
  l.big5 = d;
  l.intentions = 2 * d;
  l.tasks = 3 * d;
  l.candidate = 4 * d;
  l.hour = 5 * d;
  l.sims = l.hour + H;
  l.cross = l.sims + kSims;
  l.bias = l.cross + (cfg_.hour_cross ? d * H : 0);
  l.total = l.bias + 1;
  return l;
}

std::size_t Featurizer::dim() const { return layout().total; }

gw::Vec Featurizer::embed_or_zero(const std::string& s) const {
  if (text::trim(s).empty()) return gw::Vec(static_cast<std::size_t>(d_), 0.0);
  return g_.embed(s);
}

// Retrieved history arrives as "label: text; label: text". Scoring the best
// single item keeps one strongly related memory from being averaged away.
// Returns the best cosine and the best share of candidate content words
// found in one item.
std::pair<double, double> Featurizer::best_item_match(const gw::Vec& cand, const std::string& candidate,
                                                      const std::string& joined) const {
  std::set<std::string> want;
  for (auto& w : text::words(candidate)) {
    if (!gw::is_stopword(w)) want.insert(w);
  }
  double best_cos = 0, best_share = 0;
  std::size_t pos = 0;
  while (pos < joined.size()) {
    auto end = joined.find("; ", pos);
    if (end == std::string::npos) end = joined.size();
    auto item = joined.substr(pos, end - pos);
    if (auto colon = item.find(": "); colon != std::string::npos) item = item.substr(colon + 2);
    if (!text::trim(item).empty()) {
      best_cos = std::max(best_cos, gw::dot(cand, g_.embed(item)));
      if (!want.empty()) {
        auto have = text::words(item);
        std::set<std::string> got(have.begin(), have.end());
        double hit = 0;
        for (const auto& w : want) hit += got.count(w);
        best_share = std::max(best_share, hit / static_cast<double>(want.size()));
      }
    }
    pos = end + 2;
  }
  return {best_cos, best_share};
}

SparseVec Featurizer::featurize(const ClassifierExample& ex) const {
  if (ex.hour_slot < 0 || ex.hour_slot >= world::DayClock::kSlots) {
    throw ValidationError("example hour slot out of range");
  }
  const auto L = layout();
  const auto& m = cfg_.mask;
  auto zero = gw::Vec(static_cast<std::size_t>(d_), 0.0);
  auto prof = m.profile ? embed_or_zero(ex.profile) : zero;
  auto big5 = m.big5 ? embed_or_zero(ex.big5) : zero;
  auto ints = m.history ? embed_or_zero(ex.prev_intentions) : zero;
  auto tasks = m.history ? embed_or_zero(ex.prev_tasks) : zero;
  auto cand = embed_or_zero(ex.candidate);

  SparseVec x;
  x.reserve(static_cast<std::size_t>(d_) * 6 + 20);
  auto block = [&](std::size_t off, const gw::Vec& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] != 0.0) x.emplace_back(static_cast<std::uint32_t>(off + i), v[i]);
    }
  };
  block(L.profile, prof);
  block(L.big5, big5);
  block(L.intentions, ints);
  block(L.tasks, tasks);
  block(L.candidate, cand);
  auto h = static_cast<std::size_t>(ex.hour_slot);
  x.emplace_back(static_cast<std::uint32_t>(L.hour + h), 1.0);
  double s = cfg_.similarity_scale;
  std::pair<double, double> bi{0, 0}, bt{0, 0};
  if (m.history) {
    bi = best_item_match(cand, ex.candidate, ex.prev_intentions);
    bt = best_item_match(cand, ex.candidate, ex.prev_tasks);
  }
  double sims[kSims] = {s * gw::dot(cand, prof), s * gw::dot(cand, ints), s * gw::dot(cand, tasks),
                        s * bi.first, s * bt.first, s * bi.second, s * bt.second};
  for (std::size_t i = 0; i < kSims; ++i) {
    if (sims[i] != 0.0) x.emplace_back(static_cast<std::uint32_t>(L.sims + i), sims[i]);
  }
  if (cfg_.hour_cross) block(L.cross + h * static_cast<std::size_t>(d_), cand);
  x.emplace_back(static_cast<std::uint32_t>(L.bias), 1.0);
  return x;
}

// ------------------------------------------------------------- learner

Json TrainConfig::to_json() const {
  return Json{{"lr", lr},     {"epochs", epochs},       {"l2", l2},
              {"seed", seed}, {"threshold", threshold}, {"balance", balance}};
}

TrainConfig TrainConfig::from_json(const Json& j) {
  TrainConfig c;
  c.lr = j.value("lr", c.lr);
  c.epochs = j.value("epochs", c.epochs);
  c.l2 = j.value("l2", c.l2);
  c.seed = j.value("seed", c.seed);
  c.threshold = j.value("threshold", c.threshold);
  c.balance = j.value("balance", c.balance);
  return c;
}

namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

double sparse_dot(const std::vector<double>& w, const SparseVec& x) {
  double s = 0;
  for (const auto& [i, v] : x) {
    if (i >= w.size()) throw ValidationError("feature index beyond model dimension");
    s += w[i] * v;
  }
  return s;
}

}  // namespace

double LinearModel::score(const SparseVec& x) const {
  if (w.empty()) return 0.5;
  return sigmoid(sparse_dot(w, x));
}

Prediction LinearModel::predict(const SparseVec& x) const {
  double s = score(x);
  return {s >= threshold, s};
}

Json LinearModel::to_json() const { return Json{{"threshold", threshold}, {"weights", w}}; }

LinearModel LinearModel::from_json(const Json& j) {
  LinearModel m;
  m.threshold = j.value("threshold", 0.5);
  m.w = j.value("weights", std::vector<double>{});
  return m;
}

LinearModel train_logistic(const std::vector<SparseVec>& X, const std::vector<bool>& y,
                           std::size_t dim, const TrainConfig& cfg) {
  if (X.empty()) throw ValidationError("training needs at least one example");
  if (X.size() != y.size()) throw ValidationError("feature and label counts differ");
  const double n = static_cast<double>(y.size());
  double pos = 0;
  for (bool b : y) pos += b;
  double neg = n - pos;
  std::vector<double> sw(y.size(), 1.0);
  if (cfg.balance) {
    for (std::size_t i = 0; i < y.size(); ++i) {
      sw[i] = y[i] ? n / (2.0 * std::max(pos, 1.0)) : n / (2.0 * std::max(neg, 1.0));
    }
  }
  // True weights are scale * v, so the L2 shrink is one multiply per step.
  std::vector<double> v(dim, 0.0);
  double scale = 1.0;
  const double shrink = 1.0 - cfg.lr * cfg.l2;
  std::vector<std::size_t> order(y.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(cfg.seed);
  for (int ep = 0; ep < cfg.epochs; ++ep) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[static_cast<std::size_t>(rng() % i)]);
    }
    for (auto k : order) {
      double p = sigmoid(scale * sparse_dot(v, X[k]));
      double g = cfg.lr * sw[k] * (p - (y[k] ? 1.0 : 0.0));
      scale *= shrink;
      for (const auto& [i, xv] : X[k]) v[i] -= g * xv / scale;
      if (scale < 1e-9) {
        for (auto& e : v) e *= scale;
        scale = 1.0;
      }
    }
  }
  LinearModel m;
  m.threshold = cfg.threshold;
  m.w.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) m.w[i] = v[i] * scale;
  return m;
}

// ------------------------------------------------------------- classifiers

ReferenceClassifier::ReferenceClassifier(gw::Gateway& g, FeatureConfig fcfg, TrainConfig tcfg)
    : feat_(g, fcfg), tcfg_(tcfg) {
  model_.threshold = tcfg.threshold;
}

Prediction ReferenceClassifier::predict(const ClassifierExample& ex) {
  return model_.predict(feat_.featurize(ex));
}

void ReferenceClassifier::train(const std::vector<ClassifierExample>& examples) {
  std::vector<SparseVec> X;
  std::vector<bool> y;
  X.reserve(examples.size());
  for (const auto& e : examples) {
    X.push_back(feat_.featurize(e));
    y.push_back(e.label);
  }
  model_ = train_logistic(X, y, feat_.dim(), tcfg_);
}

Json ReferenceClassifier::state() const {
  return Json{{"kind", kind()},
              {"features", feat_.config().to_json()},
              {"train", tcfg_.to_json()},
              {"dim", feat_.dim()},
              {"model", model_.to_json()}};
}

void ReferenceClassifier::load_state(const Json& j) {
  auto m = LinearModel::from_json(j.at("model"));
  if (!m.w.empty() && m.w.size() != feat_.dim()) {
    throw LoadError("classifier state has dimension " + std::to_string(m.w.size()) + ", expected " +
                    std::to_string(feat_.dim()));
  }
  model_ = std::move(m);
}

Prediction RemoteClassifier::predict(const ClassifierExample& ex) {
  gw::ChatRequest req;
  req.template_id = "classifier_instruction";
  req.prompt = instruction_text(ex, false);
  req.temperature = 0.0;
  auto out = text::lower(text::trim(g_.chat(req)));
  if (text::starts_with_ci(out, "yes")) return {true, 1.0};
  if (text::starts_with_ci(out, "no")) return {false, 0.0};
  throw ParseError("classifier reply is neither Yes nor No", out);
}

void export_examples(const std::filesystem::path& file, const std::vector<ClassifierExample>& ex) {
  std::string out;
  for (const auto& e : ex) {
    out += Json{{"text", instruction_text(e, false)}, {"label", e.label ? "Yes" : "No"}}.dump() + "\n";
  }
  fsio::write_file_atomic(file, out);
}

double accuracy(Classifier& c, const std::vector<ClassifierExample>& ex) {
  if (ex.empty()) return 0.0;
  std::size_t ok = 0;
  for (const auto& e : ex) ok += c.predict(e).label == e.label;
  return static_cast<double>(ok) / static_cast<double>(ex.size());
}

}  // namespace hrc::classify
