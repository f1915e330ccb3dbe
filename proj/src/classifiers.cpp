#include "triage/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "triage/random.hpp"

namespace triage {

std::string_view to_string(ClassifierKind k) {
  switch (k) {
    case ClassifierKind::DecisionTree: return "DT";
    case ClassifierKind::NaiveBayes: return "NB";
    case ClassifierKind::LogisticRegression: return "LR";
    case ClassifierKind::RandomForest: return "RF";
    case ClassifierKind::Constant: return "CONST";
  }
  return "?";
}

std::size_t class_index(Approach a) {
  const auto i = static_cast<std::size_t>(a);
  if (i >= kBaseApproachCount) throw std::invalid_argument("not a base approach");
  return i;
}

namespace {

Approach class_at(std::size_t i) { return kBaseApproaches[i]; }

/// Lowest class index wins ties.
template <typename T>
std::size_t argmax(const std::array<T, kBaseApproachCount>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

double gini(const std::array<std::size_t, kBaseApproachCount>& counts, std::size_t n) {
  if (n == 0) return 0.0;
  double s = 1.0;
  for (auto c : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(n);
    s -= p * p;
  }
  return s;
}

double hp(const Hyperparameters& h, const char* key, double fallback) {
  auto it = h.find(key);
  return it == h.end() ? fallback : it->second;
}

int depth_param(double v) {
  if (std::isinf(v) || v < 0) return -1;
  return static_cast<int>(v);
}

}  // namespace

// ---------------------------------------------------------------------------
// Standardizer

Standardizer Standardizer::fit(const std::vector<std::vector<double>>& rows) {
  Standardizer s;
  if (rows.empty()) return s;
  const std::size_t d = rows.front().size();
  s.mean.assign(d, 0.0);
  s.stddev.assign(d, 0.0);
  for (const auto& r : rows)
    for (std::size_t k = 0; k < d; ++k) s.mean[k] += r[k];
  for (auto& m : s.mean) m /= static_cast<double>(rows.size());
  for (const auto& r : rows)
    for (std::size_t k = 0; k < d; ++k) s.stddev[k] += (r[k] - s.mean[k]) * (r[k] - s.mean[k]);
  for (std::size_t k = 0; k < d; ++k) {
    s.stddev[k] = std::sqrt(s.stddev[k] / static_cast<double>(rows.size()));
    if (s.stddev[k] > 0.0 && std::isfinite(s.stddev[k])) s.active.push_back(k);
  }
  return s;
}

std::vector<double> Standardizer::apply(const std::vector<double>& x) const {
  std::vector<double> out;
  out.reserve(active.size());
  for (auto k : active) out.push_back((x[k] - mean[k]) / stddev[k]);
  return out;
}

// ---------------------------------------------------------------------------
// Decision tree

DecisionTree DecisionTree::fit(const std::vector<std::vector<double>>& rows,
                               const std::vector<Approach>& labels,
                               const std::vector<std::size_t>& sample, const TreeParams& params,
                               std::uint64_t seed) {
  DecisionTree tree;
  const std::size_t dims = rows.empty() ? 0 : rows.front().size();
  const std::size_t min_leaf = std::max<std::size_t>(1, params.min_samples_leaf);
  Rng rng(seed);

  struct Frame {
    std::vector<std::size_t> idx;
    int depth;
    int node;
  };
  std::vector<Frame> stack;
  tree.nodes_.push_back({});
  stack.push_back({sample, 0, 0});

  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    TreeNode& node = tree.nodes_[static_cast<std::size_t>(f.node)];
    for (auto i : f.idx) node.counts[class_index(labels[i])] += 1;
    node.label = class_at(argmax(node.counts));

    const std::size_t n = f.idx.size();
    const bool pure =
        std::count_if(node.counts.begin(), node.counts.end(), [](auto c) { return c > 0; }) <= 1;
    if (pure || (params.max_depth >= 0 && f.depth >= params.max_depth) || n < 2 * min_leaf ||
        dims == 0)
      continue;

    std::vector<std::size_t> features(dims);
    std::iota(features.begin(), features.end(), 0);
    if (params.max_features > 0 && params.max_features < dims) {
      for (std::size_t i = 0; i < params.max_features; ++i) {
        const auto j = i + static_cast<std::size_t>(uniform_index(rng, dims - i));
        std::swap(features[i], features[j]);
      }
      features.resize(params.max_features);
    }

    const double parent = gini(node.counts, n);
    double best_impurity = parent;
    int best_feature = -1;
    double best_threshold = 0.0;
    std::vector<std::size_t> order = f.idx;
    for (auto feat : features) {
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return rows[a][feat] < rows[b][feat];
      });
      std::array<std::size_t, kBaseApproachCount> left{};
      std::array<std::size_t, kBaseApproachCount> right = node.counts;
      for (std::size_t k = 0; k + 1 < n; ++k) {
        const auto c = class_index(labels[order[k]]);
        left[c] += 1;
        right[c] -= 1;
        const double lo = rows[order[k]][feat];
        const double hi = rows[order[k + 1]][feat];
        if (!(lo < hi)) continue;
        const std::size_t nl = k + 1, nr = n - nl;
        if (nl < min_leaf || nr < min_leaf) continue;
        const double impurity = (static_cast<double>(nl) * gini(left, nl) +
                                 static_cast<double>(nr) * gini(right, nr)) /
                                static_cast<double>(n);
        if (impurity < best_impurity - 1e-12) {
          best_impurity = impurity;
          best_feature = static_cast<int>(feat);
          best_threshold = 0.5 * (lo + hi);
        }
      }
    }
    if (best_feature < 0) continue;

    std::vector<std::size_t> li, ri;
    for (auto i : f.idx)
      (rows[i][static_cast<std::size_t>(best_feature)] <= best_threshold ? li : ri).push_back(i);
    const int l = static_cast<int>(tree.nodes_.size());
    tree.nodes_.push_back({});
    tree.nodes_.push_back({});
    TreeNode& parent_node = tree.nodes_[static_cast<std::size_t>(f.node)];
    parent_node.feature = best_feature;
    parent_node.threshold = best_threshold;
    parent_node.left = l;
    parent_node.right = l + 1;
    stack.push_back({std::move(ri), f.depth + 1, l + 1});
    stack.push_back({std::move(li), f.depth + 1, l});
  }
  return tree;
}

Approach DecisionTree::predict(const std::vector<double>& x) const {
  std::size_t i = 0;
  while (nodes_[i].feature >= 0) {
    const auto& n = nodes_[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left
                                                                                       : n.right);
  }
  return nodes_[i].label;
}

// ---------------------------------------------------------------------------
// Training / prediction

ClassifierModel ClassifierModel::constant(Approach label) {
  ClassifierModel m;
  m.kind_ = ClassifierKind::Constant;
  m.constant_ = label;
  m.hyper_["label"] = static_cast<double>(class_index(label));
  return m;
}

ClassifierModel train_classifier(ClassifierKind kind, const std::vector<LabeledExample>& examples,
                                 const Hyperparameters& hyper, std::uint64_t seed,
                                 std::vector<double>* lr_loss_trace) {
  if (kind == ClassifierKind::Constant) {
    return ClassifierModel::constant(class_at(static_cast<std::size_t>(hp(hyper, "label", 0))));
  }
  std::set<Approach> distinct;
  for (const auto& e : examples) distinct.insert(e.label);
  if (distinct.size() < 2) throw std::invalid_argument("classifier training needs at least two labels");

  ClassifierModel model;
  model.kind_ = kind;
  model.hyper_ = hyper;
  model.seed_ = seed;

  std::vector<std::vector<double>> raw;
  std::vector<Approach> labels;
  for (const auto& e : examples) {
    raw.push_back(e.features);
    labels.push_back(e.label);
  }
  model.standardizer_ = Standardizer::fit(raw);
  std::vector<std::vector<double>> rows;
  rows.reserve(raw.size());
  for (const auto& r : raw) rows.push_back(model.standardizer_.apply(r));
  const std::size_t n = rows.size();
  const std::size_t d = model.standardizer_.active.size();

  switch (kind) {
    case ClassifierKind::DecisionTree: {
      TreeParams p;
      p.max_depth = depth_param(hp(hyper, "max_depth", kUnlimited));
      p.min_samples_leaf = static_cast<std::size_t>(hp(hyper, "min_samples_leaf", 1));
      std::vector<std::size_t> all(n);
      std::iota(all.begin(), all.end(), 0);
      model.trees_.push_back(DecisionTree::fit(rows, labels, all, p, seed));
      break;
    }
    case ClassifierKind::RandomForest: {
      TreeParams p;
      p.max_depth = depth_param(hp(hyper, "max_depth", kUnlimited));
      p.min_samples_leaf = static_cast<std::size_t>(hp(hyper, "min_samples_leaf", 1));
      const double mf = hp(hyper, "max_features", -1);
      const std::size_t input_dims = raw.front().size();
      p.max_features = mf < 0 ? static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(input_dims))))
                              : static_cast<std::size_t>(mf);
      if (p.max_features >= d) p.max_features = 0;
      const bool bootstrap = hp(hyper, "bootstrap", 1) != 0;
      const auto trees = static_cast<std::size_t>(hp(hyper, "trees", 100));
      for (std::size_t t = 0; t < trees; ++t) {
        const std::uint64_t tree_seed = derive_seed(seed, t);
        std::vector<std::size_t> sample(n);
        if (bootstrap) {
          Rng rng(derive_seed(tree_seed, 0xb007));
          for (auto& s : sample) s = static_cast<std::size_t>(uniform_index(rng, n));
        } else {
          std::iota(sample.begin(), sample.end(), 0);
        }
        model.trees_.push_back(DecisionTree::fit(rows, labels, sample, p, tree_seed));
      }
      break;
    }
    case ClassifierKind::NaiveBayes: {
      const double floor = hp(hyper, "var_floor", 1e-9);
      auto& nb = model.nb_;
      std::array<std::size_t, kBaseApproachCount> counts{};
      for (auto l : labels) counts[class_index(l)] += 1;
      for (std::size_t c = 0; c < kBaseApproachCount; ++c) {
        nb.present[c] = counts[c] > 0;
        nb.mean[c].assign(d, 0.0);
        nb.var[c].assign(d, 0.0);
        if (!nb.present[c]) continue;
        nb.log_prior[c] = std::log(static_cast<double>(counts[c]) / static_cast<double>(n));
      }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < d; ++k) nb.mean[class_index(labels[i])][k] += rows[i][k];
      for (std::size_t c = 0; c < kBaseApproachCount; ++c)
        if (nb.present[c])
          for (auto& m : nb.mean[c]) m /= static_cast<double>(counts[c]);
      for (std::size_t i = 0; i < n; ++i) {
        const auto c = class_index(labels[i]);
        for (std::size_t k = 0; k < d; ++k) {
          const double dx = rows[i][k] - nb.mean[c][k];
          nb.var[c][k] += dx * dx;
        }
      }
      for (std::size_t c = 0; c < kBaseApproachCount; ++c)
        if (nb.present[c])
          for (auto& v : nb.var[c]) v = std::max(v / static_cast<double>(counts[c]), floor);
      break;
    }
    case ClassifierKind::LogisticRegression: {
      const double rate = hp(hyper, "rate", 0.1);
      const double lambda = hp(hyper, "lambda", 0.0);
      const int epochs = static_cast<int>(hp(hyper, "epochs", 300));
      auto& sm = model.softmax_;
      for (auto& w : sm.weights) w.assign(d, 0.0);
      sm.bias.fill(0.0);

      std::vector<std::array<double, kBaseApproachCount>> probs(n);
      auto forward = [&]() {
        double loss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          std::array<double, kBaseApproachCount> z{};
          for (std::size_t c = 0; c < kBaseApproachCount; ++c) {
            z[c] = sm.bias[c];
            for (std::size_t k = 0; k < d; ++k) z[c] += sm.weights[c][k] * rows[i][k];
          }
          const double zmax = *std::max_element(z.begin(), z.end());
          double norm = 0.0;
          for (auto& v : z) norm += std::exp(v - zmax);
          for (std::size_t c = 0; c < kBaseApproachCount; ++c)
            probs[i][c] = std::exp(z[c] - zmax) / norm;
          loss -= (z[class_index(labels[i])] - zmax) - std::log(norm);
        }
        double reg = 0.0;
        for (const auto& w : sm.weights)
          for (double x : w) reg += x * x;
        return loss / static_cast<double>(n) + 0.5 * lambda * reg;
      };

      if (lr_loss_trace) lr_loss_trace->clear();
      for (int e = 0; e < epochs; ++e) {
        forward();
        std::array<std::vector<double>, kBaseApproachCount> gw;
        std::array<double, kBaseApproachCount> gb{};
        for (auto& g : gw) g.assign(d, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
          const auto y = class_index(labels[i]);
          for (std::size_t c = 0; c < kBaseApproachCount; ++c) {
            const double err = probs[i][c] - (c == y ? 1.0 : 0.0);
            gb[c] += err;
            for (std::size_t k = 0; k < d; ++k) gw[c][k] += err * rows[i][k];
          }
        }
        for (std::size_t c = 0; c < kBaseApproachCount; ++c) {
          sm.bias[c] -= rate * gb[c] / static_cast<double>(n);
          for (std::size_t k = 0; k < d; ++k)
            sm.weights[c][k] -= rate * (gw[c][k] / static_cast<double>(n) + lambda * sm.weights[c][k]);
        }
        if (lr_loss_trace) lr_loss_trace->push_back(forward());
      }
      break;
    }
    case ClassifierKind::Constant:
      break;
  }
  return model;
}

Approach ClassifierModel::predict(const std::vector<double>& features) const {
  if (kind_ == ClassifierKind::Constant) return constant_;
  if (features.size() != standardizer_.mean.size())
    throw std::invalid_argument("feature dimension mismatch");
  const auto x = standardizer_.apply(features);
  switch (kind_) {
    case ClassifierKind::DecisionTree:
      return trees_.front().predict(x);
    case ClassifierKind::RandomForest: {
      std::array<std::size_t, kBaseApproachCount> votes{};
      for (const auto& t : trees_) votes[class_index(t.predict(x))] += 1;
      return class_at(argmax(votes));
    }
    case ClassifierKind::NaiveBayes: {
      std::array<double, kBaseApproachCount> ll;
      ll.fill(-std::numeric_limits<double>::infinity());
      for (std::size_t c = 0; c < kBaseApproachCount; ++c) {
        if (!nb_.present[c]) continue;
        double s = nb_.log_prior[c];
        for (std::size_t k = 0; k < x.size(); ++k) {
          const double v = nb_.var[c][k];
          const double dx = x[k] - nb_.mean[c][k];
          s -= 0.5 * (std::log(2.0 * M_PI * v) + dx * dx / v);
        }
        ll[c] = s;
      }
      return class_at(argmax(ll));
    }
    case ClassifierKind::LogisticRegression: {
      std::array<double, kBaseApproachCount> z{};
      for (std::size_t c = 0; c < kBaseApproachCount; ++c) {
        z[c] = softmax_.bias[c];
        for (std::size_t k = 0; k < x.size(); ++k) z[c] += softmax_.weights[c][k] * x[k];
      }
      return class_at(argmax(z));
    }
    case ClassifierKind::Constant:
      break;
  }
  return constant_;
}

Approach predict(const ClassifierModel& model, const std::vector<double>& features) {
  return model.predict(features);
}

// ---------------------------------------------------------------------------
// Reporting and model selection

ClassificationReport classification_report(const std::vector<Approach>& predictions,
                                           const std::vector<Approach>& labels) {
  if (predictions.size() != labels.size())
    throw std::invalid_argument("predictions and labels differ in length");
  if (labels.empty()) throw std::invalid_argument("classification report of an empty set");
  ClassificationReport r;
  for (std::size_t i = 0; i < labels.size(); ++i)
    r.confusion[class_index(labels[i])][class_index(predictions[i])] += 1;

  const double total = static_cast<double>(labels.size());
  for (std::size_t c = 0; c < kBaseApproachCount; ++c) {
    std::size_t tp = r.confusion[c][c], predicted = 0, support = 0;
    for (std::size_t k = 0; k < kBaseApproachCount; ++k) {
      predicted += r.confusion[k][c];
      support += r.confusion[c][k];
    }
    auto& m = r.per_class[c];
    m.support = support;
    m.precision = predicted ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
    m.recall = support ? static_cast<double>(tp) / static_cast<double>(support) : 0.0;
    m.f1 = (m.precision + m.recall) > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                                          : 0.0;
    const double w = static_cast<double>(support) / total;
    r.weighted_precision += w * m.precision;
    r.weighted_recall += w * m.recall;
    r.weighted_f1 += w * m.f1;
  }
  return r;
}

Grid default_grid(ClassifierKind kind) {
  Grid g;
  const std::array<double, 4> depths{3, 5, 8, kUnlimited};
  const std::array<double, 2> leaves{1, 5};
  switch (kind) {
    case ClassifierKind::DecisionTree:
      for (double depth : depths)
        for (double leaf : leaves) g.push_back({{"max_depth", depth}, {"min_samples_leaf", leaf}});
      break;
    case ClassifierKind::RandomForest:
      for (double depth : depths)
        for (double leaf : leaves)
          for (double trees : {50.0, 100.0})
            g.push_back({{"max_depth", depth}, {"min_samples_leaf", leaf}, {"trees", trees}});
      break;
    case ClassifierKind::LogisticRegression:
      for (double rate : {0.1, 0.01})
        for (double lambda : {0.0, 1e-3})
          g.push_back({{"rate", rate}, {"lambda", lambda}, {"epochs", 300}});
      break;
    case ClassifierKind::NaiveBayes:
      g.push_back({{"var_floor", 1e-9}});
      break;
    case ClassifierKind::Constant:
      g.push_back({{"label", 0}});
      break;
  }
  return g;
}

std::vector<std::size_t> chronological_fold_sizes(std::size_t n, std::size_t parts) {
  if (parts == 0) throw std::invalid_argument("fold count must be positive");
  std::vector<std::size_t> sizes(parts, n / parts);
  for (std::size_t i = 0; i < n % parts; ++i) sizes[i] += 1;
  return sizes;
}

GridSearchResult grid_search_chronological(const std::vector<LabeledExample>& examples,
                                           ClassifierKind kind, const Grid& grid,
                                           std::uint64_t seed) {
  if (grid.empty()) throw std::invalid_argument("empty hyperparameter grid");
  if (examples.size() < kGridSearchFolds)
    throw std::invalid_argument("grid search needs at least 5 examples");

  const auto sizes = chronological_fold_sizes(examples.size(), kGridSearchFolds);
  std::vector<std::size_t> ends(kGridSearchFolds);
  std::partial_sum(sizes.begin(), sizes.end(), ends.begin());

  GridSearchResult result;
  double best_score = -1.0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double total = 0.0;
    for (std::size_t x = 1; x < kGridSearchFolds; ++x) {
      const std::vector<LabeledExample> train(examples.begin(),
                                              examples.begin() + static_cast<long>(ends[x - 1]));
      std::set<Approach> distinct;
      for (const auto& e : train) distinct.insert(e.label);
      // A single-label prefix cannot train a classifier; it predicts that label.
      const ClassifierModel model = distinct.size() < 2
                                        ? ClassifierModel::constant(*distinct.begin())
                                        : train_classifier(kind, train, grid[g], seed);
      std::vector<Approach> preds, truth;
      for (std::size_t i = ends[x - 1]; i < ends[x]; ++i) {
        preds.push_back(model.predict(examples[i].features));
        truth.push_back(examples[i].label);
      }
      total += classification_report(preds, truth).weighted_f1;
    }
    const double score = total / static_cast<double>(kGridSearchFolds - 1);
    result.scores.push_back(score);
    if (score > best_score) {
      best_score = score;
      result.best = grid[g];
    }
  }
  return result;
}

}  // namespace triage
