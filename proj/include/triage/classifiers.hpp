#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "triage/common.hpp"

namespace triage {

enum class ClassifierKind { DecisionTree, NaiveBayes, LogisticRegression, RandomForest, Constant };

inline constexpr std::array<ClassifierKind, 4> kTrainableKinds{
    ClassifierKind::DecisionTree, ClassifierKind::NaiveBayes, ClassifierKind::LogisticRegression,
    ClassifierKind::RandomForest};

std::string_view to_string(ClassifierKind k);

/// Named numeric hyperparameters. An unlimited max_depth is +infinity.
using Hyperparameters = std::map<std::string, double>;
using Grid = std::vector<Hyperparameters>;

inline constexpr double kUnlimited = std::numeric_limits<double>::infinity();

struct LabeledExample {
  std::string report_id;
  std::vector<double> features;
  Approach label = Approach::Freq;
  Timestamp created_at{};
};

/// Index of a base approach in class order FREQ < TEXTSIM < L2R.
std::size_t class_index(Approach a);

/// Training-set standardization; zero-spread dimensions are dropped.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> stddev;
  std::vector<std::size_t> active;

  static Standardizer fit(const std::vector<std::vector<double>>& rows);
  std::vector<double> apply(const std::vector<double>& x) const;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::array<std::size_t, kBaseApproachCount> counts{};
  Approach label = Approach::Freq;
};

struct TreeParams {
  int max_depth = -1;  // -1: unlimited
  std::size_t min_samples_leaf = 1;
  std::size_t max_features = 0;  // 0: all
};

/// CART tree over standardized rows (Gini impurity, midpoint thresholds).
class DecisionTree {
 public:
  static DecisionTree fit(const std::vector<std::vector<double>>& rows,
                          const std::vector<Approach>& labels, const std::vector<std::size_t>& sample,
                          const TreeParams& params, std::uint64_t seed);
  Approach predict(const std::vector<double>& x) const;
  const std::vector<TreeNode>& nodes() const { return nodes_; }

 private:
  std::vector<TreeNode> nodes_;
};

struct GaussianNB {
  std::array<bool, kBaseApproachCount> present{};
  std::array<double, kBaseApproachCount> log_prior{};
  std::array<std::vector<double>, kBaseApproachCount> mean, var;
};

struct SoftmaxModel {
  std::array<std::vector<double>, kBaseApproachCount> weights;
  std::array<double, kBaseApproachCount> bias{};
};

/// Trained 3-class model. Immutable; predict() is const and deterministic.
class ClassifierModel {
 public:
  ClassifierKind kind() const { return kind_; }
  const Hyperparameters& hyperparameters() const { return hyper_; }
  std::uint64_t seed() const { return seed_; }

  Approach predict(const std::vector<double>& features) const;

  /// Always predicts `label`.
  static ClassifierModel constant(Approach label);

  // Learned state, exposed for inspection and tests.
  const Standardizer& standardizer() const { return standardizer_; }
  const std::vector<DecisionTree>& trees() const { return trees_; }
  const GaussianNB& naive_bayes() const { return nb_; }
  const SoftmaxModel& softmax() const { return softmax_; }

 private:
  friend ClassifierModel train_classifier(ClassifierKind, const std::vector<LabeledExample>&,
                                          const Hyperparameters&, std::uint64_t,
                                          std::vector<double>*);
  ClassifierKind kind_ = ClassifierKind::Constant;
  Hyperparameters hyper_;
  std::uint64_t seed_ = 0;
  Approach constant_ = Approach::Freq;
  Standardizer standardizer_;
  std::vector<DecisionTree> trees_;
  GaussianNB nb_;
  SoftmaxModel softmax_;
};

/// Hyperparameter keys: DT max_depth, min_samples_leaf; NB var_floor;
/// LR rate, lambda, epochs; RF trees, max_depth, min_samples_leaf,
/// max_features (0 = all, default ceil(sqrt(dims))), bootstrap (0/1).
/// Throws std::invalid_argument when fewer than two labels are present.
/// `lr_loss_trace`, when given, receives the LR objective after each epoch.
ClassifierModel train_classifier(ClassifierKind kind, const std::vector<LabeledExample>& examples,
                                 const Hyperparameters& hyperparameters, std::uint64_t seed,
                                 std::vector<double>* lr_loss_trace = nullptr);

Approach predict(const ClassifierModel& model, const std::vector<double>& features);

struct ClassMetrics {
  double precision = 0.0, recall = 0.0, f1 = 0.0;
  std::size_t support = 0;
};

struct ClassificationReport {
  std::array<ClassMetrics, kBaseApproachCount> per_class{};
  double weighted_precision = 0.0, weighted_recall = 0.0, weighted_f1 = 0.0;
  /// confusion[true][predicted]
  std::array<std::array<std::size_t, kBaseApproachCount>, kBaseApproachCount> confusion{};
};

ClassificationReport classification_report(const std::vector<Approach>& predictions,
                                           const std::vector<Approach>& labels);

Grid default_grid(ClassifierKind kind);

struct GridSearchResult {
  Hyperparameters best;
  std::vector<double> scores;  // mean validation weighted F1 per grid point
};

inline constexpr std::size_t kGridSearchFolds = 5;

/// Expanding-window chronological CV over time-sorted examples: 5 folds,
/// train on folds 1..x, validate on fold x+1 (x = 1..4).
GridSearchResult grid_search_chronological(const std::vector<LabeledExample>& examples,
                                           ClassifierKind kind, const Grid& grid,
                                           std::uint64_t seed);

/// Sizes of `parts` contiguous chunks of n items, remainder to the earliest.
std::vector<std::size_t> chronological_fold_sizes(std::size_t n, std::size_t parts);

}  // namespace triage
