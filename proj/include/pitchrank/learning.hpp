// Copyright 2026 The pitchrank Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Feature-weight learning: team performance vectors are classified against
// match outcomes and the classifier coefficients become the feature weights.

#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pitchrank/features.hpp"
#include "pitchrank/linear_svm.hpp"
#include "pitchrank/store.hpp"

namespace pitchrank {

struct TrainingExample {
  std::vector<double> features;  // team-level min-max normalized
  int label = 0;                 // 1 victory, 0 draw or defeat
  std::int64_t match_id = 0;
  std::int64_t team_id = 0;
  std::int64_t competition_id = 0;
  std::optional<int> role;
};

struct TrainingSet {
  std::vector<TrainingExample> examples;
  NormalizationParams normalization;  // fitted on the team vectors
};

// Two examples per match. Throws when a match does not have exactly two
// team performances.
TrainingSet build_training_set(const EventStore& store, std::span<const TeamPerformance> teams,
                               const FeatureCatalog& catalog);

// One example per (match, team, role), aggregating only the players whose
// primary role in that match is the role.
TrainingSet build_role_training_set(
    const EventStore& store, std::span<const PerformanceVector> player_vectors,
    const std::map<std::pair<std::int64_t, std::int64_t>, int>& primary_roles,
    const FeatureCatalog& catalog);

struct WeightVector {
  std::vector<double> weights;
  double intercept = 0.0;
  std::uint64_t catalog_hash = 0;
  std::string scope = "all";
  double cost = 0.0;
};

struct EvalReport {
  double auc = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  std::size_t examples = 0;
};

struct FoldScore {
  double cost = 0.0;
  int fold = 0;
  std::optional<double> auc;  // empty when the fold holds one class only
};

struct TrainReport {
  EvalReport holdout;
  double holdout_fraction = 0.0;
  std::size_t train_size = 0;
  double selected_cost = 0.0;
  std::vector<std::pair<double, double>> cv_auc;  // (cost, mean AUC)
  std::vector<FoldScore> folds;
};

struct TrainConfig {
  std::vector<double> cost_grid = {0.01, 0.1, 1.0, 10.0, 100.0};
  int folds = 5;
  double holdout = 0.2;
  std::uint64_t seed = 42;
  SvmOptions svm;
};

struct TrainedWeights {
  WeightVector weights;
  TrainReport report;
};

// Holds out a seeded uniform fraction, picks the cost with the best mean
// cross-validated AUC on the rest, refits on the whole training split and
// evaluates on the holdout.
TrainedWeights train_weights(std::span<const TrainingExample> examples, const TrainConfig& config,
                             std::uint64_t catalog_hash);

// Mean AUC over folds (folds holding one class are skipped). `fold_of[i]`
// is the fold of example i, in [0, folds).
std::optional<double> cross_validate(std::span<const TrainingExample> examples,
                                     std::span<const int> fold_of, int folds, double cost,
                                     const SvmOptions& svm, std::vector<FoldScore>* detail = nullptr);

// Scores are w.x + intercept; F1 and accuracy use threshold 0.
EvalReport evaluate_classifier(const WeightVector& weights,
                               std::span<const TrainingExample> examples);

// Root-mean-square difference normalized by the range of the first vector.
double compute_nrmse(std::span<const double> base, std::span<const double> other);
double compute_nrmse(const WeightVector& base, const WeightVector& other);

enum class ScopeKind { all, competition, role };

struct ScopedTraining {
  std::vector<TrainedWeights> models;
  std::vector<std::string> warnings;
};

// One model per competition or role (or a single model for `all`). Scopes
// without both classes, or whose holdout cannot be scored, are skipped with
// a warning.
ScopedTraining train_scoped_weights(std::span<const TrainingExample> examples, ScopeKind scope,
                                    const TrainConfig& config, std::uint64_t catalog_hash);

void write_weights(const WeightVector& weights, const FeatureCatalog& catalog, std::ostream& out);
WeightVector read_weights(std::istream& in, const FeatureCatalog& catalog);

}  // namespace pitchrank
