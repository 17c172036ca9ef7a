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

#include "pitchrank/learning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <map>
#include <random>
#include <tuple>

#include "pitchrank/error.hpp"
#include "pitchrank/metrics.hpp"
#include "pitchrank/text_io.hpp"

namespace pitchrank {
namespace {

SvmModel fit(std::span<const TrainingExample> examples, std::span<const std::size_t> index,
             double cost, const SvmOptions& base) {
  std::vector<std::span<const double>> rows;
  std::vector<int> labels;
  rows.reserve(index.size());
  labels.reserve(index.size());
  for (std::size_t i : index) {
    rows.emplace_back(examples[i].features);
    labels.push_back(examples[i].label == 1 ? 1 : -1);
  }
  SvmOptions options = base;
  options.cost = cost;
  return train_linear_svm(rows, labels, options);
}

void check_classes(std::span<const TrainingExample> examples) {
  bool pos = false, neg = false;
  for (const auto& e : examples) {
    if (e.label == 1) pos = true;
    else if (e.label == 0) neg = true;
    else throw Error("invalid_argument", "labels must be 0 or 1");
  }
  if (!pos || !neg) throw Error("degenerate_labels", "training data holds a single class");
}

std::vector<std::size_t> shuffled(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
  return order;
}

TrainingSet normalize_teams(std::vector<TeamPerformance> teams, const EventStore& store,
                            const FeatureCatalog& catalog,
                            const std::vector<std::optional<int>>& roles) {
  TrainingSet set;
  set.normalization = fit_normalization(std::span<const TeamPerformance>(teams), catalog);
  set.examples.reserve(teams.size());
  for (std::size_t i = 0; i < teams.size(); ++i) {
    const auto& t = teams[i];
    TrainingExample ex;
    ex.features = apply_normalization(t.values, set.normalization);
    ex.label = t.outcome;
    ex.match_id = t.match_id;
    ex.team_id = t.team_id;
    ex.competition_id = store.find_match(t.match_id)->competition_id;
    ex.role = roles.empty() ? std::nullopt : roles[i];
    set.examples.push_back(std::move(ex));
  }
  return set;
}

}  // namespace

TrainingSet build_training_set(const EventStore& store, std::span<const TeamPerformance> teams,
                               const FeatureCatalog& catalog) {
  std::map<std::int64_t, std::vector<const TeamPerformance*>> by_match;
  for (const auto& t : teams) by_match[t.match_id].push_back(&t);
  std::vector<std::int64_t> bad;
  std::vector<TeamPerformance> ordered;
  for (const auto& [match_id, list] : by_match) {
    const auto* match = store.find_match(match_id);
    if (!match) throw Error("not_found", "match " + std::to_string(match_id) + " not in store");
    if (list.size() != 2 || list[0]->team_id == list[1]->team_id) {
      bad.push_back(match_id);
      continue;
    }
    for (const auto* t : list) {
      TeamPerformance copy = *t;
      copy.outcome = match->outcome(t->team_id);
      ordered.push_back(std::move(copy));
    }
  }
  if (!bad.empty()) {
    throw IngestError("matches without exactly two team performances", std::move(bad));
  }
  return normalize_teams(std::move(ordered), store, catalog, {});
}

TrainingSet build_role_training_set(
    const EventStore& store, std::span<const PerformanceVector> player_vectors,
    const std::map<std::pair<std::int64_t, std::int64_t>, int>& primary_roles,
    const FeatureCatalog& catalog) {
  std::map<std::tuple<std::int64_t, std::int64_t, int>, std::vector<PerformanceVector>> groups;
  for (const auto& v : player_vectors) {
    auto it = primary_roles.find({v.player_id, v.match_id});
    if (it == primary_roles.end()) continue;
    groups[{v.match_id, v.team_id, it->second}].push_back(v);
  }
  std::vector<TeamPerformance> teams;
  std::vector<std::optional<int>> roles;
  for (const auto& [key, roster] : groups) {
    const auto* match = store.find_match(std::get<0>(key));
    if (!match) throw Error("not_found", "match not in store");
    teams.push_back(aggregate_team(roster, match->outcome(std::get<1>(key))));
    roles.push_back(std::get<2>(key));
  }
  if (teams.empty()) throw Error("empty_corpus", "no role-tagged performances");
  return normalize_teams(std::move(teams), store, catalog, roles);
}

std::optional<double> cross_validate(std::span<const TrainingExample> examples,
                                     std::span<const int> fold_of, int folds, double cost,
                                     const SvmOptions& svm, std::vector<FoldScore>* detail) {
  if (fold_of.size() != examples.size()) throw Error("invalid_argument", "fold map size mismatch");
  double total = 0.0;
  int scored = 0;
  for (int f = 0; f < folds; ++f) {
    std::vector<std::size_t> train, test;
    for (std::size_t i = 0; i < examples.size(); ++i) (fold_of[i] == f ? test : train).push_back(i);
    FoldScore score{cost, f, std::nullopt};
    bool pos = false, neg = false;
    for (std::size_t i : test) (examples[i].label == 1 ? pos : neg) = true;
    if (!train.empty() && pos && neg) {
      const auto model = fit(examples, train, cost, svm);
      std::vector<double> scores;
      std::vector<int> labels;
      for (std::size_t i : test) {
        scores.push_back(model.decision(examples[i].features));
        labels.push_back(examples[i].label);
      }
      score.auc = roc_auc(scores, labels);
      total += *score.auc;
      ++scored;
    }
    if (detail) detail->push_back(score);
  }
  if (scored == 0) return std::nullopt;
  return total / scored;
}

TrainedWeights train_weights(std::span<const TrainingExample> examples, const TrainConfig& config,
                             std::uint64_t catalog_hash) {
  if (examples.size() < 10) throw Error("invalid_argument", "at least 10 examples are required");
  check_classes(examples);
  if (config.cost_grid.empty()) throw Error("invalid_argument", "empty cost grid");
  if (config.folds < 2) throw Error("invalid_argument", "at least 2 folds are required");
  if (!(config.holdout > 0.0 && config.holdout < 1.0)) {
    throw Error("invalid_argument", "holdout fraction must be in (0, 1)");
  }

  const auto order = shuffled(examples.size(), config.seed);
  const auto n_holdout = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(config.holdout * static_cast<double>(examples.size()))));
  std::vector<std::size_t> holdout(order.begin(), order.begin() + static_cast<long>(n_holdout));
  std::vector<std::size_t> train(order.begin() + static_cast<long>(n_holdout), order.end());
  std::sort(holdout.begin(), holdout.end());

  std::vector<TrainingExample> train_set;
  train_set.reserve(train.size());
  std::vector<int> fold_of;
  for (std::size_t k = 0; k < train.size(); ++k) {
    train_set.push_back(examples[train[k]]);
    fold_of.push_back(static_cast<int>(k % static_cast<std::size_t>(config.folds)));
  }
  check_classes(train_set);

  TrainedWeights result;
  auto& report = result.report;
  report.holdout_fraction = config.holdout;
  report.train_size = train_set.size();
  std::optional<double> best;
  for (double cost : config.cost_grid) {
    const auto auc = cross_validate(train_set, fold_of, config.folds, cost, config.svm, &report.folds);
    report.cv_auc.emplace_back(cost, auc.value_or(std::nan("")));
    if (auc && (!best || *auc > *best)) {
      best = auc;
      report.selected_cost = cost;
    }
  }
  if (!best) throw Error("undefined", "no cross-validation fold could be scored");

  std::vector<std::size_t> all(train_set.size());
  std::iota(all.begin(), all.end(), 0);
  const auto model = fit(train_set, all, report.selected_cost, config.svm);
  result.weights.weights = model.weights;
  result.weights.intercept = model.intercept;
  result.weights.catalog_hash = catalog_hash;
  result.weights.cost = report.selected_cost;

  std::vector<TrainingExample> holdout_set;
  for (std::size_t i : holdout) holdout_set.push_back(examples[i]);
  report.holdout = evaluate_classifier(result.weights, holdout_set);
  return result;
}

EvalReport evaluate_classifier(const WeightVector& weights,
                               std::span<const TrainingExample> examples) {
  if (examples.empty()) throw Error("invalid_argument", "no examples to evaluate");
  std::vector<double> scores;
  std::vector<int> labels;
  for (const auto& e : examples) {
    if (e.features.size() != weights.weights.size()) {
      throw Error("catalog_mismatch", "example length does not match the weights");
    }
    double s = weights.intercept;
    for (std::size_t j = 0; j < e.features.size(); ++j) s += weights.weights[j] * e.features[j];
    scores.push_back(s);
    labels.push_back(e.label);
  }
  EvalReport report;
  report.examples = examples.size();
  report.auc = roc_auc(scores, labels);
  const auto counts = confusion(scores, labels, 0.0);
  report.f1 = f1_score(counts);
  report.accuracy = accuracy(counts);
  return report;
}

double compute_nrmse(std::span<const double> base, std::span<const double> other) {
  if (base.size() != other.size() || base.empty()) {
    throw Error("invalid_argument", "weight vectors must have equal, non-zero length");
  }
  const auto [lo, hi] = std::minmax_element(base.begin(), base.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) throw Error("division_by_zero", "base weights are constant");
  double acc = 0.0;
  for (std::size_t i = 0; i < base.size(); ++i) acc += (base[i] - other[i]) * (base[i] - other[i]);
  return std::sqrt(acc / static_cast<double>(base.size())) / range;
}

double compute_nrmse(const WeightVector& base, const WeightVector& other) {
  if (base.catalog_hash != other.catalog_hash) {
    throw Error("catalog_mismatch", "weight vectors come from different catalogs");
  }
  return compute_nrmse(base.weights, other.weights);
}

ScopedTraining train_scoped_weights(std::span<const TrainingExample> examples, ScopeKind scope,
                                    const TrainConfig& config, std::uint64_t catalog_hash) {
  if (examples.empty()) throw Error("empty_corpus", "no examples to partition");
  ScopedTraining out;
  if (scope == ScopeKind::all) {
    out.models.push_back(train_weights(examples, config, catalog_hash));
    return out;
  }
  std::map<std::int64_t, std::vector<TrainingExample>> parts;
  for (const auto& e : examples) {
    if (scope == ScopeKind::competition) {
      parts[e.competition_id].push_back(e);
    } else {
      if (!e.role) throw Error("invalid_argument", "role-scoped training needs role-tagged examples");
      parts[*e.role].push_back(e);
    }
  }
  const std::string prefix = scope == ScopeKind::competition ? "competition:" : "role:";
  for (const auto& [key, part] : parts) {
    const auto name = prefix + std::to_string(key);
    try {
      auto trained = train_weights(part, config, catalog_hash);
      trained.weights.scope = name;
      out.models.push_back(std::move(trained));
    } catch (const Error& e) {
      if (e.code() == "convergence_error") throw;
      out.warnings.push_back("skipped scope " + name + ": " + e.what());
    }
  }
  return out;
}

void write_weights(const WeightVector& weights, const FeatureCatalog& catalog, std::ostream& out) {
  if (weights.weights.size() != catalog.size()) {
    throw Error("catalog_mismatch", "weights do not match the catalog");
  }
  out << "pitchrank-weights 1\n";
  out << "scope " << weights.scope << "\n";
  out << "catalog_hash " << hex64(weights.catalog_hash) << "\n";
  out << "cost " << format_double(weights.cost) << "\n";
  out << "intercept " << format_double(weights.intercept) << "\n";
  out << "features " << weights.weights.size() << "\n";
  for (std::size_t i = 0; i < weights.weights.size(); ++i) {
    out << "weight " << i << " " << format_double(weights.weights[i]) << " " << catalog[i].name
        << "\n";
  }
}

WeightVector read_weights(std::istream& in, const FeatureCatalog& catalog) {
  KvReader reader(in, "pitchrank-weights", 1);
  WeightVector w;
  w.scope = reader.expect("scope").fields.at(0);
  w.catalog_hash = parse_hex64(reader.expect("catalog_hash").fields.at(0));
  if (w.catalog_hash != catalog.hash()) {
    throw Error("catalog_mismatch", "weights file was trained on a different catalog");
  }
  w.cost = parse_double(reader.expect("cost").fields.at(0), "cost");
  w.intercept = parse_double(reader.expect("intercept").fields.at(0), "intercept");
  const auto n = parse_int(reader.expect("features").fields.at(0), "features");
  for (std::int64_t i = 0; i < n; ++i) {
    const auto record = reader.expect("weight");
    if (record.fields.size() < 2 || parse_int(record.fields[0], "weight index") != i) {
      throw ValidationError("malformed weight line " + std::to_string(record.line));
    }
    if (record.rest_after(2) != catalog[static_cast<std::size_t>(i)].name) {
      throw Error("catalog_mismatch", "weight " + std::to_string(i) + " names '" +
                                          record.rest_after(2) + "'");
    }
    w.weights.push_back(parse_double(record.fields[1], "weight"));
  }
  return w;
}

}  // namespace pitchrank
