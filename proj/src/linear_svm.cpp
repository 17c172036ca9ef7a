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

#include "pitchrank/linear_svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "pitchrank/error.hpp"

namespace pitchrank {
namespace {

double dot(std::span<const double> w, std::span<const double> x) {
  double acc = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) acc += w[j] * x[j];
  return acc;
}

}  // namespace

double SvmModel::decision(std::span<const double> x) const { return dot(weights, x) + intercept; }

SvmModel train_linear_svm(std::span<const std::span<const double>> rows,
                          std::span<const int> labels, const SvmOptions& options) {
  const std::size_t n = rows.size();
  if (n == 0 || labels.size() != n) {
    throw Error("invalid_argument", "training set is empty or labels do not match rows");
  }
  if (!(options.cost > 0.0)) throw Error("invalid_argument", "cost must be positive");
  const std::size_t d = rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != d) throw Error("invalid_argument", "rows differ in length");
  }
  for (int y : labels) {
    if (y != 1 && y != -1) throw Error("invalid_argument", "labels must be +1 or -1");
  }

  const double upper = options.cost / static_cast<double>(n);
  const double b2 = options.bias_scale * options.bias_scale;
  std::vector<double> w(d, 0.0);
  double wb = 0.0;  // weight of the constant feature
  std::vector<double> alpha(n, 0.0);
  std::vector<double> qii(n);
  for (std::size_t i = 0; i < n; ++i) qii[i] = dot(rows[i], rows[i]) + b2;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(options.seed);

  SvmModel model;
  int epoch = 0;
  for (; epoch < options.max_epochs; ++epoch) {
    // Fisher-Yates with a raw modulo draw: reproducible across standard libraries.
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);
    double pg_max = -std::numeric_limits<double>::infinity();
    double pg_min = std::numeric_limits<double>::infinity();
    for (std::size_t i : order) {
      const double y = labels[i];
      const double g = y * (dot(w, rows[i]) + wb * options.bias_scale) - 1.0;
      double pg = g;
      if (alpha[i] <= 0.0) {
        pg = std::min(g, 0.0);
      } else if (alpha[i] >= upper) {
        pg = std::max(g, 0.0);
      }
      pg_max = std::max(pg_max, pg);
      pg_min = std::min(pg_min, pg);
      if (qii[i] <= 0.0 || std::abs(pg) <= 1e-14) continue;
      const double old = alpha[i];
      alpha[i] = std::clamp(old - g / qii[i], 0.0, upper);
      const double step = (alpha[i] - old) * y;
      if (step == 0.0) continue;
      const auto x = rows[i];
      for (std::size_t j = 0; j < d; ++j) w[j] += step * x[j];
      wb += step * options.bias_scale;
    }
    if (pg_max - pg_min <= options.tolerance) {
      model.converged = true;
      ++epoch;
      break;
    }
  }

  double norm2 = wb * wb;
  for (double v : w) norm2 += v * v;
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    loss += std::max(0.0, 1.0 - labels[i] * (dot(w, rows[i]) + wb * options.bias_scale));
  }
  model.primal = 0.5 * norm2 + upper * loss;
  model.dual = std::accumulate(alpha.begin(), alpha.end(), 0.0) - 0.5 * norm2;
  model.epochs = epoch;
  model.weights = std::move(w);
  model.intercept = wb * options.bias_scale;

  if (!model.converged) {
    const double relative = model.duality_gap() / std::max(1.0, std::abs(model.primal));
    if (relative > options.max_relative_gap) {
      throw ConvergenceError("linear SVM did not converge in " +
                                 std::to_string(options.max_epochs) + " epochs",
                             model.duality_gap());
    }
  }
  return model;
}

}  // namespace pitchrank
