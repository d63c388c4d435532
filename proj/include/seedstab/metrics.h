/*
 * Copyright 2026 The Seedstab Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Standard evaluation metric kernels. All kernels are pure and return values
// in their natural unit (fractions for accuracy-like metrics).

#ifndef SEEDSTAB_METRICS_H_
#define SEEDSTAB_METRICS_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seedstab/core.h"

namespace seedstab {

struct ClassCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;
};

// One-vs-rest counts for every label seen in either list.
struct ConfusionCounts {
  std::map<std::string, ClassCounts> per_class;
  std::int64_t total = 0;
};

// Label lists are read from Label outputs, or flattened token by token from
// TokenSeq outputs (token-level scoring for sequence labeling).
ConfusionCounts CountConfusion(std::span<const Output> preds,
                               std::span<const Output> gold);

class Averaging {
 public:
  static Averaging Binary(std::string positive_class) {
    return Averaging(false, std::move(positive_class));
  }
  static Averaging Macro() { return Averaging(true, ""); }

  bool is_macro() const { return macro_; }
  const std::string& positive_class() const { return positive_class_; }

 private:
  Averaging(bool macro, std::string positive)
      : macro_(macro), positive_class_(std::move(positive)) {}
  bool macro_;
  std::string positive_class_;
};

struct PrecisionRecallF1 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Fraction of positions where the prediction equals the gold output.
double Accuracy(std::span<const Output> preds, std::span<const Output> gold);

// Degenerate ratios (0/0) are 0. Macro averaging is unweighted over the
// union of predicted and gold labels. Binary mode throws kInvalidValue when
// the positive class occurs in neither list.
PrecisionRecallF1 ComputePrecisionRecallF1(std::span<const Output> preds,
                                           std::span<const Output> gold,
                                           const Averaging& averaging);

// Matthews correlation over at most two distinct labels; 0 when any
// marginal is empty.
double Mcc(std::span<const Output> preds, std::span<const Output> gold);

double Mae(std::span<const double> preds, std::span<const double> gold);
double Mse(std::span<const double> preds, std::span<const double> gold);

// Sample Pearson correlation. Throws kZeroVariance if either side is
// constant.
double Pearson(std::span<const double> xs, std::span<const double> ys);
// Pearson over fractional (mean-of-ties) ranks.
double Spearman(std::span<const double> xs, std::span<const double> ys);
// 1-based ranks; ties share the mean of the ranks they span.
std::vector<double> FractionalRanks(std::span<const double> values);

double ExactMatch(const Text& a, const Text& b);
double ExactMatch(std::string_view a, std::string_view b);
// Harmonic mean of multiset token-overlap precision and recall.
double TokenF1(const Text& a, const Text& b);
double TokenF1(std::string_view a, std::string_view b);

// Dispatches to the kernel for `kind`. Throws kUnsupportedKindForVariant when
// the kernel is undefined for the outputs' variant.
double EvaluateMetric(MetricKind kind, std::span<const Output> preds,
                      std::span<const Output> gold);

}  // namespace seedstab

#endif  // SEEDSTAB_METRICS_H_
