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

#include "seedstab/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string_view>
#include <unordered_map>

#include "seedstab/numeric.h"

namespace seedstab {
namespace {

void CheckLengths(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorCode::kLengthMismatch, "",
                std::to_string(a) + " predictions vs " + std::to_string(b) +
                    " references");
  }
  if (a == 0) throw Error(ErrorCode::kEmptyInput, "", "no values");
}

// Variant shared by every element of both lists.
OutputVariant CommonVariant(std::span<const Output> preds,
                            std::span<const Output> gold) {
  CheckLengths(preds.size(), gold.size());
  const OutputVariant v = VariantOf(gold.front());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (VariantOf(preds[i]) != v || VariantOf(gold[i]) != v) {
      throw Error(ErrorCode::kVariantMismatch, "",
                  "position " + std::to_string(i) + " mixes output variants");
    }
  }
  return v;
}

[[noreturn]] void Unsupported(MetricKind kind, OutputVariant v) {
  throw Error(ErrorCode::kUnsupportedKindForVariant,
              std::string(MetricName(kind)),
              "not defined for " + std::string(VariantName(v)) + " outputs");
}

struct LabelPairs {
  std::vector<std::string_view> pred;
  std::vector<std::string_view> gold;
};

LabelPairs FlattenLabels(std::span<const Output> preds,
                         std::span<const Output> gold) {
  const OutputVariant v = CommonVariant(preds, gold);
  LabelPairs out;
  if (v == OutputVariant::kLabel) {
    out.pred.reserve(preds.size());
    out.gold.reserve(gold.size());
    for (std::size_t i = 0; i < preds.size(); ++i) {
      out.pred.push_back(std::get<Label>(preds[i]).value);
      out.gold.push_back(std::get<Label>(gold[i]).value);
    }
  } else if (v == OutputVariant::kTokenSeq) {
    for (std::size_t i = 0; i < preds.size(); ++i) {
      const auto& p = std::get<TokenSeq>(preds[i]).tokens;
      const auto& g = std::get<TokenSeq>(gold[i]).tokens;
      if (p.size() != g.size()) {
        throw Error(ErrorCode::kTokenLengthMismatch, "",
                    "position " + std::to_string(i) + " has " +
                        std::to_string(p.size()) + " vs " +
                        std::to_string(g.size()) + " tokens");
      }
      out.pred.insert(out.pred.end(), p.begin(), p.end());
      out.gold.insert(out.gold.end(), g.begin(), g.end());
    }
  } else {
    throw Error(ErrorCode::kVariantMismatch, "",
                "label metrics need label or token-sequence outputs, got " +
                    std::string(VariantName(v)));
  }
  return out;
}

double Ratio(std::int64_t num, std::int64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double Harmonic(double p, double r) {
  return (p + r) == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

void CheckScalars(std::span<const double> a, std::span<const double> b) {
  CheckLengths(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!std::isfinite(a[i]) || !std::isfinite(b[i])) {
      throw Error(ErrorCode::kInvalidValue, "",
                  "non-finite scalar at position " + std::to_string(i));
    }
  }
}

bool IsConstant(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(),
                     [&](double v) { return v == values.front(); });
}

std::vector<double> Scalars(std::span<const Output> outputs) {
  std::vector<double> out;
  out.reserve(outputs.size());
  for (const Output& o : outputs) out.push_back(std::get<Scalar>(o).value);
  return out;
}

}  // namespace

ConfusionCounts CountConfusion(std::span<const Output> preds,
                               std::span<const Output> gold) {
  const LabelPairs labels = FlattenLabels(preds, gold);
  ConfusionCounts counts;
  counts.total = static_cast<std::int64_t>(labels.pred.size());
  for (std::size_t i = 0; i < labels.pred.size(); ++i) {
    counts.per_class.try_emplace(std::string(labels.pred[i]));
    counts.per_class.try_emplace(std::string(labels.gold[i]));
  }
  for (auto& [label, c] : counts.per_class) {
    for (std::size_t i = 0; i < labels.pred.size(); ++i) {
      const bool p = labels.pred[i] == label;
      const bool g = labels.gold[i] == label;
      if (p && g) {
        ++c.tp;
      } else if (p) {
        ++c.fp;
      } else if (g) {
        ++c.fn;
      } else {
        ++c.tn;
      }
    }
  }
  return counts;
}

double Accuracy(std::span<const Output> preds, std::span<const Output> gold) {
  CommonVariant(preds, gold);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i] == gold[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(preds.size());
}

PrecisionRecallF1 ComputePrecisionRecallF1(std::span<const Output> preds,
                                           std::span<const Output> gold,
                                           const Averaging& averaging) {
  const ConfusionCounts counts = CountConfusion(preds, gold);
  if (!averaging.is_macro()) {
    auto it = counts.per_class.find(averaging.positive_class());
    if (it == counts.per_class.end()) {
      throw Error(ErrorCode::kInvalidValue, averaging.positive_class(),
                  "positive class absent from the label universe");
    }
    const ClassCounts& c = it->second;
    const double p = Ratio(c.tp, c.tp + c.fp);
    const double r = Ratio(c.tp, c.tp + c.fn);
    return {p, r, Harmonic(p, r)};
  }
  CompensatedSum ps, rs, fs;
  for (const auto& [label, c] : counts.per_class) {
    const double p = Ratio(c.tp, c.tp + c.fp);
    const double r = Ratio(c.tp, c.tp + c.fn);
    ps.Add(p);
    rs.Add(r);
    fs.Add(Harmonic(p, r));
  }
  const auto k = static_cast<double>(counts.per_class.size());
  return {ps.Total() / k, rs.Total() / k, fs.Total() / k};
}

double Mcc(std::span<const Output> preds, std::span<const Output> gold) {
  const LabelPairs labels = FlattenLabels(preds, gold);
  std::set<std::string_view> universe(labels.pred.begin(), labels.pred.end());
  universe.insert(labels.gold.begin(), labels.gold.end());
  if (universe.size() > 2) {
    throw Error(ErrorCode::kNonBinaryLabels, "",
                std::to_string(universe.size()) + " distinct labels");
  }
  // MCC is invariant to which of the two labels is called positive.
  const std::string_view positive = *universe.rbegin();
  double tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < labels.pred.size(); ++i) {
    const bool p = labels.pred[i] == positive;
    const bool g = labels.gold[i] == positive;
    if (p && g) {
      tp += 1;
    } else if (p) {
      fp += 1;
    } else if (g) {
      fn += 1;
    } else {
      tn += 1;
    }
  }
  const double den = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (den == 0.0) return 0.0;
  const double r = (tp * tn - fp * fn) / std::sqrt(den);
  return std::clamp(r, -1.0, 1.0);
}

double Mae(std::span<const double> preds, std::span<const double> gold) {
  CheckScalars(preds, gold);
  CompensatedSum acc;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    acc.Add(std::abs(preds[i] - gold[i]));
  }
  return acc.Total() / static_cast<double>(preds.size());
}

double Mse(std::span<const double> preds, std::span<const double> gold) {
  CheckScalars(preds, gold);
  CompensatedSum acc;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const double d = preds[i] - gold[i];
    acc.Add(d * d);
  }
  return acc.Total() / static_cast<double>(preds.size());
}

double Pearson(std::span<const double> xs, std::span<const double> ys) {
  CheckScalars(xs, ys);
  if (xs.size() < 2) {
    throw Error(ErrorCode::kLengthMismatch, "",
                "correlation needs at least two points");
  }
  if (IsConstant(xs) || IsConstant(ys)) {
    throw Error(ErrorCode::kZeroVariance, "",
                "correlation is undefined for a constant series");
  }
  const double mx = Mean(xs);
  const double my = Mean(ys);
  CompensatedSum sxy, sxx, syy;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy.Add(dx * dy);
    sxx.Add(dx * dx);
    syy.Add(dy * dy);
  }
  const double r = sxy.Total() / std::sqrt(sxx.Total() * syy.Total());
  return std::clamp(r, -1.0, 1.0);
}

std::vector<double> FractionalRanks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                   std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) {
      ++j;
    }
    // Positions i..j (0-based) hold ranks i+1..j+1.
    const double mean_rank = (static_cast<double>(i + j) / 2.0) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
    i = j + 1;
  }
  return ranks;
}

double Spearman(std::span<const double> xs, std::span<const double> ys) {
  CheckScalars(xs, ys);
  const std::vector<double> rx = FractionalRanks(xs);
  const std::vector<double> ry = FractionalRanks(ys);
  return Pearson(rx, ry);
}

double ExactMatch(const Text& a, const Text& b) {
  return a.tokens == b.tokens ? 1.0 : 0.0;
}

double ExactMatch(std::string_view a, std::string_view b) {
  return ExactMatch(MakeText(a), MakeText(b));
}

double TokenF1(const Text& a, const Text& b) {
  if (a.tokens.empty() && b.tokens.empty()) return 1.0;
  if (a.tokens.empty() || b.tokens.empty()) return 0.0;
  std::unordered_map<std::string_view, std::int64_t> remaining;
  for (const std::string& t : b.tokens) ++remaining[t];
  std::int64_t common = 0;
  for (const std::string& t : a.tokens) {
    auto it = remaining.find(t);
    if (it != remaining.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  if (common == 0) return 0.0;
  const double p = static_cast<double>(common) / static_cast<double>(a.tokens.size());
  const double r = static_cast<double>(common) / static_cast<double>(b.tokens.size());
  return Harmonic(p, r);
}

double TokenF1(std::string_view a, std::string_view b) {
  return TokenF1(MakeText(a), MakeText(b));
}

double EvaluateMetric(MetricKind kind, std::span<const Output> preds,
                      std::span<const Output> gold) {
  const OutputVariant v = CommonVariant(preds, gold);
  const bool labels = v == OutputVariant::kLabel || v == OutputVariant::kTokenSeq;
  switch (kind) {
    case MetricKind::kAccuracy:
      if (v == OutputVariant::kScalar) Unsupported(kind, v);
      return Accuracy(preds, gold);
    case MetricKind::kPrecision:
      if (!labels) Unsupported(kind, v);
      return ComputePrecisionRecallF1(preds, gold, Averaging::Macro()).precision;
    case MetricKind::kRecall:
      if (!labels) Unsupported(kind, v);
      return ComputePrecisionRecallF1(preds, gold, Averaging::Macro()).recall;
    case MetricKind::kF1:
      if (!labels) Unsupported(kind, v);
      return ComputePrecisionRecallF1(preds, gold, Averaging::Macro()).f1;
    case MetricKind::kMcc:
      if (!labels) Unsupported(kind, v);
      return Mcc(preds, gold);
    case MetricKind::kMae:
    case MetricKind::kMse:
    case MetricKind::kPearson:
    case MetricKind::kSpearman: {
      if (v != OutputVariant::kScalar) Unsupported(kind, v);
      const std::vector<double> p = Scalars(preds);
      const std::vector<double> g = Scalars(gold);
      if (kind == MetricKind::kMae) return Mae(p, g);
      if (kind == MetricKind::kMse) return Mse(p, g);
      if (kind == MetricKind::kPearson) return Pearson(p, g);
      return Spearman(p, g);
    }
    case MetricKind::kExactMatch:
    case MetricKind::kTokenF1: {
      if (v != OutputVariant::kText) Unsupported(kind, v);
      CompensatedSum acc;
      for (std::size_t i = 0; i < preds.size(); ++i) {
        const auto& p = std::get<Text>(preds[i]);
        const auto& g = std::get<Text>(gold[i]);
        acc.Add(kind == MetricKind::kExactMatch ? ExactMatch(p, g)
                                                : TokenF1(p, g));
      }
      return acc.Total() / static_cast<double>(preds.size());
    }
  }
  Unsupported(kind, v);
}

}  // namespace seedstab
