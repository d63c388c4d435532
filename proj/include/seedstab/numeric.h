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

#ifndef SEEDSTAB_NUMERIC_H_
#define SEEDSTAB_NUMERIC_H_

#include <cmath>
#include <cstddef>
#include <span>

namespace seedstab {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void Add(double value) {
    const double t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
  }

  double Total() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

inline double Sum(std::span<const double> values) {
  CompensatedSum acc;
  for (double v : values) acc.Add(v);
  return acc.Total();
}

inline double Mean(std::span<const double> values) {
  return Sum(values) / static_cast<double>(values.size());
}

}  // namespace seedstab

#endif  // SEEDSTAB_NUMERIC_H_
