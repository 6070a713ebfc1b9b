/*
 * Copyright 2026 The vscreen Authors.
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

// Positive-class precision, recall and F1.

#ifndef VSCREEN_METRICS_H_
#define VSCREEN_METRICS_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace vscreen::harness {

struct ConfusionCounts {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
};

struct MetricsRow {
  std::string model;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  std::optional<double> change_f1;
  std::string manifest_digest;
};

ConfusionCounts CountConfusion(const std::vector<int>& y_true,
                               const std::vector<int>& y_pred);

// Zero denominators give 0.
MetricsRow MetricsFromCounts(std::size_t tp, std::size_t fp, std::size_t fn);

// Throws on empty or unequal inputs and on labels other than 0/1.
MetricsRow ComputeMetrics(const std::vector<int>& y_true,
                          const std::vector<int>& y_pred);

double Accuracy(const std::vector<int>& y_true, const std::vector<int>& y_pred);

}  // namespace vscreen::harness

#endif  // VSCREEN_METRICS_H_
