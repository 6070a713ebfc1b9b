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

#include "vscreen/metrics.h"

#include "vscreen/common.h"

namespace vscreen::harness {
namespace {

void CheckLabels(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
  if (y_true.empty()) throw Error("metrics need at least one prediction");
  if (y_true.size() != y_pred.size()) throw Error("label and prediction counts differ");
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if ((y_true[i] != 0 && y_true[i] != 1) || (y_pred[i] != 0 && y_pred[i] != 1)) {
      throw Error("labels must be 0 or 1");
    }
  }
}

}  // namespace

ConfusionCounts CountConfusion(const std::vector<int>& y_true,
                               const std::vector<int>& y_pred) {
  CheckLabels(y_true, y_pred);
  ConfusionCounts c;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_pred[i] == 1) {
      ++(y_true[i] == 1 ? c.tp : c.fp);
    } else {
      ++(y_true[i] == 1 ? c.fn : c.tn);
    }
  }
  return c;
}

MetricsRow MetricsFromCounts(std::size_t tp, std::size_t fp, std::size_t fn) {
  MetricsRow row;
  const double dtp = static_cast<double>(tp);
  if (tp + fp > 0) row.precision = dtp / static_cast<double>(tp + fp);
  if (tp + fn > 0) row.recall = dtp / static_cast<double>(tp + fn);
  if (row.precision + row.recall > 0) {
    row.f1 = 2.0 * row.precision * row.recall / (row.precision + row.recall);
  }
  return row;
}

MetricsRow ComputeMetrics(const std::vector<int>& y_true,
                          const std::vector<int>& y_pred) {
  const auto c = CountConfusion(y_true, y_pred);
  return MetricsFromCounts(c.tp, c.fp, c.fn);
}

double Accuracy(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
  const auto c = CountConfusion(y_true, y_pred);
  return static_cast<double>(c.tp + c.tn) / static_cast<double>(y_true.size());
}

}  // namespace vscreen::harness
