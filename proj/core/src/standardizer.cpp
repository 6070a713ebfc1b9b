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

#include "vscreen/standardizer.h"

#include <cmath>

#include "vscreen/common.h"

namespace vscreen::ml {

Standardizer Standardizer::Fit(const Matrix& x) {
  if (x.rows() < 2) throw Error("standardizer needs at least two rows");
  if (!x.allFinite()) throw Error("standardizer input has non-finite values");
  Standardizer s;
  const double n = static_cast<double>(x.rows());
  s.means_ = x.colwise().sum().transpose() / n;
  s.scales_.resize(x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const double var = (x.col(c).array() - s.means_(c)).square().sum() / n;
    const double sd = std::sqrt(var);
    s.scales_(c) = sd > 0 ? sd : 1.0;
  }
  return s;
}

Standardizer Standardizer::FitMasked(const Matrix& x,
                                     const std::vector<uint8_t>& missing) {
  const auto rows = x.rows();
  const auto cols = x.cols();
  if (missing.size() != static_cast<std::size_t>(rows * cols)) {
    throw Error("standardizer mask shape mismatch");
  }
  if (rows < 2) throw Error("standardizer needs at least two rows");
  if (!x.allFinite()) throw Error("standardizer input has non-finite values");
  Standardizer s;
  s.means_ = Vector::Zero(cols);
  s.scales_ = Vector::Ones(cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    double sum = 0;
    std::size_t n = 0;
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (missing[static_cast<std::size_t>(r * cols + c)]) continue;
      sum += x(r, c);
      ++n;
    }
    if (n == 0) continue;
    const double mean = sum / static_cast<double>(n);
    double ss = 0;
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (missing[static_cast<std::size_t>(r * cols + c)]) continue;
      ss += (x(r, c) - mean) * (x(r, c) - mean);
    }
    const double sd = std::sqrt(ss / static_cast<double>(n));
    s.means_(c) = mean;
    s.scales_(c) = sd > 0 ? sd : 1.0;
  }
  return s;
}

Matrix Standardizer::Transform(const Matrix& x) const {
  if (x.cols() != means_.size()) {
    throw Error("standardizer expects " + std::to_string(means_.size()) +
                " columns, got " + std::to_string(x.cols()));
  }
  return (x.rowwise() - means_.transpose()).array().rowwise() /
         scales_.transpose().array();
}

void Standardizer::TransformRowInPlace(double* row) const {
  for (Eigen::Index c = 0; c < means_.size(); ++c) {
    row[c] = (row[c] - means_(c)) / scales_(c);
  }
}

void Standardizer::Serialize(ArtifactWriter& w) const {
  w.Vec("standardizer.means", means_);
  w.Vec("standardizer.scales", scales_);
}

Standardizer Standardizer::Deserialize(ArtifactReader& r) {
  Standardizer s;
  s.means_ = r.Vec("standardizer.means");
  s.scales_ = r.Vec("standardizer.scales");
  if (s.means_.size() != s.scales_.size()) {
    throw Error("standardizer means and scales differ in length");
  }
  return s;
}

}  // namespace vscreen::ml
