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

#ifndef VSCREEN_STANDARDIZER_H_
#define VSCREEN_STANDARDIZER_H_

#include <cstdint>
#include <vector>

#include "vscreen/artifact.h"

namespace vscreen::ml {

// Per-column centering and scaling by the population standard deviation.
// Zero-variance columns keep a scale of 1.
class Standardizer {
 public:
  Standardizer() = default;

  // Rows are samples. Throws on fewer than two rows or non-finite cells.
  static Standardizer Fit(const Matrix& x);
  // Same, skipping cells whose mask entry (row-major, rows x cols) is set.
  // Columns with no defined cell get mean 0 and scale 1.
  static Standardizer FitMasked(const Matrix& x,
                                const std::vector<uint8_t>& missing);

  Matrix Transform(const Matrix& x) const;
  void TransformRowInPlace(double* row) const;

  std::size_t size() const { return static_cast<std::size_t>(means_.size()); }
  const Vector& means() const { return means_; }
  const Vector& scales() const { return scales_; }

  void Serialize(ArtifactWriter& w) const;
  static Standardizer Deserialize(ArtifactReader& r);

 private:
  Vector means_;
  Vector scales_;
};

}  // namespace vscreen::ml

#endif  // VSCREEN_STANDARDIZER_H_
