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

// Line-oriented text codec for model artifacts. Reals are written as
// hexfloats so a save -> load -> save cycle reproduces the same bytes.

#ifndef VSCREEN_ARTIFACT_H_
#define VSCREEN_ARTIFACT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace vscreen {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

class ArtifactWriter {
 public:
  void Text(std::string_view key, std::string_view value);
  void Int(std::string_view key, int64_t value);
  void Real(std::string_view key, double value);
  void Reals(std::string_view key, const std::vector<double>& values);
  void Vec(std::string_view key, const Vector& values);
  // Header line "key rows cols", then one line per row.
  void Mat(std::string_view key, const Matrix& values);

  const std::string& str() const { return out_; }

 private:
  std::string out_;
};

class ArtifactReader {
 public:
  explicit ArtifactReader(std::string_view contents);

  // Each accessor consumes the next line and checks its key.
  std::string Text(std::string_view key);
  int64_t Int(std::string_view key);
  double Real(std::string_view key);
  std::vector<double> Reals(std::string_view key);
  Vector Vec(std::string_view key);
  Matrix Mat(std::string_view key);

  // Key of the next line without consuming it ("" at end).
  std::string PeekKey() const;
  bool AtEnd() const { return pos_ >= contents_.size(); }

 private:
  std::string_view NextLine();
  std::string_view ExpectKey(std::string_view key);

  std::string_view contents_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
};

}  // namespace vscreen

#endif  // VSCREEN_ARTIFACT_H_
