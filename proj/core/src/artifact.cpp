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

#include "vscreen/artifact.h"

#include <charconv>
#include <cstdlib>

#include "vscreen/common.h"

namespace vscreen {
namespace {

void AppendReal(std::string& out, double v) {
  char buf[40];
  const int n = std::snprintf(buf, sizeof buf, "%a", v);
  out.append(buf, static_cast<std::size_t>(n));
}

// strtod on a bounded token without copying the whole line.
double ParseToken(std::string_view tok) {
  char buf[64];
  if (tok.empty() || tok.size() >= sizeof buf) {
    throw Error("malformed real in artifact: '" + std::string(tok) + "'");
  }
  tok.copy(buf, tok.size());
  buf[tok.size()] = '\0';
  char* end = nullptr;
  const double v = std::strtod(buf, &end);
  if (end != buf + tok.size()) {
    throw Error("malformed real in artifact: '" + std::string(tok) + "'");
  }
  return v;
}

template <typename Fn>
void ForEachToken(std::string_view line, Fn&& fn) {
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ') ++j;
    if (j > i) fn(line.substr(i, j - i));
    i = j;
  }
}

int64_t ParseInt(std::string_view tok) {
  int64_t v = 0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size()) {
    throw Error("malformed integer in artifact: '" + std::string(tok) + "'");
  }
  return v;
}

}  // namespace

void ArtifactWriter::Text(std::string_view key, std::string_view value) {
  if (value.find('\n') != std::string_view::npos) {
    throw Error("artifact text values must be single-line");
  }
  out_.append(key);
  out_.push_back(' ');
  out_.append(value);
  out_.push_back('\n');
}

void ArtifactWriter::Int(std::string_view key, int64_t value) {
  Text(key, std::to_string(value));
}

void ArtifactWriter::Real(std::string_view key, double value) {
  out_.append(key);
  out_.push_back(' ');
  AppendReal(out_, value);
  out_.push_back('\n');
}

void ArtifactWriter::Reals(std::string_view key,
                           const std::vector<double>& values) {
  out_.append(key);
  out_.push_back(' ');
  out_.append(std::to_string(values.size()));
  for (double v : values) {
    out_.push_back(' ');
    AppendReal(out_, v);
  }
  out_.push_back('\n');
}

void ArtifactWriter::Vec(std::string_view key, const Vector& values) {
  Reals(key, std::vector<double>(values.data(), values.data() + values.size()));
}

void ArtifactWriter::Mat(std::string_view key, const Matrix& values) {
  out_.append(key);
  out_ += " " + std::to_string(values.rows()) + " " +
          std::to_string(values.cols()) + "\n";
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      if (c > 0) out_.push_back(' ');
      AppendReal(out_, values(r, c));
    }
    out_.push_back('\n');
  }
}

ArtifactReader::ArtifactReader(std::string_view contents)
    : contents_(contents) {}

std::string_view ArtifactReader::NextLine() {
  if (AtEnd()) throw Error("unexpected end of artifact");
  std::size_t end = contents_.find('\n', pos_);
  if (end == std::string_view::npos) end = contents_.size();
  const auto line = contents_.substr(pos_, end - pos_);
  pos_ = end + 1;
  ++line_no_;
  return line;
}

std::string_view ArtifactReader::ExpectKey(std::string_view key) {
  const auto line = NextLine();
  const auto space = line.find(' ');
  const auto found = line.substr(0, space);
  if (found != key) {
    throw Error("artifact line " + std::to_string(line_no_) + ": expected '" +
                std::string(key) + "', found '" + std::string(found) + "'");
  }
  return space == std::string_view::npos ? std::string_view()
                                         : line.substr(space + 1);
}

std::string ArtifactReader::PeekKey() const {
  if (AtEnd()) return {};
  std::size_t end = contents_.find_first_of(" \n", pos_);
  if (end == std::string_view::npos) end = contents_.size();
  return std::string(contents_.substr(pos_, end - pos_));
}

std::string ArtifactReader::Text(std::string_view key) {
  return std::string(ExpectKey(key));
}

int64_t ArtifactReader::Int(std::string_view key) {
  return ParseInt(ExpectKey(key));
}

double ArtifactReader::Real(std::string_view key) {
  return ParseToken(ExpectKey(key));
}

std::vector<double> ArtifactReader::Reals(std::string_view key) {
  const auto rest = ExpectKey(key);
  std::vector<double> values;
  bool first = true;
  int64_t expected = 0;
  ForEachToken(rest, [&](std::string_view tok) {
    if (first) {
      expected = ParseInt(tok);
      values.reserve(static_cast<std::size_t>(expected));
      first = false;
    } else {
      values.push_back(ParseToken(tok));
    }
  });
  if (first || static_cast<int64_t>(values.size()) != expected) {
    throw Error("artifact line " + std::to_string(line_no_) +
                ": length mismatch for " + std::string(key));
  }
  return values;
}

Vector ArtifactReader::Vec(std::string_view key) {
  const auto values = Reals(key);
  return Eigen::Map<const Vector>(values.data(),
                                  static_cast<Eigen::Index>(values.size()));
}

Matrix ArtifactReader::Mat(std::string_view key) {
  const auto rest = ExpectKey(key);
  std::vector<int64_t> dims;
  ForEachToken(rest, [&](std::string_view tok) { dims.push_back(ParseInt(tok)); });
  if (dims.size() != 2 || dims[0] < 0 || dims[1] < 0) {
    throw Error("bad matrix header for " + std::string(key));
  }
  Matrix m(dims[0], dims[1]);
  for (int64_t r = 0; r < dims[0]; ++r) {
    const auto line = NextLine();
    int64_t c = 0;
    ForEachToken(line, [&](std::string_view tok) {
      if (c >= dims[1]) throw Error("matrix row too long for " + std::string(key));
      m(r, c++) = ParseToken(tok);
    });
    if (c != dims[1]) throw Error("matrix row too short for " + std::string(key));
  }
  return m;
}

}  // namespace vscreen
