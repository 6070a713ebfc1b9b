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

// Shared plumbing used by every module, including a deterministic
// parallel-for.

#ifndef VSCREEN_COMMON_H_
#define VSCREEN_COMMON_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vscreen {

// All recoverable failures in the library are reported with this type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Lowercase hex SHA-256 of `data`.
std::string Sha256Hex(std::string_view data);

// Round-trippable text form of a double ("%a" hexfloat), and its inverse.
std::string FormatExact(double value);
double ParseExact(std::string_view text);

// Shortest decimal form that reads back to the same double.
std::string FormatShort(double value);

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view contents);

// Splits on a single character; keeps empty fields.
std::vector<std::string> Split(std::string_view text, char sep);
std::string_view Trim(std::string_view text);
std::string ToLower(std::string_view text);

// Reads a text asset, dropping blank lines and lines starting with '#'.
std::vector<std::string> ReadAssetLines(const std::filesystem::path& path);

// 64-bit mixing function used to derive independent child seeds.
uint64_t MixSeed(uint64_t seed, uint64_t stream);

using Rng = std::mt19937_64;

// Uniform double in [0, 1) with a fixed bit recipe (independent of the
// standard library's distribution implementation).
inline double UniformUnit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n).
uint64_t UniformIndex(Rng& rng, uint64_t n);

// Standard normal draw (Box-Muller over UniformUnit).
double StandardNormal(Rng& rng);

// Number of workers to use when the caller passes 0.
std::size_t DefaultWorkers();

// Runs body(i) for i in [0, n) on up to `workers` threads. Each index is
// processed exactly once; results must be written to per-index slots so the
// outcome does not depend on scheduling. The first exception is rethrown.
void ParallelFor(std::size_t n, std::size_t workers,
                 const std::function<void(std::size_t)>& body);

// Path to the bundled asset directory (overridable with VSCREEN_ASSETS).
std::filesystem::path DefaultAssetsDir();

}  // namespace vscreen

#endif  // VSCREEN_COMMON_H_
