// Copyright 2026 The bodyemo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bodyemo/skeleton.hpp>

#include <cstdint>
#include <span>

namespace bodyemo {

/// Ordered class pair of one binary machine; class `first` is the +1 side.
struct ClassPair {
  std::size_t first = 0;
  std::size_t second = 0;
  friend bool operator==(const ClassPair&, const ClassPair&) = default;
};

/// Pairs (i, j), i < j, in lexicographic order: (0,1), (0,2), ..., (K-2,K-1).
inline std::vector<ClassPair> one_vs_one_pairs(std::size_t k) {
  std::vector<ClassPair> pairs;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) pairs.push_back({i, j});
  }
  return pairs;
}

/// K x M matrix over {+1, -1, 0}; rows are classes, columns are machines.
class CodeMatrix {
 public:
  CodeMatrix() = default;
  CodeMatrix(std::size_t classes, std::size_t columns)
      : classes_(classes), columns_(columns), cells_(classes * columns, 0) {}

  /// Exhaustive one-vs-one code: column (i, j) is +1 on row i, -1 on row j.
  static CodeMatrix one_vs_one(std::size_t k) {
    const auto pairs = one_vs_one_pairs(k);
    CodeMatrix m(k, pairs.size());
    for (std::size_t s = 0; s < pairs.size(); ++s) {
      m.set(pairs[s].first, s, 1);
      m.set(pairs[s].second, s, -1);
    }
    return m;
  }

  std::size_t classes() const { return classes_; }
  std::size_t columns() const { return columns_; }
  int operator()(std::size_t row, std::size_t col) const { return cells_[row * columns_ + col]; }
  void set(std::size_t row, std::size_t col, int v) { cells_[row * columns_ + col] = static_cast<std::int8_t>(v); }

  friend bool operator==(const CodeMatrix&, const CodeMatrix&) = default;

 private:
  std::size_t classes_ = 0;
  std::size_t columns_ = 0;
  std::vector<std::int8_t> cells_;
};

struct Decoded {
  std::size_t label = 0;
  std::vector<double> losses;
};

/// Hinge-loss decoding, L(y) = sum_{s: M[y,s] != 0} max(0, 1 - M[y,s] f_s).
/// Ties go to the larger sum_s M[y,s] f_s, then to the lower class index.
inline Decoded ecoc_decode(std::span<const double> margins, const CodeMatrix& code) {
  if (margins.size() != code.columns()) {
    throw DimensionMismatch("margin count " + std::to_string(margins.size()) +
                            " does not match code columns " + std::to_string(code.columns()));
  }
  Decoded out;
  out.losses.assign(code.classes(), 0.0);
  std::vector<double> agreement(code.classes(), 0.0);
  for (std::size_t y = 0; y < code.classes(); ++y) {
    for (std::size_t s = 0; s < code.columns(); ++s) {
      const int m = code(y, s);
      if (m == 0) continue;
      out.losses[y] += std::max(0.0, 1.0 - m * margins[s]);
      agreement[y] += m * margins[s];
    }
  }
  for (std::size_t y = 1; y < code.classes(); ++y) {
    const std::size_t& best = out.label;
    if (out.losses[y] < out.losses[best] ||
        (out.losses[y] == out.losses[best] && agreement[y] > agreement[best])) {
      out.label = y;
    }
  }
  return out;
}

}  // namespace bodyemo
