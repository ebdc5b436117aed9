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

// Fixed-length representation: one L1-normalized 30-bin histogram per
// feature, concatenated in FeatureId order.

#include <bodyemo/features.hpp>

#include <cstdint>
#include <cstring>
#include <iomanip>
#include <sstream>

namespace bodyemo {

inline constexpr std::size_t kBins = 30;
inline constexpr std::size_t kVectorLength = kFeatureCount * kBins;

/// 64-bit FNV-1a, used for stable content hashes in model metadata.
class Fnv1a {
 public:
  void update(const void* data, std::size_t size) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      hash_ ^= p[i];
      hash_ *= 0x100000001b3ULL;
    }
  }
  void update(double v) { update(&v, sizeof v); }
  void update(std::string_view s) { update(s.data(), s.size()); }
  std::uint64_t value() const { return hash_; }
  std::string hex() const {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << hash_;
    return os.str();
  }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

struct BinRange {
  double lo = 0.0;
  double hi = 1.0;
  friend bool operator==(const BinRange&, const BinRange&) = default;
};

struct BinningSpec {
  std::array<BinRange, kFeatureCount> ranges{};
  std::size_t bins = kBins;
  std::string dataset_hash;
  std::string policy = "percentile-1-99";

  const BinRange& operator[](FeatureId f) const { return ranges[index(f)]; }
  friend bool operator==(const BinningSpec&, const BinningSpec&) = default;
};

struct FeatureVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  std::span<const double> block(FeatureId f) const {
    return std::span(values).subspan(index(f) * kBins, kBins);
  }
  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// Linear-interpolated percentile (q in [0, 1]) of a sorted sample.
inline double percentile_sorted(const Series& sorted, double q) {
  if (sorted.empty()) throw EmptyDataset("percentile of an empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

/// Per-feature [p1, p99] of the pooled training values; a degenerate range
/// is widened to [v - 0.5, v + 0.5].
inline BinningSpec fit_binning(std::span<const FeatureSet> training) {
  if (training.empty()) throw EmptyDataset("fit_binning needs at least one FeatureSet");
  BinningSpec spec;
  Fnv1a hash;
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    Series pooled;
    for (const auto& fs : training) {
      const auto& s = fs[feature_at(f)];
      pooled.insert(pooled.end(), s.begin(), s.end());
      for (double v : s) hash.update(v);
    }
    if (pooled.empty()) {
      throw IncompleteFeatureSet("no training values for " + std::string(to_string(feature_at(f))));
    }
    std::sort(pooled.begin(), pooled.end());
    BinRange r{percentile_sorted(pooled, 0.01), percentile_sorted(pooled, 0.99)};
    if (!(r.lo < r.hi)) r = {r.lo - 0.5, r.lo + 0.5};
    spec.ranges[f] = r;
  }
  spec.dataset_hash = hash.hex();
  return spec;
}

inline std::size_t bin_of(double v, const BinRange& r, std::size_t bins = kBins) {
  if (!(v > r.lo)) return 0;  // also maps NaN to bin 0
  if (v >= r.hi) return bins - 1;
  const double width = (r.hi - r.lo) / static_cast<double>(bins);
  return std::min(static_cast<std::size_t>((v - r.lo) / width), bins - 1);
}

inline std::array<double, kBins> histogram(const FeatureSeries& series, const BinningSpec& spec) {
  if (index(series.id) >= kFeatureCount) throw UnknownFeature("feature index out of range");
  if (series.values.empty()) throw IncompleteFeatureSet("histogram of an empty series");
  std::array<double, kBins> h{};
  const auto& r = spec.ranges[index(series.id)];
  for (double v : series.values) h[bin_of(v, r)] += 1.0;
  const double n = static_cast<double>(series.values.size());
  for (double& c : h) c /= n;
  return h;
}

inline FeatureVector assemble(const FeatureSet& fs, const BinningSpec& spec) {
  FeatureVector fv;
  fv.values.reserve(kVectorLength);
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    const auto& s = fs[feature_at(f)];
    if (s.empty()) {
      throw IncompleteFeatureSet("missing feature " + std::string(to_string(feature_at(f))));
    }
    const auto h = histogram({feature_at(f), s}, spec);
    fv.values.insert(fv.values.end(), h.begin(), h.end());
  }
  return fv;
}

}  // namespace bodyemo
