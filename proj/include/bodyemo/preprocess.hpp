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

namespace bodyemo {

inline constexpr double kCanonicalRate = 30.0;
inline constexpr int kDefaultSmoothWindow = 5;

/// Linear resampling onto the grid t0, t0 + 1/rate, ... <= t_last.
inline SkeletonClip resample(const SkeletonClip& clip, double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw InvalidArgument("resample rate must be positive");
  }
  if (clip.frames.size() < 2 || clip.duration() < 2.0 / rate - 1e-12) {
    throw TooShort("clip too short to resample at " + std::to_string(rate) + " Hz");
  }
  const double t0 = clip.frames.front().t;
  const double step = 1.0 / rate;
  const auto count = static_cast<std::size_t>(std::floor(clip.duration() * rate + 1e-9)) + 1;

  SkeletonClip out;
  out.subject_id = clip.subject_id;
  out.label = clip.label;
  out.source = clip.source;
  out.nominal_rate = rate;
  out.frames.resize(count);

  std::size_t seg = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const double t = t0 + static_cast<double>(k) * step;
    while (seg + 2 < clip.frames.size() && clip.frames[seg + 1].t <= t) ++seg;
    const auto& a = clip.frames[seg];
    const auto& b = clip.frames[seg + 1];
    const double u = std::clamp((t - a.t) / (b.t - a.t), 0.0, 1.0);
    auto& f = out.frames[k];
    f.t = t;
    for (std::size_t j = 0; j < kJointCount; ++j) {
      f.joints[j] = a.joints[j] + u * (b.joints[j] - a.joints[j]);
    }
  }
  return out;
}

/// Centered moving average with symmetric windows that shrink at the edges.
/// Timestamps and frame count are untouched.
inline SkeletonClip smooth(const SkeletonClip& clip, int window) {
  if (window < 1 || window % 2 == 0) {
    throw InvalidArgument("smoothing window must be odd and >= 1");
  }
  require_uniform(clip);
  if (window == 1) return clip;
  const auto n = static_cast<std::ptrdiff_t>(clip.frames.size());
  const std::ptrdiff_t half = window / 2;
  SkeletonClip out = clip;
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const std::ptrdiff_t h = std::min({half, i, n - 1 - i});
    for (std::size_t j = 0; j < kJointCount; ++j) {
      Vec3 acc = Vec3::Zero();
      for (std::ptrdiff_t k = i - h; k <= i + h; ++k) acc += clip.frames[static_cast<std::size_t>(k)].joints[j];
      out.frames[static_cast<std::size_t>(i)].joints[j] = acc / static_cast<double>(2 * h + 1);
    }
  }
  return out;
}

struct PreprocessOptions {
  double rate = kCanonicalRate;
  int smooth_window = kDefaultSmoothWindow;
};

/// Ingest path applied to every clip before feature extraction.
inline SkeletonClip preprocess(const SkeletonClip& clip, const PreprocessOptions& opt = {}) {
  return smooth(resample(clip, opt.rate), opt.smooth_window);
}

}  // namespace bodyemo
