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

// Gesture segmentation by kinetic-energy hysteresis.

#include <bodyemo/features.hpp>
#include <bodyemo/preprocess.hpp>

namespace bodyemo {

struct SegmenterParams {
  double tau_on = 0.05;   // open when E >= tau_on
  double tau_off = 0.025; // count frames with E < tau_off toward closing
  int hold = 15;          // consecutive quiet frames needed to close
  int min_len = 30;
  int pad = 5;

  void validate() const {
    if (!(tau_off <= tau_on) || tau_off < 0.0 || !std::isfinite(tau_on)) {
      throw InvalidArgument("segmenter thresholds must satisfy 0 <= tau_off <= tau_on");
    }
    if (hold < 0 || pad < 0 || min_len < 2) {
      throw InvalidArgument("segmenter counts must be >= 0 and min_len >= 2");
    }
  }

  friend bool operator==(const SegmenterParams&, const SegmenterParams&) = default;
};

struct GestureSegment {
  std::size_t start_frame = 0;  // inclusive
  std::size_t end_frame = 0;    // inclusive
  double peak_energy = 0.0;

  std::size_t length() const { return end_frame - start_frame + 1; }
  friend bool operator==(const GestureSegment&, const GestureSegment&) = default;
};

/// Frame-at-a-time hysteresis state machine. Emits unpadded segments
/// spanning first activation to the last frame at or above tau_off.
class HysteresisSegmenter {
 public:
  explicit HysteresisSegmenter(SegmenterParams params) : params_(params) { params_.validate(); }

  /// Feeds the energy of the next frame; returns a segment if this frame
  /// completed the closing hold.
  std::optional<GestureSegment> push(double energy) {
    const std::size_t frame = next_++;
    if (!active_) {
      if (energy >= params_.tau_on && energy > 0.0) {
        active_ = true;
        current_ = {frame, frame, energy};
        quiet_ = 0;
      }
      return std::nullopt;
    }
    if (energy >= params_.tau_off) {
      current_.end_frame = frame;
      current_.peak_energy = std::max(current_.peak_energy, energy);
      quiet_ = 0;
      return std::nullopt;
    }
    if (++quiet_ >= params_.hold) {
      active_ = false;
      return current_;
    }
    return std::nullopt;
  }

  /// Closes an open segment at end of input.
  std::optional<GestureSegment> flush() {
    if (!active_) return std::nullopt;
    active_ = false;
    return current_;
  }

  bool active() const { return active_; }
  /// First frame of the open segment, if any.
  std::optional<std::size_t> open_start() const {
    return active_ ? std::optional<std::size_t>(current_.start_frame) : std::nullopt;
  }
  std::size_t frames_seen() const { return next_; }
  const SegmenterParams& params() const { return params_; }

 private:
  SegmenterParams params_;
  bool active_ = false;
  GestureSegment current_;
  int quiet_ = 0;
  std::size_t next_ = 0;
};

/// Pads raw segments by `pad` frames within [0, frame_count), truncates
/// overlapping pads at their midpoint and drops segments shorter than
/// min_len.
inline std::vector<GestureSegment> finish_segments(std::vector<GestureSegment> raw,
                                                   std::size_t frame_count,
                                                   const SegmenterParams& params) {
  const auto pad = static_cast<std::size_t>(params.pad);
  for (auto& s : raw) {
    s.start_frame = s.start_frame >= pad ? s.start_frame - pad : 0;
    s.end_frame = std::min(s.end_frame + pad, frame_count - 1);
  }
  for (std::size_t i = 1; i < raw.size(); ++i) {
    auto& prev = raw[i - 1];
    auto& next = raw[i];
    if (next.start_frame <= prev.end_frame) {
      const std::size_t mid = (prev.end_frame + next.start_frame) / 2;
      prev.end_frame = mid;
      next.start_frame = mid + 1;
    }
  }
  std::vector<GestureSegment> out;
  for (const auto& s : raw) {
    if (s.end_frame >= s.start_frame && s.length() >= static_cast<std::size_t>(params.min_len)) {
      out.push_back(s);
    }
  }
  return out;
}

inline std::vector<GestureSegment> segment_energy(const Series& energy, const SegmenterParams& params) {
  HysteresisSegmenter machine(params);
  std::vector<GestureSegment> raw;
  for (double e : energy) {
    if (auto s = machine.push(e)) raw.push_back(*s);
  }
  if (auto s = machine.flush()) raw.push_back(*s);
  if (energy.empty()) return {};
  return finish_segments(std::move(raw), energy.size(), params);
}

inline std::vector<GestureSegment> segment(const SkeletonClip& clip, const SegmenterParams& params) {
  return segment_energy(kinetic_energy(clip), params);
}

/// Thresholds from the quartile of per-clip peak energies. All clips are
/// preprocessed with `opt` first.
inline SegmenterParams auto_params(const Dataset& dataset, const PreprocessOptions& opt = {}) {
  if (dataset.clips.empty()) throw EmptyDataset("auto_params needs at least one clip");
  Series peaks;
  peaks.reserve(dataset.clips.size());
  for (const auto& clip : dataset.clips) {
    const auto e = kinetic_energy(preprocess(clip, opt));
    peaks.push_back(*std::max_element(e.begin(), e.end()));
  }
  std::sort(peaks.begin(), peaks.end());
  // Linear-interpolated 25th percentile.
  const double pos = 0.25 * static_cast<double>(peaks.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, peaks.size() - 1);
  const double q = peaks[lo] + (pos - static_cast<double>(lo)) * (peaks[hi] - peaks[lo]);

  SegmenterParams p;
  p.tau_on = 0.2 * q;
  p.tau_off = p.tau_on / 2.0;
  p.hold = static_cast<int>(std::lround(0.5 * opt.rate));
  p.min_len = std::max(2, static_cast<int>(std::lround(1.0 * opt.rate)));
  p.pad = 5;
  return p;
}

}  // namespace bodyemo
