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

// Frame-at-a-time ingest: resampling, smoothing, kinetic energy and
// hysteresis segmentation run incrementally, and each gesture is
// classified as soon as no later frame can change its bounds. A whole clip
// pushed and flushed yields the same segments as segment(preprocess(clip)).

#include <bodyemo/model.hpp>
#include <bodyemo/preprocess.hpp>
#include <bodyemo/segmentation.hpp>

#include <chrono>
#include <deque>
#include <memory>

namespace bodyemo {

struct StreamResult {
  GestureSegment segment;  // frames of the canonical-rate grid
  double t_start = 0.0;
  double t_end = 0.0;
  std::optional<Prediction> prediction;  // empty without a model or below 4 frames
  double latency_ms = 0.0;               // segment close to prediction
};

class StreamClassifier {
 public:
  /// `model` may be null, in which case segments are reported unclassified.
  StreamClassifier(std::shared_ptr<const OvoEcocModel> model, SegmenterParams params,
                   PreprocessOptions pre = {}, FeatureWindows windows = {})
      : model_(std::move(model)), segmenter_(params), pre_(pre), windows_(windows),
        step_(1.0 / pre.rate), half_(pre.smooth_window / 2) {
    if (!(pre.rate > 0.0) || !std::isfinite(pre.rate)) throw InvalidArgument("rate must be positive");
    if (pre.smooth_window < 1 || pre.smooth_window % 2 == 0) {
      throw InvalidArgument("smoothing window must be odd and >= 1");
    }
  }

  /// Appends one raw frame; timestamps must increase strictly.
  std::vector<StreamResult> push(const SkeletonFrame& raw) {
    if (flushed_) throw InvalidArgument("stream already flushed");
    if (!raw.finite()) throw NonFinite("frame with non-finite coordinates");
    if (received_ > 0 && !(raw.t > prev_.t)) throw InvalidArgument("timestamps must increase");
    std::vector<StreamResult> out;
    if (received_++ == 0) {
      t0_ = raw.t;
      prev_ = raw;
      emit_resampled(raw, out);
      return out;
    }
    // Grid points in (prev.t, raw.t], plus any within rounding of raw.t.
    const double slack = 1e-9 * step_;
    for (;;) {
      const double t = grid_time(next_k_);
      if (t > raw.t + slack) break;
      SkeletonFrame f;
      if (t >= raw.t) {
        f = raw;
      } else {
        const double u = std::clamp((t - prev_.t) / (raw.t - prev_.t), 0.0, 1.0);
        for (std::size_t j = 0; j < kJointCount; ++j) {
          f.joints[j] = prev_.joints[j] + u * (raw.joints[j] - prev_.joints[j]);
        }
      }
      f.t = t;
      emit_resampled(f, out);
    }
    prev_ = raw;
    return out;
  }

  /// Ends the stream: completes the trailing smoothing and energy frames and
  /// closes any open segment.
  std::vector<StreamResult> flush() {
    if (flushed_) return {};
    flushed_ = true;
    std::vector<StreamResult> out;
    const std::size_t n = resampled_count();
    while (smoothed_count() < n) smooth_next(n, out);
    while (energy_count_ < n) energy_next(n, out);
    if (auto raw = segmenter_.flush()) close(*raw, out);
    if (pending_) {
      if (n > 0) pending_->end_frame = std::min(pending_->end_frame, n - 1);
      finalize(out);
    }
    return out;
  }

  std::size_t frames_received() const { return received_; }
  std::size_t canonical_frames() const { return resampled_count(); }
  std::optional<double> last_time() const {
    return received_ ? std::optional<double>(prev_.t) : std::nullopt;
  }
  bool flushed() const { return flushed_; }
  bool gesture_open() const { return segmenter_.active() || pending_.has_value(); }
  const SegmenterParams& params() const { return segmenter_.params(); }
  /// Frames currently buffered (bounded by the longest open gesture).
  std::size_t buffered() const { return resampled_.size() + smoothed_.size(); }

 private:
  using Clock = std::chrono::steady_clock;

  double grid_time(std::size_t k) const { return t0_ + static_cast<double>(k) * step_; }
  std::size_t resampled_count() const { return res_base_ + resampled_.size(); }
  std::size_t smoothed_count() const { return sm_base_ + smoothed_.size(); }
  const SkeletonFrame& resampled(std::size_t i) const { return resampled_[i - res_base_]; }
  const SkeletonFrame& smoothed(std::size_t i) const { return smoothed_[i - sm_base_]; }

  void emit_resampled(const SkeletonFrame& f, std::vector<StreamResult>& out) {
    resampled_.push_back(f);
    ++next_k_;
    // Frame i has its full window once i + half frames exist.
    while (smoothed_count() + static_cast<std::size_t>(half_) < resampled_count()) {
      smooth_next(0, out);
    }
  }

  /// Smooths the next frame. `n` is the final frame count once flushed.
  void smooth_next(std::size_t n, std::vector<StreamResult>& out) {
    const auto i = static_cast<std::ptrdiff_t>(smoothed_count());
    std::ptrdiff_t h = std::min<std::ptrdiff_t>(half_, i);
    if (flushed_) h = std::min(h, static_cast<std::ptrdiff_t>(n) - 1 - i);
    SkeletonFrame s = resampled(static_cast<std::size_t>(i));
    if (h > 0) {
      for (std::size_t j = 0; j < kJointCount; ++j) {
        Vec3 acc = Vec3::Zero();
        for (std::ptrdiff_t k = i - h; k <= i + h; ++k) acc += resampled(static_cast<std::size_t>(k)).joints[j];
        s.joints[j] = acc / static_cast<double>(2 * h + 1);
      }
    }
    smoothed_.push_back(s);
    const std::size_t keep = smoothed_count() > static_cast<std::size_t>(half_)
                                 ? smoothed_count() - static_cast<std::size_t>(half_)
                                 : 0;
    while (res_base_ < keep) {
      resampled_.pop_front();
      ++res_base_;
    }
    if (!flushed_) {
      while (energy_count_ + 1 < smoothed_count()) energy_next(0, out);
    }
  }

  /// Energy of the next frame; central differences need frame i + 1 except
  /// at the final frame.
  void energy_next(std::size_t n, std::vector<StreamResult>& out) {
    const std::size_t i = energy_count_;
    double e = 0.0;
    const bool last = flushed_ && i + 1 == n;
    if (!(last && i == 0)) {
      const std::size_t lo = i == 0 ? 0 : i - 1;
      const std::size_t hi = last ? i : i + 1;
      const double span = (i == 0 || last) ? step_ : 2.0 * step_;
      for (auto j : kAllJoints) {
        const Vec3 v = (smoothed(hi)[j] - smoothed(lo)[j]) / span;
        e += 0.5 * v.squaredNorm();
      }
    }
    ++energy_count_;
    if (auto raw = segmenter_.push(e)) close(*raw, out);
    maybe_finalize(out);
  }

  void close(GestureSegment raw, std::vector<StreamResult>& out) {
    const auto pad = static_cast<std::size_t>(segmenter_.params().pad);
    raw.start_frame = raw.start_frame >= pad ? raw.start_frame - pad : 0;
    raw.end_frame += pad;
    if (flushed_) {
      const std::size_t last = resampled_count() - 1;
      raw.end_frame = std::min(raw.end_frame, last);
      if (pending_) pending_->end_frame = std::min(pending_->end_frame, last);
    }
    if (pending_) {
      if (raw.start_frame <= pending_->end_frame) {
        const std::size_t mid = (pending_->end_frame + raw.start_frame) / 2;
        pending_->end_frame = mid;
        raw.start_frame = mid + 1;
      }
      finalize(out);
    }
    pending_ = raw;
    closed_at_ = Clock::now();
  }

  /// A segment not yet opened starts at frame >= energy_count_, so once that
  /// padded start lies past the pending end, and any open segment's padded
  /// start does too, the pending bounds are final.
  void maybe_finalize(std::vector<StreamResult>& out) {
    const auto pad = static_cast<std::size_t>(segmenter_.params().pad);
    const auto open = segmenter_.open_start();
    const bool open_overlaps = open && *open <= pending_.value_or(GestureSegment{}).end_frame + pad;
    if (pending_ && energy_count_ > pending_->end_frame + pad && !open_overlaps) {
      finalize(out);
    } else {
      trim();
    }
  }

  void finalize(std::vector<StreamResult>& out) {
    const GestureSegment seg = *pending_;
    pending_.reset();
    if (seg.end_frame >= seg.start_frame &&
        seg.length() >= static_cast<std::size_t>(segmenter_.params().min_len)) {
      StreamResult r;
      r.segment = seg;
      r.t_start = grid_time(seg.start_frame);
      r.t_end = grid_time(seg.end_frame);
      if (model_ && seg.length() >= kMinKinematicFrames) {
        SkeletonClip clip;
        clip.nominal_rate = pre_.rate;
        clip.frames.reserve(seg.length());
        for (std::size_t i = seg.start_frame; i <= seg.end_frame; ++i) clip.frames.push_back(smoothed(i));
        r.prediction = model_->predict(extract_all(clip, windows_));
      }
      r.latency_ms = std::chrono::duration<double, std::milli>(Clock::now() - closed_at_).count();
      out.push_back(std::move(r));
    }
    trim();
  }

  void trim() {
    const auto pad = static_cast<std::size_t>(segmenter_.params().pad);
    std::size_t keep = energy_count_ > pad + 1 ? energy_count_ - pad - 1 : 0;
    if (auto open = segmenter_.open_start()) keep = std::min(keep, *open >= pad ? *open - pad : 0);
    if (pending_) keep = std::min(keep, pending_->start_frame);
    while (sm_base_ < keep && !smoothed_.empty()) {
      smoothed_.pop_front();
      ++sm_base_;
    }
  }

  std::shared_ptr<const OvoEcocModel> model_;
  HysteresisSegmenter segmenter_;
  PreprocessOptions pre_;
  FeatureWindows windows_;
  double step_;
  int half_;

  std::size_t received_ = 0;
  SkeletonFrame prev_;
  double t0_ = 0.0;
  std::size_t next_k_ = 0;
  std::deque<SkeletonFrame> resampled_;
  std::size_t res_base_ = 0;
  std::deque<SkeletonFrame> smoothed_;
  std::size_t sm_base_ = 0;
  std::size_t energy_count_ = 0;
  std::optional<GestureSegment> pending_;
  Clock::time_point closed_at_{};
  bool flushed_ = false;
};

}  // namespace bodyemo
