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

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bodyemo {

using Vec3 = Eigen::Vector3d;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Base of every error raised by the library. `kind()` is a stable short tag
/// ("ParseError", "TooShort", ...) that the CLI and service surface verbatim.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define BODYEMO_DEFINE_ERROR(Name)                                        \
  class Name : public Error {                                             \
   public:                                                                \
    explicit Name(const std::string& what) : Error(#Name, what) {}        \
  };

BODYEMO_DEFINE_ERROR(ParseError)
BODYEMO_DEFINE_ERROR(SchemaError)
BODYEMO_DEFINE_ERROR(DegenerateFrame)
BODYEMO_DEFINE_ERROR(TooShort)
BODYEMO_DEFINE_ERROR(NotUniform)
BODYEMO_DEFINE_ERROR(InvalidSpec)
BODYEMO_DEFINE_ERROR(InvalidArgument)
BODYEMO_DEFINE_ERROR(EmptyDataset)
BODYEMO_DEFINE_ERROR(UnknownFeature)
BODYEMO_DEFINE_ERROR(IncompleteFeatureSet)
BODYEMO_DEFINE_ERROR(SingleClassInput)
BODYEMO_DEFINE_ERROR(NonFinite)
BODYEMO_DEFINE_ERROR(InsufficientClassData)
BODYEMO_DEFINE_ERROR(DimensionMismatch)
BODYEMO_DEFINE_ERROR(VersionMismatch)
BODYEMO_DEFINE_ERROR(EmptyClass)
BODYEMO_DEFINE_ERROR(SingleSubject)

#undef BODYEMO_DEFINE_ERROR

// ---------------------------------------------------------------------------
// Joints
// ---------------------------------------------------------------------------

enum class JointId : std::size_t {
  Head = 0,
  ShoulderLeft,
  ShoulderRight,
  ElbowLeft,
  ElbowRight,
  HandLeft,
  HandRight,
  Torso,
};

inline constexpr std::size_t kJointCount = 8;

inline constexpr std::array<JointId, kJointCount> kAllJoints = {
    JointId::Head,      JointId::ShoulderLeft, JointId::ShoulderRight,
    JointId::ElbowLeft, JointId::ElbowRight,   JointId::HandLeft,
    JointId::HandRight, JointId::Torso};

/// Wire names used by the JSONL clip format.
inline constexpr std::array<std::string_view, kJointCount> kJointKeys = {
    "head", "shoulder_l", "shoulder_r", "elbow_l",
    "elbow_r", "hand_l", "hand_r", "torso"};

/// Human-readable names, used in error messages.
inline constexpr std::array<std::string_view, kJointCount> kJointNames = {
    "Head", "ShoulderLeft", "ShoulderRight", "ElbowLeft",
    "ElbowRight", "HandLeft", "HandRight", "Torso"};

constexpr std::size_t index(JointId j) { return static_cast<std::size_t>(j); }

/// Lateral counterpart (Head and Torso map to themselves).
constexpr JointId mirror_joint(JointId j) {
  switch (j) {
    case JointId::ShoulderLeft: return JointId::ShoulderRight;
    case JointId::ShoulderRight: return JointId::ShoulderLeft;
    case JointId::ElbowLeft: return JointId::ElbowRight;
    case JointId::ElbowRight: return JointId::ElbowLeft;
    case JointId::HandLeft: return JointId::HandRight;
    case JointId::HandRight: return JointId::HandLeft;
    default: return j;
  }
}

// ---------------------------------------------------------------------------
// Emotion labels and class sets
// ---------------------------------------------------------------------------

enum class EmotionLabel { Happiness, Anger, Sadness, Fear, Disgust, Surprise };

inline constexpr std::array<EmotionLabel, 6> kAllEmotions = {
    EmotionLabel::Happiness, EmotionLabel::Anger,   EmotionLabel::Sadness,
    EmotionLabel::Fear,      EmotionLabel::Disgust, EmotionLabel::Surprise};

inline std::string_view to_string(EmotionLabel e) {
  switch (e) {
    case EmotionLabel::Happiness: return "happiness";
    case EmotionLabel::Anger: return "anger";
    case EmotionLabel::Sadness: return "sadness";
    case EmotionLabel::Fear: return "fear";
    case EmotionLabel::Disgust: return "disgust";
    case EmotionLabel::Surprise: return "surprise";
  }
  return "?";
}

inline std::optional<EmotionLabel> parse_emotion(std::string_view s) {
  for (auto e : kAllEmotions) {
    if (to_string(e) == s) return e;
  }
  return std::nullopt;
}

/// Ordered subset of emotions. Order is alphabetical by name so that model
/// indices are stable across runs and tools.
class ClassSet {
 public:
  ClassSet() = default;
  explicit ClassSet(std::vector<EmotionLabel> labels) : labels_(std::move(labels)) {
    std::sort(labels_.begin(), labels_.end(),
              [](auto a, auto b) { return to_string(a) < to_string(b); });
    labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
  }

  static ClassSet six() {
    return ClassSet({kAllEmotions.begin(), kAllEmotions.end()});
  }
  static ClassSet four() {
    return ClassSet({EmotionLabel::Happiness, EmotionLabel::Sadness,
                     EmotionLabel::Anger, EmotionLabel::Fear});
  }
  static ClassSet with_size(int k) {
    if (k == 6) return six();
    if (k == 4) return four();
    throw InvalidArgument("class set size must be 4 or 6, got " + std::to_string(k));
  }

  std::size_t size() const { return labels_.size(); }
  EmotionLabel operator[](std::size_t i) const { return labels_.at(i); }
  const std::vector<EmotionLabel>& labels() const { return labels_; }
  auto begin() const { return labels_.begin(); }
  auto end() const { return labels_.end(); }

  std::optional<std::size_t> index_of(EmotionLabel e) const {
    auto it = std::find(labels_.begin(), labels_.end(), e);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
  }
  bool contains(EmotionLabel e) const { return index_of(e).has_value(); }

  friend bool operator==(const ClassSet&, const ClassSet&) = default;

 private:
  std::vector<EmotionLabel> labels_;
};

// ---------------------------------------------------------------------------
// Frames and clips
// ---------------------------------------------------------------------------

enum class ClipSource { Qualisys, Kinect, Synthetic, Stream };

inline std::string_view to_string(ClipSource s) {
  switch (s) {
    case ClipSource::Qualisys: return "qualisys";
    case ClipSource::Kinect: return "kinect";
    case ClipSource::Synthetic: return "synthetic";
    case ClipSource::Stream: return "stream";
  }
  return "?";
}

inline std::optional<ClipSource> parse_source(std::string_view s) {
  for (auto c : {ClipSource::Qualisys, ClipSource::Kinect, ClipSource::Synthetic,
                 ClipSource::Stream}) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

/// One skeleton sample. Coordinates in meters: x lateral (subject's left
/// positive), y vertical up, z sagittal (toward the sensor positive).
struct SkeletonFrame {
  double t = 0.0;
  std::array<Vec3, kJointCount> joints{};

  const Vec3& operator[](JointId j) const { return joints[index(j)]; }
  Vec3& operator[](JointId j) { return joints[index(j)]; }

  double shoulder_width() const {
    return ((*this)[JointId::ShoulderLeft] - (*this)[JointId::ShoulderRight]).norm();
  }

  bool finite() const {
    if (!std::isfinite(t)) return false;
    for (const auto& p : joints) {
      if (!p.allFinite()) return false;
    }
    return true;
  }

  friend bool operator==(const SkeletonFrame& a, const SkeletonFrame& b) {
    return a.t == b.t && a.joints == b.joints;
  }
};

struct SkeletonClip {
  std::vector<SkeletonFrame> frames;
  std::string subject_id;
  std::optional<EmotionLabel> label;
  ClipSource source = ClipSource::Synthetic;
  double nominal_rate = 30.0;

  std::size_t size() const { return frames.size(); }
  bool empty() const { return frames.empty(); }
  double duration() const { return frames.empty() ? 0.0 : frames.back().t - frames.front().t; }

  /// Time step of a uniform clip; callers needing uniformity should go
  /// through `require_uniform`.
  double dt() const {
    return frames.size() < 2 ? 1.0 / nominal_rate
                             : duration() / static_cast<double>(frames.size() - 1);
  }

  /// Sub-clip of frames [first, last] inclusive, metadata carried over.
  SkeletonClip slice(std::size_t first, std::size_t last) const {
    SkeletonClip out;
    out.subject_id = subject_id;
    out.label = label;
    out.source = source;
    out.nominal_rate = nominal_rate;
    out.frames.assign(frames.begin() + static_cast<std::ptrdiff_t>(first),
                      frames.begin() + static_cast<std::ptrdiff_t>(last) + 1);
    return out;
  }

  friend bool operator==(const SkeletonClip&, const SkeletonClip&) = default;
};

inline constexpr double kUniformTolerance = 1e-9;

inline bool is_uniform(const SkeletonClip& clip) {
  if (clip.frames.size() < 2) return true;
  const double step = clip.dt();
  for (std::size_t i = 1; i < clip.frames.size(); ++i) {
    if (std::abs(clip.frames[i].t - clip.frames[i - 1].t - step) > kUniformTolerance) {
      return false;
    }
  }
  return true;
}

inline void require_uniform(const SkeletonClip& clip) {
  if (!is_uniform(clip)) throw NotUniform("clip frames are not uniformly spaced");
}

/// Checks the frame-level invariants: all joints finite, nonzero shoulder
/// width, strictly increasing timestamps.
inline void validate(const SkeletonClip& clip) {
  for (std::size_t i = 0; i < clip.frames.size(); ++i) {
    const auto& f = clip.frames[i];
    if (!f.finite()) throw SchemaError("frame " + std::to_string(i) + " has non-finite values");
    if (!(f.shoulder_width() > 0.0)) {
      throw DegenerateFrame("frame " + std::to_string(i) + " has zero shoulder distance");
    }
    if (i > 0 && !(f.t > clip.frames[i - 1].t)) {
      throw SchemaError("frame " + std::to_string(i) + " timestamp not increasing");
    }
  }
}

/// A labeled collection of clips.
struct Dataset {
  std::vector<SkeletonClip> clips;

  std::vector<std::string> subjects() const {
    std::vector<std::string> ids;
    for (const auto& c : clips) ids.push_back(c.subject_id);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
  }

  std::size_t count(EmotionLabel e) const {
    return static_cast<std::size_t>(std::count_if(
        clips.begin(), clips.end(), [e](const auto& c) { return c.label == e; }));
  }
};

}  // namespace bodyemo
