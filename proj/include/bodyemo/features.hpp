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

// Per-frame expressive movement features.
//
// Every function here takes a uniform clip and returns one value per frame.
// Derivatives use central differences with one-sided endpoints; windowed
// statistics are evaluated at every center whose full window fits and the
// edge values are replicated. Singular configurations (no motion, zero
// variance) produce 0 rather than NaN.

#include <bodyemo/skeleton.hpp>

#include <numeric>
#include <span>
#include <utility>

namespace bodyemo {

using Series = std::vector<double>;

enum class FeatureId : std::size_t {
  KineticEnergy,
  ContractionIndex,
  GlobalDirectionAzimuth,
  GlobalDirectionElevation,
  OverallSymmetry,
  WholeBodyPeriodicity,
  HeadSpeed,
  HeadAccel,
  HeadJerk,
  HeadLeaningPos,
  HeadLeaningSpeed,
  HeadSymmetryHands,
  HeadSymmetryShoulders,
  TorsoLeaningPos,
  TorsoLeaningSpeed,
  HandsDistance,
  HandSpeed,
  HandAccel,
  HandJerk,
  HandCurvature,
  HandSmoothness,
  HandFluidity,
  HandImpulsiveness,
  HandDistTorso,
  HandDistHead,
};

inline constexpr std::size_t kFeatureCount = 25;

enum class FeatureGroup { WholeBody, Head, Torso, Hand, Shoulder, Elbow };

struct FeatureInfo {
  std::string_view name;
  std::string_view unit;
  FeatureGroup group;
};

inline constexpr std::array<FeatureInfo, kFeatureCount> kFeatureInfo = {{
    {"kinetic_energy", "J/kg", FeatureGroup::WholeBody},
    {"contraction_index", "1", FeatureGroup::WholeBody},
    {"global_direction_azimuth", "rad", FeatureGroup::WholeBody},
    {"global_direction_elevation", "rad", FeatureGroup::WholeBody},
    {"overall_symmetry", "1", FeatureGroup::WholeBody},
    {"whole_body_periodicity", "1", FeatureGroup::WholeBody},
    {"head_speed", "m/s", FeatureGroup::Head},
    {"head_accel", "m/s^2", FeatureGroup::Head},
    {"head_jerk", "m/s^3", FeatureGroup::Head},
    {"head_leaning_pos", "1", FeatureGroup::Head},
    {"head_leaning_speed", "1/s", FeatureGroup::Head},
    {"head_symmetry_hands", "1", FeatureGroup::Head},
    {"head_symmetry_shoulders", "1", FeatureGroup::Head},
    {"torso_leaning_pos", "1", FeatureGroup::Torso},
    {"torso_leaning_speed", "1/s", FeatureGroup::Torso},
    {"hands_distance", "1", FeatureGroup::Hand},
    {"hand_speed", "m/s", FeatureGroup::Hand},
    {"hand_accel", "m/s^2", FeatureGroup::Hand},
    {"hand_jerk", "m/s^3", FeatureGroup::Hand},
    {"hand_curvature", "1/m", FeatureGroup::Hand},
    {"hand_smoothness", "1", FeatureGroup::Hand},
    {"hand_fluidity", "1", FeatureGroup::Hand},
    {"hand_impulsiveness", "1", FeatureGroup::Hand},
    {"hand_dist_torso", "1", FeatureGroup::Hand},
    {"hand_dist_head", "1", FeatureGroup::Hand},
}};

constexpr std::size_t index(FeatureId f) { return static_cast<std::size_t>(f); }
constexpr FeatureId feature_at(std::size_t i) { return static_cast<FeatureId>(i); }
inline std::string_view to_string(FeatureId f) { return kFeatureInfo[index(f)].name; }

inline std::optional<FeatureId> parse_feature(std::string_view name) {
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (kFeatureInfo[i].name == name) return feature_at(i);
  }
  return std::nullopt;
}

struct FeatureSeries {
  FeatureId id{};
  Series values;
  std::string_view unit() const { return kFeatureInfo[index(id)].unit; }
};

/// All 25 series for one segment, indexed by FeatureId. An empty series
/// marks a feature that has not been computed.
class FeatureSet {
 public:
  const Series& operator[](FeatureId f) const { return series_[index(f)]; }
  Series& operator[](FeatureId f) { return series_[index(f)]; }

  bool complete() const {
    return std::all_of(series_.begin(), series_.end(), [](const auto& s) { return !s.empty(); });
  }
  std::size_t frames() const { return series_[0].size(); }

  FeatureSeries get(FeatureId f) const { return {f, series_[index(f)]}; }

  friend bool operator==(const FeatureSet&, const FeatureSet&) = default;

 private:
  std::array<Series, kFeatureCount> series_{};
};

struct FeatureWindows {
  int smoothness = 15;
  int fluidity = 15;
  int impulsiveness = 15;
  int periodicity = 60;
};

inline constexpr double kMotionEpsilon = 1e-4;     // m/s
inline constexpr double kPathEpsilon = 1e-4;       // m
inline constexpr double kVarianceEpsilon = 1e-12;
inline constexpr std::size_t kMinKinematicFrames = 4;

namespace detail {

inline void require_frames(const SkeletonClip& clip, std::size_t n) {
  if (clip.frames.size() < n) {
    throw TooShort("need at least " + std::to_string(n) + " frames, got " +
                   std::to_string(clip.frames.size()));
  }
}

inline double median(Series v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  double m = *mid;
  if (v.size() % 2 == 0) m = 0.5 * (m + *std::max_element(v.begin(), mid));
  return m;
}

}  // namespace detail

/// Central-difference derivative, one-sided at the two ends.
template <typename T>
std::vector<T> differentiate(const std::vector<T>& x, double dt) {
  const std::size_t n = x.size();
  std::vector<T> d(n);
  if (n < 2) {
    if (n == 1) d[0] = x[0] - x[0];
    return d;
  }
  d[0] = (x[1] - x[0]) / dt;
  d[n - 1] = (x[n - 1] - x[n - 2]) / dt;
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (x[i + 1] - x[i - 1]) / (2.0 * dt);
  return d;
}

inline std::vector<Vec3> trajectory(const SkeletonClip& clip, JointId j) {
  std::vector<Vec3> p;
  p.reserve(clip.frames.size());
  for (const auto& f : clip.frames) p.push_back(f[j]);
  return p;
}

inline std::vector<Vec3> centroid_trajectory(const SkeletonClip& clip) {
  std::vector<Vec3> c;
  c.reserve(clip.frames.size());
  for (const auto& f : clip.frames) {
    Vec3 s = Vec3::Zero();
    for (const auto& p : f.joints) s += p;
    c.push_back(s / static_cast<double>(kJointCount));
  }
  return c;
}

inline Series magnitudes(const std::vector<Vec3>& v) {
  Series m(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) m[i] = v[i].norm();
  return m;
}

/// Reference length: median shoulder width over the clip.
inline double reference_length(const SkeletonClip& clip) {
  Series w;
  w.reserve(clip.frames.size());
  for (const auto& f : clip.frames) w.push_back(f.shoulder_width());
  const double s = detail::median(std::move(w));
  if (!(s > 0.0)) throw DegenerateFrame("median shoulder distance is zero");
  return s;
}

struct JointDerivatives {
  std::vector<Vec3> velocity, acceleration, jerk;
};

inline JointDerivatives joint_derivatives(const SkeletonClip& clip, JointId j) {
  detail::require_frames(clip, kMinKinematicFrames);
  require_uniform(clip);
  const double dt = clip.dt();
  JointDerivatives d;
  d.velocity = differentiate(trajectory(clip, j), dt);
  d.acceleration = differentiate(d.velocity, dt);
  d.jerk = differentiate(d.acceleration, dt);
  return d;
}

struct Kinematics {
  Series speed, accel, jerk;
};

inline Kinematics kinematics(const SkeletonClip& clip, JointId j) {
  auto d = joint_derivatives(clip, j);
  return {magnitudes(d.velocity), magnitudes(d.acceleration), magnitudes(d.jerk)};
}

/// E(t) = 1/2 sum_i |v_i(t)|^2 with unit masses.
inline Series kinetic_energy(const SkeletonClip& clip) {
  detail::require_frames(clip, 2);
  require_uniform(clip);
  const double dt = clip.dt();
  Series e(clip.frames.size(), 0.0);
  for (auto j : kAllJoints) {
    const auto v = differentiate(trajectory(clip, j), dt);
    for (std::size_t i = 0; i < v.size(); ++i) e[i] += 0.5 * v[i].squaredNorm();
  }
  return e;
}

/// Mean joint distance from the centroid, in shoulder widths.
inline Series contraction_index(const SkeletonClip& clip) {
  const double s_ref = reference_length(clip);
  const auto c = centroid_trajectory(clip);
  Series ci(clip.frames.size());
  for (std::size_t i = 0; i < ci.size(); ++i) {
    double sum = 0.0;
    for (const auto& p : clip.frames[i].joints) sum += (p - c[i]).norm();
    ci[i] = sum / static_cast<double>(kJointCount) / s_ref;
  }
  return ci;
}

struct Direction {
  Series azimuth, elevation;
};

/// Heading of the centroid velocity. Azimuth is measured from +z toward +x
/// in (-pi, pi]; both angles are 0 while the centroid is (nearly) still.
inline Direction global_direction(const SkeletonClip& clip) {
  detail::require_frames(clip, 2);
  require_uniform(clip);
  const auto v = differentiate(centroid_trajectory(clip), clip.dt());
  Direction d{Series(v.size(), 0.0), Series(v.size(), 0.0)};
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double speed = v[i].norm();
    if (speed < kMotionEpsilon) continue;
    double az = std::atan2(v[i].x(), v[i].z());
    if (az <= -M_PI) az = M_PI;
    d.azimuth[i] = az;
    d.elevation[i] = std::asin(std::clamp(v[i].y() / speed, -1.0, 1.0));
  }
  return d;
}

inline Vec3 shoulder_axis(const SkeletonFrame& f) {
  return (f[JointId::ShoulderLeft] - f[JointId::ShoulderRight]).normalized();
}

/// Mirror symmetry of the arms about the sagittal plane through the torso.
/// 1 is perfectly symmetric.
inline Series overall_symmetry(const SkeletonClip& clip) {
  const double s_ref = reference_length(clip);
  constexpr std::array<std::pair<JointId, JointId>, 3> pairs = {{
      {JointId::ShoulderLeft, JointId::ShoulderRight},
      {JointId::ElbowLeft, JointId::ElbowRight},
      {JointId::HandLeft, JointId::HandRight},
  }};
  Series out(clip.frames.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& f = clip.frames[i];
    const Vec3 n = shoulder_axis(f);
    const Vec3& origin = f[JointId::Torso];
    double sum = 0.0;
    for (auto [l, r] : pairs) {
      const Vec3 reflected = f[r] - 2.0 * (f[r] - origin).dot(n) * n;
      sum += (f[l] - reflected).norm();
    }
    out[i] = std::max(0.0, 1.0 - (sum / 3.0) / s_ref);
  }
  return out;
}

enum class SymmetryReference { Hands, Shoulders };

/// How well the head is centered over the hand or shoulder pair along the
/// shoulder axis.
inline Series head_symmetry(const SkeletonClip& clip, SymmetryReference ref) {
  const double s_ref = reference_length(clip);
  const auto [a, b] = ref == SymmetryReference::Hands
                          ? std::pair{JointId::HandLeft, JointId::HandRight}
                          : std::pair{JointId::ShoulderLeft, JointId::ShoulderRight};
  Series out(clip.frames.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& f = clip.frames[i];
    const Vec3 mid = 0.5 * (f[a] + f[b]);
    const double u = (f[JointId::Head] - mid).dot(shoulder_axis(f)) / s_ref;
    out[i] = std::max(0.0, 1.0 - std::abs(u));
  }
  return out;
}

struct Leaning {
  Series position, speed;
};

/// Sagittal displacement from the clip-median position (forward positive),
/// in shoulder widths, and its time derivative.
inline Leaning leaning(const SkeletonClip& clip, JointId j) {
  detail::require_frames(clip, 2);
  require_uniform(clip);
  const double s_ref = reference_length(clip);
  Series z;
  z.reserve(clip.frames.size());
  for (const auto& f : clip.frames) z.push_back(f[j].z());
  const double rest = detail::median(z);
  Leaning out;
  out.position.resize(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out.position[i] = (z[i] - rest) / s_ref;
  out.speed = differentiate(out.position, clip.dt());
  return out;
}

inline Series pair_distance(const SkeletonClip& clip, JointId a, JointId b) {
  const double s_ref = reference_length(clip);
  Series d(clip.frames.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = (clip.frames[i][a] - clip.frames[i][b]).norm() / s_ref;
  }
  return d;
}

/// kappa = |v x a| / |v|^3, 0 where the joint is still.
inline Series curvature(const SkeletonClip& clip, JointId j) {
  const auto d = joint_derivatives(clip, j);
  Series k(d.velocity.size(), 0.0);
  for (std::size_t i = 0; i < k.size(); ++i) {
    const double speed = d.velocity[i].norm();
    if (speed < kMotionEpsilon) continue;
    k[i] = d.velocity[i].cross(d.acceleration[i]).norm() / (speed * speed * speed);
  }
  return k;
}

// ---------------------------------------------------------------------------
// Windowed statistics
// ---------------------------------------------------------------------------

/// Evaluates `stat(first, last)` (inclusive frame range) over a centered
/// window of `window` frames at every center where it fits, replicating
/// the first/last value to the edges. A series shorter than the window is
/// treated as a single window.
template <typename Stat>
Series sliding_window(std::size_t n, int window, Stat&& stat) {
  Series out(n, 0.0);
  if (n == 0) return out;
  const auto w = static_cast<std::size_t>(std::max(window, 1));
  if (n <= w) {
    std::fill(out.begin(), out.end(), stat(std::size_t{0}, n - 1));
    return out;
  }
  const std::size_t before = (w - 1) / 2;
  const std::size_t after = w - 1 - before;
  for (std::size_t c = before; c + after < n; ++c) out[c] = stat(c - before, c + after);
  std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(before), out[before]);
  std::fill(out.end() - static_cast<std::ptrdiff_t>(after), out.end(), out[n - 1 - after]);
  return out;
}

inline void require_window(int window, int minimum) {
  if (window < minimum) {
    throw InvalidArgument("window must be at least " + std::to_string(minimum) + " frames");
  }
}

/// Dimensionless jerk (T^5 / L^2) * integral |j|^2 dt of a path segment.
/// Returns nullopt when the path length is below the still-window guard.
inline std::optional<double> dimensionless_jerk(std::span<const Vec3> positions,
                                                std::span<const Vec3> jerk, double dt) {
  double path = 0.0;
  for (std::size_t k = 1; k < positions.size(); ++k) path += (positions[k] - positions[k - 1]).norm();
  if (path < kPathEpsilon) return std::nullopt;
  double integral = 0.0;
  for (const auto& j : jerk) integral += j.squaredNorm() * dt;
  const double duration = static_cast<double>(positions.size() - 1) * dt;
  return std::pow(duration, 5) / (path * path) * integral;
}

/// Sliding-window smoothness, -ln(dimensionless jerk). Still windows take
/// the smallest value produced so far (0 if none).
inline Series smoothness(const SkeletonClip& clip, JointId j, int window = 15) {
  require_window(window, 8);
  const auto d = joint_derivatives(clip, j);
  const auto p = trajectory(clip, j);
  const double dt = clip.dt();
  std::optional<double> running_min;
  return sliding_window(p.size(), window, [&](std::size_t a, std::size_t b) {
    const std::size_t len = b - a + 1;
    auto dj = dimensionless_jerk(std::span(p).subspan(a, len), std::span(d.jerk).subspan(a, len), dt);
    if (!dj) return running_min.value_or(0.0);
    const double value = -std::log(std::max(*dj, 1e-300));
    running_min = running_min ? std::min(*running_min, value) : value;
    return value;
  });
}

/// 1 / (1 + cv^2) of the speed samples, cv = std / (mean + eps).
inline double fluidity_of(std::span<const double> speed) {
  const double n = static_cast<double>(speed.size());
  const double mean = std::accumulate(speed.begin(), speed.end(), 0.0) / n;
  double var = 0.0;
  for (double s : speed) var += (s - mean) * (s - mean);
  var /= n;
  const double cv = std::sqrt(var) / (mean + kMotionEpsilon);
  return 1.0 / (1.0 + cv * cv);
}

/// max |a| / (mean |a| + eps); 0 when there is no acceleration at all.
inline double impulsiveness_of(std::span<const double> accel) {
  const double peak = *std::max_element(accel.begin(), accel.end());
  if (peak <= 0.0) return 0.0;
  const double mean = std::accumulate(accel.begin(), accel.end(), 0.0) / static_cast<double>(accel.size());
  return peak / (mean + kMotionEpsilon);
}

inline Series fluidity_series(const Series& speed, int window = 15) {
  require_window(window, 8);
  return sliding_window(speed.size(), window, [&](std::size_t a, std::size_t b) {
    return fluidity_of(std::span(speed).subspan(a, b - a + 1));
  });
}

inline Series impulsiveness_series(const Series& accel, int window = 15) {
  require_window(window, 8);
  return sliding_window(accel.size(), window, [&](std::size_t a, std::size_t b) {
    return impulsiveness_of(std::span(accel).subspan(a, b - a + 1));
  });
}

inline Series fluidity(const SkeletonClip& clip, JointId j, int window = 15) {
  return fluidity_series(kinematics(clip, j).speed, window);
}

inline Series impulsiveness(const SkeletonClip& clip, JointId j, int window = 15) {
  return impulsiveness_series(kinematics(clip, j).accel, window);
}

inline constexpr std::size_t kMinPeriodLag = 5;

struct PeriodicityScore {
  double score = 0.0;
  std::size_t lag = 0;
};

/// Peak of the mean-removed autocorrelation over lags [5, n/2]. Each lag is
/// normalized by its overlap length so a pure periodic signal scores ~1 at
/// its period. Clamped to [0, 1]; near-constant input scores 0.
inline PeriodicityScore periodicity_of(std::span<const double> x) {
  const std::size_t n = x.size();
  PeriodicityScore best;
  if (n < 2 * kMinPeriodLag) return best;
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);
  if (var < kVarianceEpsilon) return best;
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t lag = kMinPeriodLag; lag <= n / 2; ++lag) {
    double acc = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) acc += (x[i] - mean) * (x[i + lag] - mean);
    const double rho = acc / static_cast<double>(n - lag) / var;
    if (rho > peak) {
      peak = rho;
      best.lag = lag;
    }
  }
  best.score = std::clamp(peak, 0.0, 1.0);
  return best;
}

inline Series periodicity_series(const Series& energy, int window = 60) {
  require_window(window, 2 * static_cast<int>(kMinPeriodLag));
  return sliding_window(energy.size(), window, [&](std::size_t a, std::size_t b) {
    return periodicity_of(std::span(energy).subspan(a, b - a + 1)).score;
  });
}

/// Whole-body periodicity from the kinetic-energy series.
inline Series periodicity(const SkeletonClip& clip, int window = 60) {
  return periodicity_series(kinetic_energy(clip), window);
}

// ---------------------------------------------------------------------------
// Full bank
// ---------------------------------------------------------------------------

namespace detail {

inline Series average(const Series& a, const Series& b) {
  Series out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = 0.5 * (a[i] + b[i]);
  return out;
}

inline void scrub(Series& s) {
  for (double& v : s) {
    if (!std::isfinite(v)) v = 0.0;
  }
}

}  // namespace detail

/// Computes all 25 series for a preprocessed segment. Left/right features
/// are averaged pointwise.
inline FeatureSet extract_all(const SkeletonClip& segment, const FeatureWindows& w = {}) {
  detail::require_frames(segment, kMinKinematicFrames);
  require_uniform(segment);
  using F = FeatureId;
  using J = JointId;
  FeatureSet fs;

  fs[F::KineticEnergy] = kinetic_energy(segment);
  fs[F::ContractionIndex] = contraction_index(segment);
  auto dir = global_direction(segment);
  fs[F::GlobalDirectionAzimuth] = std::move(dir.azimuth);
  fs[F::GlobalDirectionElevation] = std::move(dir.elevation);
  fs[F::OverallSymmetry] = overall_symmetry(segment);
  fs[F::WholeBodyPeriodicity] = periodicity_series(fs[F::KineticEnergy], w.periodicity);

  auto head = kinematics(segment, J::Head);
  fs[F::HeadSpeed] = std::move(head.speed);
  fs[F::HeadAccel] = std::move(head.accel);
  fs[F::HeadJerk] = std::move(head.jerk);
  auto head_lean = leaning(segment, J::Head);
  fs[F::HeadLeaningPos] = std::move(head_lean.position);
  fs[F::HeadLeaningSpeed] = std::move(head_lean.speed);
  fs[F::HeadSymmetryHands] = head_symmetry(segment, SymmetryReference::Hands);
  fs[F::HeadSymmetryShoulders] = head_symmetry(segment, SymmetryReference::Shoulders);

  auto torso_lean = leaning(segment, J::Torso);
  fs[F::TorsoLeaningPos] = std::move(torso_lean.position);
  fs[F::TorsoLeaningSpeed] = std::move(torso_lean.speed);

  fs[F::HandsDistance] = pair_distance(segment, J::HandLeft, J::HandRight);
  const auto left = kinematics(segment, J::HandLeft);
  const auto right = kinematics(segment, J::HandRight);
  fs[F::HandSpeed] = detail::average(left.speed, right.speed);
  fs[F::HandAccel] = detail::average(left.accel, right.accel);
  fs[F::HandJerk] = detail::average(left.jerk, right.jerk);
  fs[F::HandCurvature] = detail::average(curvature(segment, J::HandLeft), curvature(segment, J::HandRight));
  fs[F::HandSmoothness] = detail::average(smoothness(segment, J::HandLeft, w.smoothness),
                                          smoothness(segment, J::HandRight, w.smoothness));
  fs[F::HandFluidity] = detail::average(fluidity_series(left.speed, w.fluidity),
                                        fluidity_series(right.speed, w.fluidity));
  fs[F::HandImpulsiveness] = detail::average(impulsiveness_series(left.accel, w.impulsiveness),
                                             impulsiveness_series(right.accel, w.impulsiveness));
  fs[F::HandDistTorso] = detail::average(pair_distance(segment, J::HandLeft, J::Torso),
                                         pair_distance(segment, J::HandRight, J::Torso));
  fs[F::HandDistHead] = detail::average(pair_distance(segment, J::HandLeft, J::Head),
                                        pair_distance(segment, J::HandRight, J::Head));

  for (std::size_t i = 0; i < kFeatureCount; ++i) detail::scrub(fs[feature_at(i)]);
  return fs;
}

}  // namespace bodyemo
