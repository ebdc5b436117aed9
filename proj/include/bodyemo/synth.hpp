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

// Synthetic emotional-gesture corpus.
//
// Each emotion is an archetype of kinematic signatures (posture openness,
// hand elevation, trunk lean, turning, movement energy, tempo, impulsive
// versus sinusoidal strokes, tremor). Every subject carries a persistent
// style (body size plus a deviation shared by all emotions) and a personal
// idiom per emotion; each clip then draws its own variation. Held-out
// subjects are therefore harder to classify than held-out clips of known
// subjects.

#include <bodyemo/skeleton.hpp>

#include <cstdio>
#include <random>

namespace bodyemo {

struct GeneratorSpec {
  ClassSet class_set = ClassSet::six();
  int subjects = 12;
  int clips_per_class = 5;  // per subject
  double rate = 30.0;
  double min_duration = 3.0;
  double max_duration = 5.0;
  double sensor_noise = 0.004;  // m, per coordinate per frame
  double style_strength = 1.3;  // per-subject deviation shared by all emotions
  double idiom_strength = 1.6;  // per-subject deviation specific to each emotion
  double clip_variation = 1.0;  // per-clip deviation

  void validate() const {
    if (class_set.size() == 0) throw InvalidSpec("class set is empty");
    if (subjects < 1) throw InvalidSpec("need at least one subject");
    if (clips_per_class < 1) throw InvalidSpec("need at least one clip per class");
    if (!(rate > 0.0) || !std::isfinite(rate)) throw InvalidSpec("rate must be positive");
    if (!(min_duration > 2.0 / rate) || !(min_duration <= max_duration)) {
      throw InvalidSpec("duration range must satisfy 2/rate < min <= max");
    }
    if (sensor_noise < 0.0 || style_strength < 0.0 || idiom_strength < 0.0 || clip_variation < 0.0) {
      throw InvalidSpec("noise and style strength must be non-negative");
    }
  }
};

/// Kinematic signature of one emotion. Offsets in meters relative to the
/// rest pose; tempo in Hz; `burst` blends sinusoidal (0) into impulsive (1)
/// strokes; `asym` is the amplitude deficit of the secondary arm.
struct Archetype {
  double open;       // lateral hand offset, outward positive
  double elevation;  // hand height relative to the shoulders
  double reach;      // forward hand offset
  double lean;       // trunk lean, forward positive
  double head_drop;  // head bowing, down/forward positive
  double turn;       // body yaw away from the sensor (rad)
  double amp;        // stroke amplitude
  double tempo;
  double burst;
  double jitter;     // tremor amplitude
  double asym;
  double bob;        // vertical bounce of the whole body
  double step;       // sagittal displacement of the whole body, back negative
  double onset;      // posture transition time (s)
  std::array<double, 3> stroke;  // stroke direction (x outward, y, z)
};

inline const Archetype& archetype(EmotionLabel e) {
  // Tuned so that classes differ in several features at once while fear,
  // disgust and surprise overlap more than the other three.
  static const std::array<Archetype, 6> table = {{
      // happiness: open, raised, bouncing, rhythmic
      {0.30, 0.05, 0.10, -0.02, -0.03, 0.00, 0.14, 2.0, 0.15, 0.000, 0.10, 0.035, 0.00, 1.35, {0.4, 0.9, 0.1}},
      // anger: forward lean, impulsive forward strikes
      {0.12, -0.18, 0.28, 0.08, 0.03, 0.00, 0.22, 1.5, 0.90, 0.000, 0.50, 0.000, 0.10, 1.20, {0.1, 0.2, 1.0}},
      // sadness: contracted, low hands, bowed head, slow
      {0.02, -0.50, 0.06, 0.06, 0.10, 0.05, 0.20, 0.6, 0.00, 0.000, 0.20, 0.000, 0.00, 2.10, {0.3, 0.3, 0.5}},
      // fear: contracted guard, stepping back, trembling
      {-0.02, -0.08, 0.14, -0.06, 0.04, 0.30, 0.09, 1.2, 0.40, 0.010, 0.10, 0.000, -0.12, 1.05, {0.7, 0.2, 0.6}},
      // disgust: turning away, one hand pushing
      {0.10, -0.22, 0.16, -0.04, 0.00, 0.42, 0.14, 0.9, 0.50, 0.004, 0.75, 0.000, -0.06, 1.35, {0.8, 0.1, 0.5}},
      // surprise: sudden opening upward, then held
      {0.20, -0.02, 0.09, -0.05, -0.04, 0.15, 0.09, 0.8, 0.65, 0.003, 0.10, 0.015, -0.05, 0.525, {0.3, 0.9, 0.2}},
  }};
  return table[static_cast<std::size_t>(e)];
}

namespace detail {

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                                std::uint64_t c = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
                    static_cast<std::uint32_t>(c)};
  return std::mt19937_64(seq);
}

/// Random deviation of an archetype at unit strength: posture fields shift
/// additively, rates and amplitudes scale log-normally.
inline Archetype perturb(Archetype a, std::mt19937_64& rng, double strength) {
  if (strength <= 0.0) return a;
  std::normal_distribution<double> n(0.0, strength);
  a.open += 0.05 * n(rng);
  a.elevation += 0.06 * n(rng);
  a.reach += 0.04 * n(rng);
  a.lean += 0.03 * n(rng);
  a.head_drop += 0.025 * n(rng);
  a.turn += 0.10 * n(rng);
  a.amp *= std::exp(0.14 * n(rng));
  a.tempo *= std::exp(0.12 * n(rng));
  a.burst = std::clamp(a.burst + 0.12 * n(rng), 0.0, 1.0);
  a.jitter = std::max(0.0, a.jitter * std::exp(0.2 * n(rng)) + 0.002 * n(rng));
  a.asym = std::clamp(a.asym + 0.12 * n(rng), 0.0, 1.0);
  a.bob *= std::exp(0.2 * n(rng));
  a.step += 0.04 * n(rng);
  a.onset = std::max(0.1, a.onset * std::exp(0.15 * n(rng)));
  return a;
}

inline double smoothstep(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * x * (x * (6.0 * x - 15.0) + 10.0);
}

/// Stroke waveform: a sine blended with a sharpened pulse train.
inline double stroke_wave(double phase, double burst) {
  const double s = std::sin(phase);
  const double pulse = s * std::pow(std::abs(s), 6.0);
  return (1.0 - burst) * s + burst * pulse * 1.6;
}

/// `a` is the archetype after subject and subject-emotion perturbation;
/// this adds the per-clip draw and renders the frames.
inline SkeletonClip synth_clip(EmotionLabel label, const Archetype& performed, double body_scale,
                               const GeneratorSpec& spec, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const Archetype a = perturb(performed, rng, spec.clip_variation);
  const bool left_dominant = u01(rng) < 0.5;
  const double phase0 = 2.0 * M_PI * u01(rng);
  const double tremor_phase = 2.0 * M_PI * u01(rng);
  const double tremor_hz = 7.0 + 2.0 * u01(rng);

  const double duration = spec.min_duration + (spec.max_duration - spec.min_duration) * u01(rng);
  const double rest = 0.4;
  const double release = 1.5;  // return to the rest pose (s)
  const double ramp = 0.8;     // stroke fade in/out (s)
  const double move_end = std::max(rest + 0.2, duration - release - 0.05);
  const auto frames = static_cast<std::size_t>(std::floor(duration * spec.rate)) + 1;
  const double k = body_scale;

  SkeletonClip clip;
  clip.label = label;
  clip.source = ClipSource::Synthetic;
  clip.nominal_rate = spec.rate;
  clip.frames.resize(frames);

  Vec3 stroke(a.stroke[0], a.stroke[1], a.stroke[2]);
  stroke.normalize();

  for (std::size_t i = 0; i < frames; ++i) {
    const double t = static_cast<double>(i) / spec.rate;
    // Posture envelope eases in over `onset` and back out over `release`.
    const double posture = smoothstep((t - rest) / a.onset) * (1.0 - smoothstep((t - move_end) / release));
    const double motion = smoothstep((t - rest) / ramp) * (1.0 - smoothstep((t - move_end) / ramp));
    const double phase = 2.0 * M_PI * a.tempo * (t - rest) + phase0;
    const double wave = stroke_wave(phase, a.burst) * motion;
    const double tremor = a.jitter * motion * std::sin(2.0 * M_PI * tremor_hz * t + tremor_phase);

    const double lean = a.lean * posture;
    const double bob = a.bob * motion * std::abs(std::sin(phase));
    const Vec3 body(0.0, bob, a.step * posture);

    SkeletonFrame f;
    f.t = t;
    const Vec3 torso = Vec3(0.0, 1.10 * k, 0.0);
    const Vec3 neck_shift(0.0, 0.0, lean);
    f[JointId::Torso] = torso;
    f[JointId::ShoulderLeft] = Vec3(0.18 * k, 1.45 * k, 0.0) + neck_shift;
    f[JointId::ShoulderRight] = Vec3(-0.18 * k, 1.45 * k, 0.0) + neck_shift;
    f[JointId::Head] = Vec3(0.0, (1.68 - 0.6 * a.head_drop * posture) * k,
                            1.2 * lean + a.head_drop * posture) +
                       Vec3(tremor * 0.3, 0.0, 0.0);

    for (int side = 0; side < 2; ++side) {
      const double sign = side == 0 ? 1.0 : -1.0;  // left is +x
      const JointId shoulder = side == 0 ? JointId::ShoulderLeft : JointId::ShoulderRight;
      const JointId elbow = side == 0 ? JointId::ElbowLeft : JointId::ElbowRight;
      const JointId hand = side == 0 ? JointId::HandLeft : JointId::HandRight;
      const bool dominant = (side == 0) == left_dominant;
      const double gain = dominant ? 1.0 : 1.0 - a.asym;

      const Vec3 rest_hand(sign * 0.02, -0.52, 0.06);
      const Vec3 pose_hand(sign * a.open, a.elevation, a.reach);
      Vec3 offset = (1.0 - posture) * rest_hand + posture * pose_hand;
      const Vec3 dir(sign * stroke.x(), stroke.y(), stroke.z());
      offset += gain * a.amp * wave * dir;
      offset += Vec3(tremor, 0.7 * tremor, 0.4 * tremor);

      const Vec3& s = f[shoulder];
      const Vec3 h = s + k * offset;
      // Elbow: halfway along the arm, bent outward and down.
      const Vec3 e = 0.5 * (s + h) + k * Vec3(sign * 0.06, -0.08, -0.02);
      f[elbow] = e;
      f[hand] = h;
    }

    // Whole-body yaw about the torso, then translation.
    const Eigen::AngleAxisd yaw(a.turn * posture, Vec3::UnitY());
    for (auto& p : f.joints) p = torso + yaw * (p - torso) + body;
    clip.frames[i] = f;
  }

  if (spec.sensor_noise > 0.0) {
    std::normal_distribution<double> noise(0.0, spec.sensor_noise);
    for (auto& f : clip.frames) {
      for (auto& p : f.joints) p += Vec3(noise(rng), noise(rng), noise(rng));
    }
  }
  return clip;
}

}  // namespace detail

inline std::string subject_name(int s) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "s%02d", s + 1);
  return buf;
}

/// Deterministic corpus: subjects x classes x clips_per_class clips, ordered
/// subject-major then class-set order then repetition.
inline Dataset synth_dataset(const GeneratorSpec& spec, std::uint64_t seed) {
  spec.validate();
  Dataset ds;
  ds.clips.reserve(static_cast<std::size_t>(spec.subjects) * spec.class_set.size() *
                   static_cast<std::size_t>(spec.clips_per_class));
  for (int s = 0; s < spec.subjects; ++s) {
    auto style_rng = detail::make_rng(seed, static_cast<std::uint64_t>(s), 0xA11CE);
    std::uniform_real_distribution<double> size(-0.1, 0.1);
    const double body_scale = 1.0 + size(style_rng) * std::min(spec.style_strength, 1.0);
    // Subject style is shared by all of a subject's emotions (same draw
    // sequence for every label); the idiom is specific to the pair.
    for (auto label : spec.class_set) {
      auto shared_rng = style_rng;
      Archetype performed = detail::perturb(archetype(label), shared_rng, spec.style_strength);
      auto idiom_rng = detail::make_rng(seed, static_cast<std::uint64_t>(s), 0x1D1044,
                                        static_cast<std::uint64_t>(label));
      performed = detail::perturb(performed, idiom_rng, spec.idiom_strength);
      for (int r = 0; r < spec.clips_per_class; ++r) {
        auto rng = detail::make_rng(seed, static_cast<std::uint64_t>(s),
                                    1 + static_cast<std::uint64_t>(label),
                                    static_cast<std::uint64_t>(r));
        auto clip = detail::synth_clip(label, performed, body_scale, spec, rng);
        clip.subject_id = subject_name(s);
        ds.clips.push_back(std::move(clip));
      }
    }
  }
  return ds;
}

}  // namespace bodyemo
