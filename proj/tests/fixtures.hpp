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

// Hand-built skeletons and clips shared by the test suites.

#include <bodyemo/bodyemo.hpp>

#include <filesystem>
#include <functional>
#include <random>

namespace fx {

using namespace bodyemo;

/// Upright neutral pose; shoulder width 0.36 m.
inline SkeletonFrame rest_frame(double t = 0.0) {
  SkeletonFrame f;
  f.t = t;
  f[JointId::Head] = {0.0, 1.68, 0.0};
  f[JointId::ShoulderLeft] = {0.18, 1.45, 0.0};
  f[JointId::ShoulderRight] = {-0.18, 1.45, 0.0};
  f[JointId::ElbowLeft] = {0.24, 1.20, 0.0};
  f[JointId::ElbowRight] = {-0.24, 1.20, 0.0};
  f[JointId::HandLeft] = {0.22, 0.95, 0.05};
  f[JointId::HandRight] = {-0.22, 0.95, 0.05};
  f[JointId::Torso] = {0.0, 1.10, 0.0};
  return f;
}

inline constexpr double kRestShoulderWidth = 0.36;

/// n frames at `rate`; `edit(frame, t, i)` shapes each rest frame.
inline SkeletonClip make_clip(std::size_t n, double rate,
                              const std::function<void(SkeletonFrame&, double, std::size_t)>& edit = {}) {
  SkeletonClip clip;
  clip.nominal_rate = rate;
  clip.subject_id = "fixture";
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate;
    auto f = rest_frame(t);
    if (edit) edit(f, t, i);
    clip.frames.push_back(f);
  }
  return clip;
}

/// Rest pose with smooth random wandering of every joint.
inline SkeletonClip random_clip(std::mt19937_64& rng, std::size_t n = 90, double rate = 30.0) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::array<std::array<double, 9>, kJointCount> coef{};
  for (auto& c : coef) {
    for (auto& v : c) v = g(rng);
  }
  const double f1 = 0.3 + 0.5 * std::abs(g(rng)), f2 = 1.0 + std::abs(g(rng));
  return make_clip(n, rate, [&](SkeletonFrame& f, double t, std::size_t) {
    for (std::size_t j = 0; j < kJointCount; ++j) {
      for (int a = 0; a < 3; ++a) {
        const auto& c = coef[j];
        f.joints[j][a] += 0.05 * c[3 * a] * std::sin(2 * M_PI * f1 * t + c[3 * a + 1]) +
                          0.02 * c[3 * a + 2] * std::sin(2 * M_PI * f2 * t);
      }
    }
  });
}

/// Mirror image: x -> -x with left and right joints exchanged.
inline SkeletonClip mirrored(const SkeletonClip& clip) {
  SkeletonClip out = clip;
  for (std::size_t i = 0; i < clip.frames.size(); ++i) {
    for (auto j : kAllJoints) {
      Vec3 p = clip.frames[i][mirror_joint(j)];
      p.x() = -p.x();
      out.frames[i][j] = p;
    }
  }
  return out;
}

/// p -> scale * R p + shift for every joint of every frame.
inline SkeletonClip transformed(const SkeletonClip& clip, const Eigen::Matrix3d& R, const Vec3& shift,
                                double scale = 1.0) {
  SkeletonClip out = clip;
  for (auto& f : out.frames) {
    for (auto& p : f.joints) p = scale * (R * p) + shift;
  }
  return out;
}

inline Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
  return q.normalized().toRotationMatrix();
}

/// Every series drawn independently: heavy-tailed values of varied scale,
/// with occasional repeats and outliers.
inline FeatureSet random_feature_set(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  FeatureSet fs;
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    const double scale = std::exp(3.0 * g(rng));
    const double shift = 5.0 * g(rng);
    Series s(n);
    for (auto& v : s) {
      v = u(rng) < 0.1 ? shift : shift + scale * g(rng) * (u(rng) < 0.05 ? 50.0 : 1.0);
    }
    fs[feature_at(f)] = std::move(s);
  }
  return fs;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("bodyemo_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

inline std::string frame_line(const SkeletonFrame& f) { return frame_to_json(f).dump(); }

/// Small synthetic corpus shared by the classification tests.
inline const Dataset& small_corpus() {
  static const Dataset ds = [] {
    GeneratorSpec spec;
    spec.subjects = 4;
    spec.clips_per_class = 3;
    return synth_dataset(spec, 11);
  }();
  return ds;
}

inline const std::vector<Example>& small_examples() {
  static const std::vector<Example> ex = make_examples(small_corpus());
  return ex;
}

}  // namespace fx
