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

#include "fixtures.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace bodyemo;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

/// Frames strictly inside the clip, away from one-sided differences.
template <typename F>
void for_interior(std::size_t n, std::size_t margin, F&& f) {
  for (std::size_t i = margin; i + margin < n; ++i) f(i);
}

SkeletonClip circle(double radius, double omega, double rate, std::size_t n, JointId j = JointId::HandLeft) {
  return fx::make_clip(n, rate, [&](SkeletonFrame& f, double t, std::size_t) {
    f[j] = Vec3(0.3 + radius * std::cos(omega * t), 1.2 + radius * std::sin(omega * t), 0.2);
  });
}

double max_abs_diff(const Series& a, const Series& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// Kinematics and energy
// ---------------------------------------------------------------------------

TEST_CASE("stationary joint has zero derivatives", "[kinematics]") {
  const auto k = kinematics(fx::make_clip(20, 30.0), JointId::Head);
  for (std::size_t i = 0; i < 20; ++i) {
    CHECK(k.speed[i] == 0.0);
    CHECK(k.accel[i] == 0.0);
    CHECK(k.jerk[i] == 0.0);
  }
}

TEST_CASE("constant velocity gives exact speed and zero acceleration", "[kinematics]") {
  const auto clip = fx::make_clip(30, 30.0, [](SkeletonFrame& f, double t, std::size_t) {
    f[JointId::HandRight] += Vec3(2.0 * t * 0.6, 0.0, 2.0 * t * 0.8);
  });
  const auto k = kinematics(clip, JointId::HandRight);
  for_interior(30, 1, [&](std::size_t i) {
    CHECK_THAT(k.speed[i], WithinAbs(2.0, 1e-12));
    CHECK_THAT(k.accel[i], WithinAbs(0.0, 1e-9));
  });
}

TEST_CASE("circular motion speed and acceleration", "[kinematics]") {
  const auto k = kinematics(circle(1.0, 1.0, 100.0, 400), JointId::HandLeft);
  for_interior(400, 3, [&](std::size_t i) {
    CHECK_THAT(k.speed[i], WithinAbs(1.0, 1e-3));
    CHECK_THAT(k.accel[i], WithinAbs(1.0, 1e-2));
  });
}

TEST_CASE("kinematics needs four frames", "[kinematics]") {
  CHECK_THROWS_AS(kinematics(fx::make_clip(3, 30.0), JointId::Head), TooShort);
}

TEST_CASE("kinetic energy of one joint moving at 3 m/s", "[energy]") {
  const auto clip = fx::make_clip(20, 30.0, [](SkeletonFrame& f, double t, std::size_t) {
    f[JointId::Torso].y() += 3.0 * t;
  });
  const auto e = kinetic_energy(clip);
  for_interior(20, 1, [&](std::size_t i) { CHECK_THAT(e[i], WithinAbs(4.5, 1e-9)); });
  const auto still = kinetic_energy(fx::make_clip(10, 30.0));
  for (double v : still) CHECK(v == 0.0);
}

TEST_CASE("kinetic energy agrees with per-joint speeds", "[energy]") {
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 5; ++rep) {
    const auto clip = fx::random_clip(rng, 40);
    const auto e = kinetic_energy(clip);
    Series oracle(clip.frames.size(), 0.0);
    for (auto j : kAllJoints) {
      const auto k = kinematics(clip, j);
      for (std::size_t i = 0; i < oracle.size(); ++i) oracle[i] += 0.5 * k.speed[i] * k.speed[i];
    }
    for (std::size_t i = 0; i < e.size(); ++i) CHECK_THAT(e[i], WithinRel(oracle[i], 1e-12));
  }
}

// ---------------------------------------------------------------------------
// Posture
// ---------------------------------------------------------------------------

TEST_CASE("contraction index examples", "[posture]") {
  // Everything at one point except the shoulders, which straddle it.
  const Vec3 c(0.1, 1.3, 0.2);
  const auto collapsed = fx::make_clip(4, 30.0, [&](SkeletonFrame& f, double, std::size_t) {
    for (auto& p : f.joints) p = c;
    f[JointId::ShoulderLeft] = c + Vec3(0.18, 0, 0);
    f[JointId::ShoulderRight] = c - Vec3(0.18, 0, 0);
  });
  // Two joints at half a shoulder width from the centroid, averaged over 8.
  for (double v : contraction_index(collapsed)) CHECK_THAT(v, WithinAbs(2 * 0.5 / 8.0, 1e-12));

  // Scaling about the centroid leaves the index unchanged.
  std::mt19937_64 rng(5);
  const auto clip = fx::random_clip(rng, 12);
  auto scaled = clip;
  for (auto& f : scaled.frames) {
    Vec3 centroid = Vec3::Zero();
    for (const auto& p : f.joints) centroid += p;
    centroid /= static_cast<double>(kJointCount);
    for (auto& p : f.joints) p = centroid + 2.0 * (p - centroid);
  }
  CHECK(max_abs_diff(contraction_index(clip), contraction_index(scaled)) < 1e-12);
}

TEST_CASE("T-pose is more expanded than crossed arms", "[posture]") {
  auto tpose = fx::rest_frame();
  tpose[JointId::ElbowLeft] = {0.45, 1.45, 0.0};
  tpose[JointId::ElbowRight] = {-0.45, 1.45, 0.0};
  tpose[JointId::HandLeft] = {0.72, 1.45, 0.0};
  tpose[JointId::HandRight] = {-0.72, 1.45, 0.0};
  auto crossed = fx::rest_frame();
  crossed[JointId::ElbowLeft] = {0.20, 1.25, 0.15};
  crossed[JointId::ElbowRight] = {-0.20, 1.25, 0.15};
  crossed[JointId::HandLeft] = {-0.12, 1.32, 0.18};
  crossed[JointId::HandRight] = {0.12, 1.32, 0.18};

  // Written out from the definition: mean distance to the centroid over s_ref.
  const auto by_hand = [](const SkeletonFrame& f) {
    double cx = 0, cy = 0, cz = 0;
    for (const auto& p : f.joints) {
      cx += p.x();
      cy += p.y();
      cz += p.z();
    }
    cx /= 8;
    cy /= 8;
    cz /= 8;
    double sum = 0;
    for (const auto& p : f.joints) {
      sum += std::sqrt((p.x() - cx) * (p.x() - cx) + (p.y() - cy) * (p.y() - cy) + (p.z() - cz) * (p.z() - cz));
    }
    return sum / 8 / 0.36;
  };
  const auto ci = [](const SkeletonFrame& pose) {
    return contraction_index(fx::make_clip(4, 30.0, [&](SkeletonFrame& f, double, std::size_t) {
             const double t = f.t;
             f = pose;
             f.t = t;
           }))
        .front();
  };
  CHECK_THAT(ci(tpose), WithinAbs(by_hand(tpose), 1e-12));
  CHECK_THAT(ci(crossed), WithinAbs(by_hand(crossed), 1e-12));
  CHECK(ci(tpose) > ci(crossed));
}

TEST_CASE("global direction follows the axis convention", "[direction]") {
  const auto moving = [](Vec3 v) {
    return global_direction(fx::make_clip(10, 30.0, [&](SkeletonFrame& f, double t, std::size_t) {
      for (auto& p : f.joints) p += v * t;
    }));
  };
  const auto still = global_direction(fx::make_clip(10, 30.0));
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(still.azimuth[i] == 0.0);
    CHECK(still.elevation[i] == 0.0);
  }
  const auto up = moving({0, 1, 0});
  const auto forward = moving({0, 0, 1});
  const auto left = moving({1, 0, 0});
  const auto back = moving({0, 0, -1});
  for_interior(10, 1, [&](std::size_t i) {
    CHECK_THAT(up.elevation[i], WithinAbs(M_PI / 2, 1e-12));
    CHECK_THAT(forward.azimuth[i], WithinAbs(0.0, 1e-12));
    CHECK_THAT(forward.elevation[i], WithinAbs(0.0, 1e-12));
    CHECK_THAT(left.azimuth[i], WithinAbs(M_PI / 2, 1e-12));
    CHECK_THAT(back.azimuth[i], WithinAbs(M_PI, 1e-12));
  });
}

TEST_CASE("overall symmetry examples", "[symmetry]") {
  const auto still = [](const SkeletonFrame& pose) {
    return fx::make_clip(4, 30.0, [&](SkeletonFrame& f, double, std::size_t) {
      const double t = f.t;
      f = pose;
      f.t = t;
    });
  };
  auto pose = fx::rest_frame();
  for (double v : overall_symmetry(still(pose))) CHECK_THAT(v, WithinAbs(1.0, 1e-12));

  // Left hand off its mirror position by one shoulder width: 1 - (1/3).
  pose[JointId::HandLeft] += Vec3(0.0, fx::kRestShoulderWidth, 0.0);
  for (double v : overall_symmetry(still(pose))) CHECK_THAT(v, WithinAbs(2.0 / 3.0, 1e-12));

  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 5; ++rep) {
    const auto clip = fx::random_clip(rng, 10);
    const auto rotated = fx::transformed(clip, fx::random_rotation(rng), Vec3(0.3, -0.2, 1.0));
    CHECK(max_abs_diff(overall_symmetry(clip), overall_symmetry(rotated)) < 1e-9);
  }
}

TEST_CASE("head symmetry examples", "[symmetry]") {
  const auto with_head_offset = [](double dx) {
    return fx::make_clip(4, 30.0, [&](SkeletonFrame& f, double, std::size_t) { f[JointId::Head].x() += dx; });
  };
  for (auto ref : {SymmetryReference::Hands, SymmetryReference::Shoulders}) {
    CHECK_THAT(head_symmetry(with_head_offset(0.0), ref)[0], WithinAbs(1.0, 1e-12));
    CHECK_THAT(head_symmetry(with_head_offset(fx::kRestShoulderWidth), ref)[0], WithinAbs(0.0, 1e-12));
    CHECK_THAT(head_symmetry(with_head_offset(fx::kRestShoulderWidth / 2), ref)[0], WithinAbs(0.5, 1e-12));
  }
}

TEST_CASE("leaning examples", "[leaning]") {
  const auto still = leaning(fx::make_clip(10, 30.0), JointId::Torso);
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(still.position[i] == 0.0);
    CHECK(still.speed[i] == 0.0);
  }
  // Head forward by one shoulder width in the second half; the median sits
  // between the two plateaus.
  const auto clip = fx::make_clip(20, 30.0, [](SkeletonFrame& f, double, std::size_t i) {
    if (i >= 10) f[JointId::Head].z() += fx::kRestShoulderWidth;
  });
  const auto lean = leaning(clip, JointId::Head);
  for (std::size_t i = 0; i < 20; ++i) CHECK_THAT(lean.position[i], WithinAbs(i < 10 ? -0.5 : 0.5, 1e-12));
  const auto fd = differentiate(lean.position, clip.dt());
  CHECK(fd == lean.speed);
}

TEST_CASE("pair distance examples", "[distance]") {
  std::mt19937_64 rng(12);
  const auto clip = fx::random_clip(rng, 10);
  for (double v : pair_distance(clip, JointId::Head, JointId::Head)) CHECK(v == 0.0);
  const auto apart = fx::make_clip(5, 30.0, [](SkeletonFrame& f, double, std::size_t) {
    f[JointId::HandLeft] = {0.18, 1.0, 0.2};
    f[JointId::HandRight] = {-0.18, 1.0, 0.2};
  });
  for (double v : pair_distance(apart, JointId::HandLeft, JointId::HandRight)) CHECK_THAT(v, WithinAbs(1.0, 1e-12));
  const auto moved = fx::transformed(clip, Eigen::Matrix3d::Identity(), Vec3(4.0, -1.0, 2.5));
  CHECK(max_abs_diff(pair_distance(clip, JointId::HandLeft, JointId::Torso),
                     pair_distance(moved, JointId::HandLeft, JointId::Torso)) < 1e-12);
}

TEST_CASE("curvature examples", "[curvature]") {
  const auto line = fx::make_clip(30, 30.0, [](SkeletonFrame& f, double t, std::size_t) {
    f[JointId::HandLeft] += Vec3(0.5, 0.3, -0.2) * t;
  });
  const auto kl = curvature(line, JointId::HandLeft);
  for_interior(30, 3, [&](std::size_t i) { CHECK_THAT(kl[i], WithinAbs(0.0, 1e-6)); });

  const auto kc = curvature(circle(0.5, 2.0, 100.0, 300), JointId::HandLeft);
  for_interior(300, 3, [&](std::size_t i) { CHECK_THAT(kc[i], WithinRel(2.0, 0.02)); });

  const auto still = curvature(fx::make_clip(10, 30.0), JointId::HandLeft);
  for (double v : still) CHECK(v == 0.0);
}

// ---------------------------------------------------------------------------
// Windowed features
// ---------------------------------------------------------------------------

namespace {

/// Point-to-point movement along x: one minimum-jerk stroke, or two
/// half-length strokes that stop in the middle.
SkeletonClip reach(bool jerky, double scale = 1.0) {
  const std::size_t n = 61;
  const auto minjerk = [](double s) { return s * s * s * (10 - 15 * s + 6 * s * s); };
  return fx::make_clip(n, 30.0, [&](SkeletonFrame& f, double, std::size_t i) {
    const double s = static_cast<double>(i) / static_cast<double>(n - 1);
    const double x = jerky ? (s < 0.5 ? 0.5 * minjerk(2 * s) : 0.5 + 0.5 * minjerk(2 * s - 1)) : minjerk(s);
    f[JointId::HandRight] = Vec3(-0.2 + 0.4 * x * scale, 1.0, 0.2);
  });
}

}  // namespace

TEST_CASE("minimum-jerk reach is smoother than two strokes", "[smoothness]") {
  const int whole = 61;
  const auto smooth_reach = smoothness(reach(false), JointId::HandRight, whole);
  const auto jerky_reach = smoothness(reach(true), JointId::HandRight, whole);
  CHECK(smooth_reach[30] > jerky_reach[30]);
}

TEST_CASE("dimensionless jerk is scale invariant", "[smoothness]") {
  for (bool jerky : {false, true}) {
    const auto a = smoothness(reach(jerky, 1.0), JointId::HandRight);
    const auto b = smoothness(reach(jerky, 3.0), JointId::HandRight);
    CHECK(max_abs_diff(a, b) < 1e-9);
  }
}

TEST_CASE("still windows fall back to the running minimum", "[smoothness]") {
  const auto still = smoothness(fx::make_clip(40, 30.0), JointId::HandLeft);
  for (double v : still) CHECK(v == 0.0);

  // Move first, then hold: held windows repeat the smallest earlier value.
  const auto clip = fx::make_clip(60, 30.0, [](SkeletonFrame& f, double t, std::size_t i) {
    if (i < 30) f[JointId::HandLeft].y() += 0.2 * std::sin(6.0 * t);
    else f[JointId::HandLeft].y() += 0.2 * std::sin(6.0 * 29.0 / 30.0);
  });
  const auto s = smoothness(clip, JointId::HandLeft);
  // Every value after the last moving window is the minimum of all outputs.
  const double overall_min = *std::min_element(s.begin(), s.end());
  for (std::size_t i = 50; i < s.size(); ++i) CHECK(s[i] == overall_min);
  CHECK(s.front() != overall_min);
  CHECK_THROWS_AS(smoothness(clip, JointId::HandLeft, 7), InvalidArgument);
}

TEST_CASE("fluidity examples", "[fluidity]") {
  const Series constant(30, 1.5);
  for (double v : fluidity_series(constant)) CHECK_THAT(v, WithinAbs(1.0, 1e-12));

  Series alternating(16);
  for (std::size_t i = 0; i < alternating.size(); ++i) alternating[i] = i % 2 ? 2.0 : 0.0;
  // mean 1, std 1: cv = 1 up to the epsilon in the denominator.
  CHECK_THAT(fluidity_of(alternating), WithinAbs(0.5, 1e-4));

  const auto still = fluidity(fx::make_clip(30, 30.0), JointId::HandLeft);
  for (double v : still) CHECK(v == 1.0);
}

TEST_CASE("impulsiveness examples", "[impulsiveness]") {
  const Series constant(30, 4.0);
  for (double v : impulsiveness_series(constant)) CHECK_THAT(v, WithinRel(1.0, 1e-4));

  Series spike(15, 0.0);
  spike[7] = 10.0;
  // max / mean of a single impulse in 15 samples.
  CHECK_THAT(impulsiveness_of(spike), WithinRel(15.0, 1e-3));

  const Series zero(30, 0.0);
  for (double v : impulsiveness_series(zero)) CHECK(v == 0.0);
}

TEST_CASE("periodicity of a sine finds its period", "[periodicity]") {
  Series energy(60);
  for (std::size_t i = 0; i < energy.size(); ++i) energy[i] = 1.0 + std::sin(2 * M_PI * static_cast<double>(i) / 20.0);
  const auto p = periodicity_of(energy);
  CHECK(p.score >= 0.9);
  CHECK(p.lag >= 19);
  CHECK(p.lag <= 21);
  for (double v : periodicity_series(energy, 60)) CHECK(v >= 0.9);
}

TEST_CASE("periodicity guards and noise", "[periodicity]") {
  const Series constant(90, 2.0);
  for (double v : periodicity_series(constant)) CHECK(v == 0.0);

  std::mt19937_64 rng(1234);
  std::normal_distribution<double> g(0.0, 1.0);
  Series noise(60);
  for (auto& v : noise) v = g(rng);
  CHECK(periodicity_of(noise).score < 0.5);
}

TEST_CASE("windowed series replicate edge values", "[windows]") {
  Series ramp(40);
  std::iota(ramp.begin(), ramp.end(), 0.0);
  const auto s = sliding_window(ramp.size(), 15, [&](std::size_t a, std::size_t b) { return ramp[(a + b) / 2]; });
  for (std::size_t i = 0; i <= 7; ++i) CHECK(s[i] == 7.0);
  for (std::size_t i = 7; i + 7 < 40; ++i) CHECK(s[i] == static_cast<double>(i));
  for (std::size_t i = 32; i < 40; ++i) CHECK(s[i] == 32.0);
  // Shorter than the window: one window over everything.
  const auto short_series = sliding_window(5, 15, [](std::size_t a, std::size_t b) { return static_cast<double>(b - a); });
  for (double v : short_series) CHECK(v == 4.0);
}

// ---------------------------------------------------------------------------
// Full bank and invariances
// ---------------------------------------------------------------------------

TEST_CASE("feature registry", "[bank]") {
  CHECK(kFeatureCount == 25);
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    CHECK(parse_feature(kFeatureInfo[i].name) == feature_at(i));
  }
  CHECK_FALSE(parse_feature("force"));
}

TEST_CASE("extract_all on a stationary segment", "[bank]") {
  const auto fs = extract_all(fx::make_clip(40, 30.0));
  REQUIRE(fs.complete());
  using F = FeatureId;
  for (auto f : {F::KineticEnergy, F::HeadSpeed, F::HeadAccel, F::HeadJerk, F::HandSpeed, F::HandAccel, F::HandJerk,
                 F::HandCurvature, F::HeadLeaningPos, F::HeadLeaningSpeed, F::TorsoLeaningPos, F::TorsoLeaningSpeed,
                 F::GlobalDirectionAzimuth, F::GlobalDirectionElevation, F::WholeBodyPeriodicity, F::HandSmoothness,
                 F::HandImpulsiveness}) {
    for (double v : fs[f]) CHECK(v == 0.0);
  }
  for (double v : fs[F::HandFluidity]) CHECK(v == 1.0);
  for (double v : fs[F::OverallSymmetry]) CHECK_THAT(v, WithinAbs(1.0, 1e-12));
}

TEST_CASE("random clips never produce non-finite features", "[bank]") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::size_t> len(4, 120);
  for (int rep = 0; rep < 40; ++rep) {
    const auto fs = extract_all(fx::random_clip(rng, len(rng)));
    REQUIRE(fs.complete());
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      REQUIRE(fs[feature_at(f)].size() == fs.frames());
      for (double v : fs[feature_at(f)]) REQUIRE(std::isfinite(v));
    }
  }
}

TEST_CASE("mirror image keeps energy, hand distance and symmetry", "[bank]") {
  std::mt19937_64 rng(19);
  for (int rep = 0; rep < 10; ++rep) {
    const auto clip = fx::random_clip(rng, 60);
    const auto a = extract_all(clip);
    const auto b = extract_all(fx::mirrored(clip));
    for (auto f : {FeatureId::KineticEnergy, FeatureId::HandsDistance, FeatureId::OverallSymmetry}) {
      CHECK(max_abs_diff(a[f], b[f]) < 1e-9);
    }
  }
}

TEST_CASE("rigid motion and scaling", "[bank]") {
  std::mt19937_64 rng(23);
  const auto clip = fx::random_clip(rng, 70);
  const auto base = extract_all(clip);
  using F = FeatureId;

  const auto shifted = extract_all(fx::transformed(clip, Eigen::Matrix3d::Identity(), Vec3(1.5, -0.3, 2.0)));
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    CHECK(max_abs_diff(base[feature_at(i)], shifted[feature_at(i)]) < 1e-9);
  }

  const auto rotated = extract_all(fx::transformed(clip, fx::random_rotation(rng), Vec3::Zero()));
  for (auto f : {F::KineticEnergy, F::ContractionIndex, F::OverallSymmetry, F::WholeBodyPeriodicity, F::HeadSpeed,
                 F::HeadAccel, F::HeadJerk, F::HandsDistance, F::HandSpeed, F::HandAccel, F::HandJerk,
                 F::HandCurvature, F::HandSmoothness, F::HandFluidity, F::HandImpulsiveness, F::HandDistTorso,
                 F::HandDistHead, F::HeadSymmetryHands, F::HeadSymmetryShoulders}) {
    INFO(to_string(f));
    CHECK(max_abs_diff(base[f], rotated[f]) < 1e-6);
  }

  const double k = 1.7;
  const auto scaled = extract_all(fx::transformed(clip, Eigen::Matrix3d::Identity(), Vec3::Zero(), k));
  for (auto f : {F::ContractionIndex, F::HandsDistance, F::HandDistTorso, F::HandDistHead, F::OverallSymmetry,
                 F::HeadSymmetryHands, F::HeadSymmetryShoulders, F::HandSmoothness}) {
    INFO(to_string(f));
    CHECK(max_abs_diff(base[f], scaled[f]) < 1e-9);
  }
  for (std::size_t i = 0; i < base[F::KineticEnergy].size(); ++i) {
    CHECK_THAT(scaled[F::KineticEnergy][i], WithinRel(k * k * base[F::KineticEnergy][i], 1e-12));
  }
}

TEST_CASE("a quarter turn about the vertical rotates the heading", "[bank]") {
  // Walking forward (+z) turned by +90 degrees about y walks toward +x.
  const auto walk = fx::make_clip(20, 30.0, [](SkeletonFrame& f, double t, std::size_t) {
    for (auto& p : f.joints) p.z() += 0.8 * t;
  });
  const Eigen::Matrix3d R = Eigen::AngleAxisd(M_PI / 2, Vec3::UnitY()).toRotationMatrix();
  const auto turned = global_direction(fx::transformed(walk, R, Vec3::Zero()));
  for_interior(20, 1, [&](std::size_t i) { CHECK_THAT(turned.azimuth[i], WithinAbs(M_PI / 2, 1e-9)); });
  // Forward lean becomes lateral, so the sagittal lean series vanishes.
  const auto lean_walk = fx::make_clip(20, 30.0, [](SkeletonFrame& f, double t, std::size_t) { f[JointId::Head].z() += 0.1 * t; });
  const auto before = leaning(lean_walk, JointId::Head);
  const auto after = leaning(fx::transformed(lean_walk, R, Vec3::Zero()), JointId::Head);
  CHECK(std::abs(before.position.back()) > 0.05);
  for (double v : after.position) CHECK_THAT(v, WithinAbs(0.0, 1e-12));
}

TEST_CASE("integrated speed reproduces path length", "[bank]") {
  const auto clip = circle(0.3, 3.0, 30.0, 121);
  const auto k = kinematics(clip, JointId::HandLeft);
  double integral = 0.0;
  for (std::size_t i = 1; i < k.speed.size(); ++i) integral += 0.5 * (k.speed[i] + k.speed[i - 1]) * clip.dt();
  const double path = 0.3 * 3.0 * clip.duration();
  CHECK_THAT(integral, WithinRel(path, 0.02));
}
