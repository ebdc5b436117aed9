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

// Clip -> feature set -> model glue shared by the CLI, the evaluation
// harness and the service.

#include <bodyemo/clip_io.hpp>
#include <bodyemo/model.hpp>
#include <bodyemo/preprocess.hpp>

namespace bodyemo {

struct PipelineOptions {
  PreprocessOptions preprocess;
  FeatureWindows windows;
  bool segment = true;  // false: every clip is one pre-segmented gesture
  std::optional<SegmenterParams> segmenter;
  std::size_t jobs = 1;
};

/// One labeled training/evaluation unit: the features of a gesture segment
/// plus where it came from.
struct Example {
  FeatureSet features;
  EmotionLabel label{};
  std::string subject;
  std::size_t clip = 0;  // index of the source clip in its dataset
};

inline FeatureSet clip_features(const SkeletonClip& clip, const PipelineOptions& opt = {}) {
  return extract_all(preprocess(clip, opt.preprocess), opt.windows);
}

/// Feature sets of the gestures in one clip. With segmentation enabled a
/// clip that yields no segment contributes itself as a single gesture.
inline std::vector<FeatureSet> gesture_features(const SkeletonClip& clip, const PipelineOptions& opt) {
  const auto prepared = preprocess(clip, opt.preprocess);
  if (!opt.segment) return {extract_all(prepared, opt.windows)};
  const auto segments = segment(prepared, opt.segmenter.value_or(SegmenterParams{}));
  std::vector<FeatureSet> out;
  for (const auto& s : segments) {
    if (s.length() < kMinKinematicFrames) continue;
    out.push_back(extract_all(prepared.slice(s.start_frame, s.end_frame), opt.windows));
  }
  if (out.empty()) out.push_back(extract_all(prepared, opt.windows));
  return out;
}

inline std::vector<Example> make_examples(const Dataset& dataset, const PipelineOptions& opt = {}) {
  std::vector<std::vector<Example>> per_clip(dataset.clips.size());
  parallel_for(dataset.clips.size(), opt.jobs, [&](std::size_t i) {
    const auto& clip = dataset.clips[i];
    if (!clip.label) throw SchemaError("clip " + std::to_string(i) + " has no label");
    for (auto& fs : gesture_features(clip, opt)) {
      per_clip[i].push_back({std::move(fs), *clip.label, clip.subject_id, i});
    }
  });
  std::vector<Example> out;
  for (auto& v : per_clip) {
    for (auto& e : v) out.push_back(std::move(e));
  }
  return out;
}

/// Keeps the clips whose label is in `classes`.
inline Dataset restrict_to(const Dataset& dataset, const ClassSet& classes) {
  Dataset out;
  for (const auto& c : dataset.clips) {
    if (c.label && classes.contains(*c.label)) out.clips.push_back(c);
  }
  return out;
}

inline std::vector<Example> restrict_to(std::span<const Example> examples, const ClassSet& classes) {
  std::vector<Example> out;
  for (const auto& e : examples) {
    if (classes.contains(e.label)) out.push_back(e);
  }
  return out;
}

/// Fits the binning on the examples, assembles vectors and trains the
/// one-vs-one bank.
inline OvoEcocModel fit_model(std::span<const Example> train, const ClassSet& classes,
                              const TrainOptions& opt = {}) {
  if (train.empty()) throw EmptyDataset("no training examples");
  std::vector<FeatureSet> sets;
  sets.reserve(train.size());
  for (const auto& e : train) sets.push_back(e.features);
  const auto binning = fit_binning(sets);
  std::vector<FeatureVector> vectors;
  std::vector<EmotionLabel> labels;
  vectors.reserve(train.size());
  for (const auto& e : train) {
    vectors.push_back(assemble(e.features, binning));
    labels.push_back(e.label);
  }
  return train_model(vectors, labels, classes, binning, opt);
}

/// Default learner for the evaluation harness.
struct SvmLearner {
  TrainOptions train;

  struct Predictor {
    OvoEcocModel model;
    EmotionLabel operator()(const Example& e) const { return model.predict(e.features).label; }
  };

  Predictor fit(std::span<const Example> examples, const ClassSet& classes) const {
    return {fit_model(examples, classes, train)};
  }
};

// ---------------------------------------------------------------------------
// Manifests: JSON list of {path, subject, label}, paths relative to the
// manifest's directory.
// ---------------------------------------------------------------------------

inline std::string clip_file_name(const SkeletonClip& clip, std::size_t ordinal) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04zu", ordinal);
  return clip.subject_id + "_" + std::string(clip.label ? to_string(*clip.label) : "none") + "_" +
         buf + ".jsonl";
}

inline std::filesystem::path save_dataset(const std::filesystem::path& dir, const Dataset& dataset) {
  std::filesystem::create_directories(dir);
  nlohmann::json manifest = nlohmann::json::array();
  for (std::size_t i = 0; i < dataset.clips.size(); ++i) {
    const auto& clip = dataset.clips[i];
    const auto name = clip_file_name(clip, i);
    save_clip(dir / name, clip, ClipFormat::Jsonl);
    manifest.push_back({{"path", name},
                        {"subject", clip.subject_id},
                        {"label", clip.label ? nlohmann::json(std::string(to_string(*clip.label)))
                                             : nlohmann::json()}});
  }
  const auto path = dir / "manifest.json";
  std::ofstream out(path);
  out << manifest.dump(1) << '\n';
  return path;
}

/// Loads every clip of a manifest. Manifest subject/label override the clip
/// headers. A directory argument means `<dir>/manifest.json`.
inline Dataset load_dataset(std::filesystem::path manifest_path) {
  if (std::filesystem::is_directory(manifest_path)) manifest_path /= "manifest.json";
  std::ifstream in(manifest_path);
  if (!in) throw ParseError("cannot open manifest " + manifest_path.string());
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("malformed manifest " + manifest_path.string() + ": " + e.what());
  }
  if (!manifest.is_array()) throw ParseError("manifest must be a JSON list");
  const auto base = manifest_path.parent_path();
  Dataset ds;
  for (const auto& entry : manifest) {
    if (!entry.is_object() || !entry.contains("path") || !entry["path"].is_string()) {
      throw ParseError("manifest entry without a path");
    }
    std::filesystem::path p = entry["path"].get<std::string>();
    if (p.is_relative()) p = base / p;
    auto clip = load_clip(p);
    if (entry.contains("subject") && entry["subject"].is_string()) {
      clip.subject_id = entry["subject"].get<std::string>();
    }
    if (entry.contains("label") && entry["label"].is_string()) {
      auto e = parse_emotion(entry["label"].get<std::string>());
      if (!e) throw SchemaError("unknown label in manifest: " + entry["label"].get<std::string>());
      clip.label = *e;
    }
    ds.clips.push_back(std::move(clip));
  }
  return ds;
}

}  // namespace bodyemo
