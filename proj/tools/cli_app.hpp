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

// The `bodyemo` command line. Machine-readable results go to `out`,
// diagnostics to `err`. Exit codes: 0 success, 1 usage, 2 data, 3 internal.

#include <bodyemo/bodyemo.hpp>

#include "http_binding.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>

namespace bodyemo::tools {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  double rate = kCanonicalRate;
  int smooth_window = kDefaultSmoothWindow;
  std::uint64_t seed = 0;
  bool verbose = false;
  std::size_t jobs = default_jobs();

  PipelineOptions pipeline(bool segment) const {
    PipelineOptions p;
    p.preprocess = {rate, smooth_window};
    p.segment = segment;
    p.jobs = jobs;
    return p;
  }
};

namespace detail {

inline nlohmann::json class_names(const ClassSet& cs) {
  nlohmann::json a = nlohmann::json::array();
  for (auto e : cs) a.push_back(std::string(to_string(e)));
  return a;
}

inline nlohmann::json losses_json(const ClassSet& cs, const std::vector<double>& losses) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t c = 0; c < cs.size(); ++c) j[std::string(to_string(cs[c]))] = losses[c];
  return j;
}

inline nlohmann::json segment_json(const GestureSegment& s, const SkeletonClip& prepared) {
  return {{"start_frame", s.start_frame},
          {"end_frame", s.end_frame},
          {"t_start", prepared.frames[s.start_frame].t},
          {"t_end", prepared.frames[s.end_frame].t},
          {"peak_energy", s.peak_energy}};
}

/// A manifest, a directory holding one, or a single clip file.
inline Dataset load_input(const std::filesystem::path& p) {
  if (std::filesystem::is_directory(p) || p.extension() == ".json") return load_dataset(p);
  Dataset ds;
  ds.clips.push_back(load_clip(p));
  return ds;
}

inline ClassSet class_set_of(int classes) {
  if (classes != 4 && classes != 6) throw UsageError("--classes must be 4 or 6");
  return ClassSet::with_size(static_cast<std::size_t>(classes));
}

/// Playback library for the game: every clip of a manifest directory, or
/// every clip file of a plain directory, keyed by file stem.
inline std::vector<LibraryClip> load_library(const std::filesystem::path& dir) {
  std::vector<LibraryClip> lib;
  if (std::filesystem::exists(dir / "manifest.json") || dir.extension() == ".json") {
    auto manifest = std::filesystem::is_directory(dir) ? dir / "manifest.json" : dir;
    std::ifstream in(manifest);
    const auto entries = nlohmann::json::parse(in);
    auto ds = load_dataset(manifest);
    for (std::size_t i = 0; i < ds.clips.size(); ++i) {
      const auto id = std::filesystem::path(entries[i]["path"].get<std::string>()).stem().string();
      lib.push_back({id, std::move(ds.clips[i])});
    }
    return lib;
  }
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    const auto ext = e.path().extension();
    if (e.is_regular_file() && (ext == ".jsonl" || ext == ".csv")) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) lib.push_back({f.stem().string(), load_clip(f)});
  return lib;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

struct SynthArgs {
  int subjects = 12;
  int per_class = 5;
  int classes = 6;
  std::string out;
  double clip_rate = 30.0;
};

inline int cmd_synth(const Globals& g, const SynthArgs& a, std::ostream& out, std::ostream& err) {
  GeneratorSpec spec;
  spec.subjects = a.subjects;
  spec.clips_per_class = a.per_class;
  spec.class_set = detail::class_set_of(a.classes);
  spec.rate = a.clip_rate;
  const auto ds = synth_dataset(spec, g.seed);
  const auto manifest = save_dataset(a.out, ds);
  if (g.verbose) err << "wrote " << ds.clips.size() << " clips to " << a.out << "\n";
  out << nlohmann::json{{"clips", ds.clips.size()},
                        {"subjects", ds.subjects().size()},
                        {"classes", detail::class_names(spec.class_set)},
                        {"seed", g.seed},
                        {"manifest", manifest.string()}}
             .dump()
      << "\n";
  return kOk;
}

struct ExtractArgs {
  std::string clip;
  std::string style = "csv";
};

inline int cmd_extract(const Globals& g, const ExtractArgs& a, std::ostream& out, std::ostream&) {
  const auto prepared = preprocess(load_clip(a.clip), {g.rate, g.smooth_window});
  const auto fs = extract_all(prepared);
  if (a.style == "csv") {
    out << "frame,t";
    for (const auto& info : kFeatureInfo) out << "," << info.name;
    out << "\n";
    for (std::size_t i = 0; i < prepared.frames.size(); ++i) {
      out << i << "," << nlohmann::json(prepared.frames[i].t).dump();
      for (std::size_t f = 0; f < kFeatureCount; ++f) out << "," << nlohmann::json(fs[static_cast<FeatureId>(f)][i]).dump();
      out << "\n";
    }
    return kOk;
  }
  nlohmann::json features = nlohmann::json::object();
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    const auto& info = kFeatureInfo[f];
    features[std::string(info.name)] = {{"unit", std::string(info.unit)},
                                        {"values", fs[static_cast<FeatureId>(f)]}};
  }
  out << nlohmann::json{{"frames", prepared.frames.size()}, {"rate", g.rate}, {"features", features}}.dump()
      << "\n";
  return kOk;
}

struct SegmentArgs {
  std::string clip;
  std::string model;
  bool auto_params = false;
  std::optional<double> tau_on, tau_off;
  std::optional<int> hold, min_len, pad;
  std::string emit_clips;
};

inline int cmd_segment(const Globals& g, const SegmentArgs& a, std::ostream& out, std::ostream& err) {
  const auto clip = load_clip(a.clip);
  const PreprocessOptions pre{g.rate, g.smooth_window};
  SegmenterParams params;
  if (!a.model.empty()) params = load_model(a.model).segmenter.value_or(params);
  if (a.auto_params) {
    Dataset ds;
    ds.clips.push_back(clip);
    params = auto_params(ds, pre);
  }
  if (a.tau_on) params.tau_on = *a.tau_on;
  if (a.tau_off) params.tau_off = *a.tau_off;
  if (a.hold) params.hold = *a.hold;
  if (a.min_len) params.min_len = *a.min_len;
  if (a.pad) params.pad = *a.pad;
  params.validate();

  const auto prepared = preprocess(clip, pre);
  const auto segments = segment(prepared, params);
  nlohmann::json list = nlohmann::json::array();
  for (std::size_t k = 0; k < segments.size(); ++k) {
    auto j = detail::segment_json(segments[k], prepared);
    if (!a.emit_clips.empty()) {
      std::filesystem::create_directories(a.emit_clips);
      char buf[16];
      std::snprintf(buf, sizeof buf, "%03zu", k);
      const auto path = std::filesystem::path(a.emit_clips) /
                        (std::filesystem::path(a.clip).stem().string() + "_seg" + buf + ".jsonl");
      save_clip(path, prepared.slice(segments[k].start_frame, segments[k].end_frame), ClipFormat::Jsonl);
      j["path"] = path.string();
    }
    list.push_back(std::move(j));
  }
  if (g.verbose) err << segments.size() << " segments\n";
  out << nlohmann::json{{"frames", prepared.frames.size()}, {"params", to_json(params)}, {"segments", list}}.dump()
      << "\n";
  return kOk;
}

struct TrainArgs {
  std::string data;
  std::string out;
  int classes = 6;
  double C = 1.0;
  bool grid_c = false;
  bool no_segment = false;
  bool auto_segmenter = false;
};

inline int cmd_train(const Globals& g, const TrainArgs& a, std::ostream& out, std::ostream& err) {
  const auto classes = detail::class_set_of(a.classes);
  const auto all = detail::load_input(a.data);
  const auto ds = restrict_to(all, classes);
  if (g.verbose && ds.clips.size() != all.clips.size()) {
    err << "ignoring " << all.clips.size() - ds.clips.size() << " clips outside the class set\n";
  }
  auto opt = g.pipeline(!a.no_segment);
  if (opt.segment) {
    opt.segmenter = a.auto_segmenter && !ds.clips.empty() ? auto_params(ds, opt.preprocess) : SegmenterParams{};
  }
  const auto examples = make_examples(ds, opt);
  if (g.verbose) err << examples.size() << " gestures from " << ds.clips.size() << " clips\n";
  TrainOptions topt;
  topt.C = a.C;
  topt.grid_c = a.grid_c;
  topt.jobs = g.jobs;
  auto model = fit_model(examples, classes, topt);
  model.segmenter = opt.segmenter;
  save_model(a.out, model);
  out << nlohmann::json{{"model", a.out},
                        {"classes", detail::class_names(classes)},
                        {"examples", examples.size()},
                        {"C", model.trained_on["C"]},
                        {"vectors_hash", model.trained_on["vectors_hash"]}}
             .dump()
      << "\n";
  return kOk;
}

struct PredictArgs {
  std::string model;
  std::string clip;
  bool no_segment = false;
};

/// The clip's label is that of its longest gesture, or of the whole clip
/// when the model carries no segmenter or nothing is segmented.
inline int cmd_predict(const Globals& g, const PredictArgs& a, std::ostream& out, std::ostream&) {
  const auto model = load_model(a.model);
  const auto prepared = preprocess(load_clip(a.clip), {g.rate, g.smooth_window});
  nlohmann::json segs = nlohmann::json::array();
  std::optional<Prediction> best;
  std::size_t best_len = 0;
  if (model.segmenter && !a.no_segment) {
    for (const auto& s : segment(prepared, *model.segmenter)) {
      if (s.length() < kMinKinematicFrames) continue;
      auto p = model.predict(extract_all(prepared.slice(s.start_frame, s.end_frame)));
      auto j = detail::segment_json(s, prepared);
      j["label"] = std::string(to_string(p.label));
      j["losses"] = detail::losses_json(model.class_set, p.losses);
      segs.push_back(std::move(j));
      if (s.length() > best_len) {
        best_len = s.length();
        best = std::move(p);
      }
    }
  }
  if (!best) best = model.predict(extract_all(prepared));
  out << nlohmann::json{{"label", std::string(to_string(best->label))},
                        {"losses", detail::losses_json(model.class_set, best->losses)},
                        {"margins", best->margins},
                        {"segments", segs}}
             .dump()
      << "\n";
  return kOk;
}

struct EvaluateArgs {
  std::string data;
  std::string protocol = "both";
  int classes = 6;
  std::size_t repeats = 50;
  double ratio = 0.7;
  std::string style = "json";
  bool human = false;
  double C = 1.0;
  bool grid_c = false;
  bool no_segment = false;
};

inline int cmd_evaluate(const Globals& g, const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  const auto classes = detail::class_set_of(a.classes);
  const auto style = parse_report_style(a.style);
  if (!style) throw UsageError("--style must be paper-table, json or csv");
  const auto t0 = std::chrono::steady_clock::now();
  const auto ds = restrict_to(detail::load_input(a.data), classes);
  const auto examples = make_examples(ds, g.pipeline(!a.no_segment));
  SvmLearner learner;
  learner.train.C = a.C;
  learner.train.grid_c = a.grid_c;

  std::vector<Report> reports;
  if (a.protocol == "split" || a.protocol == "both") {
    SplitOptions so;
    so.ratio = a.ratio;
    so.repeats = a.repeats;
    so.seed = g.seed;
    so.jobs = g.jobs;
    reports.push_back(split_eval(examples, classes, learner, so));
  }
  if (a.protocol == "loso" || a.protocol == "both") {
    reports.push_back(loso_eval(examples, classes, learner, LosoOptions{g.jobs}));
  }
  if (g.verbose) {
    err << "evaluated " << examples.size() << " gestures in "
        << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s\n";
  }
  out << render_report(reports, *style, a.human);
  return kOk;
}

struct InspectArgs {
  std::string data;
  std::string model;
  std::string feature;
  int classes = 6;
  std::string style = "csv";
  bool no_segment = false;
};

/// Per-class mean histograms (density and cumulative) under the binning of
/// `--model`, or one fitted on the data.
inline int cmd_inspect(const Globals& g, const InspectArgs& a, std::ostream& out, std::ostream&) {
  const auto classes = detail::class_set_of(a.classes);
  std::optional<FeatureId> only;
  if (!a.feature.empty()) {
    only = parse_feature(a.feature);
    if (!only) throw UnknownFeature("unknown feature " + a.feature);
  }
  const auto examples = make_examples(restrict_to(detail::load_input(a.data), classes), g.pipeline(!a.no_segment));
  if (examples.empty()) throw EmptyDataset("no clips to inspect");
  BinningSpec binning;
  if (!a.model.empty()) {
    binning = load_model(a.model).binning;
  } else {
    std::vector<FeatureSet> sets;
    for (const auto& e : examples) sets.push_back(e.features);
    binning = fit_binning(sets);
  }
  std::vector<std::vector<double>> mean(classes.size(), std::vector<double>(kVectorLength, 0.0));
  std::vector<std::size_t> count(classes.size(), 0);
  for (const auto& e : examples) {
    const auto c = *classes.index_of(e.label);
    const auto v = assemble(e.features, binning);
    for (std::size_t i = 0; i < kVectorLength; ++i) mean[c][i] += v[i];
    ++count[c];
  }
  nlohmann::json j = nlohmann::json::array();
  if (a.style == "csv") out << "class,feature,bin,lo,hi,density,cumulative\n";
  for (std::size_t c = 0; c < classes.size(); ++c) {
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      if (only && index(*only) != f) continue;
      const auto& r = binning.ranges[f];
      double cum = 0.0;
      for (std::size_t b = 0; b < kBins; ++b) {
        const double d = count[c] ? mean[c][f * kBins + b] / static_cast<double>(count[c]) : 0.0;
        cum += d;
        const double lo = r.lo + (r.hi - r.lo) * static_cast<double>(b) / kBins;
        const double hi = r.lo + (r.hi - r.lo) * static_cast<double>(b + 1) / kBins;
        const std::string cls(to_string(classes[c])), feat(kFeatureInfo[f].name);
        if (a.style == "csv") {
          out << cls << "," << feat << "," << b << "," << nlohmann::json(lo).dump() << ","
              << nlohmann::json(hi).dump() << "," << nlohmann::json(d).dump() << ","
              << nlohmann::json(cum).dump() << "\n";
        } else {
          j.push_back({{"class", cls}, {"feature", feat}, {"bin", b}, {"lo", lo}, {"hi", hi},
                       {"density", d}, {"cumulative", cum}});
        }
      }
    }
  }
  if (a.style != "csv") out << j.dump() << "\n";
  return kOk;
}

struct ServeArgs {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string model;
  std::string clips;
};

inline int cmd_serve(const Globals& g, const ServeArgs& a, std::ostream& out, std::ostream& err) {
  auto model = std::make_shared<const OvoEcocModel>(load_model(a.model));
  std::vector<LibraryClip> library;
  if (!a.clips.empty()) {
    library = detail::load_library(a.clips);
  } else {
    // Without a library, one synthetic performer per emotion.
    GeneratorSpec spec;
    spec.class_set = model->class_set;
    spec.subjects = 1;
    spec.clips_per_class = 1;
    auto ds = synth_dataset(spec, g.seed);
    for (auto& c : ds.clips) library.push_back({std::string(to_string(*c.label)), std::move(c)});
  }
  ServiceOptions sopt;
  sopt.preprocess = {g.rate, g.smooth_window};
  sopt.seed = g.seed;
  Service service(model, std::move(library), sopt);
  httplib::Server server;
  bind_service(server, service);
  if (!server.bind_to_port(a.host, a.port)) {
    err << "cannot listen on " << a.host << ":" << a.port << "\n";
    return kData;
  }
  out << nlohmann::json{{"listening", a.host + ":" + std::to_string(a.port)}}.dump() << std::endl;
  server.listen_after_bind();
  return kOk;
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Emotion recognition from full-body skeleton motion", "bodyemo"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--rate", g.rate, "Canonical resampling rate (Hz)")->check(CLI::PositiveNumber);
  app.add_option("--smooth-window", g.smooth_window, "Smoothing window (odd frame count)")
      ->check(CLI::Range(1, 99));
  app.add_option("--seed", g.seed, "Master seed");
  app.add_flag("--verbose,-v", g.verbose, "Diagnostics on stderr");
  app.add_option("--jobs,-j", g.jobs, "Parallel workers")->check(CLI::Range(std::size_t{1}, std::size_t{1024}));

  const auto classes_check = CLI::IsMember({4, 6});

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Generate a synthetic corpus with a manifest");
  c_synth->add_option("--subjects", synth.subjects)->check(CLI::PositiveNumber);
  c_synth->add_option("--per-class", synth.per_class)->check(CLI::PositiveNumber);
  c_synth->add_option("--classes", synth.classes)->check(classes_check);
  c_synth->add_option("--clip-rate", synth.clip_rate, "Frame rate of the generated clips")->check(CLI::PositiveNumber);
  c_synth->add_option("--out", synth.out)->required();

  ExtractArgs extract;
  auto* c_extract = app.add_subcommand("extract", "Per-frame feature series of a clip");
  c_extract->add_option("--clip", extract.clip)->required()->check(CLI::ExistingFile);
  c_extract->add_option("--style", extract.style)->check(CLI::IsMember({"json", "csv"}));

  SegmentArgs seg;
  auto* c_segment = app.add_subcommand("segment", "Gesture boundaries of a clip");
  c_segment->add_option("--clip", seg.clip)->required()->check(CLI::ExistingFile);
  c_segment->add_option("--model", seg.model, "Take thresholds from a model")->check(CLI::ExistingFile);
  c_segment->add_flag("--auto", seg.auto_params, "Thresholds from the clip's own energy");
  c_segment->add_option("--tau-on", seg.tau_on);
  c_segment->add_option("--tau-off", seg.tau_off);
  c_segment->add_option("--hold", seg.hold);
  c_segment->add_option("--min-len", seg.min_len);
  c_segment->add_option("--pad", seg.pad);
  c_segment->add_option("--emit-clips", seg.emit_clips, "Write each segment as a JSONL clip");

  TrainArgs train;
  auto* c_train = app.add_subcommand("train", "Train a model");
  c_train->add_option("--data", train.data, "Manifest, dataset directory or clip")->required()->check(CLI::ExistingPath);
  c_train->add_option("--out", train.out)->required();
  c_train->add_option("--classes", train.classes)->check(classes_check);
  c_train->add_option("-C,--C", train.C)->check(CLI::PositiveNumber);
  c_train->add_flag("--grid-c", train.grid_c, "Select C by inner cross-validation");
  c_train->add_flag("--no-segment", train.no_segment, "Treat every clip as one gesture");
  c_train->add_flag("--auto-segmenter", train.auto_segmenter, "Fit thresholds to the training clips");

  PredictArgs predict;
  auto* c_predict = app.add_subcommand("predict", "Classify a clip");
  c_predict->add_option("--model", predict.model)->required()->check(CLI::ExistingFile);
  c_predict->add_option("--clip", predict.clip)->required()->check(CLI::ExistingFile);
  c_predict->add_flag("--no-segment", predict.no_segment);

  EvaluateArgs eval;
  auto* c_eval = app.add_subcommand("evaluate", "Split and/or leave-one-subject-out evaluation");
  c_eval->add_option("--data", eval.data)->required()->check(CLI::ExistingPath);
  c_eval->add_option("--protocol", eval.protocol)->check(CLI::IsMember({"split", "loso", "both"}));
  c_eval->add_option("--classes", eval.classes)->check(classes_check);
  c_eval->add_option("--repeats", eval.repeats)->check(CLI::PositiveNumber);
  c_eval->add_option("--ratio", eval.ratio)->check(CLI::Range(0.0, 1.0));
  c_eval->add_option("--style", eval.style)->check(CLI::IsMember({"paper-table", "json", "csv"}));
  c_eval->add_flag("--human", eval.human, "Add the human observer reference column");
  c_eval->add_option("-C,--C", eval.C)->check(CLI::PositiveNumber);
  c_eval->add_flag("--grid-c", eval.grid_c);
  c_eval->add_flag("--no-segment", eval.no_segment);

  InspectArgs inspect;
  auto* c_inspect = app.add_subcommand("inspect", "Per-class histograms");
  c_inspect->add_option("--data", inspect.data)->required()->check(CLI::ExistingPath);
  c_inspect->add_option("--model", inspect.model)->check(CLI::ExistingFile);
  c_inspect->add_option("--feature", inspect.feature);
  c_inspect->add_option("--classes", inspect.classes)->check(classes_check);
  c_inspect->add_option("--style", inspect.style)->check(CLI::IsMember({"json", "csv"}));
  c_inspect->add_flag("--no-segment", inspect.no_segment);

  ServeArgs serve;
  auto* c_serve = app.add_subcommand("serve", "Run the HTTP service");
  c_serve->add_option("--host", serve.host);
  c_serve->add_option("--port", serve.port)->check(CLI::Range(0, 65535));
  c_serve->add_option("--model", serve.model)->required()->check(CLI::ExistingFile);
  c_serve->add_option("--clips", serve.clips, "Clip library for the game")->check(CLI::ExistingPath);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (c_synth->parsed()) return cmd_synth(g, synth, out, err);
    if (c_extract->parsed()) return cmd_extract(g, extract, out, err);
    if (c_segment->parsed()) return cmd_segment(g, seg, out, err);
    if (c_train->parsed()) return cmd_train(g, train, out, err);
    if (c_predict->parsed()) return cmd_predict(g, predict, out, err);
    if (c_eval->parsed()) return cmd_evaluate(g, eval, out, err);
    if (c_inspect->parsed()) return cmd_inspect(g, inspect, out, err);
    if (c_serve->parsed()) return cmd_serve(g, serve, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.kind() << ": " << e.what() << "\n";
    return e.kind() == "InvalidArgument" || e.kind() == "InvalidSpec" ? kUsage : kData;
  } catch (const nlohmann::json::exception& e) {
    err << "error: ParseError: " << e.what() << "\n";
    return kData;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}

}  // namespace bodyemo::tools
