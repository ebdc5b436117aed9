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

// Clip files: canonical JSONL (metadata header line + one frame per line) and
// a CSV variant with a `.meta.json` sidecar.

#include <bodyemo/skeleton.hpp>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace bodyemo {

enum class ClipFormat { Jsonl, Csv };

inline ClipFormat format_from_path(const std::filesystem::path& p) {
  return p.extension() == ".csv" ? ClipFormat::Csv : ClipFormat::Jsonl;
}

namespace detail {

inline std::string at_line(std::size_t line) { return " (line " + std::to_string(line) + ")"; }

inline Vec3 parse_vec3(const nlohmann::json& v, std::string_view joint, std::size_t line) {
  if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
      !v[2].is_number()) {
    throw ParseError("joint " + std::string(joint) + " is not a 3-number array" + at_line(line));
  }
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

inline nlohmann::json header_json(const SkeletonClip& clip) {
  nlohmann::json h;
  h["subject"] = clip.subject_id;
  h["label"] = clip.label ? nlohmann::json(std::string(to_string(*clip.label))) : nlohmann::json();
  h["source"] = std::string(to_string(clip.source));
  h["rate"] = clip.nominal_rate;
  return h;
}

inline void apply_header(const nlohmann::json& h, SkeletonClip& clip, std::size_t line) {
  if (!h.is_object()) throw ParseError("clip header is not an object" + at_line(line));
  if (h.contains("subject")) {
    if (!h["subject"].is_string()) throw ParseError("subject must be a string" + at_line(line));
    clip.subject_id = h["subject"].get<std::string>();
  }
  if (h.contains("label") && !h["label"].is_null()) {
    auto s = h["label"].is_string() ? h["label"].get<std::string>() : std::string{};
    if (s != "null") {
      auto e = parse_emotion(s);
      if (!e) throw SchemaError("unknown label '" + s + "'" + at_line(line));
      clip.label = *e;
    }
  }
  if (h.contains("source")) {
    auto s = h["source"].is_string() ? h["source"].get<std::string>() : std::string{};
    auto src = parse_source(s);
    if (!src) throw SchemaError("unknown source '" + s + "'" + at_line(line));
    clip.source = *src;
  }
  if (h.contains("rate")) {
    if (!h["rate"].is_number() || !(h["rate"].get<double>() > 0)) {
      throw SchemaError("rate must be a positive number" + at_line(line));
    }
    clip.nominal_rate = h["rate"].get<double>();
  }
}

/// Sort by time (stable), drop repeated timestamps keeping the first, check
/// shoulder widths and infer the nominal rate from the median step.
inline void finalize_loaded(SkeletonClip& clip, const std::vector<std::size_t>& lines) {
  std::vector<std::size_t> order(clip.frames.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return clip.frames[a].t < clip.frames[b].t;
  });
  std::vector<SkeletonFrame> frames;
  frames.reserve(order.size());
  for (auto i : order) {
    const auto& f = clip.frames[i];
    if (!(f.shoulder_width() > 0.0)) {
      throw DegenerateFrame("zero shoulder distance" + at_line(lines[i]));
    }
    if (!frames.empty() && frames.back().t == f.t) continue;
    frames.push_back(f);
  }
  clip.frames = std::move(frames);
  if (clip.frames.size() >= 2) {
    std::vector<double> steps;
    for (std::size_t i = 1; i < clip.frames.size(); ++i) {
      steps.push_back(clip.frames[i].t - clip.frames[i - 1].t);
    }
    auto mid = steps.begin() + static_cast<std::ptrdiff_t>(steps.size() / 2);
    std::nth_element(steps.begin(), mid, steps.end());
    double median = *mid;
    if (steps.size() % 2 == 0) {
      median = 0.5 * (median + *std::max_element(steps.begin(), mid));
    }
    clip.nominal_rate = 1.0 / median;
  }
}

}  // namespace detail

/// Parses one frame object of the wire format. `line` is only used for
/// error messages.
inline SkeletonFrame frame_from_json(const nlohmann::json& j, std::size_t line = 0) {
  if (!j.is_object()) throw ParseError("frame is not an object" + detail::at_line(line));
  SkeletonFrame f;
  auto t = j.find("t");
  if (t == j.end() || !t->is_number()) {
    throw SchemaError("frame has no numeric 't'" + detail::at_line(line));
  }
  f.t = t->get<double>();
  if (!std::isfinite(f.t) || f.t < 0.0) {
    throw SchemaError("frame time must be finite and non-negative" + detail::at_line(line));
  }
  for (std::size_t k = 0; k < kJointCount; ++k) {
    auto it = j.find(std::string(kJointKeys[k]));
    if (it == j.end()) {
      throw SchemaError("missing joint " + std::string(kJointNames[k]) + detail::at_line(line));
    }
    f.joints[k] = detail::parse_vec3(*it, kJointNames[k], line);
    if (!f.joints[k].allFinite()) {
      throw SchemaError("non-finite joint " + std::string(kJointNames[k]) + detail::at_line(line));
    }
  }
  return f;
}

inline nlohmann::json frame_to_json(const SkeletonFrame& f) {
  nlohmann::json j;
  j["t"] = f.t;
  for (std::size_t k = 0; k < kJointCount; ++k) {
    j[std::string(kJointKeys[k])] = {f.joints[k].x(), f.joints[k].y(), f.joints[k].z()};
  }
  return j;
}

inline SkeletonClip parse_jsonl(std::istream& in) {
  SkeletonClip clip;
  std::vector<std::size_t> lines;
  std::string text;
  std::size_t line = 0;
  bool header_seen = false;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what() + detail::at_line(line));
    }
    if (!header_seen) {
      header_seen = true;
      if (j.is_object() && !j.contains("t")) {
        detail::apply_header(j, clip, line);
        continue;
      }
    }
    clip.frames.push_back(frame_from_json(j, line));
    lines.push_back(line);
  }
  detail::finalize_loaded(clip, lines);
  return clip;
}

inline std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
  auto p = csv;
  p.replace_extension(".meta.json");
  return p;
}

inline SkeletonClip parse_csv(std::istream& in, const nlohmann::json& meta) {
  SkeletonClip clip;
  if (!meta.is_null()) detail::apply_header(meta, clip, 0);
  std::vector<std::size_t> lines;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line == 1 && text.rfind("t,", 0) == 0) continue;  // header row
    std::vector<double> cells;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        cells.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw ParseError("bad number '" + cell + "'" + detail::at_line(line));
      }
    }
    if (cells.size() != 1 + 3 * kJointCount) {
      if (cells.size() > 0 && cells.size() < 1 + 3 * kJointCount) {
        const std::size_t joint = (cells.size() - 1) / 3;
        throw SchemaError("missing joint " + std::string(kJointNames[joint]) + detail::at_line(line));
      }
      throw ParseError("expected " + std::to_string(1 + 3 * kJointCount) + " columns" +
                       detail::at_line(line));
    }
    SkeletonFrame f;
    f.t = cells[0];
    for (std::size_t k = 0; k < kJointCount; ++k) {
      f.joints[k] = {cells[1 + 3 * k], cells[2 + 3 * k], cells[3 + 3 * k]};
    }
    if (!f.finite() || f.t < 0.0) throw SchemaError("non-finite value" + detail::at_line(line));
    clip.frames.push_back(f);
    lines.push_back(line);
  }
  detail::finalize_loaded(clip, lines);
  return clip;
}

inline SkeletonClip load_clip(const std::filesystem::path& path, ClipFormat format) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  if (format == ClipFormat::Jsonl) return parse_jsonl(in);
  nlohmann::json meta;
  if (auto side = sidecar_path(path); std::filesystem::exists(side)) {
    std::ifstream ms(side);
    try {
      meta = nlohmann::json::parse(ms);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError("malformed sidecar " + side.string() + ": " + e.what());
    }
  }
  return parse_csv(in, meta);
}

inline SkeletonClip load_clip(const std::filesystem::path& path) {
  return load_clip(path, format_from_path(path));
}

inline void write_jsonl(std::ostream& out, const SkeletonClip& clip) {
  out << detail::header_json(clip).dump() << '\n';
  for (const auto& f : clip.frames) out << frame_to_json(f).dump() << '\n';
}

inline void save_clip(const std::filesystem::path& path, const SkeletonClip& clip,
                      ClipFormat format) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  if (format == ClipFormat::Jsonl) {
    write_jsonl(out, clip);
    return;
  }
  out << "t";
  for (auto key : kJointKeys) {
    out << ',' << key << "_x," << key << "_y," << key << "_z";
  }
  out << '\n';
  out.precision(17);
  for (const auto& f : clip.frames) {
    out << f.t;
    for (const auto& p : f.joints) out << ',' << p.x() << ',' << p.y() << ',' << p.z();
    out << '\n';
  }
  std::ofstream meta(sidecar_path(path));
  meta << detail::header_json(clip).dump() << '\n';
}

inline void save_clip(const std::filesystem::path& path, const SkeletonClip& clip) {
  save_clip(path, clip, format_from_path(path));
}

}  // namespace bodyemo
