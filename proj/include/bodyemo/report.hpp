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

#include <bodyemo/eval.hpp>

#include <json.hpp>

#include <cstdio>

namespace bodyemo {

/// Recognition rates (percent) reached by human observers watching the
/// recorded skeleton clips, per emotion, for the 6-class and 4-class
/// tasks. Reference values only; they are never computed here.
struct HumanReference {
  static std::optional<double> rate(EmotionLabel e, std::size_t classes) {
    if (classes == 6) {
      switch (e) {
        case EmotionLabel::Happiness: return 81.3;
        case EmotionLabel::Fear: return 48.5;
        case EmotionLabel::Disgust: return 37.2;
        case EmotionLabel::Sadness: return 86.7;
        case EmotionLabel::Anger: return 73.9;
        case EmotionLabel::Surprise: return 35.2;
      }
    }
    if (classes == 4) {
      switch (e) {
        case EmotionLabel::Happiness: return 87.5;
        case EmotionLabel::Fear: return 81.2;
        case EmotionLabel::Sadness: return 94.9;
        case EmotionLabel::Anger: return 82.0;
        default: return std::nullopt;
      }
    }
    return std::nullopt;
  }

  static std::optional<double> average(std::size_t classes) {
    if (classes == 6) return 61.9;
    if (classes == 4) return 85.2;
    return std::nullopt;
  }
};

enum class ReportStyle { PaperTable, Json, Csv };

inline std::optional<ReportStyle> parse_report_style(std::string_view s) {
  if (s == "paper-table") return ReportStyle::PaperTable;
  if (s == "json") return ReportStyle::Json;
  if (s == "csv") return ReportStyle::Csv;
  return std::nullopt;
}

inline nlohmann::json to_json(const Report& r) {
  nlohmann::json recall = nlohmann::json::object();
  nlohmann::json classes = nlohmann::json::array();
  nlohmann::json confusion = nlohmann::json::array();
  for (std::size_t c = 0; c < r.classes.size(); ++c) {
    const auto name = std::string(to_string(r.classes[c]));
    classes.push_back(name);
    recall[name] = r.recall[c];
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t p = 0; p < r.classes.size(); ++p) row.push_back(r.confusion(c, p));
    confusion.push_back(row);
  }
  nlohmann::json j = {{"protocol", std::string(to_string(r.protocol))},
                      {"classes", classes},
                      {"recall", recall},
                      {"accuracy", r.accuracy},
                      {"confusion", confusion},
                      {"runs", r.repeats},
                      {"run_accuracy", r.run_accuracy}};
  if (r.protocol == Protocol::Split) {
    j["seed"] = r.seed;
    j["ratio"] = r.ratio;
  }
  return j;
}

namespace detail {

inline std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * fraction);
  return buf;
}

inline std::string percent_value(double pct) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", pct);
  return buf;
}

inline std::string pad_right(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

inline std::string pad_left(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

}  // namespace detail

/// Renders one or two reports (split and/or LOSO, same class set) as a
/// per-class table with a closing "total" row. `human` adds the human
/// observer reference column.
inline std::string render_report(std::span<const Report> reports, ReportStyle style, bool human = false) {
  if (reports.empty()) return {};
  const ClassSet& classes = reports.front().classes;
  const auto find = [&](Protocol p) -> const Report* {
    for (const auto& r : reports) {
      if (r.protocol == p) return &r;
    }
    return nullptr;
  };
  const Report* split = find(Protocol::Split);
  const Report* loso = find(Protocol::Loso);

  if (style == ReportStyle::Json) {
    nlohmann::json j;
    j["reports"] = nlohmann::json::array();
    for (const auto& r : reports) j["reports"].push_back(to_json(r));
    if (human) {
      nlohmann::json h = nlohmann::json::object();
      for (auto e : classes) {
        if (auto v = HumanReference::rate(e, classes.size())) h[std::string(to_string(e))] = *v;
      }
      if (auto avg = HumanReference::average(classes.size())) h["average"] = *avg;
      j["human_reference"] = h;
    }
    return j.dump(2) + "\n";
  }

  struct Row {
    std::string name;
    std::vector<std::string> cells;
  };
  std::vector<std::string> header;
  if (split) header.push_back(style == ReportStyle::Csv ? "split" : "Split Data");
  if (loso) header.push_back(style == ReportStyle::Csv ? "loso" : "LOSO cv");
  if (human) header.push_back(style == ReportStyle::Csv ? "human" : "Human");

  std::vector<Row> rows;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    Row row{std::string(to_string(classes[c])), {}};
    const auto fmt = [&](double v) {
      if (style == ReportStyle::Csv) return nlohmann::json(v).dump();
      return detail::percent(v);
    };
    if (split) row.cells.push_back(fmt(split->recall[c]));
    if (loso) row.cells.push_back(fmt(loso->recall[c]));
    if (human) {
      const auto v = HumanReference::rate(classes[c], classes.size());
      row.cells.push_back(!v ? std::string(style == ReportStyle::Csv ? "" : "-")
                             : style == ReportStyle::Csv ? nlohmann::json(*v / 100.0).dump()
                                                         : detail::percent_value(*v));
    }
    rows.push_back(std::move(row));
  }
  Row total{"total", {}};
  const auto fmt_total = [&](double v) {
    return style == ReportStyle::Csv ? nlohmann::json(v).dump() : detail::percent(v);
  };
  if (split) total.cells.push_back(fmt_total(split->accuracy));
  if (loso) total.cells.push_back(fmt_total(loso->accuracy));
  if (human) {
    const auto v = HumanReference::average(classes.size());
    total.cells.push_back(!v ? std::string("")
                             : style == ReportStyle::Csv ? nlohmann::json(*v / 100.0).dump()
                                                         : detail::percent_value(*v));
  }

  std::string out;
  if (style == ReportStyle::Csv) {
    out += "class";
    for (const auto& h : header) out += "," + h;
    out += "\n";
    rows.push_back(std::move(total));
    for (const auto& row : rows) {
      out += row.name;
      for (const auto& c : row.cells) out += "," + c;
      out += "\n";
    }
    return out;
  }

  constexpr std::size_t name_w = 12, cell_w = 12;
  const auto rule = std::string(name_w + cell_w * header.size(), '-') + "\n";
  out += rule;
  out += detail::pad_right("", name_w);
  for (const auto& h : header) out += detail::pad_left(h, cell_w);
  out += "\n" + rule;
  for (const auto& row : rows) {
    out += detail::pad_right(row.name, name_w);
    for (const auto& c : row.cells) out += detail::pad_left(c, cell_w);
    out += "\n";
  }
  out += rule;
  out += detail::pad_right(total.name, name_w);
  for (const auto& c : total.cells) out += detail::pad_left(c, cell_w);
  out += "\n" + rule;
  return out;
}

}  // namespace bodyemo
