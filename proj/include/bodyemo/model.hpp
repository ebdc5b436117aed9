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

// One-vs-one bank of linear SVMs decoded through the pairwise ECOC matrix,
// together with the binning it was trained on.

#include <bodyemo/ecoc.hpp>
#include <bodyemo/parallel.hpp>
#include <bodyemo/representation.hpp>
#include <bodyemo/segmentation.hpp>
#include <bodyemo/svm.hpp>

#include <json.hpp>

#include <filesystem>
#include <fstream>

namespace bodyemo {

struct TrainOptions {
  double C = 1.0;
  double tol = 1e-4;
  bool grid_c = false;  // pick C from {0.1, 1, 10} by inner 3-fold CV
  std::size_t jobs = 1;
};

inline constexpr std::array<double, 3> kCGrid = {0.1, 1.0, 10.0};

struct Machine {
  ClassPair pair;
  BinarySvm svm;
};

struct Prediction {
  EmotionLabel label{};
  std::size_t label_index = 0;
  std::vector<double> losses;   // one per class, class-set order
  std::vector<double> margins;  // one per machine
};

class OvoEcocModel {
 public:
  static constexpr int kVersion = 1;

  ClassSet class_set;
  BinningSpec binning;
  std::vector<Machine> machines;
  CodeMatrix code;
  nlohmann::json trained_on = nlohmann::json::object();
  std::optional<SegmenterParams> segmenter;

  std::size_t dimension() const {
    return machines.empty() ? 0 : static_cast<std::size_t>(machines.front().svm.w.size());
  }

  std::vector<double> margins(const FeatureVector& fv) const {
    if (fv.size() != dimension()) {
      throw DimensionMismatch("feature vector has length " + std::to_string(fv.size()) +
                              ", model expects " + std::to_string(dimension()));
    }
    const Eigen::Map<const Eigen::VectorXd> x(fv.values.data(), static_cast<Eigen::Index>(fv.size()));
    std::vector<double> f;
    f.reserve(machines.size());
    for (const auto& m : machines) f.push_back(m.svm.decision(x));
    return f;
  }

  Prediction predict(const FeatureVector& fv) const {
    Prediction p;
    p.margins = margins(fv);
    auto d = ecoc_decode(p.margins, code);
    p.label_index = d.label;
    p.label = class_set[d.label];
    p.losses = std::move(d.losses);
    return p;
  }

  Prediction predict(const FeatureSet& fs) const { return predict(assemble(fs, binning)); }
};

namespace detail {

inline std::vector<Machine> train_machines(const std::vector<std::vector<std::size_t>>& by_class,
                                           std::span<const FeatureVector> vectors,
                                           const std::vector<ClassPair>& pairs, double C,
                                           const TrainOptions& opt) {
  std::vector<Machine> machines(pairs.size());
  parallel_for(pairs.size(), opt.jobs, [&](std::size_t s) {
    const auto [a, b] = pairs[s];
    std::vector<std::size_t> rows = by_class[a];
    rows.insert(rows.end(), by_class[b].begin(), by_class[b].end());
    std::vector<int> y(by_class[a].size(), 1);
    y.resize(rows.size(), -1);
    const auto X = stack_rows(rows, [&](std::size_t r) -> const std::vector<double>& {
      return vectors[r].values;
    });
    SvmOptions so;
    so.C = C;
    so.tol = opt.tol;
    machines[s] = {pairs[s], train_binary(X, y, so)};
  });
  return machines;
}

inline std::size_t correct_predictions(const std::vector<Machine>& machines, const CodeMatrix& code,
                                       std::span<const FeatureVector> vectors,
                                       const std::vector<std::size_t>& rows,
                                       const std::vector<std::size_t>& truth) {
  std::size_t hits = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& v = vectors[rows[k]].values;
    const Eigen::Map<const Eigen::VectorXd> x(v.data(), static_cast<Eigen::Index>(v.size()));
    std::vector<double> f;
    for (const auto& m : machines) f.push_back(m.svm.decision(x));
    if (ecoc_decode(f, code).label == truth[k]) ++hits;
  }
  return hits;
}

/// Inner 3-fold CV over kCGrid; folds deal each class's examples round-robin.
inline double select_c(const std::vector<std::vector<std::size_t>>& by_class,
                       std::span<const FeatureVector> vectors, const std::vector<ClassPair>& pairs,
                       const CodeMatrix& code, const TrainOptions& opt) {
  double best_c = opt.C;
  std::size_t best_hits = 0;
  bool first = true;
  for (double C : kCGrid) {
    std::size_t hits = 0;
    for (std::size_t fold = 0; fold < 3; ++fold) {
      std::vector<std::vector<std::size_t>> train(by_class.size());
      std::vector<std::size_t> test_rows, test_truth;
      bool usable = true;
      for (std::size_t c = 0; c < by_class.size(); ++c) {
        for (std::size_t k = 0; k < by_class[c].size(); ++k) {
          if (k % 3 == fold) {
            test_rows.push_back(by_class[c][k]);
            test_truth.push_back(c);
          } else {
            train[c].push_back(by_class[c][k]);
          }
        }
        if (train[c].empty()) usable = false;
      }
      if (!usable) continue;
      const auto machines = train_machines(train, vectors, pairs, C, opt);
      hits += correct_predictions(machines, code, vectors, test_rows, test_truth);
    }
    if (first || hits > best_hits) {
      best_hits = hits;
      best_c = C;
      first = false;
    }
  }
  return best_c;
}

}  // namespace detail

/// Trains all K(K-1)/2 machines; machine (i, j) sees class i as +1 and
/// class j as -1.
inline OvoEcocModel train_model(std::span<const FeatureVector> vectors,
                                std::span<const EmotionLabel> labels, const ClassSet& class_set,
                                const BinningSpec& binning, const TrainOptions& opt = {}) {
  if (vectors.size() != labels.size()) throw DimensionMismatch("vector and label counts differ");
  if (class_set.size() < 2) throw InvalidArgument("class set needs at least two classes");
  std::vector<std::vector<std::size_t>> by_class(class_set.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto c = class_set.index_of(labels[i]);
    if (!c) {
      throw InvalidArgument("label " + std::string(to_string(labels[i])) + " is not in the class set");
    }
    by_class[*c].push_back(i);
  }
  for (std::size_t c = 0; c < class_set.size(); ++c) {
    if (by_class[c].size() < 2) {
      throw InsufficientClassData("class " + std::string(to_string(class_set[c])) + " has " +
                                  std::to_string(by_class[c].size()) +
                                  " training examples, needs at least 2");
    }
  }

  OvoEcocModel model;
  model.class_set = class_set;
  model.binning = binning;
  model.code = CodeMatrix::one_vs_one(class_set.size());
  const auto pairs = one_vs_one_pairs(class_set.size());
  const double C = opt.grid_c ? detail::select_c(by_class, vectors, pairs, model.code, opt) : opt.C;
  model.machines = detail::train_machines(by_class, vectors, pairs, C, opt);

  Fnv1a hash;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (double v : vectors[i].values) hash.update(v);
    hash.update(to_string(labels[i]));
  }
  model.trained_on = {{"examples", vectors.size()},
                      {"C", C},
                      {"tol", opt.tol},
                      {"grid_c", opt.grid_c},
                      {"vectors_hash", hash.hex()}};
  return model;
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const SegmenterParams& p) {
  return {{"tau_on", p.tau_on}, {"tau_off", p.tau_off}, {"hold", p.hold},
          {"min_len", p.min_len}, {"pad", p.pad}};
}

inline SegmenterParams segmenter_from_json(const nlohmann::json& j) {
  SegmenterParams p;
  p.tau_on = j.at("tau_on").get<double>();
  p.tau_off = j.at("tau_off").get<double>();
  p.hold = j.at("hold").get<int>();
  p.min_len = j.at("min_len").get<int>();
  p.pad = j.at("pad").get<int>();
  p.validate();
  return p;
}

inline nlohmann::json to_json(const BinningSpec& spec) {
  nlohmann::json features = nlohmann::json::array();
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    features.push_back({{"name", std::string(to_string(feature_at(f)))},
                        {"lo", spec.ranges[f].lo},
                        {"hi", spec.ranges[f].hi}});
  }
  return {{"bins", spec.bins},
          {"policy", spec.policy},
          {"dataset_hash", spec.dataset_hash},
          {"features", features}};
}

inline BinningSpec binning_from_json(const nlohmann::json& j) {
  BinningSpec spec;
  spec.bins = j.at("bins").get<std::size_t>();
  if (spec.bins != kBins) throw ParseError("binning must use " + std::to_string(kBins) + " bins");
  spec.policy = j.value("policy", spec.policy);
  spec.dataset_hash = j.value("dataset_hash", "");
  const auto& features = j.at("features");
  if (!features.is_array() || features.size() != kFeatureCount) {
    throw ParseError("binning must list " + std::to_string(kFeatureCount) + " features");
  }
  for (const auto& f : features) {
    auto id = parse_feature(f.at("name").get<std::string>());
    if (!id) throw UnknownFeature("unknown feature " + f.at("name").get<std::string>());
    BinRange r{f.at("lo").get<double>(), f.at("hi").get<double>()};
    if (!(r.lo < r.hi)) throw ParseError("binning range must satisfy lo < hi");
    spec.ranges[index(*id)] = r;
  }
  return spec;
}

inline nlohmann::json to_json(const OvoEcocModel& model) {
  nlohmann::json classes = nlohmann::json::array();
  for (auto e : model.class_set) classes.push_back(std::string(to_string(e)));
  nlohmann::json machines = nlohmann::json::array();
  for (const auto& m : model.machines) {
    machines.push_back({{"pair", {m.pair.first, m.pair.second}},
                        {"w", std::vector<double>(m.svm.w.data(), m.svm.w.data() + m.svm.w.size())},
                        {"b", m.svm.b},
                        {"C", m.svm.C},
                        {"iterations", m.svm.iterations},
                        {"objective", m.svm.objective},
                        {"kkt_violation", m.svm.kkt_violation}});
  }
  nlohmann::json j = {{"version", OvoEcocModel::kVersion},
                      {"class_set", classes},
                      {"binning", to_json(model.binning)},
                      {"machines", machines},
                      {"trained_on", model.trained_on}};
  if (model.segmenter) j["segmenter"] = to_json(*model.segmenter);
  return j;
}

inline OvoEcocModel model_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object() || !j.contains("version")) throw ParseError("model has no version tag");
    const int version = j.at("version").get<int>();
    if (version != OvoEcocModel::kVersion) {
      throw VersionMismatch("model version " + std::to_string(version) + " is not supported (expected " +
                            std::to_string(OvoEcocModel::kVersion) + ")");
    }
    OvoEcocModel model;
    std::vector<EmotionLabel> labels;
    for (const auto& c : j.at("class_set")) {
      auto e = parse_emotion(c.get<std::string>());
      if (!e) throw ParseError("unknown class " + c.get<std::string>());
      labels.push_back(*e);
    }
    model.class_set = ClassSet(labels);
    if (model.class_set.size() != labels.size() || model.class_set.size() < 2) {
      throw ParseError("class_set must list distinct classes");
    }
    model.binning = binning_from_json(j.at("binning"));
    model.code = CodeMatrix::one_vs_one(model.class_set.size());
    const auto pairs = one_vs_one_pairs(model.class_set.size());
    const auto& machines = j.at("machines");
    if (machines.size() != pairs.size()) throw ParseError("wrong number of machines");
    for (std::size_t s = 0; s < pairs.size(); ++s) {
      const auto& m = machines[s];
      ClassPair pair{m.at("pair").at(0).get<std::size_t>(), m.at("pair").at(1).get<std::size_t>()};
      if (!(pair == pairs[s])) throw ParseError("machines are not in pairwise order");
      Machine machine{pair, {}};
      const auto w = m.at("w").get<std::vector<double>>();
      machine.svm.w = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
      machine.svm.b = m.at("b").get<double>();
      machine.svm.C = m.value("C", 1.0);
      machine.svm.iterations = m.value("iterations", std::size_t{0});
      machine.svm.objective = m.value("objective", 0.0);
      machine.svm.kkt_violation = m.value("kkt_violation", 0.0);
      machine.svm.converged = true;
      if (!machine.svm.w.allFinite() || !std::isfinite(machine.svm.b)) {
        throw ParseError("non-finite machine weights");
      }
      if (s > 0 && machine.svm.w.size() != model.machines.front().svm.w.size()) {
        throw ParseError("machines have different dimensions");
      }
      model.machines.push_back(std::move(machine));
    }
    model.trained_on = j.value("trained_on", nlohmann::json::object());
    if (j.contains("segmenter")) model.segmenter = segmenter_from_json(j.at("segmenter"));
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed model: ") + e.what());
  }
}

inline std::string serialize(const OvoEcocModel& model) { return to_json(model).dump(); }

inline void save_model(const std::filesystem::path& path, const OvoEcocModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  out << serialize(model) << '\n';
}

inline OvoEcocModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed model file: ") + e.what());
  }
  return model_from_json(j);
}

}  // namespace bodyemo
