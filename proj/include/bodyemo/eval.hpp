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

// Evaluation protocols: repeated stratified random split and
// leave-one-subject-out. Binning and model are always fitted on the
// training side of a partition only.
//
// A Learner is any type with
//     Predictor fit(std::span<const Example>, const ClassSet&) const;
// where Predictor is callable as `EmotionLabel(const Example&)`.

#include <bodyemo/pipeline.hpp>
#include <bodyemo/seeding.hpp>

#include <map>
#include <random>

namespace bodyemo {

template <typename L>
concept Learner = requires(const L& learner, std::span<const Example> train, const ClassSet& cs,
                           const Example& e) {
  { learner.fit(train, cs)(e) } -> std::convertible_to<EmotionLabel>;
};

class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(std::size_t k) : k_(k), counts_(k * k, 0) {}

  std::size_t classes() const { return k_; }
  std::size_t operator()(std::size_t truth, std::size_t predicted) const {
    return counts_[truth * k_ + predicted];
  }
  void add(std::size_t truth, std::size_t predicted, std::size_t n = 1) {
    counts_[truth * k_ + predicted] += n;
  }
  void merge(const ConfusionMatrix& other) {
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  }
  std::size_t row_sum(std::size_t truth) const {
    std::size_t s = 0;
    for (std::size_t p = 0; p < k_; ++p) s += (*this)(truth, p);
    return s;
  }
  std::size_t trace() const {
    std::size_t s = 0;
    for (std::size_t c = 0; c < k_; ++c) s += (*this)(c, c);
    return s;
  }
  std::size_t total() const {
    std::size_t s = 0;
    for (auto c : counts_) s += c;
    return s;
  }
  double recall(std::size_t c) const {
    const auto n = row_sum(c);
    return n == 0 ? 0.0 : static_cast<double>((*this)(c, c)) / static_cast<double>(n);
  }
  double accuracy() const {
    const auto n = total();
    return n == 0 ? 0.0 : static_cast<double>(trace()) / static_cast<double>(n);
  }

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::size_t k_ = 0;
  std::vector<std::size_t> counts_;
};

enum class Protocol { Split, Loso };

inline std::string_view to_string(Protocol p) { return p == Protocol::Split ? "split" : "loso"; }

struct Report {
  Protocol protocol = Protocol::Split;
  ClassSet classes;
  std::vector<double> recall;  // class-set order
  double accuracy = 0.0;
  ConfusionMatrix confusion;   // summed over repeats / folds
  std::size_t repeats = 0;     // split repeats, or LOSO folds
  std::uint64_t seed = 0;
  double ratio = 0.0;
  std::vector<double> run_accuracy;  // per repeat / per fold
};

struct SplitOptions {
  double ratio = 0.7;
  std::size_t repeats = 50;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
};

namespace detail {

template <typename Pred>
ConfusionMatrix score(const Pred& predictor, std::span<const Example> test, const ClassSet& classes) {
  ConfusionMatrix cm(classes.size());
  for (const auto& e : test) {
    const auto truth = classes.index_of(e.label);
    const auto guess = classes.index_of(predictor(e));
    if (!truth) continue;
    // A predicted label outside the class set counts as a miss on row truth.
    cm.add(*truth, guess ? *guess : (*truth + 1) % classes.size());
  }
  return cm;
}

/// Clip ids per class, in first-appearance order.
inline std::vector<std::vector<std::size_t>> clips_by_class(std::span<const Example> examples,
                                                            const ClassSet& classes) {
  std::vector<std::vector<std::size_t>> by_class(classes.size());
  for (const auto& e : examples) {
    auto c = classes.index_of(e.label);
    if (!c) continue;
    auto& v = by_class[*c];
    if (std::find(v.begin(), v.end(), e.clip) == v.end()) v.push_back(e.clip);
  }
  return by_class;
}

}  // namespace detail

/// Repeated stratified random split by clip (a subject may appear on both
/// sides). Recall and accuracy are averaged over repeats.
template <Learner L>
Report split_eval(std::span<const Example> examples, const ClassSet& classes, const L& learner,
                  const SplitOptions& opt = {}) {
  if (!(opt.ratio > 0.0 && opt.ratio < 1.0)) throw InvalidArgument("split ratio must be in (0, 1)");
  if (opt.repeats == 0) throw InvalidArgument("need at least one repeat");
  const auto by_class = detail::clips_by_class(examples, classes);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (by_class[c].size() < 2) {
      throw EmptyClass("class " + std::string(to_string(classes[c])) +
                       " needs at least 2 clips for a train/test split");
    }
  }

  std::vector<ConfusionMatrix> runs(opt.repeats);
  parallel_for(opt.repeats, opt.jobs, [&](std::size_t r) {
    std::mt19937_64 rng(detail::derive_seed(opt.seed, r));
    std::vector<bool> in_train;
    std::size_t max_clip = 0;
    for (const auto& e : examples) max_clip = std::max(max_clip, e.clip);
    in_train.assign(max_clip + 1, false);
    for (const auto& ids : by_class) {
      auto shuffled = ids;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      const auto n = static_cast<double>(shuffled.size());
      const auto take = std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(opt.ratio * n)), 1,
                                                 shuffled.size() - 1);
      for (std::size_t k = 0; k < take; ++k) in_train[shuffled[k]] = true;
    }
    std::vector<Example> train, test;
    for (const auto& e : examples) {
      if (!classes.contains(e.label)) continue;
      (in_train[e.clip] ? train : test).push_back(e);
    }
    const auto predictor = learner.fit(train, classes);
    runs[r] = detail::score(predictor, test, classes);
  });

  Report rep;
  rep.protocol = Protocol::Split;
  rep.classes = classes;
  rep.repeats = opt.repeats;
  rep.seed = opt.seed;
  rep.ratio = opt.ratio;
  rep.confusion = ConfusionMatrix(classes.size());
  rep.recall.assign(classes.size(), 0.0);
  for (const auto& cm : runs) {
    rep.confusion.merge(cm);
    rep.run_accuracy.push_back(cm.accuracy());
    for (std::size_t c = 0; c < classes.size(); ++c) rep.recall[c] += cm.recall(c);
  }
  const auto reps = static_cast<double>(opt.repeats);
  for (auto& r : rep.recall) r /= reps;
  for (double a : rep.run_accuracy) rep.accuracy += a;
  rep.accuracy /= reps;
  return rep;
}

struct LosoOptions {
  std::size_t jobs = 1;
};

/// Called once per fold with (fold index, held-out subject, predictor).
struct NoFoldObserver {
  template <typename P>
  void operator()(std::size_t, const std::string&, const P&) const {}
};

/// One fold per subject (sorted by id); every subject is tested exactly
/// once by a predictor that never saw its data. Recall and accuracy come
/// from the confusion matrix summed over folds.
template <Learner L, typename Observer = NoFoldObserver>
Report loso_eval(std::span<const Example> examples, const ClassSet& classes, const L& learner,
                 const LosoOptions& opt = {}, Observer&& on_fold = {}) {
  std::vector<std::string> subjects;
  for (const auto& e : examples) {
    if (classes.contains(e.label)) subjects.push_back(e.subject);
  }
  std::sort(subjects.begin(), subjects.end());
  subjects.erase(std::unique(subjects.begin(), subjects.end()), subjects.end());
  if (subjects.size() < 2) throw SingleSubject("LOSO needs at least two subjects");

  std::vector<ConfusionMatrix> folds(subjects.size());
  std::mutex observer_mutex;
  parallel_for(subjects.size(), opt.jobs, [&](std::size_t f) {
    std::vector<Example> train, test;
    for (const auto& e : examples) {
      if (!classes.contains(e.label)) continue;
      (e.subject == subjects[f] ? test : train).push_back(e);
    }
    const auto predictor = learner.fit(train, classes);
    folds[f] = detail::score(predictor, test, classes);
    std::lock_guard lock(observer_mutex);
    on_fold(f, subjects[f], predictor);
  });

  Report rep;
  rep.protocol = Protocol::Loso;
  rep.classes = classes;
  rep.repeats = subjects.size();
  rep.confusion = ConfusionMatrix(classes.size());
  for (const auto& cm : folds) {
    rep.confusion.merge(cm);
    rep.run_accuracy.push_back(cm.accuracy());
  }
  for (std::size_t c = 0; c < classes.size(); ++c) rep.recall.push_back(rep.confusion.recall(c));
  rep.accuracy = rep.confusion.accuracy();
  return rep;
}

}  // namespace bodyemo
