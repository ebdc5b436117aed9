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

// State machines of the two games. Every transition outside a phase's
// graph throws IllegalTransition and leaves the state untouched.

#include <bodyemo/skeleton.hpp>

#include <json.hpp>

namespace bodyemo {

class IllegalTransition : public Error {
 public:
  explicit IllegalTransition(const std::string& what) : Error("IllegalTransition", what) {}
};

// ---------------------------------------------------------------------------
// Body Emotion Game: watch a clip, guess its emotion, then act it out.
//
//   watch --ready--> guess --guess--> act --match--> done
//                                      |  <--retry(again)-- awaiting retry
//                                      +--mismatch--> awaiting retry, or done
//                                                     after the last attempt
// ---------------------------------------------------------------------------

class BodyEmotionGame {
 public:
  enum class Phase { Watch, Guess, Act, Done };
  static constexpr int kMaxAttempts = 3;

  BodyEmotionGame(EmotionLabel target, std::string clip_id)
      : target_(target), clip_id_(std::move(clip_id)) {}

  void ready() {
    require(phase_ == Phase::Watch, "ready");
    phase_ = Phase::Guess;
  }

  /// Returns whether the guess was right.
  bool guess(EmotionLabel e) {
    require(phase_ == Phase::Guess, "guess");
    guessed_ = e;
    if (e == target_) guess_points_ = 1;
    phase_ = Phase::Act;
    attempt_ = 1;
    return e == target_;
  }

  /// Result of the player's current attempt. Predictions arriving while no
  /// attempt is open are ignored and reported as false.
  bool on_prediction(EmotionLabel recognized) {
    if (!listening()) return false;
    recognized_.push_back(recognized);
    if (recognized == target_) {
      act_points_ = 1;
      phase_ = Phase::Done;
    } else if (attempt_ >= kMaxAttempts) {
      phase_ = Phase::Done;
    } else {
      awaiting_retry_ = true;
    }
    return true;
  }

  void retry(bool again) {
    require(phase_ == Phase::Act && awaiting_retry_, "retry");
    awaiting_retry_ = false;
    if (again) {
      ++attempt_;
    } else {
      phase_ = Phase::Done;
    }
  }

  bool listening() const { return phase_ == Phase::Act && !awaiting_retry_; }
  Phase phase() const { return phase_; }
  int attempt() const { return attempt_; }
  bool awaiting_retry() const { return awaiting_retry_; }
  int points() const { return guess_points_ + act_points_; }
  int guess_points() const { return guess_points_; }
  int act_points() const { return act_points_; }
  EmotionLabel target() const { return target_; }
  const std::string& clip_id() const { return clip_id_; }

  static std::string_view to_string(Phase p) {
    switch (p) {
      case Phase::Watch: return "watch";
      case Phase::Guess: return "guess";
      case Phase::Act: return "act";
      case Phase::Done: return "done";
    }
    return "?";
  }

  /// The target is revealed once the guess is in.
  nlohmann::json to_json() const {
    nlohmann::json j = {{"mode", "body-emotion-game"},
                        {"phase", std::string(to_string(phase_))},
                        {"clip_id", clip_id_},
                        {"points", points()},
                        {"guess_points", guess_points_},
                        {"act_points", act_points_},
                        {"attempt", attempt_},
                        {"max_attempts", kMaxAttempts},
                        {"awaiting_retry", awaiting_retry_}};
    if (guessed_) {
      j["guess"] = std::string(bodyemo::to_string(*guessed_));
      j["target"] = std::string(bodyemo::to_string(target_));
    }
    nlohmann::json rec = nlohmann::json::array();
    for (auto e : recognized_) rec.push_back(std::string(bodyemo::to_string(e)));
    j["recognized"] = rec;
    return j;
  }

 private:
  void require(bool ok, const char* what) const {
    if (!ok) {
      throw IllegalTransition(std::string(what) + " not allowed in phase " +
                              std::string(to_string(phase_)) + (awaiting_retry_ ? " (awaiting retry)" : ""));
    }
  }

  EmotionLabel target_;
  std::string clip_id_;
  Phase phase_ = Phase::Watch;
  std::optional<EmotionLabel> guessed_;
  std::vector<EmotionLabel> recognized_;
  int attempt_ = 0;
  bool awaiting_retry_ = false;
  int guess_points_ = 0;
  int act_points_ = 0;
};

// ---------------------------------------------------------------------------
// Emotional charades. Player 1 expresses in odd rounds, player 2 in even
// rounds. Per round:
//
//   choose --choose(emotion)--> act --guess(emotion)--> judge --judge--> choose
//
// The computer's answer is the first gesture classified after the choice.
// ---------------------------------------------------------------------------

struct CharadesAward {
  int expresser = 0;
  int guesser = 0;
};

/// Points for (computer right, human guesser right).
inline CharadesAward charades_award(bool computer_correct, bool guesser_correct) {
  if (computer_correct && guesser_correct) return {2, 1};
  if (computer_correct) return {1, 0};
  if (guesser_correct) return {1, 2};
  return {0, 1};
}

class CharadesGame {
 public:
  enum class Phase { Choose, Act, Judge };

  void choose(EmotionLabel e) {
    require(phase_ == Phase::Choose, "choose");
    chosen_ = e;
    computer_guess_.reset();
    human_guess_.reset();
    phase_ = Phase::Act;
  }

  void guess(EmotionLabel e) {
    require(phase_ == Phase::Act, "guess");
    human_guess_ = e;
    phase_ = Phase::Judge;
  }

  /// Records the computer's answer for the round; later gestures are ignored.
  bool on_prediction(EmotionLabel recognized) {
    if (phase_ == Phase::Choose || computer_guess_) return false;
    computer_guess_ = recognized;
    return true;
  }

  CharadesAward judge(bool computer_correct, bool guesser_correct) {
    require(phase_ == Phase::Judge, "judge");
    if (computer_correct && !computer_guess_) {
      throw IllegalTransition("judge: the computer has not answered this round");
    }
    const auto award = charades_award(computer_correct, guesser_correct);
    scores_[expresser() - 1] += award.expresser;
    scores_[guesser() - 1] += award.guesser;
    if (computer_correct) ++computer_tally_;
    if (guesser_correct) ++human_tally_;
    nlohmann::json h = {{"round", round_},
                        {"expresser", expresser()},
                        {"emotion", std::string(to_string(*chosen_))},
                        {"human_guess", std::string(to_string(*human_guess_))},
                        {"computer_correct", computer_correct},
                        {"guesser_correct", guesser_correct},
                        {"award", {{"expresser", award.expresser}, {"guesser", award.guesser}}}};
    h["computer_guess"] = computer_guess_ ? nlohmann::json(std::string(to_string(*computer_guess_)))
                                          : nlohmann::json();
    history_.push_back(std::move(h));
    ++round_;
    chosen_.reset();
    computer_guess_.reset();
    human_guess_.reset();
    phase_ = Phase::Choose;
    return award;
  }

  Phase phase() const { return phase_; }
  int round() const { return round_; }
  int expresser() const { return round_ % 2 == 1 ? 1 : 2; }
  int guesser() const { return 3 - expresser(); }
  int score(int player) const { return scores_.at(static_cast<std::size_t>(player - 1)); }
  int human_tally() const { return human_tally_; }
  int computer_tally() const { return computer_tally_; }
  std::optional<EmotionLabel> computer_guess() const { return computer_guess_; }

  static std::string_view to_string(Phase p) {
    switch (p) {
      case Phase::Choose: return "choose";
      case Phase::Act: return "act";
      case Phase::Judge: return "judge";
    }
    return "?";
  }

  /// The chosen emotion stays hidden during the round. Both answers are
  /// shown once the guesser has answered, for the expresser to judge.
  nlohmann::json to_json() const {
    nlohmann::json j = {{"mode", "charades"},
                        {"phase", std::string(to_string(phase_))},
                        {"round", round_},
                        {"expresser", expresser()},
                        {"guesser", guesser()},
                        {"scores", {{"1", scores_[0]}, {"2", scores_[1]}}},
                        {"tally", {{"human", human_tally_}, {"computer", computer_tally_}}},
                        {"computer_answered", computer_guess_.has_value()},
                        {"history", history_}};
    if (phase_ == Phase::Judge) {
      j["human_guess"] = std::string(bodyemo::to_string(*human_guess_));
      j["computer_guess"] = computer_guess_
                                ? nlohmann::json(std::string(bodyemo::to_string(*computer_guess_)))
                                : nlohmann::json();
    }
    return j;
  }

 private:
  static std::string_view to_string(EmotionLabel e) { return bodyemo::to_string(e); }

  void require(bool ok, const char* what) const {
    if (!ok) {
      throw IllegalTransition(std::string(what) + " not allowed in phase " + std::string(to_string(phase_)));
    }
  }

  Phase phase_ = Phase::Choose;
  int round_ = 1;
  std::array<int, 2> scores_{};
  int human_tally_ = 0;
  int computer_tally_ = 0;
  std::optional<EmotionLabel> chosen_;
  std::optional<EmotionLabel> computer_guess_;
  std::optional<EmotionLabel> human_guess_;
  nlohmann::json history_ = nlohmann::json::array();
};

}  // namespace bodyemo
