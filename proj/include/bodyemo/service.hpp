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

// Transport-independent HTTP/JSON service: streaming classification
// sessions plus the two games. `Service::handle` maps (method, path, body)
// to (status, JSON body); tools/ binds it to a socket.
//
// Routes
//   GET    /health
//   GET    /clips                       ids of the playback library
//   GET    /clips/{id}                  frames of one clip (no label)
//   POST   /sessions {mode}             201 {session_id, ...}
//   DELETE /sessions/{id}
//   POST   /sessions/{id}/frames        [frame...] or {frames, flush}
//   GET    /sessions/{id}/result
//   GET    /game/{id}
//   POST   /game/{id}/ready             body emotion game: watch -> guess
//   POST   /game/{id}/guess {emotion}
//   POST   /game/{id}/retry {again}     body emotion game
//   POST   /game/{id}/choose {emotion}  charades
//   POST   /game/{id}/judge {computer_correct, p2_correct}

#include <bodyemo/games.hpp>
#include <bodyemo/pipeline.hpp>
#include <bodyemo/seeding.hpp>
#include <bodyemo/stream.hpp>

#include <map>
#include <mutex>
#include <random>
#include <shared_mutex>
#include <variant>

namespace bodyemo {

struct HttpResponse {
  int status = 200;
  std::string body;
};

enum class SessionMode { Stream, BodyEmotionGame, Charades };

inline std::string_view to_string(SessionMode m) {
  switch (m) {
    case SessionMode::Stream: return "stream";
    case SessionMode::BodyEmotionGame: return "body-emotion-game";
    case SessionMode::Charades: return "charades";
  }
  return "?";
}

inline std::optional<SessionMode> parse_mode(std::string_view s) {
  for (auto m : {SessionMode::Stream, SessionMode::BodyEmotionGame, SessionMode::Charades}) {
    if (s == to_string(m)) return m;
  }
  return std::nullopt;
}

struct LibraryClip {
  std::string id;
  SkeletonClip clip;
};

struct ServiceOptions {
  PreprocessOptions preprocess;
  FeatureWindows windows;
  std::optional<SegmenterParams> segmenter;  // overrides the model's
  std::uint64_t seed = 0;                    // game clip draws
};

class Service {
 public:
  Service(std::shared_ptr<const OvoEcocModel> model, std::vector<LibraryClip> library,
          ServiceOptions opt = {})
      : model_(std::move(model)), library_(std::move(library)), opt_(std::move(opt)) {
    if (!model_) throw InvalidArgument("service needs a model");
    params_ = opt_.segmenter.value_or(model_->segmenter.value_or(SegmenterParams{}));
    params_.validate();
    for (std::size_t i = 0; i < library_.size(); ++i) {
      const auto& c = library_[i].clip;
      if (c.label && model_->class_set.contains(*c.label)) playable_.push_back(i);
    }
  }

  /// Thread-safe. Requests on one session are serialized; sessions run in
  /// parallel.
  HttpResponse handle(std::string_view method, std::string_view path, std::string_view body) const {
    try {
      return route(method, path, body);
    } catch (const HttpError& e) {
      return error(e.status, e.kind, e.what());
    } catch (const IllegalTransition& e) {
      return error(409, e.kind(), e.what());
    } catch (const Error& e) {
      return error(400, e.kind(), e.what());
    } catch (const nlohmann::json::exception& e) {
      return error(400, "ParseError", e.what());
    } catch (const std::exception& e) {
      return error(500, "InternalError", e.what());
    }
  }

  const SegmenterParams& segmenter() const { return params_; }
  std::size_t session_count() const {
    std::shared_lock lock(sessions_mutex_);
    return sessions_.size();
  }

 private:
  struct HttpError : std::runtime_error {
    HttpError(int s, std::string k, const std::string& what)
        : std::runtime_error(what), status(s), kind(std::move(k)) {}
    int status;
    std::string kind;
  };

  struct Session {
    Session(std::string id_, SessionMode m, StreamClassifier s) : id(std::move(id_)), mode(m), stream(std::move(s)) {}
    std::string id;
    SessionMode mode;
    StreamClassifier stream;
    nlohmann::json predictions = nlohmann::json::array();
    std::variant<std::monostate, BodyEmotionGame, CharadesGame> game;
    std::mutex mutex;
  };

  static HttpResponse error(int status, const std::string& kind, const std::string& message) {
    return {status, nlohmann::json{{"error", kind}, {"message", message}}.dump()};
  }
  static HttpResponse ok(const nlohmann::json& j, int status = 200) { return {status, j.dump()}; }

  static std::vector<std::string_view> split_path(std::string_view path) {
    if (auto q = path.find('?'); q != std::string_view::npos) path = path.substr(0, q);
    std::vector<std::string_view> parts;
    std::size_t i = 0;
    while (i < path.size()) {
      while (i < path.size() && path[i] == '/') ++i;
      const std::size_t j = std::min(path.find('/', i), path.size());
      if (j > i) parts.push_back(path.substr(i, j - i));
      i = j;
    }
    return parts;
  }

  static nlohmann::json parse_body(std::string_view body) {
    if (body.find_first_not_of(" \t\r\n") == std::string_view::npos) return nlohmann::json::object();
    try {
      return nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      throw HttpError(400, "ParseError", std::string("malformed JSON body: ") + e.what());
    }
  }

  static EmotionLabel emotion_field(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("emotion") || !j["emotion"].is_string()) {
      throw HttpError(400, "SchemaError", "body needs a string field 'emotion'");
    }
    auto e = parse_emotion(j["emotion"].get<std::string>());
    if (!e) throw HttpError(400, "SchemaError", "unknown emotion " + j["emotion"].get<std::string>());
    return *e;
  }

  static bool bool_field(const nlohmann::json& j, const char* name, std::optional<bool> fallback = {}) {
    if (j.is_object() && j.contains(name)) {
      if (!j[name].is_boolean()) throw HttpError(400, "SchemaError", std::string(name) + " must be a boolean");
      return j[name].get<bool>();
    }
    if (fallback) return *fallback;
    throw HttpError(400, "SchemaError", std::string("body needs a boolean field '") + name + "'");
  }

  static void require_method(std::string_view have, std::string_view want) {
    if (have != want) throw HttpError(405, "MethodNotAllowed", "use " + std::string(want));
  }

  HttpResponse route(std::string_view method, std::string_view path, std::string_view body) const {
    const auto p = split_path(path);
    if (p.size() == 1 && p[0] == "health") {
      require_method(method, "GET");
      nlohmann::json classes = nlohmann::json::array();
      for (auto e : model_->class_set) classes.push_back(std::string(to_string(e)));
      return ok({{"status", "ok"}, {"classes", classes}, {"clips", library_.size()}});
    }
    if (!p.empty() && p[0] == "clips") {
      require_method(method, "GET");
      if (p.size() == 1) {
        nlohmann::json ids = nlohmann::json::array();
        for (const auto& c : library_) ids.push_back(c.id);
        return ok({{"clips", ids}});
      }
      if (p.size() == 2) return ok(clip_json(find_clip(p[1])));
    }
    if (!p.empty() && p[0] == "sessions") {
      if (p.size() == 1) {
        require_method(method, "POST");
        return create_session(parse_body(body));
      }
      auto s = find_session(p[1]);
      if (p.size() == 2) {
        require_method(method, "DELETE");
        std::unique_lock lock(sessions_mutex_);
        sessions_.erase(std::string(p[1]));
        return ok({{"deleted", std::string(p[1])}});
      }
      if (p.size() == 3 && p[2] == "frames") {
        require_method(method, "POST");
        return post_frames(*s, body);
      }
      if (p.size() == 3 && p[2] == "result") {
        require_method(method, "GET");
        std::lock_guard lock(s->mutex);
        return ok(result_json(*s));
      }
    }
    if (!p.empty() && p[0] == "game" && p.size() >= 2) {
      auto s = find_session(p[1]);
      if (p.size() == 2) {
        require_method(method, "GET");
        std::lock_guard lock(s->mutex);
        return ok(game_json(*s));
      }
      if (p.size() == 3) {
        require_method(method, "POST");
        return game_action(*s, p[2], parse_body(body));
      }
    }
    throw HttpError(404, "NotFound", "no route for " + std::string(path));
  }

  const LibraryClip& find_clip(std::string_view id) const {
    for (const auto& c : library_) {
      if (c.id == id) return c;
    }
    throw HttpError(404, "NotFound", "unknown clip " + std::string(id));
  }

  static nlohmann::json clip_json(const LibraryClip& c) {
    nlohmann::json frames = nlohmann::json::array();
    for (const auto& f : c.clip.frames) frames.push_back(frame_to_json(f));
    return {{"id", c.id}, {"rate", c.clip.nominal_rate}, {"frames", frames}};
  }

  std::shared_ptr<Session> find_session(std::string_view id) const {
    std::shared_lock lock(sessions_mutex_);
    auto it = sessions_.find(std::string(id));
    if (it == sessions_.end()) throw HttpError(404, "NotFound", "unknown session " + std::string(id));
    return it->second;
  }

  HttpResponse create_session(const nlohmann::json& body) const {
    if (!body.is_object() || !body.contains("mode") || !body["mode"].is_string()) {
      throw HttpError(400, "SchemaError", "body needs a string field 'mode'");
    }
    const auto mode = parse_mode(body["mode"].get<std::string>());
    if (!mode) throw HttpError(400, "UnknownMode", "unknown mode " + body["mode"].get<std::string>());

    std::unique_lock lock(sessions_mutex_);
    const std::uint64_t n = ++created_;
    auto s = std::make_shared<Session>("s" + std::to_string(n), *mode,
                                       StreamClassifier(model_, params_, opt_.preprocess, opt_.windows));
    if (*mode == SessionMode::BodyEmotionGame) {
      if (playable_.empty()) throw HttpError(409, "NoClips", "no labeled clips available for the game");
      std::mt19937_64 rng(detail::derive_seed(opt_.seed, n));
      std::uniform_int_distribution<std::size_t> pick(0, playable_.size() - 1);
      const auto& c = library_[playable_[pick(rng)]];
      s->game = BodyEmotionGame(*c.clip.label, c.id);
    } else if (*mode == SessionMode::Charades) {
      s->game = CharadesGame{};
    }
    sessions_.emplace(s->id, s);
    nlohmann::json j = {{"session_id", s->id}, {"mode", std::string(to_string(*mode))}};
    if (!std::holds_alternative<std::monostate>(s->game)) j["game"] = game_state(*s);
    return ok(j, 201);
  }

  HttpResponse post_frames(Session& s, std::string_view raw_body) const {
    const auto body = parse_body(raw_body);
    const nlohmann::json* frames = &body;
    bool flush = false;
    if (body.is_object()) {
      if (!body.contains("frames") && !body.contains("flush")) {
        throw HttpError(400, "SchemaError", "expected a list of frames or {frames, flush}");
      }
      static const nlohmann::json empty = nlohmann::json::array();
      frames = body.contains("frames") ? &body["frames"] : &empty;
      flush = bool_field(body, "flush", false);
    }
    if (!frames->is_array()) throw HttpError(400, "SchemaError", "frames must be a list");

    std::vector<SkeletonFrame> batch;
    batch.reserve(frames->size());
    for (std::size_t i = 0; i < frames->size(); ++i) {
      auto f = frame_from_json((*frames)[i], i + 1);
      if (!(f.shoulder_width() > 0.0)) throw DegenerateFrame("zero shoulder width in frame " + std::to_string(i + 1));
      batch.push_back(f);
    }

    std::lock_guard lock(s.mutex);
    if (s.stream.flushed() && (!batch.empty() || flush)) {
      throw HttpError(409, "StreamClosed", "session stream already flushed");
    }
    // Validate the whole batch before touching state.
    std::optional<double> last = s.stream.last_time();
    for (std::size_t i = 0; i < batch.size(); ++i) {
      if (last && !(batch[i].t > *last)) {
        throw HttpError(409, "NonMonotone", "frame " + std::to_string(i + 1) + " at t=" +
                                                 std::to_string(batch[i].t) + " is not after t=" +
                                                 std::to_string(*last));
      }
      last = batch[i].t;
    }
    std::vector<StreamResult> results;
    for (const auto& f : batch) {
      for (auto& r : s.stream.push(f)) results.push_back(std::move(r));
    }
    if (flush) {
      for (auto& r : s.stream.flush()) results.push_back(std::move(r));
    }
    nlohmann::json fresh = nlohmann::json::array();
    for (const auto& r : results) {
      auto j = prediction_json(r);
      if (r.prediction && !std::holds_alternative<std::monostate>(s.game)) {
        j["game_event"] = feed_game(s, r.prediction->label);
      }
      s.predictions.push_back(j);
      fresh.push_back(std::move(j));
    }
    nlohmann::json out = {{"accepted", batch.size()},
                          {"segments_closed", results.size()},
                          {"predictions", fresh},
                          {"pending", s.stream.gesture_open()}};
    if (!std::holds_alternative<std::monostate>(s.game)) out["game"] = game_state(s);
    return ok(out);
  }

  static bool feed_game(Session& s, EmotionLabel label) {
    if (auto* g = std::get_if<BodyEmotionGame>(&s.game)) return g->on_prediction(label);
    if (auto* g = std::get_if<CharadesGame>(&s.game)) return g->on_prediction(label);
    return false;
  }

  nlohmann::json prediction_json(const StreamResult& r) const {
    nlohmann::json j = {{"segment",
                         {{"start_frame", r.segment.start_frame},
                          {"end_frame", r.segment.end_frame},
                          {"t_start", r.t_start},
                          {"t_end", r.t_end},
                          {"peak_energy", r.segment.peak_energy}}},
                        {"latency_ms", r.latency_ms}};
    if (r.prediction) {
      j["label"] = std::string(to_string(r.prediction->label));
      nlohmann::json losses = nlohmann::json::object();
      for (std::size_t c = 0; c < model_->class_set.size(); ++c) {
        losses[std::string(to_string(model_->class_set[c]))] = r.prediction->losses[c];
      }
      j["losses"] = losses;
    } else {
      j["label"] = nullptr;
    }
    return j;
  }

  static nlohmann::json result_json(const Session& s) {
    // latency is a measurement, so it stays out of the idempotent view
    nlohmann::json preds = nlohmann::json::array();
    for (const auto& p : s.predictions) {
      auto q = p;
      q.erase("latency_ms");
      preds.push_back(std::move(q));
    }
    return {{"session_id", s.id},
            {"mode", std::string(to_string(s.mode))},
            {"predictions", preds},
            {"pending", s.stream.gesture_open()},
            {"frames", s.stream.frames_received()}};
  }

  static nlohmann::json game_state(const Session& s) {
    if (const auto* g = std::get_if<BodyEmotionGame>(&s.game)) return g->to_json();
    if (const auto* g = std::get_if<CharadesGame>(&s.game)) return g->to_json();
    return nullptr;
  }

  static nlohmann::json game_json(const Session& s) {
    if (std::holds_alternative<std::monostate>(s.game)) {
      throw HttpError(409, "NotAGame", "session " + s.id + " is a stream session");
    }
    auto j = game_state(s);
    j["session_id"] = s.id;
    return j;
  }

  HttpResponse game_action(Session& s, std::string_view action, const nlohmann::json& body) const {
    std::lock_guard lock(s.mutex);
    if (auto* g = std::get_if<BodyEmotionGame>(&s.game)) {
      nlohmann::json extra = nlohmann::json::object();
      if (action == "ready") {
        g->ready();
      } else if (action == "guess") {
        extra["correct"] = g->guess(emotion_field(body));
      } else if (action == "retry") {
        g->retry(bool_field(body, "again", true));
      } else if (action == "choose" || action == "judge") {
        throw IllegalTransition(std::string(action) + " is a charades transition");
      } else {
        throw HttpError(404, "NotFound", "unknown game action " + std::string(action));
      }
      auto j = game_json(s);
      j.update(extra);
      return ok(j);
    }
    if (auto* g = std::get_if<CharadesGame>(&s.game)) {
      nlohmann::json extra = nlohmann::json::object();
      if (action == "choose") {
        g->choose(emotion_field(body));
      } else if (action == "guess") {
        g->guess(emotion_field(body));
      } else if (action == "judge") {
        const auto award = g->judge(bool_field(body, "computer_correct"), bool_field(body, "p2_correct"));
        extra["award"] = {{"expresser", award.expresser}, {"guesser", award.guesser}};
      } else if (action == "ready" || action == "retry") {
        throw IllegalTransition(std::string(action) + " is a body emotion game transition");
      } else {
        throw HttpError(404, "NotFound", "unknown game action " + std::string(action));
      }
      auto j = game_json(s);
      j.update(extra);
      return ok(j);
    }
    throw HttpError(409, "NotAGame", "session " + s.id + " is a stream session");
  }

  std::shared_ptr<const OvoEcocModel> model_;
  std::vector<LibraryClip> library_;
  std::vector<std::size_t> playable_;
  ServiceOptions opt_;
  SegmenterParams params_;

  mutable std::shared_mutex sessions_mutex_;
  mutable std::map<std::string, std::shared_ptr<Session>> sessions_;
  mutable std::uint64_t created_ = 0;
};

}  // namespace bodyemo
