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

#include "cli_app.hpp"
#include "fixtures.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <sstream>

using namespace bodyemo;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "bodyemo");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = tools::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

/// Small corpus written through the CLI, shared by the later cases.
const fs::path& cli_corpus() {
  static const fs::path dir = [] {
    auto d = fx::temp_dir("cli_corpus");
    const auto r = run_cli({"synth", "--subjects", "3", "--per-class", "2", "--out", d.string(), "--seed", "5"});
    REQUIRE(r.code == 0);
    return d;
  }();
  return dir;
}

}  // namespace

TEST_CASE("cli: synth writes the requested clips and a manifest", "[cli]") {
  const auto dir = fx::temp_dir("cli_synth");
  const auto r = run_cli({"synth", "--subjects", "12", "--per-class", "5", "--out", dir.string(), "--seed", "7"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["clips"] == 360);
  CHECK(j["subjects"] == 12);
  CHECK(j["seed"] == 7);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir)) files += e.path().extension() == ".jsonl";
  CHECK(files == 360);
  const auto manifest = json::parse(read_file(dir / "manifest.json"));
  REQUIRE(manifest.size() == 360);
  std::map<std::string, int> per_label;
  for (const auto& m : manifest) {
    ++per_label[m["label"].get<std::string>()];
    CHECK(fs::exists(dir / m["path"].get<std::string>()));
  }
  CHECK(per_label.size() == 6);
  for (const auto& [label, n] : per_label) CHECK(n == 60);
  CHECK(r.err.empty());
}

TEST_CASE("cli: synth is deterministic in the seed", "[cli]") {
  const auto a = fx::temp_dir("cli_seed_a"), b = fx::temp_dir("cli_seed_b"), c = fx::temp_dir("cli_seed_c");
  REQUIRE(run_cli({"--seed", "3", "synth", "--subjects", "1", "--per-class", "1", "--out", a.string()}).code == 0);
  REQUIRE(run_cli({"synth", "--subjects", "1", "--per-class", "1", "--out", b.string(), "--seed", "3"}).code == 0);
  REQUIRE(run_cli({"synth", "--subjects", "1", "--per-class", "1", "--out", c.string(), "--seed", "4"}).code == 0);
  const auto name = json::parse(read_file(a / "manifest.json"))[0]["path"].get<std::string>();
  CHECK(read_file(a / name) == read_file(b / name));
  CHECK(read_file(a / name) != read_file(c / name));
}

TEST_CASE("cli: train then predict recovers training labels on a separable fixture", "[cli]") {
  GeneratorSpec spec;
  spec.subjects = 2;
  spec.clips_per_class = 2;
  spec.style_strength = 0.0;
  spec.idiom_strength = 0.0;
  spec.clip_variation = 0.3;
  const auto dir = fx::temp_dir("cli_separable");
  save_dataset(dir / "data", synth_dataset(spec, 21));
  const auto model = (dir / "model.json").string();
  const auto t = run_cli({"train", "--data", (dir / "data").string(), "--out", model});
  REQUIRE(t.code == 0);
  const auto tj = json::parse(t.out);
  CHECK(tj["classes"].size() == 6);
  CHECK(tj["examples"].get<std::size_t>() >= 24);
  CHECK(fs::exists(model));

  const auto manifest = json::parse(read_file(dir / "data" / "manifest.json"));
  for (const auto& m : manifest) {
    const auto p = run_cli({"predict", "--model", model, "--clip", (dir / "data" / m["path"].get<std::string>()).string()});
    REQUIRE(p.code == 0);
    const auto pj = json::parse(p.out);
    INFO(m["path"]);
    CHECK(pj["label"] == m["label"]);
    CHECK(pj["losses"].size() == 6);
    CHECK(pj["margins"].size() == 15);
    CHECK(!pj["segments"].empty());
  }
  const auto whole = run_cli({"predict", "--model", model, "--no-segment", "--clip",
                              (dir / "data" / manifest[0]["path"].get<std::string>()).string()});
  REQUIRE(whole.code == 0);
  CHECK(json::parse(whole.out)["segments"].empty());
}

TEST_CASE("cli: training without one class exits 2 and names it", "[cli]") {
  const auto dir = fx::temp_dir("cli_missing");
  GeneratorSpec spec;
  spec.class_set = ClassSet({EmotionLabel::Anger, EmotionLabel::Disgust, EmotionLabel::Fear,
                             EmotionLabel::Happiness, EmotionLabel::Surprise});
  spec.subjects = 2;
  spec.clips_per_class = 1;
  save_dataset(dir, synth_dataset(spec, 1));
  const auto r = run_cli({"train", "--data", dir.string(), "--out", (dir / "m.json").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("sadness") != std::string::npos);
  CHECK(r.out.empty());
  CHECK(!fs::exists(dir / "m.json"));
}

TEST_CASE("cli: usage errors exit 1", "[cli]") {
  const auto& data = cli_corpus();
  const std::vector<std::vector<std::string>> bad{
      {},
      {"dance"},
      {"synth"},
      {"synth", "--out", "x", "--bogus"},
      {"synth", "--out", "x", "--classes", "5"},
      {"synth", "--out", "x", "--subjects", "0"},
      {"train", "--data", "/nonexistent/path", "--out", "m.json"},
      {"evaluate", "--data", data.string(), "--style", "latex"},
      {"evaluate", "--data", data.string(), "--protocol", "kfold"},
      {"--rate", "-30", "synth", "--out", "x"},
      {"predict", "--model", "/nonexistent.json", "--clip", "c.jsonl"},
  };
  for (const auto& args : bad) {
    const auto r = run_cli(args);
    std::string joined;
    for (const auto& a : args) joined += a + " ";
    INFO(joined);
    CHECK(r.code == 1);
    CHECK(r.out.empty());
    CHECK(!r.err.empty());
  }
  const auto help = run_cli({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("synth") != std::string::npos);
}

TEST_CASE("cli: data errors exit 2", "[cli]") {
  const auto dir = fx::temp_dir("cli_data_errors");
  fx::write_text(dir / "broken.jsonl", "{\"subject\":\"x\",\"label\":\"anger\",\"source\":\"synthetic\",\"rate\":30}\n{\"t\":0}\n");
  fx::write_text(dir / "notjson.json", "[{\"path\": 3}]");
  auto r = run_cli({"extract", "--clip", (dir / "broken.jsonl").string()});
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  r = run_cli({"train", "--data", (dir / "notjson.json").string(), "--out", (dir / "m.json").string()});
  CHECK(r.code == 2);
  fx::write_text(dir / "model.json", "{\"version\": 1}");
  r = run_cli({"predict", "--model", (dir / "model.json").string(), "--clip", (dir / "broken.jsonl").string()});
  CHECK(r.code == 2);
}

TEST_CASE("cli: extract, segment and inspect print parseable output", "[cli]") {
  const auto& data = cli_corpus();
  const auto manifest = json::parse(read_file(data / "manifest.json"));
  const auto clip = (data / manifest[0]["path"].get<std::string>()).string();

  auto r = run_cli({"extract", "--clip", clip});
  REQUIRE(r.code == 0);
  const auto rows = lines_of(r.out);
  REQUIRE(rows.size() > 2);
  const auto columns = [](const std::string& l) { return std::count(l.begin(), l.end(), ',') + 1; };
  CHECK(columns(rows[0]) == 2 + static_cast<long>(kFeatureCount));
  for (const auto& row : rows) CHECK(columns(row) == columns(rows[0]));
  r = run_cli({"extract", "--clip", clip, "--style", "json"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["features"].size() == kFeatureCount);

  r = run_cli({"segment", "--clip", clip});
  REQUIRE(r.code == 0);
  auto sj = json::parse(r.out);
  CHECK(sj["params"]["tau_on"] == SegmenterParams{}.tau_on);
  CHECK(sj["segments"].is_array());
  const auto emit = fx::temp_dir("cli_emit");
  r = run_cli({"segment", "--clip", clip, "--auto", "--emit-clips", emit.string()});
  REQUIRE(r.code == 0);
  sj = json::parse(r.out);
  for (const auto& s : sj["segments"]) CHECK(fs::exists(s["path"].get<std::string>()));
  CHECK(run_cli({"segment", "--clip", clip, "--tau-on", "0.01", "--tau-off", "0.02"}).code == 1);

  r = run_cli({"inspect", "--data", data.string(), "--feature", "kinetic_energy"});
  REQUIRE(r.code == 0);
  CHECK(lines_of(r.out).size() == 1 + 6 * kBins);
  CHECK(lines_of(r.out)[0] == "class,feature,bin,lo,hi,density,cumulative");
  r = run_cli({"inspect", "--data", data.string(), "--feature", "wingspan"});
  CHECK(r.code == 2);
}

TEST_CASE("cli: synth, train and evaluate compose; jobs do not change results", "[cli]") {
  const auto& data = cli_corpus();
  const auto model = (fx::temp_dir("cli_pipe") / "m.json").string();
  REQUIRE(run_cli({"train", "--data", data.string(), "--out", model, "--classes", "4"}).code == 0);
  CHECK(load_model(model).class_set == ClassSet::four());

  auto r = run_cli({"evaluate", "--data", data.string(), "--repeats", "3", "--seed", "2", "-j", "1"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  REQUIRE(j["reports"].size() == 2);
  CHECK(j["reports"][0]["protocol"] == "split");
  CHECK(j["reports"][1]["protocol"] == "loso");
  CHECK(j["reports"][1]["runs"] == 3);
  const auto parallel = run_cli({"evaluate", "--data", data.string(), "--repeats", "3", "--seed", "2", "-j", "3"});
  CHECK(parallel.out == r.out);

  r = run_cli({"evaluate", "--data", data.string(), "--protocol", "loso", "--classes", "4", "--style", "csv",
               "--human"});
  REQUIRE(r.code == 0);
  const auto rows = lines_of(r.out);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == "class,loso,human");
  CHECK(rows[5].rfind("total,", 0) == 0);

  r = run_cli({"evaluate", "--data", data.string(), "--protocol", "split", "--repeats", "2", "--style",
               "paper-table", "--human"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("Split Data") != std::string::npos);
  CHECK(r.out.find("61.9%") != std::string::npos);
}
