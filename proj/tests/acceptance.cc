// Copyright 2026 The Regionkit Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "regionkit/assignment.h"
#include "regionkit/commands.h"
#include "regionkit/corpus.h"
#include "regionkit/cot.h"
#include "regionkit/geometry.h"
#include "regionkit/markup.h"
#include "regionkit/mask_io.h"
#include "regionkit/region_eval.h"
#include "regionkit/text_metrics.h"
#include "regionkit/transport.h"
#include "test_support.h"

namespace regionkit {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;

  // Records the first failure only.
  void Check(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

Outcome HungarianMatchesBruteForce() {
  Outcome o;
  testing::Rng rng(101);
  const auto start = Clock::now();
  double worst = 0.0;
  for (int t = 0; t < 1000 && o.pass; ++t) {
    const ScoreMatrix s = testing::RandomScores(rng, testing::Uniform(rng, 1, 7),
                                                testing::Uniform(rng, 1, 7));
    double total = 0.0;
    for (const Match& m : HungarianMatch(s).matches) total += m.score;
    const double diff = std::abs(total - testing::BruteForceBestTotal(s));
    worst = std::max(worst, diff);
    o.Check(diff <= 1e-12, "matrix " + std::to_string(t) + " differs by " + Fmt("%g", diff));
  }
  const double secs = Seconds(start);
  o.Check(secs < 10.0, "took " + Fmt("%.2f", secs) + " s");
  if (o.pass) o.detail = "1000 matrices, max diff " + Fmt("%g", worst) + ", " + Fmt("%.2f", secs) + " s";
  return o;
}

Outcome IouAxioms() {
  Outcome o;
  testing::Rng rng(202);
  for (int t = 0; t < 10000 && o.pass; ++t) {
    const BBox a = testing::RandomBox(rng);
    const BBox b = testing::RandomBox(rng);
    const double ab = Iou(a, b);
    o.Check(ab == Iou(b, a), "asymmetric");
    o.Check(ab >= 0.0 && ab <= 1.0, "out of range");
    o.Check(Iou(a, a) == 1.0, "self IoU is not 1");
    const auto d = testing::DisjointBox(rng, {a});
    o.Check(d && Iou(a, *d) == 0.0, "disjoint IoU is not 0");
  }
  // 25 shared / (100 + 100 - 25).
  const double fixed = Iou(BBox(0, 0, 10, 10), BBox(5, 5, 15, 15));
  o.Check(std::abs(fixed - 25.0 / 175.0) <= 1e-12, "fixed case " + Fmt("%.15f", fixed));
  if (o.pass) o.detail = "10000 pairs, fixed case " + Fmt("%.12f", fixed);
  return o;
}

// Reference of the requested kind with distinct object names.
std::vector<ObjectRegionPair> RandomReference(testing::Rng& rng, TaskKind kind) {
  const bool multi_object = kind == TaskKind::kMultiObjectSingleRegion ||
                            kind == TaskKind::kMultiObjectMultiRegion;
  const bool multi_region = kind == TaskKind::kSingleObjectMultiRegion ||
                            kind == TaskKind::kMultiObjectMultiRegion;
  const int objects = multi_object ? testing::Uniform(rng, 2, 4) : 1;
  std::vector<ObjectRegionPair> ref;
  for (int k = 0; k < objects; ++k) {
    const int boxes = multi_region ? testing::Uniform(rng, k == 0 ? 2 : 1, 3) : 1;
    ObjectRegionPair p{"Organ " + std::to_string(k), {}, std::nullopt};
    for (int b = 0; b < boxes; ++b) p.regions.push_back(testing::RandomBox(rng));
    ref.push_back(std::move(p));
  }
  return ref;
}

Outcome PerfectPredictionIdentity() {
  Outcome o;
  testing::Rng rng(303);
  std::set<TaskKind> kinds;
  for (int t = 0; t < 500 && o.pass; ++t) {
    const TaskKind want = kAllTaskKinds[t % 4];
    const auto ref = RandomReference(rng, want);
    const SampleMetrics m = EvalSample(ref, ref);
    kinds.insert(m.kind);
    o.Check(m.kind == want, "misclassified reference " + std::to_string(t));
    for (const PrecisionRecall* pr : {&m.object, &m.region, &m.alignment}) {
      o.Check(pr->precision == 1.0 && pr->recall == 1.0 && pr->f1 == 1.0,
              "ratio below 1 on reference " + std::to_string(t));
    }
    o.Check(m.mean_iou == 1.0, "mean IoU below 1 on reference " + std::to_string(t));
    if (want == TaskKind::kSingleObjectSingleRegion) {
      o.Check(m.region_accuracy == 1.0, "region accuracy below 1");
    }
  }
  o.Check(kinds.size() == 4, "not every task kind covered");
  if (o.pass) o.detail = "500 references, 4 kinds";
  return o;
}

Outcome HandCountFixtures() {
  Outcome o;
  const auto near = [](double a, double b) { return std::abs(a - b) <= 1e-12; };
  const ObjectRegionPair liver{"liver", {BBox(0, 0, 10, 10)}, std::nullopt};
  const ObjectRegionPair spleen{"spleen", {BBox(600, 600, 700, 700)}, std::nullopt};

  const std::vector<ObjectRegionPair> two = {liver, spleen};
  const SampleMetrics perfect = EvalSample(two, two);
  for (const PrecisionRecall* pr : {&perfect.object, &perfect.region, &perfect.alignment}) {
    o.Check(pr->precision == 1.0 && pr->recall == 1.0 && pr->f1 == 1.0, "perfect: ratio not 1");
  }
  o.Check(perfect.mean_iou == 1.0, "perfect: mean IoU");

  const std::vector<ObjectRegionPair> shifted = {{"liver", {BBox(5, 5, 15, 15)}, std::nullopt}};
  const std::vector<ObjectRegionPair> one = {liver};
  const SampleMetrics off = EvalSample(shifted, one);
  o.Check(off.object.f1 == 1.0, "shifted: object F1");
  o.Check(off.region.f1 == 0.0 && off.alignment.f1 == 0.0, "shifted: region/alignment F1");
  o.Check(off.region_accuracy == 0.0, "shifted: region accuracy");
  o.Check(near(off.mean_iou, 1.0 / 7.0), "shifted: mean IoU");

  const SampleMetrics half = EvalSample(one, two);
  for (const PrecisionRecall* pr : {&half.object, &half.region, &half.alignment}) {
    o.Check(pr->precision == 1.0 && pr->recall == 0.5 && near(pr->f1, 2.0 / 3.0),
            "one of two: P/R/F1");
  }
  o.Check(half.mean_iou == 0.5, "one of two: mean IoU");
  if (o.pass) o.detail = "3 fixtures at IoU threshold 0.5";
  return o;
}

Outcome MarkupRoundTrip() {
  Outcome o;
  testing::Rng rng(505);
  for (int t = 0; t < 10000 && o.pass; ++t) {
    const GroundedDocument d = testing::RandomDocument(rng);
    const ParseResult r = ParseGroundedText(SerializeGroundedText(d), ParseMode::kStrict);
    o.Check(r.document == d, "document " + std::to_string(t) + " changed on round trip");
  }
  std::istringstream lines(testing::ReadFile(REGIONKIT_TEST_DATA "/malformed_markup.txt"));
  std::set<MarkupErrorKind> seen;
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    ++count;
    const ParseResult r = ParseGroundedText(line, ParseMode::kLenient);
    o.Check(SerializeGroundedText(r.document) == line, "fixture line " + std::to_string(count) + " lost text");
    o.Check(!r.diagnostics.empty(), "fixture line " + std::to_string(count) + " has no diagnostic");
    for (const auto& diag : r.diagnostics) seen.insert(diag.kind);
  }
  o.Check(count == 100, "fixture has " + std::to_string(count) + " lines");
  o.Check(seen.size() == 5, "fixture covers " + std::to_string(seen.size()) + " error kinds");
  if (o.pass) o.detail = "10000 documents, 100 malformed lines, 5 error kinds";
  return o;
}

Outcome TextMetricOracles() {
  Outcome o;
  const json golden = json::parse(testing::ReadFile(REGIONKIT_TEST_DATA "/text_golden.json"));
  for (const json& g : golden) {
    const Language lang = *ParseLanguage(g.at("language").get<std::string>());
    const TokenSequence c = Tokenize(g.at("candidate").get<std::string>(), lang);
    const TokenSequence r = Tokenize(g.at("reference").get<std::string>(), lang);
    const std::string who = g.at("candidate").get<std::string>();
    o.Check(std::abs(Bleu(c, r, 1) - g.at("bleu1").get<double>()) <= 1e-9, who + ": BLEU-1");
    o.Check(std::abs(Bleu(c, r, 4) - g.at("bleu4").get<double>()) <= 1e-9, who + ": BLEU-4");
    o.Check(std::abs(RougeL(c, r) - g.at("rouge_l").get<double>()) <= 1e-9, who + ": ROUGE-L");
    o.Check(std::abs(MeteorLite(c, r) - g.at("meteor").get<double>()) <= 1e-9, who + ": METEOR");
  }
  o.Check(golden.size() == 10, "golden fixture size");

  const TokenSequence same = Tokenize("heart is normal", Language::kEnglish);
  o.Check(Bleu(same, same, 1) == 100.0 && Bleu(same, same, 4) == 100.0 &&
              RougeL(same, same) == 100.0,
          "identical input below 100");
  // One chunk over three matches: 100 * (1 - 0.5 * (1/3)^3).
  o.Check(std::abs(MeteorLite(same, same) - 100.0 * (1.0 - 0.5 / 27.0)) <= 1e-9,
          "identical METEOR");
  const TokenSequence other = Tokenize("lungs clear bilaterally", Language::kEnglish);
  o.Check(Bleu(other, same, 1) == 0.0 && Bleu(other, same, 4) == 0.0 &&
              RougeL(other, same) == 0.0 && MeteorLite(other, same) == 0.0,
          "disjoint input above 0");
  if (o.pass) o.detail = std::to_string(golden.size()) + " golden pairs plus boundary cases";
  return o;
}

Outcome ForgeClosure(const fs::path& dir) {
  Outcome o;
  testing::Rng rng(707);
  static const char* kLabels[] = {"liver", "left lung", "heart", "spleen", "kidney"};
  std::string manifest;
  for (int i = 0; i < 50; ++i) {
    MaskGrid mask(64, 48);
    const int parts = testing::Uniform(rng, 1, 3);
    for (int k = 0; k < parts; ++k) {
      const int x = testing::Uniform(rng, 0, 50), y = testing::Uniform(rng, 0, 34);
      mask.Fill({x, y, x + testing::Uniform(rng, 2, 13), y + testing::Uniform(rng, 2, 13)});
    }
    const std::string name = "mask" + std::to_string(i) + ".pgm";
    WriteMaskPgm(mask, dir / name);
    manifest += json{{"id", "m" + std::to_string(i)},
                     {"mask", name},
                     {"label", kLabels[i % 5]},
                     {"image", "image" + std::to_string(i) + ".png"}}.dump() + "\n";
  }
  testing::WriteFile(dir / "manifest.jsonl", manifest);

  RunConfig config;
  config.input = (dir / "manifest.jsonl").string();
  config.seed = 42;
  std::ostringstream sink;
  config.output = (dir / "forge_a.jsonl").string();
  o.Check(RunForge(config, sink, sink) == 0, "first run failed: " + sink.str());
  config.output = (dir / "forge_b.jsonl").string();
  o.Check(RunForge(config, sink, sink) == 0, "second run failed");
  const std::string a = testing::ReadFile(dir / "forge_a.jsonl");
  o.Check(a == testing::ReadFile(dir / "forge_b.jsonl"), "runs differ");

  std::istringstream lines(a);
  std::string line;
  int answers = 0;
  while (std::getline(lines, line)) {
    ++answers;
    const std::string answer = json::parse(line).at("reference").get<std::string>();
    try {
      ParseGroundedText(answer, ParseMode::kStrict);
    } catch (const MarkupError& e) {
      o.Check(false, "answer does not re-parse: " + answer);
    }
  }
  o.Check(answers == 100, std::to_string(answers) + " answers from 50 masks");
  if (o.pass) o.detail = "50 masks, 100 answers, identical reruns";
  return o;
}

Outcome CotDeterminism(const fs::path& dir) {
  Outcome o;
  static const char* kImages[] = {"effusion.png", "ct_01.png", "normal.png", "xray_7.png"};
  std::string questions;
  for (int i = 0; i < 20; ++i) {
    json q = {{"id", "q" + std::to_string(i)},
              {"question", "Question " + std::to_string(i) + ": is anything abnormal?"},
              {"image", kImages[i % 4]}};
    if (i % 5 == 4) {
      q["language"] = "zh";
      q["question"] = "这张图有异常吗？";
    }
    questions += q.dump() + "\n";
  }
  testing::WriteFile(dir / "questions.jsonl", questions);

  const fs::path mock = DataDir() / "mock/cot_mock.json";
  RunConfig config;
  config.input = (dir / "questions.jsonl").string();
  config.mock = mock.string();
  std::ostringstream sink;
  config.output = (dir / "cot_a.jsonl").string();
  o.Check(RunCot(config, sink, sink) == 0, "first run failed");
  config.output = (dir / "cot_b.jsonl").string();
  config.jobs = 4;
  o.Check(RunCot(config, sink, sink) == 0, "second run failed");
  o.Check(testing::ReadFile(dir / "cot_a.jsonl") == testing::ReadFile(dir / "cot_b.jsonl"),
          "trace files differ");

  const json script = json::parse(testing::ReadFile(mock));
  int happy = 0;
  std::istringstream lines(questions);
  std::string line;
  while (std::getline(lines, line)) {
    const json q = json::parse(line);
    const Language lang = q.contains("language") ? Language::kChinese : Language::kEnglish;
    CotOptions options;
    options.prompts = DefaultCotPrompts(lang);
    ScriptedTransport transport(script);
    const CotTrace trace = RunRegionalCot(q.at("question").get<std::string>(),
                                          q.at("image").get<std::string>(), transport, options);
    if (trace.failed || trace.fallback) continue;
    ++happy;
    o.Check(transport.calls() == 2, q.at("id").get<std::string>() + " made " +
                                        std::to_string(transport.calls()) + " calls");
  }
  o.Check(happy >= 10, "only " + std::to_string(happy) + " happy-path questions");
  if (o.pass) {
    o.detail = "20 questions, identical traces, 2 calls on each of " + std::to_string(happy) +
               " happy-path questions";
  }
  return o;
}

Outcome EvalThroughput(const fs::path& dir) {
  Outcome o;
  testing::Rng rng(909);
  std::string corpus;
  for (int i = 0; i < 10000; ++i) {
    GroundedDocument ref, pred;
    const int pairs = testing::Uniform(rng, 1, 8);
    for (int k = 0; k < pairs; ++k) {
      const BBox box = testing::RandomBox(rng);
      const std::string name = "organ " + std::to_string(testing::Uniform(rng, 0, 5));
      ref.AppendAnnotation({name, {box}});
      if (testing::Uniform(rng, 0, 3) > 0) {
        pred.AppendAnnotation({name, {testing::Uniform(rng, 0, 1) ? box : testing::RandomBox(rng)}});
      }
    }
    corpus += json{{"id", std::to_string(i)},
                   {"task", "t2r"},
                   {"prediction", SerializeGroundedText(pred)},
                   {"reference", SerializeGroundedText(ref)}}.dump() + "\n";
  }
  testing::WriteFile(dir / "corpus.jsonl", corpus);

  RunConfig config;
  config.input = (dir / "corpus.jsonl").string();
  std::ostringstream sink;
  config.output = (dir / "eval_1.json").string();
  const auto start = Clock::now();
  o.Check(RunEval(config, sink, sink) == 0, "single-threaded run failed");
  const double secs = Seconds(start);
  o.Check(secs < 5.0, "took " + Fmt("%.2f", secs) + " s");
  config.jobs = 8;
  config.output = (dir / "eval_8.json").string();
  o.Check(RunEval(config, sink, sink) == 0, "eight-thread run failed");
  o.Check(testing::ReadFile(dir / "eval_1.json") == testing::ReadFile(dir / "eval_8.json"),
          "--jobs 1 and --jobs 8 differ");
  if (o.pass) o.detail = "10000 samples in " + Fmt("%.2f", secs) + " s, identical at 8 jobs";
  return o;
}

Outcome DegradationMonotonicity() {
  Outcome o;
  testing::Rng rng(1010);
  struct Case {
    std::vector<ObjectRegionPair> ref;
    std::vector<BBox> replacements;  // one disjoint box per unit pair
    std::vector<std::size_t> order;  // corruption order over unit pairs
  };
  std::vector<Case> cases;
  for (int t = 0; t < 400; ++t) {
    Case c;
    c.ref = RandomReference(rng, kAllTaskKinds[t % 4]);
    std::vector<BBox> all;
    for (const auto& p : c.ref) all.insert(all.end(), p.regions.begin(), p.regions.end());
    for (std::size_t u = 0; u < all.size(); ++u) {
      std::vector<BBox> avoid = all;
      avoid.insert(avoid.end(), c.replacements.begin(), c.replacements.end());
      c.replacements.push_back(*testing::DisjointBox(rng, avoid));
      c.order.push_back(u);
    }
    std::shuffle(c.order.begin(), c.order.end(), rng);
    cases.push_back(std::move(c));
  }

  std::vector<double> region_f1, alignment_f1;
  for (double p : {0.0, 0.25, 0.5, 1.0}) {
    std::vector<SampleMetrics> samples;
    for (const Case& c : cases) {
      const auto corrupt = static_cast<std::size_t>(std::floor(p * c.order.size()));
      std::vector<char> hit(c.order.size(), 0);
      for (std::size_t k = 0; k < corrupt; ++k) hit[c.order[k]] = 1;
      auto pred = c.ref;
      std::size_t unit = 0;
      for (auto& pair : pred) {
        for (BBox& box : pair.regions) {
          if (hit[unit]) box = c.replacements[unit];
          ++unit;
        }
      }
      samples.push_back(EvalSample(pred, c.ref));
    }
    const CorpusMetrics m = Aggregate(samples);
    region_f1.push_back(m.overall.region.f1);
    alignment_f1.push_back(m.overall.alignment.f1);
  }
  for (std::size_t k = 1; k < region_f1.size(); ++k) {
    o.Check(region_f1[k] <= region_f1[k - 1], "region F1 rose at step " + std::to_string(k));
    o.Check(alignment_f1[k] <= alignment_f1[k - 1], "alignment F1 rose at step " + std::to_string(k));
  }
  o.Check(region_f1.front() == 1.0 && region_f1.back() == 0.0, "endpoints are not 1 and 0");
  if (o.pass) {
    o.detail = "region F1 " + Fmt("%.3f", region_f1[0]) + " " + Fmt("%.3f", region_f1[1]) + " " +
               Fmt("%.3f", region_f1[2]) + " " + Fmt("%.3f", region_f1[3]);
  }
  return o;
}

}  // namespace
}  // namespace regionkit

int main() {
  using regionkit::Outcome;
  const auto dir = regionkit::testing::ScratchDir("acceptance");
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"hungarian matches brute force", regionkit::HungarianMatchesBruteForce},
      {"iou axioms", regionkit::IouAxioms},
      {"perfect prediction identity", regionkit::PerfectPredictionIdentity},
      {"hand-count fixtures", regionkit::HandCountFixtures},
      {"markup round trip", regionkit::MarkupRoundTrip},
      {"text metric oracles", regionkit::TextMetricOracles},
      {"forge closure", [&] { return regionkit::ForgeClosure(dir); }},
      {"cot determinism", [&] { return regionkit::CotDeterminism(dir); }},
      {"eval throughput", [&] { return regionkit::EvalThroughput(dir); }},
      {"degradation monotonicity", regionkit::DegradationMonotonicity},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", ++index, name.c_str(),
                o.detail.c_str());
  }
  if (failed == 0) std::filesystem::remove_all(dir);
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
