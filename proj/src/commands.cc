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
#include "regionkit/commands.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "parallel.h"
#include "regionkit/corpus.h"
#include "regionkit/cot.h"
#include "regionkit/forge.h"
#include "regionkit/mask_io.h"
#include "regionkit/region_eval.h"
#include "regionkit/text_metrics.h"
#include "regionkit/transport.h"
#include "regionkit/utf8.h"

#ifndef REGIONKIT_DATA_DIR
#define REGIONKIT_DATA_DIR "data"
#endif

namespace regionkit {

namespace {

using OrderedJson = nlohmann::ordered_json;

struct Line {
  std::size_t number;  // 1-based
  std::string text;
};

std::optional<std::vector<Line>> ReadLines(const std::string& path,
                                           std::ostream& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err << "error: cannot read input " << (path.empty() ? "(none)" : path) << "\n";
    return std::nullopt;
  }
  std::vector<Line> lines;
  std::string text;
  std::size_t number = 0;
  while (std::getline(in, text)) {
    ++number;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (utf8::TrimAscii(text).empty()) continue;
    lines.push_back(Line{number, std::move(text)});
  }
  return lines;
}

// Writes to --output when given, otherwise to the fallback stream.
class OutputTarget {
 public:
  OutputTarget(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      stream_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw std::runtime_error("cannot write output " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

// Per-record failures, written as one JSON object per line.
class ErrorLog {
 public:
  void Add(std::size_t line, const std::string& id, const std::string& kind,
           const std::string& message) {
    OrderedJson j;
    j["line"] = line;
    if (!id.empty()) j["id"] = id;
    j["error"] = kind;
    j["message"] = message;
    entries_.push_back(j.dump());
  }

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  // Destination: explicit --errors, else <output>.errors.jsonl, else stderr.
  void Flush(const RunConfig& config, std::ostream& err) const {
    if (entries_.empty()) return;
    std::string path = config.errors;
    if (path.empty() && !config.output.empty()) path = config.output + ".errors.jsonl";
    if (path.empty()) {
      for (const std::string& e : entries_) err << e << "\n";
      return;
    }
    std::ofstream out(path, std::ios::binary);
    for (const std::string& e : entries_) out << e << "\n";
    err << entries_.size() << " record(s) failed; see " << path << "\n";
  }

 private:
  std::vector<std::string> entries_;
};

std::string ProseOf(const GroundedDocument& doc) {
  std::string out;
  for (const Segment& seg : doc.segments()) {
    if (const auto* t = std::get_if<PlainText>(&seg)) {
      if (!out.empty()) out.push_back(' ');
      out.append(t->text);
    }
  }
  return out;
}

std::unordered_map<std::string, std::string> LoadSynonyms(const std::string& path) {
  std::unordered_map<std::string, std::string> out;
  if (path.empty()) return out;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read synonym map " + path);
  const auto doc = nlohmann::json::parse(in);
  if (!doc.is_object()) throw std::runtime_error("synonym map must be a JSON object");
  for (const auto& [surface, canonical] : doc.items()) {
    out[surface] = canonical.get<std::string>();
  }
  return out;
}

// ---------------------------------------------------------------------------
// eval

struct EvalOutcome {
  RecordTask task = RecordTask::kReport;
  std::optional<SampleMetrics> region;
  std::optional<TextScores> text;
  std::string error_kind;
  std::string error;
};

EvalOutcome EvaluateRecord(const CorpusRecord& rec, RecordTask task,
                           const EvalOptions& options, ParseMode mode) {
  EvalOutcome out;
  out.task = task;
  const Language lang = rec.language;
  switch (task) {
    case RecordTask::kRegionToText:
      out.text = ScoreText(rec.prediction, rec.reference, lang, true);
      return out;
    case RecordTask::kVqa:
      out.text = ScoreText(rec.prediction, rec.reference, lang,
                           rec.closed.value_or(false));
      return out;
    case RecordTask::kReport:
      out.text = ScoreText(rec.prediction, rec.reference, lang, false);
      return out;
    case RecordTask::kTextToRegion:
    case RecordTask::kGroundedReport:
      break;
  }

  GroundedDocument reference;
  try {
    reference = ParseGroundedText(rec.reference, ParseMode::kStrict).document;
  } catch (const MarkupError& e) {
    out.error_kind = "MalformedReference";
    out.error = e.what();
    return out;
  }
  GroundedDocument prediction;
  try {
    prediction = ParseGroundedText(rec.prediction, mode).document;
  } catch (const MarkupError& e) {
    out.error_kind = "MalformedPrediction";
    out.error = e.what();
    return out;
  }
  const std::vector<ObjectRegionPair> ref_pairs = ExtractPairs(reference);
  const std::vector<ObjectRegionPair> pred_pairs = ExtractPairs(prediction);
  if (task == RecordTask::kTextToRegion && ref_pairs.empty()) {
    out.error_kind = "EmptyReference";
    out.error = "reference contains no object-region pair";
    return out;
  }
  if (!ref_pairs.empty()) out.region = EvalSample(pred_pairs, ref_pairs, options);
  if (task == RecordTask::kGroundedReport) {
    out.text = ScoreText(ProseOf(prediction), ProseOf(reference), lang, false);
  }
  return out;
}

struct TextSummary {
  std::size_t samples = 0;
  double bleu1 = 0, bleu4 = 0, rouge_l = 0, meteor = 0, token_f1 = 0,
         token_recall = 0;
  std::optional<double> close_accuracy;
  std::size_t closed_samples = 0;
};

class TextAccumulator {
 public:
  void Add(const TextScores& s) {
    ++n_;
    sums_[0] += s.bleu1;
    sums_[1] += s.bleu4;
    sums_[2] += s.rouge_l;
    sums_[3] += s.meteor;
    sums_[4] += s.token_f1;
    sums_[5] += s.token_recall;
    if (s.close_accuracy) {
      acc_sum_ += *s.close_accuracy;
      ++acc_n_;
    }
  }
  TextSummary Finish() const {
    TextSummary t;
    t.samples = n_;
    if (n_ == 0) return t;
    const double d = static_cast<double>(n_);
    t.bleu1 = sums_[0] / d;
    t.bleu4 = sums_[1] / d;
    t.rouge_l = sums_[2] / d;
    t.meteor = sums_[3] / d;
    t.token_f1 = sums_[4] / d;
    t.token_recall = sums_[5] / d;
    t.closed_samples = acc_n_;
    if (acc_n_ > 0) t.close_accuracy = acc_sum_ / static_cast<double>(acc_n_);
    return t;
  }

 private:
  std::size_t n_ = 0;
  double sums_[6] = {};
  double acc_sum_ = 0;
  std::size_t acc_n_ = 0;
};

OrderedJson OptionalNumber(const std::optional<double>& v) {
  return v ? OrderedJson(*v) : OrderedJson(nullptr);
}

OrderedJson SummaryToJson(const MetricsSummary& s) {
  OrderedJson j;
  j["samples"] = s.samples;
  j["object_precision"] = s.object.precision;
  j["object_recall"] = s.object.recall;
  j["object_f1"] = s.object.f1;
  j["region_precision"] = s.region.precision;
  j["region_recall"] = s.region.recall;
  j["region_f1"] = s.region.f1;
  j["alignment_precision"] = s.alignment.precision;
  j["alignment_recall"] = s.alignment.recall;
  j["alignment_f1"] = s.alignment.f1;
  j["mean_iou"] = s.mean_iou;
  j["region_accuracy"] = OptionalNumber(s.region_accuracy);
  j["predicted_pairs"] = s.predicted;
  j["reference_pairs"] = s.expected;
  j["detected_objects"] = s.detected_objects;
  j["detected_regions"] = s.detected_regions;
  j["aligned_pairs"] = s.aligned_pairs;
  return j;
}

OrderedJson TextSummaryToJson(const TextSummary& t) {
  OrderedJson j;
  j["samples"] = t.samples;
  j["bleu1"] = t.bleu1;
  j["bleu4"] = t.bleu4;
  j["rouge_l"] = t.rouge_l;
  j["meteor"] = t.meteor;
  j["token_f1"] = t.token_f1;
  j["token_recall"] = t.token_recall;
  j["close_accuracy"] = OptionalNumber(t.close_accuracy);
  j["closed_samples"] = t.closed_samples;
  return j;
}

std::string Cell(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), " %7.2f", v);
  return buf;
}

std::string Cell(const std::optional<double>& v) {
  return v ? Cell(*v) : std::string("       -");
}

void PrintRegionRow(std::ostream& out, std::string_view name,
                    const MetricsSummary& s) {
  char head[64];
  std::snprintf(head, sizeof(head), "%-30.*s %6zu", static_cast<int>(name.size()),
                name.data(), s.samples);
  out << head << Cell(100 * s.object.precision) << Cell(100 * s.object.recall)
      << Cell(100 * s.object.f1) << Cell(100 * s.region.precision)
      << Cell(100 * s.region.recall) << Cell(100 * s.region.f1)
      << Cell(100 * s.alignment.precision) << Cell(100 * s.alignment.recall)
      << Cell(100 * s.alignment.f1) << Cell(100 * s.mean_iou)
      << Cell(s.region_accuracy ? std::optional<double>(100 * *s.region_accuracy)
                                : std::nullopt)
      << "\n";
}

void PrintTextRow(std::ostream& out, std::string_view name, const TextSummary& t) {
  char head[64];
  std::snprintf(head, sizeof(head), "%-30.*s %6zu", static_cast<int>(name.size()),
                name.data(), t.samples);
  out << head << Cell(t.bleu1) << Cell(t.bleu4) << Cell(t.rouge_l)
      << Cell(t.meteor) << Cell(t.token_f1) << Cell(t.token_recall)
      << Cell(t.close_accuracy) << "\n";
}

// ---------------------------------------------------------------------------
// shared record helpers

std::string LanguageCode(Language language) {
  switch (language) {
    case Language::kChinese:
      return "zh";
    case Language::kMixed:
      return "mixed";
    case Language::kEnglish:
      break;
  }
  return "en";
}

Language ConfigLanguage(const RunConfig& config) {
  return ParseLanguage(config.language).value_or(Language::kEnglish);
}

OrderedJson BoxesToJson(const std::vector<BBox>& boxes) {
  OrderedJson arr = OrderedJson::array();
  for (const BBox& b : boxes) arr.push_back({b.x1(), b.y1(), b.x2(), b.y2()});
  return arr;
}

std::vector<BBox> BoxesFromJson(const nlohmann::json& j) {
  std::vector<BBox> boxes;
  for (const auto& b : j) {
    if (!b.is_array() || b.size() != 4) {
      throw std::invalid_argument("a box must be [x1, y1, x2, y2]");
    }
    boxes.emplace_back(b[0].get<int>(), b[1].get<int>(), b[2].get<int>(),
                       b[3].get<int>());
  }
  return boxes;
}

}  // namespace

void ValidateRunConfig(const RunConfig& config) {
  if (!(config.iou_threshold > 0.0 && config.iou_threshold <= 1.0)) {
    throw std::invalid_argument("--iou-threshold must be in (0, 1]");
  }
  if (config.jobs < 1) throw std::invalid_argument("--jobs must be >= 1");
  if (config.retries < 0) throw std::invalid_argument("--retries must be >= 0");
  if (config.timeout_ms <= 0) throw std::invalid_argument("--timeout-ms must be > 0");
  if (config.min_area < 0) throw std::invalid_argument("--min-area must be >= 0");
  if (!ParseLanguage(config.language)) {
    throw std::invalid_argument("--lang must be en, zh or mixed");
  }
  if (config.task != "auto" && !ParseRecordTask(config.task)) {
    throw std::invalid_argument("--task must be auto, r2t, t2r, grounded_report, vqa or report");
  }
}

std::filesystem::path DataDir() {
  if (const char* env = std::getenv("REGIONKIT_DATA_DIR"); env && *env) return env;
  return REGIONKIT_DATA_DIR;
}

int RunEval(const RunConfig& config, std::ostream& out, std::ostream& err) {
  EvalOptions options;
  options.iou_threshold = config.iou_threshold;
  try {
    options.normalizer = ObjectNormalizer(LoadSynonyms(config.synonyms));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  const auto lines = ReadLines(config.input, err);
  if (!lines) return 2;

  const std::optional<RecordTask> forced =
      config.task == "auto" ? std::nullopt : ParseRecordTask(config.task);
  const Language default_lang = ConfigLanguage(config);

  ErrorLog errors;
  std::vector<std::optional<CorpusRecord>> records(lines->size());
  std::unordered_set<std::string> ids;
  for (std::size_t i = 0; i < lines->size(); ++i) {
    const Line& line = (*lines)[i];
    try {
      CorpusRecord rec = ParseCorpusRecord(line.text, default_lang);
      if (!ids.insert(rec.id).second) {
        errors.Add(line.number, rec.id, "DuplicateId", "id already used in this corpus");
        continue;
      }
      records[i] = std::move(rec);
    } catch (const CorpusError& e) {
      errors.Add(line.number, "", "MalformedRecord", e.what());
    }
  }

  std::vector<EvalOutcome> outcomes(records.size());
  internal::ParallelFor(records.size(), config.jobs, [&](std::size_t i) {
    if (!records[i]) return;
    try {
      outcomes[i] = EvaluateRecord(*records[i], forced.value_or(records[i]->task),
                                   options, config.mode);
    } catch (const std::exception& e) {
      outcomes[i].error_kind = "EvaluationError";
      outcomes[i].error = e.what();
    }
  });

  std::vector<SampleMetrics> region_samples;
  TextAccumulator text_all;
  std::map<RecordTask, TextAccumulator> text_by_task;
  std::size_t evaluated = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!records[i]) continue;
    const EvalOutcome& o = outcomes[i];
    if (!o.error_kind.empty()) {
      errors.Add((*lines)[i].number, records[i]->id, o.error_kind, o.error);
      continue;
    }
    ++evaluated;
    if (o.region) region_samples.push_back(*o.region);
    if (o.text) {
      text_all.Add(*o.text);
      text_by_task[o.task].Add(*o.text);
    }
  }

  OrderedJson report;
  report["iou_threshold"] = config.iou_threshold;
  report["mode"] = config.mode == ParseMode::kStrict ? "strict" : "lenient";
  report["records"] = lines->size();
  report["evaluated"] = evaluated;
  report["failed"] = errors.size();

  out << "Records: " << lines->size() << " read, " << evaluated << " evaluated, "
      << errors.size() << " failed\n";
  if (!region_samples.empty()) {
    const CorpusMetrics corpus = Aggregate(region_samples);
    char title[96];
    std::snprintf(title, sizeof(title), "\nRegion-aligned metrics (IoU >= %.2f)\n",
                  config.iou_threshold);
    out << title;
    out << "subset                              n    ObjP    ObjR   ObjF1    RegP"
           "    RegR   RegF1    AliP    AliR   AliF1     IoU     Acc\n";
    PrintRegionRow(out, "overall", corpus.overall);
    OrderedJson by_kind = OrderedJson::object();
    for (const auto& [kind, summary] : corpus.by_kind) {
      PrintRegionRow(out, TaskKindName(kind), summary);
      by_kind[std::string(TaskKindName(kind))] = SummaryToJson(summary);
    }
    report["region"] = {{"overall", SummaryToJson(corpus.overall)},
                        {"by_kind", by_kind}};
  } else {
    report["region"] = nullptr;
  }
  const TextSummary text_summary = text_all.Finish();
  if (text_summary.samples > 0) {
    out << "\nText metrics\n";
    out << "subset                              n  BLEU-1  BLEU-4 ROUGE-L  METEOR"
           "      F1  Recall   CAcc\n";
    PrintTextRow(out, "overall", text_summary);
    OrderedJson by_task = OrderedJson::object();
    for (const auto& [task, acc] : text_by_task) {
      const TextSummary t = acc.Finish();
      PrintTextRow(out, RecordTaskName(task), t);
      by_task[std::string(RecordTaskName(task))] = TextSummaryToJson(t);
    }
    report["text"] = {{"overall", TextSummaryToJson(text_summary)},
                      {"by_task", by_task}};
  } else {
    report["text"] = nullptr;
  }

  if (!config.output.empty()) {
    std::ofstream file(config.output, std::ios::binary);
    if (!file) {
      err << "error: cannot write " << config.output << "\n";
      return 2;
    }
    file << report.dump(2) << "\n";
  }
  errors.Flush(config, err);
  return errors.empty() ? 0 : 1;
}

int RunParse(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto lines = ReadLines(config.input, err);
  if (!lines) return 2;
  std::unique_ptr<OutputTarget> target;
  try {
    target = std::make_unique<OutputTarget>(config.output, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  int status = 0;
  for (const Line& line : *lines) {
    ParseResult parsed;
    try {
      parsed = ParseGroundedText(line.text, config.mode);
    } catch (const MarkupError& e) {
      err << "line " << line.number << ": " << e.what() << "\n";
      status = 1;
      continue;
    }
    OrderedJson pairs = OrderedJson::array();
    for (const ObjectRegionPair& p : ExtractPairs(parsed.document)) {
      OrderedJson pj;
      pj["object"] = p.object;
      pj["boxes"] = BoxesToJson(p.regions);
      pj["description"] = p.description ? OrderedJson(*p.description) : OrderedJson(nullptr);
      pairs.push_back(std::move(pj));
    }
    OrderedJson diags = OrderedJson::array();
    for (const ParseDiagnostic& d : parsed.diagnostics) {
      diags.push_back({{"kind", MarkupErrorKindName(d.kind)},
                       {"offset", d.offset},
                       {"message", d.message}});
    }
    OrderedJson j;
    j["line"] = line.number;
    j["segments"] = parsed.document.segments().size();
    j["pair_count"] = pairs.size();
    j["pairs"] = std::move(pairs);
    j["diagnostics"] = std::move(diags);
    target->stream() << j.dump() << "\n";
  }
  return status;
}

int RunForge(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::vector<Template> templates;
  OrganLexicon lexicon;
  try {
    templates = LoadTemplates(config.templates.empty()
                                  ? DataDir() / "templates"
                                  : std::filesystem::path(config.templates));
    lexicon = config.lexicon.empty() ? DefaultChestLexicon()
                                     : LoadLexicon(config.lexicon);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  const auto lines = ReadLines(config.input, err);
  if (!lines) return 2;
  const std::filesystem::path base =
      std::filesystem::path(config.input).parent_path();
  const Language default_lang = ConfigLanguage(config);
  const std::vector<std::string> canonical_order = lexicon.Organs();
  const auto timeout = std::chrono::milliseconds(config.timeout_ms);

  struct RowResult {
    std::vector<std::string> records;
    std::size_t r2t = 0, t2r = 0, grounded = 0;
    std::vector<std::string> notes;
    std::string id, error_kind, error;
  };
  std::vector<RowResult> results(lines->size());

  internal::ParallelFor(lines->size(), config.jobs, [&](std::size_t i) {
    RowResult& res = results[i];
    try {
      const auto row = nlohmann::ordered_json::parse((*lines)[i].text);
      res.id = row.at("id").get<std::string>();
      Language lang = default_lang;
      if (row.contains("language")) {
        lang = ParseLanguage(row.at("language").get<std::string>()).value_or(lang);
      }
      const std::string image = row.value("image", "");
      if (row.contains("mask")) {
        std::filesystem::path mask_path = row.at("mask").get<std::string>();
        if (mask_path.is_relative()) mask_path = base / mask_path;
        const MaskGrid mask = ReadMask(mask_path);
        RegionSampleSpec spec;
        spec.id = res.id;
        spec.image = image;
        spec.label = row.at("label").get<std::string>();
        spec.image_width = row.value("width", 0);
        spec.image_height = row.value("height", 0);
        spec.min_area = row.value("min_area", config.min_area);
        for (const ForgedSample& s :
             ForgeRegionSamples(mask, spec, templates, config.seed)) {
          OrderedJson j;
          j["id"] = s.id;
          j["task"] = DirectionName(s.direction);
          j["language"] = LanguageCode(lang);
          j["image"] = s.image;
          j["question"] = s.question;
          j["prediction"] = "";
          j["reference"] = s.answer;
          j["template"] = s.template_id;
          res.records.push_back(j.dump());
          (s.direction == Direction::kRegionToText ? res.r2t : res.t2r)++;
        }
      } else if (row.contains("report")) {
        const std::string report = row.at("report").get<std::string>();
        OrganRegions regions;
        if (row.contains("regions")) {
          for (const auto& [organ, boxes] : row.at("regions").items()) {
            regions.emplace_back(organ, BoxesFromJson(boxes));
          }
        }
        std::unique_ptr<SegmenterClient> client;
        if (!config.endpoint.empty()) {
          client = std::make_unique<HttpSegmenterClient>(config.endpoint, timeout);
        }
        const SegmentOutcome seg =
            SegmentWithFallback(report, lexicon, client.get(), config.retries);
        if (seg.used_fallback) {
          res.notes.push_back("segmenter failed (" + seg.error +
                              "); used the rule-based segmenter");
        }
        AssembledReport assembled =
            AssembleGroundedReport(seg.descriptions, regions, canonical_order);
        for (const std::string& w : assembled.warnings) res.notes.push_back(w);
        OrderedJson j;
        j["id"] = res.id;
        j["task"] = "grounded_report";
        j["language"] = LanguageCode(lang);
        j["image"] = image;
        j["question"] = lang == Language::kChinese
                            ? "请为这张图像撰写报告，并为每段描述标注对应区域。"
                            : "Write a report for this image and ground each "
                              "finding to its region.";
        j["prediction"] = "";
        j["reference"] = SerializeGroundedText(assembled.document);
        res.records.push_back(j.dump());
        ++res.grounded;
      } else {
        throw std::invalid_argument("row has neither \"mask\" nor \"report\"");
      }
    } catch (const ForgeError& e) {
      res.error_kind = e.kind() == ForgeError::Kind::kEmptyMask ? "EmptyMask" : "ForgeError";
      res.error = e.what();
    } catch (const std::exception& e) {
      res.error_kind = "BadManifestRow";
      res.error = e.what();
    }
  });

  std::unique_ptr<OutputTarget> target;
  try {
    target = std::make_unique<OutputTarget>(config.output, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  ErrorLog errors;
  std::size_t r2t = 0, t2r = 0, grounded = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const RowResult& res = results[i];
    for (const std::string& note : res.notes) {
      err << "line " << (*lines)[i].number << " (" << res.id << "): " << note << "\n";
    }
    if (!res.error_kind.empty()) {
      errors.Add((*lines)[i].number, res.id, res.error_kind, res.error);
      continue;
    }
    for (const std::string& rec : res.records) target->stream() << rec << "\n";
    r2t += res.r2t;
    t2r += res.t2r;
    grounded += res.grounded;
  }
  std::ostream& summary = config.output.empty() ? err : out;
  summary << "forged r2t=" << r2t << " t2r=" << t2r << " grounded_report=" << grounded
          << " failed_rows=" << errors.size() << "\n";
  errors.Flush(config, err);
  return errors.empty() ? 0 : 1;
}

int RunCot(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::unique_ptr<ModelTransport> transport;
  ScriptedTransport* scripted = nullptr;
  std::map<Language, CotOptions> options;
  try {
    if (!config.mock.empty()) {
      std::ifstream script(config.mock);
      if (!script) throw std::runtime_error("cannot read mock script " + config.mock);
      auto mock = std::make_unique<ScriptedTransport>(nlohmann::json::parse(script));
      scripted = mock.get();
      transport = std::move(mock);
    } else if (!config.endpoint.empty()) {
      transport = std::make_unique<HttpModelTransport>(
          config.endpoint, std::chrono::milliseconds(config.timeout_ms));
    } else {
      err << "error: cot needs --mock or --endpoint\n";
      return 2;
    }
    for (Language lang : {Language::kEnglish, Language::kChinese, Language::kMixed}) {
      CotOptions opt;
      opt.prompts = config.prompts.empty() ? DefaultCotPrompts(lang)
                                           : LoadCotPrompts(config.prompts, lang);
      opt.retries = config.retries;
      options[lang] = opt;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  const auto lines = ReadLines(config.input, err);
  if (!lines) return 2;
  const Language default_lang = ConfigLanguage(config);

  struct QuestionResult {
    std::string line;
    std::string id;
    bool failed = false;
    bool fallback = false;
    int calls = 0;
    std::string error_kind, error;
  };
  std::vector<QuestionResult> results(lines->size());
  internal::ParallelFor(lines->size(), config.jobs, [&](std::size_t i) {
    QuestionResult& res = results[i];
    try {
      const auto q = nlohmann::json::parse((*lines)[i].text);
      res.id = q.at("id").get<std::string>();
      const std::string question = q.at("question").get<std::string>();
      const std::string image = q.value("image", "");
      Language lang = default_lang;
      if (q.contains("language")) {
        lang = ParseLanguage(q.at("language").get<std::string>()).value_or(lang);
      }
      const CotTrace trace = RunRegionalCot(question, image, *transport, options.at(lang));
      OrderedJson j;
      j["id"] = res.id;
      if (q.contains("reference")) {
        j["task"] = q.value("task", "vqa");
        j["language"] = LanguageCode(lang);
        j["prediction"] = trace.final_response;
        j["reference"] = q.at("reference").get<std::string>();
        if (q.contains("closed")) j["closed"] = q.at("closed").get<bool>();
      }
      const OrderedJson trace_json = CotTraceToJson(trace);
      for (const auto& [key, value] : trace_json.items()) j[key] = value;
      res.line = j.dump();
      res.failed = trace.failed;
      res.fallback = trace.fallback;
      res.calls = trace.detect_attempts + trace.answer_attempts;
      if (trace.failed) {
        res.error_kind = "TransportFailure";
        res.error = trace.error;
      }
    } catch (const std::exception& e) {
      res.failed = true;
      res.error_kind = "BadQuestion";
      res.error = e.what();
    }
  });

  std::unique_ptr<OutputTarget> target;
  try {
    target = std::make_unique<OutputTarget>(config.output, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  ErrorLog errors;
  std::size_t ok = 0, fallback = 0, failed = 0;
  long calls = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const QuestionResult& res = results[i];
    if (!res.line.empty()) target->stream() << res.line << "\n";
    if (res.failed) {
      ++failed;
      errors.Add((*lines)[i].number, res.id, res.error_kind, res.error);
    } else {
      ++ok;
    }
    fallback += res.fallback;
    calls += res.calls;
  }
  std::ostream& summary = config.output.empty() ? err : out;
  summary << "questions=" << results.size() << " ok=" << ok << " fallback=" << fallback
          << " failed=" << failed << " model_calls=" << calls << "\n";
  if (scripted != nullptr && scripted->calls() != static_cast<std::uint64_t>(calls)) {
    err << "warning: mock saw " << scripted->calls() << " calls\n";
  }
  errors.Flush(config, err);
  return errors.empty() ? 0 : 1;
}

}  // namespace regionkit
