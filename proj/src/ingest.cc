/*
 * Copyright 2026 The Seedstab Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "seedstab/ingest.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

namespace seedstab {
namespace {

using nlohmann::json;

std::string Location(std::string_view source, std::size_t line,
                     std::size_t column) {
  return std::string(source) + ":" + std::to_string(line) + ":" +
         std::to_string(column);
}

bool IsNonFiniteSpelling(std::string_view s) {
  std::string lower;
  for (char c : s) {
    if (c == '+' || c == '-') {
      if (lower.empty()) continue;
    }
    lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return lower == "nan" || lower == "inf" || lower == "infinity";
}

Output OutputFromJson(const json& value, TaskKind kind, const std::string& id,
                      std::string_view source, std::size_t line) {
  const auto where_fn = [&] { return Location(source, line, 1); };
  auto mismatch = [&](std::string_view expected) -> Error {
    return Error(ErrorCode::kVariantMismatch, id,
                 where_fn() + ": " + std::string(TaskKindName(kind)) +
                     " output must be " + std::string(expected) + ", got " +
                     value.type_name());
  };
  switch (kind) {
    case TaskKind::kClassification:
      if (value.is_string()) return Label{value.get<std::string>()};
      if (value.is_number_integer()) return Label{value.dump()};
      throw mismatch("a string or an integer");
    case TaskKind::kRegression:
      if (value.is_number()) {
        const double v = value.get<double>();
        if (!std::isfinite(v)) {
          throw Error(ErrorCode::kParseError, id,
                      where_fn() + ": non-finite scalar");
        }
        return Scalar{v};
      }
      if (value.is_string() && IsNonFiniteSpelling(value.get<std::string>())) {
        throw Error(ErrorCode::kParseError, id,
                    where_fn() + ": non-finite scalar \"" +
                        value.get<std::string>() + "\"");
      }
      throw mismatch("a number");
    case TaskKind::kSequenceLabeling: {
      if (!value.is_array()) throw mismatch("an array of strings");
      if (value.empty()) {
        throw Error(ErrorCode::kParseError, id, where_fn() + ": empty token sequence");
      }
      TokenSeq seq;
      for (const json& t : value) {
        if (!t.is_string()) throw mismatch("an array of strings");
        seq.tokens.push_back(t.get<std::string>());
      }
      return seq;
    }
    case TaskKind::kTextGeneration:
    case TaskKind::kQa:
      if (value.is_string()) return MakeText(value.get<std::string>());
      throw mismatch("a string");
  }
  throw mismatch("a known variant");
}

// Splits one CSV line into fields; double quotes may wrap a field and "" is
// an escaped quote inside one.
std::vector<std::string> SplitCsv(std::string_view line,
                                  const std::string& where) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool field_was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"' && field.empty() && !field_was_quoted) {
      quoted = true;
      field_was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      field_was_quoted = false;
    } else {
      field.push_back(c);
    }
  }
  if (quoted) {
    throw Error(ErrorCode::kParseError, "", where + ": unterminated quote");
  }
  fields.push_back(std::move(field));
  return fields;
}

Output OutputFromCsv(const std::string& field, TaskKind kind,
                     const std::string& id, std::string_view source,
                     std::size_t line) {
  if (kind == TaskKind::kClassification) return Label{field};
  const auto where_fn = [&] { return Location(source, line, 1); };
  double v = 0.0;
  const char* begin = field.data();
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || field.empty()) {
    if (IsNonFiniteSpelling(field)) {
      throw Error(ErrorCode::kParseError, id,
                  where_fn() + ": non-finite scalar \"" + field + "\"");
    }
    throw Error(ErrorCode::kParseError, id,
                where_fn() + ": \"" + field + "\" is not a number");
  }
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::kParseError, id,
                where_fn() + ": non-finite scalar \"" + field + "\"");
  }
  return Scalar{v};
}

// Streams one JSON-lines record without building a document for the whole
// line. Only the output value is materialized.
class RecordHandler : public nlohmann::json_sax<json> {
 public:
  bool null() override { return Value(json(nullptr)); }
  bool boolean(bool v) override { return Value(json(v)); }
  bool number_integer(number_integer_t v) override { return Value(json(v)); }
  bool number_unsigned(number_unsigned_t v) override { return Value(json(v)); }
  bool number_float(number_float_t v, const string_t&) override {
    return Value(json(v));
  }
  bool string(string_t& v) override {
    if (depth_ == 1 && key_ == Key::kId) {
      if (has_id_) return Shape();
      has_id_ = true;
      id_is_string_ = true;
      id_ = std::move(v);
      return true;
    }
    return Value(json(std::move(v)));
  }
  bool binary(binary_t&) override { return Value(json()); }

  bool start_object(std::size_t) override {
    if (depth_ == 0) {
      depth_ = 1;
      return true;
    }
    return Open(json::object());
  }
  bool key(string_t& k) override {
    if (depth_ == 1) {
      if (k == "id") {
        key_ = Key::kId;
      } else if (k == "output") {
        key_ = Key::kOutput;
      } else {
        return Shape();
      }
      return true;
    }
    pending_key_ = std::move(k);
    return true;
  }
  bool end_object() override { return Close(); }
  bool start_array(std::size_t) override {
    if (depth_ == 0) return Shape();
    return Open(json::array());
  }
  bool end_array() override { return Close(); }

  bool parse_error(std::size_t position, const std::string&,
                   const nlohmann::detail::exception& e) override {
    error_position_ = position;
    error_ = e.what();
    return false;
  }

  // Empty when the line parsed; otherwise the parser message.
  const std::string& error() const { return error_; }
  std::size_t error_position() const { return error_position_; }
  bool shape_ok() const { return shape_ok_ && has_id_ && has_output_; }
  bool id_is_string() const { return id_is_string_; }
  std::string& id() { return id_; }
  const json& output() const { return output_; }

 private:
  enum class Key { kNone, kId, kOutput };

  bool Shape() {
    shape_ok_ = false;
    return false;
  }

  // Top-level field value or element inside the output value.
  bool Value(json v) {
    if (depth_ == 0) return Shape();
    if (depth_ == 1) {
      if (key_ == Key::kId) {
        if (has_id_) return Shape();
        has_id_ = true;
        return true;
      }
      if (has_output_) return Shape();
      has_output_ = true;
      output_ = std::move(v);
      return true;
    }
    Insert(std::move(v));
    return true;
  }

  void Insert(json v) {
    json& parent = *stack_.back();
    if (parent.is_array()) {
      parent.push_back(std::move(v));
    } else {
      parent[pending_key_] = std::move(v);
    }
  }

  bool Open(json container) {
    if (depth_ == 1) {
      if (key_ == Key::kId) {
        if (has_id_) return Shape();
        has_id_ = true;
        output_ignored_ = std::move(container);
        stack_.push_back(&output_ignored_);
      } else {
        if (has_output_) return Shape();
        has_output_ = true;
        output_ = std::move(container);
        stack_.push_back(&output_);
      }
    } else {
      Insert(std::move(container));
      json& parent = *stack_.back();
      stack_.push_back(parent.is_array() ? &parent.back()
                                         : &parent[pending_key_]);
    }
    ++depth_;
    return true;
  }

  bool Close() {
    if (depth_ > 1) stack_.pop_back();
    --depth_;
    return true;
  }

  std::size_t depth_ = 0;
  Key key_ = Key::kNone;
  bool shape_ok_ = true;
  bool has_id_ = false;
  bool has_output_ = false;
  bool id_is_string_ = false;
  std::string id_;
  std::string pending_key_;
  json output_;
  json output_ignored_;
  std::vector<json*> stack_;
  std::string error_;
  std::size_t error_position_ = 0;
};

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError, path.string(), "cannot open file");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

RecordFormat FormatFor(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? RecordFormat::kCsv
                                    : RecordFormat::kJsonLines;
}

std::vector<PredictionRecord> LoadRecords(const std::filesystem::path& path,
                                          TaskKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError, path.string(), "cannot open file");
  }
  return ParseRecords(in, kind, FormatFor(path), path.string());
}

// 1-based line and column of a byte offset.
std::pair<std::size_t, std::size_t> LineColumn(std::string_view text,
                                               std::size_t offset) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

[[noreturn]] void SchemaFail(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::kSchemaError, field, why);
}

bool MetricFits(MetricKind metric, OutputVariant v) {
  switch (metric) {
    case MetricKind::kAccuracy:
      return v != OutputVariant::kScalar;
    case MetricKind::kPrecision:
    case MetricKind::kRecall:
    case MetricKind::kF1:
    case MetricKind::kMcc:
      return v == OutputVariant::kLabel || v == OutputVariant::kTokenSeq;
    case MetricKind::kMae:
    case MetricKind::kMse:
    case MetricKind::kPearson:
    case MetricKind::kSpearman:
      return v == OutputVariant::kScalar;
    case MetricKind::kExactMatch:
    case MetricKind::kTokenF1:
      return v == OutputVariant::kText;
  }
  return false;
}

bool ScorerFits(const ScorerSpec& scorer, OutputVariant v) {
  switch (scorer.kind) {
    case ScorerKind::kIndicator:
      return true;
    case ScorerKind::kTokenMean:
      return v == OutputVariant::kTokenSeq;
    case ScorerKind::kMetricBased:
      switch (*scorer.metric) {
        case MetricKind::kAccuracy: return true;
        case MetricKind::kMae:
        case MetricKind::kMse: return v == OutputVariant::kScalar;
        case MetricKind::kExactMatch:
        case MetricKind::kTokenF1: return v == OutputVariant::kText;
        default: return false;
      }
  }
  return false;
}

}  // namespace

std::vector<PredictionRecord> ParseRecords(std::istream& in, TaskKind kind,
                                           RecordFormat format,
                                           std::string_view source) {
  if (format == RecordFormat::kCsv && kind != TaskKind::kClassification &&
      kind != TaskKind::kRegression) {
    throw Error(ErrorCode::kSchemaError, std::string(source),
                "CSV input is accepted for classification and regression only");
  }
  std::vector<PredictionRecord> records;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::string id;
    Output output;
    if (format == RecordFormat::kJsonLines) {
      RecordHandler handler;
      const bool parsed = json::sax_parse(line, &handler);
      if (!handler.error().empty()) {
        throw Error(ErrorCode::kParseError,
                    Location(source, line_no, handler.error_position()),
                    handler.error());
      }
      if (!parsed || !handler.shape_ok()) {
        throw Error(ErrorCode::kParseError, Location(source, line_no, 1),
                    "expected an object with exactly the fields id and output");
      }
      if (!handler.id_is_string() || handler.id().empty()) {
        throw Error(ErrorCode::kParseError, Location(source, line_no, 1),
                    "id must be a non-empty string");
      }
      id = std::move(handler.id());
      output = OutputFromJson(handler.output(), kind, id, source, line_no);
    } else {
      const std::string where = Location(source, line_no, 1);
      std::vector<std::string> fields = SplitCsv(line, where);
      if (records.empty() && ids.empty() && fields.size() == 2 &&
          fields[0] == "id" && fields[1] == "output") {
        continue;
      }
      if (fields.size() != 2) {
        throw Error(ErrorCode::kParseError, where,
                    "expected 2 CSV fields, got " + std::to_string(fields.size()));
      }
      if (fields[0].empty()) {
        throw Error(ErrorCode::kParseError, where, "empty id");
      }
      id = std::move(fields[0]);
      output = OutputFromCsv(fields[1], kind, id, source, line_no);
    }
    if (!ids.insert(id).second) {
      throw Error(ErrorCode::kDuplicateId, id, Location(source, line_no, 1));
    }
    records.push_back({std::move(id), std::move(output)});
  }
  if (records.empty()) {
    throw Error(ErrorCode::kEmptyFile, std::string(source), "no records");
  }
  return records;
}

Run LoadRun(const std::filesystem::path& path, TaskKind kind,
            std::int64_t seed, std::string task) {
  return Run{seed, std::move(task), LoadRecords(path, kind)};
}

GoldLabels LoadGold(const std::filesystem::path& path, TaskKind kind) {
  GoldLabels gold;
  for (PredictionRecord& r : LoadRecords(path, kind)) {
    gold.emplace(std::move(r.example_id), std::move(r.output));
  }
  return gold;
}

EvaluationManifest ParseManifest(std::string_view text,
                                 const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] =
        LineColumn(text, e.byte == 0 ? 0 : e.byte - 1);
    throw Error(ErrorCode::kParseError,
                std::to_string(line) + ":" + std::to_string(column), e.what());
  }
  if (!doc.is_object()) SchemaFail("", "manifest must be a JSON object");

  static const std::set<std::string> kFields = {
      "task", "task_kind", "metric", "scorer", "gold_path", "runs",
      "train_size"};
  for (const auto& [key, unused] : doc.items()) {
    if (!kFields.contains(key)) SchemaFail(key, "unknown field");
  }
  auto require_string = [&](const std::string& field) {
    if (!doc.contains(field)) SchemaFail(field, "missing required field");
    const json& v = doc.at(field);
    if (!v.is_string() || v.get<std::string>().empty()) {
      SchemaFail(field, "must be a non-empty string");
    }
    return v.get<std::string>();
  };

  EvaluationManifest m;
  m.task = require_string("task");
  const std::string kind_name = require_string("task_kind");
  auto kind = ParseTaskKind(kind_name);
  if (!kind) SchemaFail("task_kind", "unknown task kind '" + kind_name + "'");
  m.task_kind = *kind;
  const std::string metric_name = require_string("metric");
  auto metric = ParseMetricKind(metric_name);
  if (!metric) SchemaFail("metric", "unknown metric '" + metric_name + "'");
  m.metric = *metric;
  m.scorer = ParseScorerSpec(require_string("scorer"));
  m.gold_path = base_dir / require_string("gold_path");

  const OutputVariant variant = RequiredVariant(m.task_kind);
  if (!MetricFits(m.metric, variant)) {
    SchemaFail("metric", metric_name + " does not apply to " + kind_name);
  }
  if (!ScorerFits(m.scorer, variant)) {
    SchemaFail("scorer", ScorerSpecName(m.scorer) + " does not apply to " +
                             kind_name);
  }

  if (doc.contains("train_size")) {
    const json& ts = doc.at("train_size");
    if (!ts.is_number_integer() || ts.get<std::int64_t>() <= 0) {
      SchemaFail("train_size", "must be a positive integer");
    }
    m.train_size = ts.get<std::int64_t>();
  }

  if (!doc.contains("runs")) SchemaFail("runs", "missing required field");
  const json& runs = doc.at("runs");
  if (!runs.is_array() || runs.empty()) {
    SchemaFail("runs", "must be a non-empty array");
  }
  std::set<std::int64_t> seeds;
  for (const json& r : runs) {
    if (!r.is_object()) SchemaFail("runs", "entries must be objects");
    for (const auto& [key, unused] : r.items()) {
      if (key != "seed" && key != "path") SchemaFail("runs." + key, "unknown field");
    }
    if (!r.contains("seed") || !r.at("seed").is_number_integer()) {
      SchemaFail("runs.seed", "must be an integer");
    }
    if (!r.contains("path") || !r.at("path").is_string() ||
        r.at("path").get<std::string>().empty()) {
      SchemaFail("runs.path", "must be a non-empty string");
    }
    const auto seed = r.at("seed").get<std::int64_t>();
    if (!seeds.insert(seed).second) {
      throw Error(ErrorCode::kDuplicateSeed, std::to_string(seed),
                  "seed listed more than once in the manifest");
    }
    m.runs.push_back({seed, base_dir / r.at("path").get<std::string>()});
  }
  return m;
}

EvaluationManifest LoadManifest(const std::filesystem::path& path) {
  const std::string text = ReadFile(path);
  try {
    return ParseManifest(text, path.parent_path());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kParseError) throw;
    throw Error(e.code(), path.string() + ":" + e.subject(), e.what());
  }
}

namespace {

// Orders records by id, moving each record once.
void SortById(std::vector<PredictionRecord>& records) {
  const auto by_id = [](const PredictionRecord& a, const PredictionRecord& b) {
    return a.example_id < b.example_id;
  };
  if (std::is_sorted(records.begin(), records.end(), by_id)) return;
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return records[a].example_id < records[b].example_id;
  });
  std::vector<PredictionRecord> sorted;
  sorted.reserve(records.size());
  for (std::size_t i : order) sorted.push_back(std::move(records[i]));
  records = std::move(sorted);
}

}  // namespace

AlignedRunSet Assemble(const EvaluationManifest& manifest) {
  AlignedRunSet set;
  set.task = manifest.task;
  set.task_kind = manifest.task_kind;
  set.train_size = manifest.train_size;
  set.gold = LoadGold(manifest.gold_path, manifest.task_kind);
  for (const RunSource& source : manifest.runs) {
    Run run = LoadRun(source.path, manifest.task_kind, source.seed,
                      manifest.task);
    SortById(run.records);
    set.runs.push_back(std::move(run));
  }
  std::sort(set.runs.begin(), set.runs.end(),
            [](const Run& a, const Run& b) { return a.seed < b.seed; });
  return ValidateRunSet(std::move(set));
}

namespace {

json OutputToJson(const Output& output) {
  return std::visit(
      [](const auto& o) -> json {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, Label>) {
          return o.value;
        } else if constexpr (std::is_same_v<T, Scalar>) {
          return o.value;
        } else {
          return o.tokens;
        }
      },
      output);
}

}  // namespace

std::string SerializeRunSet(const AlignedRunSet& set) {
  json doc;
  doc["task"] = set.task;
  doc["task_kind"] = std::string(TaskKindName(set.task_kind));
  doc["train_size"] =
      set.train_size.has_value() ? json(*set.train_size) : json(nullptr);
  json gold = json::array();
  for (const auto& [id, output] : set.gold) {
    gold.push_back({{"id", id}, {"output", OutputToJson(output)}});
  }
  doc["gold"] = std::move(gold);
  json runs = json::array();
  for (const Run& run : set.runs) {
    json records = json::array();
    for (const PredictionRecord& r : run.records) {
      records.push_back({{"id", r.example_id}, {"output", OutputToJson(r.output)}});
    }
    runs.push_back({{"seed", run.seed}, {"records", std::move(records)}});
  }
  doc["runs"] = std::move(runs);
  return doc.dump();
}

}  // namespace seedstab
