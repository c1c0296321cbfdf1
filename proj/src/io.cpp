/*
 * Copyright 2026 The RankSHAP Authors.
 *
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

#include "rankshap/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace rankshap {
namespace {

using Json = nlohmann::ordered_json;

bool is_number_cell(std::string_view cell) {
  while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) {
    cell.remove_prefix(1);
  }
  while (!cell.empty() &&
         (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r')) {
    cell.remove_suffix(1);
  }
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  return !cell.empty() && ec == std::errc() && ptr == end;
}

std::string hex64(std::uint64_t x) {
  std::array<char, 17> buf{};
  std::snprintf(buf.data(), buf.size(), "%016llx",
                static_cast<unsigned long long>(x));
  return buf.data();
}

const Json& field(const Json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ValidationError(std::string("explanation document: missing '") +
                          key + "'");
  }
  return obj.at(key);
}

double finite_number(const Json& value, const char* what) {
  if (!value.is_number()) {
    throw ValidationError(std::string("explanation document: '") + what +
                          "' must be a number");
  }
  return value.get<double>();
}

Json number_json(double x) {
  if (!std::isfinite(x)) {
    throw ComputationError("cannot serialize a non-finite value");
  }
  return x;
}

}  // namespace

std::string format_double(double x) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading '" + path.string() + "'");
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false;
  bool row_open = false;
  for (std::size_t p = 0; p < text.size(); ++p) {
    const char c = text[p];
    if (quoted) {
      if (c == '"') {
        if (p + 1 < text.size() && text[p + 1] == '"') {
          cell += '"';
          ++p;
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
      continue;
    }
    switch (c) {
      case '"': quoted = true; row_open = true; break;
      case ',':
        row.push_back(std::move(cell));
        cell.clear();
        row_open = true;
        break;
      case '\r': break;
      case '\n':
        if (row_open || !cell.empty()) {
          row.push_back(std::move(cell));
          rows.push_back(std::move(row));
        }
        cell.clear();
        row.clear();
        row_open = false;
        break;
      default: cell += c; row_open = true;
    }
  }
  if (quoted) throw ValidationError("CSV ends inside a quoted cell");
  if (row_open || !cell.empty()) {
    row.push_back(std::move(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string csv_escape(std::string_view cell) {
  if (cell.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(cell);
  }
  std::string out = "\"";
  for (const char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

Dataset parse_dataset_csv(std::string_view text, std::optional<bool> has_ids) {
  const auto raw = parse_csv(text);
  if (!has_ids) {
    bool ids = false;
    for (std::size_t r = 1; r < raw.size() && !ids; ++r) {
      ids = !raw[r].empty() && !is_number_cell(raw[r][0]);
    }
    has_ids = ids;
  }
  return validate_dataset(raw, *has_ids);
}

Dataset read_dataset_csv(const std::filesystem::path& path,
                         std::optional<bool> has_ids) {
  const std::string text = read_text_file(path);
  try {
    return parse_dataset_csv(text, has_ids);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::string dataset_csv(const Dataset& data) {
  std::string out;
  if (data.has_ids()) out += "id,";
  for (std::size_t j = 0; j < data.feature_names().size(); ++j) {
    if (j > 0) out += ',';
    out += csv_escape(data.feature_names()[j]);
  }
  out += '\n';
  for (Index i = 0; i < data.size(); ++i) {
    if (data.has_ids()) out += csv_escape(data.label(i)) + ',';
    for (Index j = 0; j < data.num_features(); ++j) {
      if (j > 0) out += ',';
      out += format_double(data.values()(i, j));
    }
    out += '\n';
  }
  return out;
}

DatasetFingerprint DatasetFingerprint::of(const Dataset& data) {
  return {data.size(), data.num_features(), data.feature_names(),
          data.content_hash()};
}

ExplanationDocument make_document(const Dataset& data,
                                  std::vector<ExplanationVector> expls,
                                  QoIKind qoi, std::string options) {
  ExplanationDocument doc;
  doc.dataset = DatasetFingerprint::of(data);
  if (!expls.empty()) {
    qoi = expls.front().qoi;
    options = expls.front().options_fingerprint;
    for (const auto& e : expls) {
      if (!(e.qoi == qoi) || e.options_fingerprint != options) {
        throw ValidationError("a document holds explanations of one QoI and "
                              "one option set");
      }
      if (e.contributions.size() != data.num_features()) {
        throw ValidationError("explanation length does not match the dataset");
      }
    }
  }
  doc.qoi = qoi;
  doc.options = std::move(options);
  doc.records = std::move(expls);
  return doc;
}

std::string document_json(const ExplanationDocument& doc, const Dataset* data) {
  Json j;
  j["schema_version"] = kExplanationSchemaVersion;
  j["dataset"] = {{"n", doc.dataset.n},
                  {"d", doc.dataset.d},
                  {"feature_names", doc.dataset.feature_names},
                  {"content_hash", hex64(doc.dataset.content_hash)}};
  Json qoi = {{"kind", doc.qoi.name()}};
  if (doc.qoi.k()) qoi["k"] = *doc.qoi.k();
  j["qoi"] = qoi;
  j["options"] = doc.options;
  Json records = Json::array();
  const bool ids = data && data->has_ids();
  for (const auto& e : doc.records) {
    Json r;
    r["index"] = e.subject;
    if (ids) r["id"] = data->label(e.subject);
    if (e.partner) {
      r["partner"] = *e.partner;
      if (ids) r["partner_id"] = data->label(*e.partner);
    }
    Json c = Json::array();
    for (Index t = 0; t < e.contributions.size(); ++t) {
      c.push_back(number_json(e.contributions(t)));
    }
    r["contributions"] = std::move(c);
    r["baseline"] = number_json(e.baseline);
    r["reconstruction"] = number_json(e.reconstruction);
    records.push_back(std::move(r));
  }
  j["records"] = std::move(records);
  return j.dump(2) + "\n";
}

ExplanationDocument parse_document_json(std::string_view text) try {
  const Json j = Json::parse(text);
  const auto version = field(j, "schema_version");
  if (!version.is_number_integer() ||
      version.get<int>() != kExplanationSchemaVersion) {
    throw ValidationError("explanation document: unsupported schema_version " +
                          version.dump());
  }
  ExplanationDocument doc;
  const Json& ds = field(j, "dataset");
  doc.dataset.n = field(ds, "n").get<Index>();
  doc.dataset.d = field(ds, "d").get<Index>();
  doc.dataset.feature_names =
      field(ds, "feature_names").get<std::vector<std::string>>();
  const auto hash = field(ds, "content_hash").get<std::string>();
  doc.dataset.content_hash = std::stoull(hash, nullptr, 16);

  const Json& q = field(j, "qoi");
  std::optional<Index> k;
  if (q.contains("k")) k = q.at("k").get<Index>();
  doc.qoi = QoIKind::parse(field(q, "kind").get<std::string>(), k);
  doc.options = field(j, "options").get<std::string>();

  const Json& records = field(j, "records");
  if (!records.is_array()) {
    throw ValidationError("explanation document: 'records' must be a list");
  }
  for (const Json& r : records) {
    ExplanationVector e;
    e.qoi = doc.qoi;
    e.options_fingerprint = doc.options;
    e.subject = field(r, "index").get<Index>();
    if (r.contains("partner")) e.partner = r.at("partner").get<Index>();
    const Json& c = field(r, "contributions");
    if (!c.is_array() || static_cast<Index>(c.size()) != doc.dataset.d) {
      throw ValidationError("explanation document: record " +
                            std::to_string(e.subject) + " has " +
                            std::to_string(c.size()) + " contributions, "
                            "expected " + std::to_string(doc.dataset.d));
    }
    e.contributions.resize(doc.dataset.d);
    for (Index t = 0; t < doc.dataset.d; ++t) {
      e.contributions(t) =
          finite_number(c[static_cast<std::size_t>(t)], "contributions");
    }
    e.baseline = finite_number(field(r, "baseline"), "baseline");
    e.reconstruction =
        finite_number(field(r, "reconstruction"), "reconstruction");
    if (e.subject < 0 || e.subject >= doc.dataset.n ||
        (e.partner && (*e.partner < 0 || *e.partner >= doc.dataset.n))) {
      throw ValidationError("explanation document: item index out of range");
    }
    if (doc.qoi.is_pairwise() != e.partner.has_value()) {
      throw ValidationError(
          "explanation document: partner must be present exactly for "
          "pairwise QoIs");
    }
    doc.records.push_back(std::move(e));
  }
  return doc;
} catch (const nlohmann::json::exception& e) {
  throw ValidationError(std::string("explanation document: ") + e.what());
} catch (const std::invalid_argument&) {
  throw ValidationError("explanation document: malformed content_hash");
} catch (const std::out_of_range&) {
  throw ValidationError("explanation document: malformed content_hash");
}

void write_explanations(const ExplanationDocument& doc, const Dataset& data,
                        const std::filesystem::path& path) {
  write_text_file(path, document_json(doc, &data));
}

ExplanationDocument read_explanations(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return parse_document_json(text);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void check_fingerprint(const ExplanationDocument& doc, const Dataset& data) {
  const auto actual = DatasetFingerprint::of(data);
  const auto& want = doc.dataset;
  if (want.n != actual.n || want.d != actual.d) {
    throw ValidationError("dataset shape " + std::to_string(actual.n) + "x" +
                          std::to_string(actual.d) +
                          " does not match the explanation document (" +
                          std::to_string(want.n) + "x" +
                          std::to_string(want.d) + ")");
  }
  if (want.feature_names != actual.feature_names) {
    throw ValidationError(
        "feature names do not match the explanation document");
  }
  if (want.content_hash != actual.content_hash) {
    throw ValidationError(
        "dataset content hash does not match the explanation document");
  }
}

}  // namespace rankshap
