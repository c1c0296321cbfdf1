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

// Reading and writing datasets (CSV) and explanation documents (JSON).

#ifndef RANKSHAP_IO_HPP_
#define RANKSHAP_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rankshap/core.hpp"

namespace rankshap {

inline constexpr int kExplanationSchemaVersion = 1;

// Shortest text that parses back to exactly `x`.
std::string format_double(double x);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// RFC 4180 style: comma separated, double-quoted cells may contain commas,
// newlines and doubled quotes. A trailing newline does not add a row.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);
std::string csv_escape(std::string_view cell);

// With `has_ids` unset, the first column is taken as item ids when any of its
// cells is not a number.
Dataset read_dataset_csv(const std::filesystem::path& path,
                         std::optional<bool> has_ids = std::nullopt);
Dataset parse_dataset_csv(std::string_view text,
                          std::optional<bool> has_ids = std::nullopt);
std::string dataset_csv(const Dataset& data);

struct DatasetFingerprint {
  Index n = 0;
  Index d = 0;
  std::vector<std::string> feature_names;
  std::uint64_t content_hash = 0;

  static DatasetFingerprint of(const Dataset& data);
  friend bool operator==(const DatasetFingerprint&,
                         const DatasetFingerprint&) = default;
};

struct ExplanationDocument {
  DatasetFingerprint dataset;
  QoIKind qoi;
  std::string options;
  std::vector<ExplanationVector> records;
};

// All records must share one QoI. An empty list is written with the
// fallback `qoi` and `options`.
ExplanationDocument make_document(const Dataset& data,
                                  std::vector<ExplanationVector> expls,
                                  QoIKind qoi = QoIKind::score(),
                                  std::string options = "");

// Deterministic text: fixed key order, shortest round-trip numbers.
std::string document_json(const ExplanationDocument& doc,
                          const Dataset* data = nullptr);
ExplanationDocument parse_document_json(std::string_view text);

void write_explanations(const ExplanationDocument& doc, const Dataset& data,
                        const std::filesystem::path& path);
ExplanationDocument read_explanations(const std::filesystem::path& path);

// Throws ValidationError naming the first differing attribute.
void check_fingerprint(const ExplanationDocument& doc, const Dataset& data);

}  // namespace rankshap

#endif  // RANKSHAP_IO_HPP_
