// Copyright 2026 The anonview Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Comma-separated relation files with a header row.

#ifndef ANONVIEW_HARNESS_CSV_H_
#define ANONVIEW_HARNESS_CSV_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "anonview/core_model.h"

namespace anonview::harness {

// "name:kind,name:kind", kind one of int, integer, str, string.
absl::StatusOr<Schema> ParseSchemaDecl(std::string_view decl);
std::string FormatSchemaDecl(const Schema& schema);

// Splits one CSV record. Fields may be double-quoted ("" escapes a quote);
// unquoted fields are trimmed of surrounding blanks.
absl::StatusOr<std::vector<std::string>> SplitCsvLine(std::string_view line);
std::string FormatCsvField(std::string_view field);

absl::StatusOr<Value> ParseValue(std::string_view text, ValueKind kind);

struct LoadedRelation {
  Relation relation;
  size_t rows_read = 0;  // before duplicates collapsed
};

// Columns are matched to the schema by header name; every declared
// attribute must be present and every header column declared.
absl::StatusOr<LoadedRelation> LoadRelation(const std::string& path,
                                            const Schema& schema);

absl::StatusOr<LoadedRelation> ParseRelationCsv(std::string_view contents,
                                                const Schema& schema);

// Header plus one line per tuple, in the given order.
std::string FormatRelationCsv(const Schema& schema,
                              std::span<const Tuple> tuples);

absl::StatusOr<std::string> ReadFile(const std::string& path);
absl::Status WriteFile(const std::string& path, std::string_view contents);

}  // namespace anonview::harness

#endif  // ANONVIEW_HARNESS_CSV_H_
