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

#include "anonview/harness/csv.h"

#include <fstream>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "harness/text.h"

namespace anonview::harness {

absl::StatusOr<Schema> ParseSchemaDecl(std::string_view decl) {
  std::vector<Attribute> attributes;
  for (std::string_view item : text::Split(decl, ',')) {
    if (text::Trim(item).empty()) continue;
    std::vector<std::string_view> parts = text::Split(item, ':');
    if (parts.size() != 2) {
      return absl::InvalidArgumentError(
          absl::StrCat("schema entry '", std::string(item), "' is not name:kind"));
    }
    const std::string_view name = text::Trim(parts[0]);
    const std::string kind =
        text::Lower(text::Trim(parts[1]));
    Attribute attribute{.name = std::string(name)};
    if (kind == "int" || kind == "integer") {
      attribute.kind = ValueKind::kInteger;
    } else if (kind == "str" || kind == "string") {
      attribute.kind = ValueKind::kString;
    } else {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown kind '", kind, "' for attribute '", std::string(name), "'"));
    }
    attributes.push_back(std::move(attribute));
  }
  if (attributes.empty()) {
    return absl::InvalidArgumentError("schema declares no attributes");
  }
  return Schema::Create(std::move(attributes));
}

std::string FormatSchemaDecl(const Schema& schema) {
  std::vector<std::string> parts;
  for (const Attribute& a : schema.attributes()) {
    parts.push_back(absl::StrCat(a.name, ":", std::string(ValueKindName(a.kind))));
  }
  return absl::StrJoin(parts, ",");
}

absl::StatusOr<std::vector<std::string>> SplitCsvLine(std::string_view line) {
  std::vector<std::string> fields;
  size_t i = 0;
  while (true) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::string field;
    if (i < line.size() && line[i] == '"') {
      ++i;
      bool closed = false;
      while (i < line.size()) {
        if (line[i] == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            field.push_back('"');
            i += 2;
            continue;
          }
          closed = true;
          ++i;
          break;
        }
        field.push_back(line[i++]);
      }
      if (!closed) return absl::InvalidArgumentError("unterminated quote");
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      if (i < line.size() && line[i] != ',') {
        return absl::InvalidArgumentError("text after closing quote");
      }
    } else {
      const size_t end = line.find(',', i);
      field = std::string(text::Trim(
          line.substr(i, end == std::string_view::npos ? line.npos : end - i)));
      i = end == std::string_view::npos ? line.size() : end;
    }
    fields.push_back(std::move(field));
    if (i >= line.size()) break;
    ++i;  // comma
  }
  return fields;
}

std::string FormatCsvField(std::string_view field) {
  const bool needs_quotes =
      field.find_first_of(",\"\n\r") != std::string_view::npos ||
      (!field.empty() && (field.front() == ' ' || field.back() == ' ')) ||
      field.empty();
  if (!needs_quotes) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

absl::StatusOr<Value> ParseValue(std::string_view text, ValueKind kind) {
  if (kind == ValueKind::kString) return Value(std::string(text));
  int64_t parsed = 0;
  if (!text::ParseNumber(text, &parsed)) {
    return absl::InvalidArgumentError(
        absl::StrCat("cannot parse '", std::string(text), "' as int"));
  }
  return Value(parsed);
}

absl::StatusOr<LoadedRelation> ParseRelationCsv(std::string_view contents,
                                                const Schema& schema) {
  std::vector<std::string_view> lines = text::Split(contents, '\n');
  size_t line_no = 0;
  auto next_line = [&]() -> std::optional<std::string_view> {
    while (line_no < lines.size()) {
      std::string_view line = lines[line_no++];
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (!text::Trim(line).empty()) return line;
    }
    return std::nullopt;
  };

  std::optional<std::string_view> header_line = next_line();
  if (!header_line) return absl::InvalidArgumentError("missing header row");
  absl::StatusOr<std::vector<std::string>> header = SplitCsvLine(*header_line);
  if (!header.ok()) return header.status();

  // column_of[attribute] = position in the file.
  std::vector<size_t> column_of(schema.arity(), header->size());
  for (size_t c = 0; c < header->size(); ++c) {
    std::optional<size_t> attribute = schema.IndexOf((*header)[c]);
    if (!attribute) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown attribute '", (*header)[c], "' in header"));
    }
    if (column_of[*attribute] != header->size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("attribute '", (*header)[c], "' appears twice"));
    }
    column_of[*attribute] = c;
  }
  for (size_t a = 0; a < schema.arity(); ++a) {
    if (column_of[a] == header->size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "declared attribute '", schema.attribute(a).name,
          "' missing from header"));
    }
  }

  std::vector<Tuple> tuples;
  size_t row = 0;
  while (std::optional<std::string_view> line = next_line()) {
    ++row;
    absl::StatusOr<std::vector<std::string>> fields = SplitCsvLine(*line);
    if (!fields.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("row ", row, ": ", fields.status().message()));
    }
    if (fields->size() != header->size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("row ", row, ": expected ", header->size(),
                       " fields, found ", fields->size()));
    }
    Tuple tuple;
    tuple.reserve(schema.arity());
    for (size_t a = 0; a < schema.arity(); ++a) {
      absl::StatusOr<Value> value =
          ParseValue((*fields)[column_of[a]], schema.attribute(a).kind);
      if (!value.ok()) {
        return absl::InvalidArgumentError(
            absl::StrCat("row ", row, ", column '", schema.attribute(a).name,
                         "': ", value.status().message()));
      }
      tuple.push_back(*std::move(value));
    }
    tuples.push_back(std::move(tuple));
  }
  LoadedRelation loaded;
  loaded.rows_read = tuples.size();
  absl::StatusOr<Relation> relation =
      Relation::Create(schema, std::move(tuples));
  if (!relation.ok()) return relation.status();
  loaded.relation = *std::move(relation);
  return loaded;
}

absl::StatusOr<LoadedRelation> LoadRelation(const std::string& path,
                                            const Schema& schema) {
  absl::StatusOr<std::string> contents = ReadFile(path);
  if (!contents.ok()) return contents.status();
  return ParseRelationCsv(*contents, schema);
}

std::string FormatRelationCsv(const Schema& schema,
                              std::span<const Tuple> tuples) {
  std::string out;
  std::vector<std::string> fields;
  for (const Attribute& a : schema.attributes()) {
    fields.push_back(FormatCsvField(a.name));
  }
  absl::StrAppend(&out, absl::StrJoin(fields, ","), "\n");
  for (const Tuple& tuple : tuples) {
    fields.clear();
    for (const Value& v : tuple) fields.push_back(FormatCsvField(ValueToString(v)));
    absl::StrAppend(&out, absl::StrJoin(fields, ","), "\n");
  }
  return out;
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::Status WriteFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return absl::UnavailableError(absl::StrCat("cannot write ", path));
  out << contents;
  if (!out) return absl::UnavailableError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

}  // namespace anonview::harness
