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

#include "anonview/harness/published_files.h"

#include <algorithm>
#include <filesystem>
#include <random>

#include "absl/strings/str_cat.h"
#include "anonview/harness/csv.h"
#include "anonview/rng.h"
#include "json.hpp"

namespace anonview::harness {
namespace {

using nlohmann::json;

std::string JoinPath(const std::string& dir, const char* file) {
  return (std::filesystem::path(dir) / file).string();
}

}  // namespace

std::string DomainToJson(const DomainDescriptor& domain) {
  json attributes = json::array();
  for (size_t i = 0; i < domain.arity(); ++i) {
    const Attribute& a = domain.schema().attribute(i);
    json values = json::array();
    for (const Value& v : domain.values(i)) {
      if (const auto* x = std::get_if<int64_t>(&v)) {
        values.push_back(*x);
      } else {
        values.push_back(std::get<std::string>(v));
      }
    }
    attributes.push_back({{"name", a.name},
                          {"kind", std::string(ValueKindName(a.kind))},
                          {"values", std::move(values)}});
  }
  json doc = {{"attributes", std::move(attributes)}, {"size", domain.size()}};
  return doc.dump(2) + "\n";
}

absl::StatusOr<DomainDescriptor> DomainFromJson(std::string_view text) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.contains("attributes") ||
      !doc["attributes"].is_array()) {
    return absl::InvalidArgumentError("domain document is malformed");
  }
  std::vector<Attribute> attributes;
  std::vector<std::vector<Value>> values;
  for (const json& entry : doc["attributes"]) {
    if (!entry.contains("name") || !entry.contains("kind") ||
        !entry.contains("values") || !entry["values"].is_array()) {
      return absl::InvalidArgumentError("domain attribute entry is malformed");
    }
    Attribute attribute{.name = entry["name"].get<std::string>()};
    const std::string kind = entry["kind"].get<std::string>();
    if (kind == "int") {
      attribute.kind = ValueKind::kInteger;
    } else if (kind == "str") {
      attribute.kind = ValueKind::kString;
    } else {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown attribute kind '", kind, "'"));
    }
    std::vector<Value> list;
    for (const json& v : entry["values"]) {
      if (attribute.kind == ValueKind::kInteger && v.is_number_integer()) {
        list.emplace_back(v.get<int64_t>());
      } else if (attribute.kind == ValueKind::kString && v.is_string()) {
        list.emplace_back(v.get<std::string>());
      } else {
        return absl::InvalidArgumentError(absl::StrCat(
            "domain value of '", attribute.name, "' has the wrong kind"));
      }
    }
    attributes.push_back(std::move(attribute));
    values.push_back(std::move(list));
  }
  absl::StatusOr<Schema> schema = Schema::Create(std::move(attributes));
  if (!schema.ok()) return schema.status();
  return DomainDescriptor::Create(*std::move(schema), std::move(values));
}

std::string ParamsToJson(const PublishedView& view,
                         const PublishMetadata& metadata) {
  json doc = {
      {"alpha", view.params.alpha},
      {"beta", view.params.beta},
      {"seed", view.seed},
      {"n", metadata.n},
      {"m", view.domain.size()},
      {"view_size", view.view.size()},
      {"expected_view_size",
       ExpectedViewSize(metadata.n, view.domain.size(), view.params)},
  };
  if (metadata.planner) {
    const PlannerInputs& p = *metadata.planner;
    doc["planner"] = {{"k", p.k},
                      {"gamma", p.gamma},
                      {"policy", std::string(BetaPolicyName(p.policy))},
                      {"d", p.d},
                      {"r", p.r},
                      {"failure_prob", p.failure_prob}};
  } else {
    doc["planner"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

std::string ViewToCsv(const PublishedView& view) {
  std::vector<DomainIndex> order = view.view;
  std::mt19937_64 engine = StreamEngine(view.seed, Stream::kShuffle);
  std::shuffle(order.begin(), order.end(), engine);
  std::vector<Tuple> tuples;
  tuples.reserve(order.size());
  for (DomainIndex code : order) tuples.push_back(view.domain.Decode(code));
  return FormatRelationCsv(view.domain.schema(), tuples);
}

absl::Status WritePublishedView(const std::string& dir,
                                const PublishedView& view,
                                const PublishMetadata& metadata) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return absl::UnavailableError(
        absl::StrCat("cannot create ", dir, ": ", ec.message()));
  }
  if (absl::Status s = WriteFile(JoinPath(dir, kViewFile), ViewToCsv(view));
      !s.ok()) {
    return s;
  }
  if (absl::Status s =
          WriteFile(JoinPath(dir, kDomainFile), DomainToJson(view.domain));
      !s.ok()) {
    return s;
  }
  return WriteFile(JoinPath(dir, kParamsFile), ParamsToJson(view, metadata));
}

absl::StatusOr<LoadedView> ReadPublishedView(const std::string& dir) {
  absl::StatusOr<std::string> domain_text = ReadFile(JoinPath(dir, kDomainFile));
  if (!domain_text.ok()) return domain_text.status();
  absl::StatusOr<DomainDescriptor> domain = DomainFromJson(*domain_text);
  if (!domain.ok()) return domain.status();

  absl::StatusOr<std::string> params_text = ReadFile(JoinPath(dir, kParamsFile));
  if (!params_text.ok()) return params_text.status();
  json params = json::parse(*params_text, nullptr, false);
  if (params.is_discarded() || !params.contains("alpha") ||
      !params.contains("beta")) {
    return absl::InvalidArgumentError("params document is malformed");
  }

  absl::StatusOr<LoadedRelation> rows =
      LoadRelation(JoinPath(dir, kViewFile), domain->schema());
  if (!rows.ok()) return rows.status();
  absl::StatusOr<std::vector<DomainIndex>> codes =
      domain->EncodeRelation(rows->relation);
  if (!codes.ok()) return codes.status();

  LoadedView loaded;
  loaded.view.domain = *std::move(domain);
  loaded.view.view = *std::move(codes);
  loaded.view.params = {.alpha = params["alpha"].get<double>(),
                        .beta = params["beta"].get<double>()};
  if (absl::Status s = loaded.view.params.Validate(); !s.ok()) return s;
  if (params.contains("seed") && params["seed"].is_number_unsigned()) {
    loaded.view.seed = params["seed"].get<uint64_t>();
  }
  if (params.contains("n") && params["n"].is_number_unsigned()) {
    loaded.metadata.n = params["n"].get<uint64_t>();
  }
  if (params.contains("planner") && params["planner"].is_object()) {
    const json& p = params["planner"];
    PlannerInputs inputs;
    inputs.k = p.value("k", 0.0);
    inputs.gamma = p.value("gamma", 0.0);
    inputs.d = p.value("d", 0.0);
    inputs.r = p.value("r", 0.0);
    inputs.failure_prob = p.value("failure_prob", 0.05);
    absl::StatusOr<BetaPolicy> policy =
        ParseBetaPolicy(p.value("policy", std::string("minimal-beta")));
    if (!policy.ok()) return policy.status();
    inputs.policy = *policy;
    loaded.metadata.planner = inputs;
  }
  return loaded;
}

}  // namespace anonview::harness
