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

// Text form of conjunctive counting queries:
//
//   query     := <empty> | predicate ("and" predicate)*
//   predicate := attr "=" value
//              | attr "in" "{" value ("," value)* "}"
//              | attr "in" "[" int "," int "]"
//              | attr ("<" | "<=" | ">" | ">=") int
//
// Values are bare words or double-quoted strings. The empty query selects
// the whole domain.

#ifndef ANONVIEW_HARNESS_QUERY_PARSER_H_
#define ANONVIEW_HARNESS_QUERY_PARSER_H_

#include <string_view>

#include "absl/status/statusor.h"
#include "anonview/core_model.h"

namespace anonview::harness {

absl::StatusOr<ConjunctiveQuery> ParseQuery(std::string_view text,
                                            const Schema& schema);

}  // namespace anonview::harness

#endif  // ANONVIEW_HARNESS_QUERY_PARSER_H_
