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

#include "anonview/harness/query_parser.h"

#include <cctype>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "harness/text.h"

namespace anonview::harness {
namespace {

enum class TokenType { kWord, kQuoted, kSymbol, kEnd };

struct Token {
  TokenType type = TokenType::kEnd;
  std::string text;
  size_t position = 0;
};

bool IsWordChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
         c == '.' || c == '+';
}

absl::StatusOr<std::vector<Token>> Tokenize(std::string_view text) {
  std::vector<Token> tokens;
  size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    Token token;
    token.position = i;
    if (IsWordChar(c)) {
      token.type = TokenType::kWord;
      while (i < text.size() && IsWordChar(text[i])) token.text.push_back(text[i++]);
    } else if (c == '"') {
      token.type = TokenType::kQuoted;
      ++i;
      bool closed = false;
      while (i < text.size()) {
        if (text[i] == '\\' && i + 1 < text.size()) {
          token.text.push_back(text[i + 1]);
          i += 2;
        } else if (text[i] == '"') {
          closed = true;
          ++i;
          break;
        } else {
          token.text.push_back(text[i++]);
        }
      }
      if (!closed) {
        return absl::InvalidArgumentError(absl::StrCat(
            "at position ", token.position, ": unterminated string"));
      }
    } else if (c == '<' || c == '>') {
      token.type = TokenType::kSymbol;
      token.text.push_back(c);
      ++i;
      if (i < text.size() && text[i] == '=') token.text.push_back(text[i++]);
    } else if (std::string_view("={}[],").find(c) != std::string_view::npos) {
      token.type = TokenType::kSymbol;
      token.text.push_back(c);
      ++i;
    } else {
      return absl::InvalidArgumentError(absl::StrCat(
          "at position ", i, ": unexpected character '", std::string(1, c),
          "'"));
    }
    tokens.push_back(std::move(token));
  }
  tokens.push_back(Token{.type = TokenType::kEnd, .text = "", .position = text.size()});
  return tokens;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, const Schema& schema)
      : tokens_(std::move(tokens)), schema_(schema) {}

  absl::StatusOr<ConjunctiveQuery> Parse() {
    std::vector<std::optional<Predicate>> predicates(schema_.arity());
    if (Peek().type == TokenType::kEnd) {
      return ConjunctiveQuery::Create(schema_, std::move(predicates));
    }
    while (true) {
      if (absl::Status s = ParsePredicate(predicates); !s.ok()) return s;
      if (Peek().type == TokenType::kEnd) break;
      if (!(Peek().type == TokenType::kWord && Peek().text == "and")) {
        return Error(Peek(), "expected 'and'");
      }
      Advance();
    }
    return ConjunctiveQuery::Create(schema_, std::move(predicates));
  }

 private:
  const Token& Peek() const { return tokens_[pos_]; }
  const Token& Advance() { return tokens_[pos_++]; }

  absl::Status Error(const Token& at, std::string_view message) const {
    return absl::InvalidArgumentError(
        absl::StrCat("at position ", at.position, ": ", std::string(message),
                     at.type == TokenType::kEnd
                         ? " (found end of query)"
                         : absl::StrCat(" (found '", at.text, "')")));
  }

  absl::Status Expect(std::string_view symbol) {
    if (Peek().type != TokenType::kSymbol || Peek().text != symbol) {
      return Error(Peek(), absl::StrCat("expected '", std::string(symbol), "'"));
    }
    Advance();
    return absl::OkStatus();
  }

  absl::StatusOr<Value> ParseValueToken(ValueKind kind) {
    const Token& token = Peek();
    if (token.type != TokenType::kWord && token.type != TokenType::kQuoted) {
      return Error(token, "expected a value");
    }
    Advance();
    if (kind == ValueKind::kString) return Value(token.text);
    int64_t parsed = 0;
    if (token.type == TokenType::kQuoted ||
        !text::ParseNumber(token.text, &parsed)) {
      return Error(token, "kind mismatch: integer attribute needs an integer");
    }
    return Value(parsed);
  }

  absl::StatusOr<int64_t> ParseInt() {
    absl::StatusOr<Value> v = ParseValueToken(ValueKind::kInteger);
    if (!v.ok()) return v.status();
    return std::get<int64_t>(*v);
  }

  absl::Status ParsePredicate(std::vector<std::optional<Predicate>>& out) {
    const Token& name = Peek();
    if (name.type != TokenType::kWord && name.type != TokenType::kQuoted) {
      return Error(name, "expected an attribute name");
    }
    std::optional<size_t> attribute = schema_.IndexOf(name.text);
    if (!attribute) {
      return Error(name, absl::StrCat("unknown attribute '", name.text, "'"));
    }
    Advance();
    if (out[*attribute]) {
      return Error(name, "attribute constrained twice");
    }
    const ValueKind kind = schema_.attribute(*attribute).kind;
    const Token& op = Peek();

    if (op.type == TokenType::kSymbol && op.text == "=") {
      Advance();
      absl::StatusOr<Value> v = ParseValueToken(kind);
      if (!v.ok()) return v.status();
      out[*attribute] = ValueSetPredicate{{*std::move(v)}};
      return absl::OkStatus();
    }
    if (op.type == TokenType::kSymbol && (op.text[0] == '<' || op.text[0] == '>')) {
      if (kind != ValueKind::kInteger) {
        return Error(op, "kind mismatch: comparison on a string attribute");
      }
      Advance();
      absl::StatusOr<int64_t> bound = ParseInt();
      if (!bound.ok()) return bound.status();
      constexpr int64_t kMin = std::numeric_limits<int64_t>::min();
      constexpr int64_t kMax = std::numeric_limits<int64_t>::max();
      RangePredicate range{kMin, kMax};
      if (op.text == "<") {
        if (*bound == kMin) return Error(op, "empty range");
        range.high = *bound - 1;
      } else if (op.text == "<=") {
        range.high = *bound;
      } else if (op.text == ">") {
        if (*bound == kMax) return Error(op, "empty range");
        range.low = *bound + 1;
      } else {
        range.low = *bound;
      }
      out[*attribute] = range;
      return absl::OkStatus();
    }
    if (!(op.type == TokenType::kWord && op.text == "in")) {
      return Error(op, "expected '=', 'in' or a comparison");
    }
    Advance();
    const Token& open = Peek();
    if (open.type == TokenType::kSymbol && open.text == "[") {
      if (kind != ValueKind::kInteger) {
        return Error(open, "kind mismatch: range on a string attribute");
      }
      Advance();
      absl::StatusOr<int64_t> low = ParseInt();
      if (!low.ok()) return low.status();
      if (absl::Status s = Expect(","); !s.ok()) return s;
      absl::StatusOr<int64_t> high = ParseInt();
      if (!high.ok()) return high.status();
      if (absl::Status s = Expect("]"); !s.ok()) return s;
      if (*low > *high) {
        return Error(open, absl::StrCat("malformed range: ", *low, " > ", *high));
      }
      out[*attribute] = RangePredicate{*low, *high};
      return absl::OkStatus();
    }
    if (open.type == TokenType::kSymbol && open.text == "{") {
      Advance();
      ValueSetPredicate set;
      while (true) {
        absl::StatusOr<Value> v = ParseValueToken(kind);
        if (!v.ok()) return v.status();
        set.values.push_back(*std::move(v));
        if (Peek().type == TokenType::kSymbol && Peek().text == ",") {
          Advance();
          continue;
        }
        break;
      }
      if (absl::Status s = Expect("}"); !s.ok()) return s;
      out[*attribute] = std::move(set);
      return absl::OkStatus();
    }
    return Error(open, "expected '{' or '['");
  }

  std::vector<Token> tokens_;
  const Schema& schema_;
  size_t pos_ = 0;
};

}  // namespace

absl::StatusOr<ConjunctiveQuery> ParseQuery(std::string_view text,
                                            const Schema& schema) {
  absl::StatusOr<std::vector<Token>> tokens = Tokenize(text);
  if (!tokens.ok()) return tokens.status();
  return Parser(*std::move(tokens), schema).Parse();
}

}  // namespace anonview::harness
