// Copyright 2026 The gramwb Authors.
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

#ifndef GRAMWB_LEXER_H_
#define GRAMWB_LEXER_H_

#include <string>
#include <string_view>
#include <vector>

#include "gramwb/diagnostic.h"

namespace gramwb {

enum class TokenKind {
  kUpperIdent,  // category symbols and variables
  kLowerIdent,  // feature names and atoms (also digit-initial atoms)
  kQuoted,      // 'text', quotes stripped
  kPunct,       // -> [ ] ( ) , . = | < : ^ ! ~ # * @
  kDirective,   // %NAME, text holds NAME
  kBad,         // unrecognized byte or unterminated quote
  kEnd,
};

struct Token {
  TokenKind kind = TokenKind::kEnd;
  std::string text;
  int line = 1;
  int column = 1;

  bool is(std::string_view punct) const {
    return kind == TokenKind::kPunct && text == punct;
  }
};

// Splits grammar-style text into tokens. `//` comments run to end of line.
// Never throws; bad input yields kBad tokens that parsers turn into
// positioned diagnostics.
std::vector<Token> Tokenize(std::string_view text);

// True when the UTF-8 identifier starts with an uppercase letter
// (ASCII A-Z or one of the German uppercase umlauts).
bool StartsUppercase(std::string_view ident);

// True when `text` would lex as a single kLowerIdent token.
bool IsPlainLowerIdent(std::string_view text);

// Cursor over a token vector with the small helpers every parser here needs.
class TokenCursor {
 public:
  explicit TokenCursor(std::vector<Token> tokens);

  const Token& peek(std::size_t ahead = 0) const;
  const Token& next();
  bool at_end() const { return peek().kind == TokenKind::kEnd; }
  bool accept(std::string_view punct);
  std::size_t position() const { return pos_; }
  void reset(std::size_t pos) { pos_ = pos; }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace gramwb

#endif  // GRAMWB_LEXER_H_
