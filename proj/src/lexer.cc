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

#include "gramwb/lexer.h"

#include <algorithm>

namespace gramwb {
namespace {

bool IsIdentByte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_' || c >= 0x80;
}

}  // namespace

std::string FormatDiagnostic(const Diagnostic& d) {
  std::string out = d.location.file.empty() ? "<input>" : d.location.file;
  if (d.location.line > 0) {
    out += ":" + std::to_string(d.location.line);
    if (d.location.column > 0) out += ":" + std::to_string(d.location.column);
  }
  out += d.severity == Severity::kError ? ": error: " : ": warning: ";
  out += d.message;
  if (!d.kind.empty()) out += " [" + d.kind + "]";
  return out;
}

bool HasErrors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) {
                       return d.severity == Severity::kError;
                     });
}

bool StartsUppercase(std::string_view ident) {
  if (ident.empty()) return false;
  const auto c = static_cast<unsigned char>(ident[0]);
  if (c >= 'A' && c <= 'Z') return true;
  if (c == 0xC3 && ident.size() > 1) {
    const auto d = static_cast<unsigned char>(ident[1]);
    return d == 0x84 || d == 0x96 || d == 0x9C;  // Ä Ö Ü
  }
  return false;
}

bool IsPlainLowerIdent(std::string_view text) {
  if (text.empty() || StartsUppercase(text)) return false;
  if (text[0] == '_') return false;
  return std::all_of(text.begin(), text.end(), [](char c) {
    return IsIdentByte(static_cast<unsigned char>(c));
  });
}

std::vector<Token> Tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token tok;
    tok.line = line;
    tok.column = col;
    if (IsIdentByte(c)) {
      std::size_t j = i;
      while (j < text.size() && IsIdentByte(static_cast<unsigned char>(text[j])))
        ++j;
      tok.text = std::string(text.substr(i, j - i));
      tok.kind = StartsUppercase(tok.text) ? TokenKind::kUpperIdent
                                           : TokenKind::kLowerIdent;
      advance(j - i);
    } else if (c == '\'') {
      std::size_t j = i + 1;
      std::string body;
      bool closed = false;
      while (j < text.size() && text[j] != '\n') {
        if (text[j] == '\\' && j + 1 < text.size()) {
          body += text[j + 1];
          j += 2;
          continue;
        }
        if (text[j] == '\'') {
          closed = true;
          break;
        }
        body += text[j++];
      }
      if (closed) {
        tok.kind = TokenKind::kQuoted;
        tok.text = std::move(body);
        advance(j + 1 - i);
      } else {
        tok.kind = TokenKind::kBad;
        tok.text = "unterminated quoted string";
        advance(j - i);
      }
    } else if (c == '%') {
      std::size_t j = i + 1;
      while (j < text.size() && IsIdentByte(static_cast<unsigned char>(text[j])))
        ++j;
      tok.kind = TokenKind::kDirective;
      tok.text = std::string(text.substr(i + 1, j - i - 1));
      advance(j - i);
    } else if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      tok.kind = TokenKind::kPunct;
      tok.text = "->";
      advance(2);
    } else if (std::string_view("[](),.=|<:^!~#*@").find(static_cast<char>(c)) !=
               std::string_view::npos) {
      tok.kind = TokenKind::kPunct;
      tok.text = std::string(1, static_cast<char>(c));
      advance(1);
    } else {
      tok.kind = TokenKind::kBad;
      tok.text = std::string("unexpected character '") + static_cast<char>(c) + "'";
      advance(1);
    }
    out.push_back(std::move(tok));
  }
  Token end;
  end.kind = TokenKind::kEnd;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

TokenCursor::TokenCursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {
  if (tokens_.empty() || tokens_.back().kind != TokenKind::kEnd) {
    tokens_.push_back(Token{});
  }
}

const Token& TokenCursor::peek(std::size_t ahead) const {
  return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
}

const Token& TokenCursor::next() {
  const Token& t = peek();
  if (pos_ < tokens_.size() - 1) ++pos_;
  return t;
}

bool TokenCursor::accept(std::string_view punct) {
  if (peek().is(punct)) {
    next();
    return true;
  }
  return false;
}

}  // namespace gramwb
