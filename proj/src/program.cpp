// SPDX-License-Identifier: Apache-2.0
#include "csvg/program.hpp"

#include <cctype>
#include <sstream>

namespace csvg {

std::string Diagnostic::render() const {
  const char *sev = severity == Severity::Error     ? "error"
                    : severity == Severity::Warning ? "warning"
                                                    : "note";
  std::ostringstream out;
  out << pos.line << ":" << pos.col << ": " << sev << ": " << message;
  return out.str();
}

bool has_errors(const std::vector<Diagnostic> &diags) {
  for (const Diagnostic &d : diags)
    if (d.severity == Diagnostic::Severity::Error) return true;
  return false;
}

ParseError::ParseError(SourcePos pos, const std::string &message)
    : std::runtime_error(std::to_string(pos.line) + ":" + std::to_string(pos.col) +
                         ": error: " + message),
      pos_(pos) {}

Value Value::string_lit(std::string s) {
  Value v;
  v.kind = Kind::StringLit;
  v.str = std::move(s);
  return v;
}

Value Value::string_list(std::vector<std::string> items) {
  Value v;
  v.kind = Kind::StringList;
  v.items = std::move(items);
  return v;
}

Value Value::var_ref(std::string name) {
  Value v;
  v.kind = Kind::VarRef;
  v.str = std::move(name);
  return v;
}

Value Value::var_set(std::vector<std::string> names) {
  Value v;
  v.kind = Kind::VarSet;
  v.items = std::move(names);
  return v;
}

namespace {

enum class Tok { Ident, String, Number, Equals, Comma, LParen, RParen, LBracket, RBracket, LBrace, RBrace, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourcePos pos;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      SourcePos pos{line_, col_};
      if (at_end()) {
        out.push_back({Tok::End, "", pos});
        return out;
      }
      char c = peek();
      if (c == '#') {
        while (!at_end() && peek() != '\n') advance();
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string ident;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
          ident.push_back(advance());
        out.push_back({Tok::Ident, std::move(ident), pos});
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) ||
          (c == '-' && idx_ + 1 < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[idx_ + 1])))) {
        std::string num;
        while (!at_end() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.' ||
                             peek() == '-' || peek() == '+' || peek() == 'e' || peek() == 'E'))
          num.push_back(advance());
        out.push_back({Tok::Number, std::move(num), pos});
        continue;
      }
      if (c == '"' || c == '\'') {
        char quote = advance();
        std::string s;
        for (;;) {
          if (at_end() || peek() == '\n')
            throw ParseError(pos, "unterminated string literal");
          char d = advance();
          if (d == quote) break;
          if (d == '\\') {
            if (at_end()) throw ParseError(pos, "unterminated string literal");
            s.push_back(advance());
          } else {
            s.push_back(d);
          }
        }
        out.push_back({Tok::String, std::move(s), pos});
        continue;
      }
      switch (c) {
        case '=': out.push_back({Tok::Equals, "=", pos}); break;
        case ',': out.push_back({Tok::Comma, ",", pos}); break;
        case '(': out.push_back({Tok::LParen, "(", pos}); break;
        case ')': out.push_back({Tok::RParen, ")", pos}); break;
        case '[': out.push_back({Tok::LBracket, "[", pos}); break;
        case ']': out.push_back({Tok::RBracket, "]", pos}); break;
        case '{': out.push_back({Tok::LBrace, "{", pos}); break;
        case '}': out.push_back({Tok::RBrace, "}", pos}); break;
        default:
          throw ParseError(pos, std::string("unexpected character '") + c + "'");
      }
      advance();
    }
  }

 private:
  bool at_end() const { return idx_ >= text_.size(); }
  char peek() const { return text_[idx_]; }
  char advance() {
    char c = text_[idx_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  void skip_trivia() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  std::string_view text_;
  std::size_t idx_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// Statement boundaries need no newline handling: every statement is NAME(...)
// or NAME = NAME(...), so the closing parenthesis ends it. Line wraps inside
// argument lists and after '=' come for free.
class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  std::vector<ProgramStmt> run() {
    std::vector<ProgramStmt> stmts;
    while (peek().kind != Tok::End) stmts.push_back(statement());
    return stmts;
  }

 private:
  const Token &peek(std::size_t ahead = 0) const {
    std::size_t i = idx_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  const Token &take() { return tokens_[idx_ < tokens_.size() - 1 ? idx_++ : idx_]; }

  Token expect(Tok kind, const char *what) {
    if (peek().kind != kind)
      throw ParseError(peek().pos, std::string("expected ") + what);
    return take();
  }

  ProgramStmt statement() {
    ProgramStmt stmt;
    Token first = expect(Tok::Ident, "a function or variable name");
    stmt.source_line = first.pos.line;
    std::string func = first.text;
    if (peek().kind == Tok::Equals) {
      take();
      stmt.assign_name = std::move(func);
      Token callee = expect(Tok::Ident, "a function name after '='");
      func = callee.text;
    }
    stmt.call = call(std::move(func));
    return stmt;
  }

  Call call(std::string func_name) {
    Call c;
    c.func_name = std::move(func_name);
    expect(Tok::LParen, "'('");
    if (peek().kind == Tok::RParen) {
      take();
      return c;
    }
    for (;;) {
      argument(c);
      if (peek().kind == Tok::Comma) {
        take();
        if (peek().kind == Tok::RParen) break;  // trailing comma
        continue;
      }
      break;
    }
    expect(Tok::RParen, "')' or ','");
    return c;
  }

  void argument(Call &c) {
    const Token &tok = peek();
    if (tok.kind == Tok::Ident && peek(1).kind == Tok::Equals) {
      Token key = take();
      take();  // '='
      for (const auto &kv : c.kwargs)
        if (kv.first == key.text)
          throw ParseError(key.pos, "duplicate keyword argument '" + key.text + "'");
      c.kwargs.emplace_back(key.text, value());
      return;
    }
    // The one tolerated positional form: a lone bare identifier, as in
    // SET_TARGET(CHAIR_0).
    if (tok.kind == Tok::Ident && peek(1).kind == Tok::RParen && c.kwargs.empty() &&
        !c.positional) {
      Token name = take();
      Value v = Value::var_ref(name.text);
      v.pos = name.pos;
      c.positional = std::move(v);
      return;
    }
    throw ParseError(tok.pos, "positional arguments are unsupported");
  }

  Value value() {
    const Token &tok = peek();
    switch (tok.kind) {
      case Tok::String: {
        Token s = take();
        Value v = Value::string_lit(s.text);
        v.pos = s.pos;
        return v;
      }
      case Tok::Ident: {
        Token name = take();
        Value v = Value::var_ref(name.text);
        v.pos = name.pos;
        return v;
      }
      case Tok::LBracket: {
        Token open = take();
        std::vector<std::string> items;
        if (peek().kind != Tok::RBracket) {
          for (;;) {
            Token s = expect(Tok::String, "a string in the list");
            items.push_back(s.text);
            if (peek().kind == Tok::Comma) {
              take();
              if (peek().kind == Tok::RBracket) break;  // trailing comma
              continue;
            }
            break;
          }
        }
        expect(Tok::RBracket, "']'");
        Value v = Value::string_list(std::move(items));
        v.pos = open.pos;
        return v;
      }
      case Tok::LBrace: {
        Token open = take();
        std::vector<std::string> names;
        if (peek().kind != Tok::RBrace) {
          for (;;) {
            Token n = expect(Tok::Ident, "a variable name in the set");
            names.push_back(n.text);
            if (peek().kind == Tok::Comma) {
              take();
              if (peek().kind == Tok::RBrace) break;  // trailing comma
              continue;
            }
            break;
          }
        }
        expect(Tok::RBrace, "'}'");
        Value v = Value::var_set(std::move(names));
        v.pos = open.pos;
        return v;
      }
      case Tok::Number:
        throw ParseError(tok.pos, "numbers are not supported");
      default:
        throw ParseError(tok.pos, "expected a value");
    }
  }

  std::vector<Token> tokens_;
  std::size_t idx_ = 0;
};

std::string quote(const std::string &s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string render_value(const Value &v) {
  switch (v.kind) {
    case Value::Kind::StringLit: return quote(v.str);
    case Value::Kind::VarRef: return v.str;
    case Value::Kind::StringList: {
      std::string out = "[";
      for (std::size_t i = 0; i < v.items.size(); ++i) {
        if (i) out += ", ";
        out += quote(v.items[i]);
      }
      return out + "]";
    }
    case Value::Kind::VarSet: {
      std::string out = "{";
      for (std::size_t i = 0; i < v.items.size(); ++i) {
        if (i) out += ", ";
        out += v.items[i];
      }
      return out + "}";
    }
  }
  return "";
}

}  // namespace

std::vector<ProgramStmt> parse(std::string_view text) {
  return Parser(Lexer(text).run()).run();
}

std::string render(const std::vector<ProgramStmt> &stmts) {
  std::string out;
  for (const ProgramStmt &stmt : stmts) {
    if (stmt.assign_name) {
      out += *stmt.assign_name;
      out += " = ";
    }
    out += stmt.call.func_name;
    out.push_back('(');
    if (stmt.call.positional) {
      out += render_value(*stmt.call.positional);
    } else {
      for (std::size_t i = 0; i < stmt.call.kwargs.size(); ++i) {
        if (i) out += ", ";
        out += stmt.call.kwargs[i].first;
        out.push_back('=');
        out += render_value(stmt.call.kwargs[i].second);
      }
    }
    out += ")\n";
  }
  return out;
}

}  // namespace csvg
