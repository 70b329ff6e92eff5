#include "teletype/analyzer/parser.hpp"

#include <fmt/format.h>

#include <cctype>
#include <string_view>

namespace teletype::analyzer {

namespace {

enum class Tok {
  Name,
  Number,
  String,
  KwLocal,
  KwFunction,
  KwIf,
  KwThen,
  KwElse,
  KwElseif,
  KwEnd,
  KwReturn,
  KwNil,
  KwTrue,
  KwFalse,
  KwWhile,
  KwDo,
  Assign,
  Eq,
  Ne,
  Dot,
  Comma,
  Semicolon,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Plus,
  Minus,
  DoubleColon,
  Eof,
};

struct Token {
  Tok kind = Tok::Eof;
  std::string text;
  int line = 1;
};

struct SyntaxFailure {
  int line;
  std::string message;
};

constexpr int kMaxDepth = 200;

Tok keyword_or_name(std::string_view word) {
  static constexpr std::pair<std::string_view, Tok> kKeywords[] = {
      {"local", Tok::KwLocal}, {"function", Tok::KwFunction}, {"if", Tok::KwIf},
      {"then", Tok::KwThen},   {"else", Tok::KwElse},         {"elseif", Tok::KwElseif},
      {"end", Tok::KwEnd},     {"return", Tok::KwReturn},     {"nil", Tok::KwNil},
      {"true", Tok::KwTrue},   {"false", Tok::KwFalse},       {"while", Tok::KwWhile},
      {"do", Tok::KwDo},
  };
  for (const auto& [text, kind] : kKeywords) {
    if (text == word) return kind;
  }
  return Tok::Name;
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::Eof:
      return "<eof>";
    case Tok::String:
      return "string";
    case Tok::Number:
      return "number";
    default:
      return fmt::format("'{}'", t.text);
  }
}

std::vector<Token> lex(std::span<const std::string> lines) {
  std::vector<Token> out;
  for (std::size_t index = 0; index < lines.size(); ++index) {
    const std::string& s = lines[index];
    const int line = static_cast<int>(index) + 1;
    std::size_t i = 0;
    auto push = [&](Tok kind, std::string text) { out.push_back({kind, std::move(text), line}); };
    while (i < s.size()) {
      const char c = s[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (c == '-' && i + 1 < s.size() && s[i + 1] == '-') {
        break;  // comment (including the mode pragma) runs to end of line
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i;
        while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
        std::string word = s.substr(i, j - i);
        const Tok kind = keyword_or_name(word);
        push(kind, std::move(word));
        i = j;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '.')) ++j;
        push(Tok::Number, s.substr(i, j - i));
        i = j;
      } else if (c == '"' || c == '\'') {
        std::string value;
        std::size_t j = i + 1;
        bool closed = false;
        while (j < s.size()) {
          if (s[j] == '\\' && j + 1 < s.size()) {
            value.push_back(s[j + 1]);
            j += 2;
          } else if (s[j] == c) {
            closed = true;
            ++j;
            break;
          } else {
            value.push_back(s[j++]);
          }
        }
        if (!closed) throw SyntaxFailure{line, "Malformed string"};
        push(Tok::String, std::move(value));
        i = j;
      } else {
        auto two = std::string_view(s).substr(i, 2);
        if (two == "==") {
          push(Tok::Eq, "==");
          i += 2;
        } else if (two == "~=") {
          push(Tok::Ne, "~=");
          i += 2;
        } else if (two == "::") {
          push(Tok::DoubleColon, "::");
          i += 2;
        } else {
          Tok kind;
          switch (c) {
            case '=': kind = Tok::Assign; break;
            case '.': kind = Tok::Dot; break;
            case ',': kind = Tok::Comma; break;
            case ';': kind = Tok::Semicolon; break;
            case '(': kind = Tok::LParen; break;
            case ')': kind = Tok::RParen; break;
            case '{': kind = Tok::LBrace; break;
            case '}': kind = Tok::RBrace; break;
            case '+': kind = Tok::Plus; break;
            case '-': kind = Tok::Minus; break;
            default:
              throw SyntaxFailure{line, fmt::format("Unexpected character '{}'", c)};
          }
          push(kind, std::string(1, c));
          ++i;
        }
      }
    }
  }
  const int last = lines.empty() ? 1 : static_cast<int>(lines.size());
  out.push_back({Tok::Eof, "", last});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Block parse_chunk() {
    Block block = parse_block();
    if (peek().kind != Tok::Eof) fail(fmt::format("Expected <eof>, got {}", describe(peek())));
    return block;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& previous() const { return tokens_[pos_ - 1]; }
  bool check(Tok kind) const { return peek().kind == kind; }

  const Token& advance() {
    const Token& t = tokens_[pos_];
    if (t.kind != Tok::Eof) ++pos_;
    return t;
  }

  bool match(Tok kind) {
    if (!check(kind)) return false;
    advance();
    return true;
  }

  [[noreturn]] void fail(std::string message) const { throw SyntaxFailure{peek().line, std::move(message)}; }

  const Token& expect(Tok kind, std::string_view what) {
    if (!check(kind)) fail(fmt::format("Expected {}, got {}", what, describe(peek())));
    return advance();
  }

  void expect_end(std::string_view opener, int opener_line) {
    if (!check(Tok::KwEnd)) {
      fail(fmt::format("Expected 'end' (to close '{}' at line {}), got {}", opener, opener_line,
                       describe(peek())));
    }
    advance();
  }

  struct DepthGuard {
    explicit DepthGuard(Parser& p) : parser(p) {
      if (++parser.depth_ > kMaxDepth) parser.fail("Exceeded allowed nesting depth");
    }
    ~DepthGuard() { --parser.depth_; }
    Parser& parser;
  };

  static bool block_ends(Tok kind) {
    return kind == Tok::KwEnd || kind == Tok::KwElse || kind == Tok::KwElseif || kind == Tok::Eof;
  }

  Block parse_block() {
    DepthGuard guard(*this);
    Block block;
    while (!block_ends(peek().kind)) {
      if (match(Tok::Semicolon)) continue;
      const bool is_return = check(Tok::KwReturn);
      block.stats.push_back(parse_stat());
      if (is_return) {
        match(Tok::Semicolon);
        if (!block_ends(peek().kind)) {
          fail(fmt::format("Expected 'end' after 'return', got {}", describe(peek())));
        }
        break;
      }
    }
    return block;
  }

  Stat parse_stat() {
    const int first = peek().line;
    Stat stat;
    switch (peek().kind) {
      case Tok::KwLocal: {
        advance();
        if (match(Tok::KwFunction)) {
          LocalFunction fn;
          fn.name = expect(Tok::Name, "identifier").text;
          fn.fn = parse_function_body(first);
          stat.node = std::move(fn);
        } else {
          LocalDecl decl;
          decl.name = expect(Tok::Name, "identifier").text;
          if (match(Tok::Assign)) decl.value = parse_expr();
          stat.node = std::move(decl);
        }
        break;
      }
      case Tok::KwFunction: {
        advance();
        const Token& name = expect(Tok::Name, "function name");
        auto target = make_expr(name.line, name.line, NameRef{name.text});
        while (match(Tok::Dot)) {
          const Token& field = expect(Tok::Name, "field name");
          target = make_expr(first, field.line, FieldGet{std::move(target), field.text});
        }
        FunctionBody body = parse_function_body(first);
        auto value = make_expr(first, previous().line, FunctionExpr{std::move(body)});
        stat.node = Assign{std::move(target), std::move(value)};
        break;
      }
      case Tok::KwIf:
        advance();
        stat.node = parse_if_tail(first);
        break;
      case Tok::KwWhile: {
        advance();
        While w;
        w.cond = parse_expr();
        expect(Tok::KwDo, "'do'");
        w.body = parse_block();
        expect_end("while", first);
        stat.node = std::move(w);
        break;
      }
      case Tok::KwReturn: {
        advance();
        Return ret;
        if (!block_ends(peek().kind) && !check(Tok::Semicolon)) ret.value = parse_expr();
        stat.node = std::move(ret);
        break;
      }
      default: {
        if (!check(Tok::Name) && !check(Tok::LParen)) {
          fail(fmt::format("Expected statement, got {}", describe(peek())));
        }
        ExprPtr lhs = parse_suffixed();
        if (match(Tok::Assign)) {
          if (!std::holds_alternative<NameRef>(lhs->node) &&
              !std::holds_alternative<FieldGet>(lhs->node)) {
            fail("Assigned expression must be a variable or a field");
          }
          ExprPtr value = parse_expr();
          stat.node = Assign{std::move(lhs), std::move(value)};
        } else if (std::holds_alternative<Call>(lhs->node) ||
                   std::holds_alternative<Require>(lhs->node)) {
          stat.node = CallStat{std::move(lhs)};
        } else {
          fail(fmt::format("Incomplete statement: expected assignment or a function call"));
        }
        break;
      }
    }
    stat.span = {first, previous().line};
    return stat;
  }

  If parse_if_tail(int first) {
    If node;
    node.cond = parse_expr();
    expect(Tok::KwThen, "'then'");
    node.then_block = parse_block();
    if (check(Tok::KwElseif)) {
      const int line = advance().line;
      Stat nested;
      nested.node = parse_if_tail(first);
      nested.span = {line, previous().line};
      Block else_block;
      else_block.stats.push_back(std::move(nested));
      node.else_block = std::move(else_block);
      return node;  // the innermost `if` consumed the shared `end`
    }
    if (match(Tok::KwElse)) node.else_block = parse_block();
    expect_end("if", first);
    return node;
  }

  FunctionBody parse_function_body(int opener_line) {
    FunctionBody fn;
    expect(Tok::LParen, "'('");
    if (!check(Tok::RParen)) {
      do {
        fn.params.push_back(expect(Tok::Name, "parameter name").text);
      } while (match(Tok::Comma));
    }
    expect(Tok::RParen, "')'");
    fn.body = std::make_unique<Block>(parse_block());
    expect_end("function", opener_line);
    return fn;
  }

  template <typename Node>
  static ExprPtr make_expr(int first, int last, Node node) {
    auto e = std::make_unique<Expr>();
    e->span = {first, last};
    e->node = std::move(node);
    return e;
  }

  ExprPtr parse_expr() {
    DepthGuard guard(*this);
    ExprPtr lhs = parse_additive();
    while (check(Tok::Eq) || check(Tok::Ne)) {
      auto op = advance().kind == Tok::Eq ? Binary::Op::Eq : Binary::Op::Ne;
      ExprPtr rhs = parse_additive();
      const int first = lhs->span.first_line;
      const int last = rhs->span.last_line;
      lhs = make_expr(first, last, Binary{op, std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  ExprPtr parse_additive() {
    ExprPtr lhs = parse_cast();
    while (check(Tok::Plus) || check(Tok::Minus)) {
      auto op = advance().kind == Tok::Plus ? Binary::Op::Add : Binary::Op::Sub;
      ExprPtr rhs = parse_cast();
      const int first = lhs->span.first_line;
      const int last = rhs->span.last_line;
      lhs = make_expr(first, last, Binary{op, std::move(lhs), std::move(rhs)});
    }
    return lhs;
  }

  ExprPtr parse_cast() {
    ExprPtr value = parse_simple();
    if (match(Tok::DoubleColon)) {
      const Token& type = expect(Tok::Name, "type name");
      const int first = value->span.first_line;
      value = make_expr(first, type.line, Cast{std::move(value), type.text});
    }
    return value;
  }

  ExprPtr parse_simple() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::KwNil:
        advance();
        return make_expr(t.line, t.line, NilLit{});
      case Tok::KwTrue:
        advance();
        return make_expr(t.line, t.line, BoolLit{true});
      case Tok::KwFalse:
        advance();
        return make_expr(t.line, t.line, BoolLit{false});
      case Tok::Number: {
        advance();
        double value = 0;
        try {
          value = std::stod(t.text);
        } catch (const std::exception&) {
          throw SyntaxFailure{t.line, "Malformed number"};
        }
        return make_expr(t.line, t.line, NumberLit{value});
      }
      case Tok::String:
        advance();
        return make_expr(t.line, t.line, StringLit{t.text});
      case Tok::LBrace:
        return parse_table();
      case Tok::KwFunction: {
        const int first = advance().line;
        FunctionBody fn = parse_function_body(first);
        return make_expr(first, previous().line, FunctionExpr{std::move(fn)});
      }
      case Tok::Name:
      case Tok::LParen:
        return parse_suffixed();
      default:
        fail(fmt::format("Expected expression, got {}", describe(t)));
    }
  }

  ExprPtr parse_table() {
    DepthGuard guard(*this);
    const int first = expect(Tok::LBrace, "'{'").line;
    TableLit table;
    while (!check(Tok::RBrace)) {
      if (check(Tok::Name) && tokens_[pos_ + 1].kind == Tok::Assign) {
        std::string name = advance().text;
        advance();
        table.fields.emplace_back(std::move(name), parse_expr());
      } else {
        table.fields.emplace_back(std::string{}, parse_expr());
      }
      if (!match(Tok::Comma) && !match(Tok::Semicolon)) break;
    }
    const int last = expect(Tok::RBrace, "'}'").line;
    return make_expr(first, last, std::move(table));
  }

  ExprPtr parse_primary() {
    const Token& t = peek();
    if (t.kind == Tok::LParen) {
      advance();
      ExprPtr inner = parse_expr();
      expect(Tok::RParen, "')'");
      inner->span.first_line = t.line;
      inner->span.last_line = previous().line;
      return inner;
    }
    if (t.kind != Tok::Name) fail(fmt::format("Expected identifier, got {}", describe(t)));
    advance();
    if (t.text == "require" && check(Tok::LParen)) {
      advance();
      Require req;
      if (check(Tok::String) && tokens_[pos_ + 1].kind == Tok::RParen) {
        req.module_id = peek().text;
      }
      req.argument = parse_expr();
      const int last = expect(Tok::RParen, "')'").line;
      return make_expr(t.line, last, std::move(req));
    }
    return make_expr(t.line, t.line, NameRef{t.text});
  }

  ExprPtr parse_suffixed() {
    DepthGuard guard(*this);
    ExprPtr e = parse_primary();
    for (;;) {
      if (match(Tok::Dot)) {
        const Token& field = expect(Tok::Name, "field name");
        const int first = e->span.first_line;
        e = make_expr(first, field.line, FieldGet{std::move(e), field.text});
      } else if (check(Tok::LParen)) {
        advance();
        Call call;
        call.callee = std::move(e);
        if (!check(Tok::RParen)) {
          do {
            call.args.push_back(parse_expr());
          } while (match(Tok::Comma));
        }
        const int last = expect(Tok::RParen, "')'").line;
        const int first = call.callee->span.first_line;
        e = make_expr(first, last, std::move(call));
      } else {
        return e;
      }
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

}  // namespace

ParseResult parse(std::span<const std::string> lines, const std::string& module_id) {
  ParseResult result;
  try {
    Parser parser(lex(lines));
    result.ast = parser.parse_chunk();
  } catch (const SyntaxFailure& failure) {
    result.ast = Block{};
    AnalysisError error;
    error.kind = ErrorKind::SyntaxError;
    error.module_id = module_id;
    error.start_line = failure.line;
    error.end_line = failure.line;
    error.message = failure.message;
    result.errors.push_back(std::move(error));
  }
  return result;
}

}  // namespace teletype::analyzer
