#include "transitmc/ltl_parse.hpp"

#include <cctype>

namespace transitmc {

namespace {

enum class Tok {
  LParen,
  RParen,
  Comma,
  Not,
  And,
  Or,
  Imp,
  Next,
  Until,
  WUntil,
  Release,
  Always,
  Eventually,
  Flow,
  True,
  False,
  Ident,
  End,
};

struct Token {
  Tok type;
  std::string text;
  int line;
  int col;
};

[[noreturn]] void fail(const Token& at, const std::string& msg) {
  throw ParseError("line " + std::to_string(at.line) + " col " +
                   std::to_string(at.col) + ": " + msg);
}

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

struct Lexer {
  const std::string& src;
  std::size_t pos = 0;
  int line = 1;
  int col = 1;

  bool match(const char* s) {
    std::size_t n = 0;
    while (s[n]) ++n;
    if (src.compare(pos, n, s) != 0) return false;
    pos += n;
    col += int(n);
    return true;
  }

  std::vector<Token> run() {
    std::vector<Token> out;
    while (pos < src.size()) {
      char c = src[pos];
      if (c == '\n') {
        ++pos;
        ++line;
        col = 1;
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
        ++col;
        continue;
      }
      Token tok{Tok::End, "", line, col};
      if (c == '(') {
        tok.type = Tok::LParen;
        ++pos;
        ++col;
      } else if (c == ')') {
        tok.type = Tok::RParen;
        ++pos;
        ++col;
      } else if (c == ',') {
        tok.type = Tok::Comma;
        ++pos;
        ++col;
      } else if (c == '!') {
        tok.type = Tok::Not;
        ++pos;
        ++col;
      } else if (match("&&")) {
        tok.type = Tok::And;
      } else if (match("||")) {
        tok.type = Tok::Or;
      } else if (match("->")) {
        tok.type = Tok::Imp;
      } else if (match("\xC2\xAC")) {  // ¬
        tok.type = Tok::Not;
      } else if (match("\xE2\x88\xA7")) {  // ∧
        tok.type = Tok::And;
      } else if (match("\xE2\x88\xA8")) {  // ∨
        tok.type = Tok::Or;
      } else if (match("\xE2\x86\x92")) {  // →
        tok.type = Tok::Imp;
      } else if (match("\xE2\x97\xAF")) {  // ◯
        tok.type = Tok::Next;
      } else if (match("\xE2\x96\xA1")) {  // □
        tok.type = Tok::Always;
      } else if (match("\xE2\x97\x8A") || match("\xE2\x97\x87")) {  // ◊ ◇
        tok.type = Tok::Eventually;
      } else if (ident_start(c)) {
        std::size_t start = pos;
        while (pos < src.size() && ident_char(src[pos])) {
          ++pos;
          ++col;
        }
        std::string word = src.substr(start, pos - start);
        if (word == "X") tok.type = Tok::Next;
        else if (word == "U") tok.type = Tok::Until;
        else if (word == "W") tok.type = Tok::WUntil;
        else if (word == "R") tok.type = Tok::Release;
        else if (word == "G") tok.type = Tok::Always;
        else if (word == "F") tok.type = Tok::Eventually;
        else if (word == "A") tok.type = Tok::Flow;
        else if (word == "true") tok.type = Tok::True;
        else if (word == "false") tok.type = Tok::False;
        else {
          tok.type = Tok::Ident;
          // absorb a glued `(ident)` suffix: x.fwd(y)
          if (pos < src.size() && src[pos] == '(') {
            std::size_t j = pos + 1;
            while (j < src.size() && ident_char(src[j])) ++j;
            if (j > pos + 1 && j < src.size() && src[j] == ')') {
              word += src.substr(pos, j + 1 - pos);
              col += int(j + 1 - pos);
              pos = j + 1;
            }
          }
          tok.text = word;
        }
      } else {
        throw ParseError("line " + std::to_string(line) + " col " +
                         std::to_string(col) + ": unexpected character '" +
                         std::string(1, c) + "'");
      }
      out.push_back(std::move(tok));
    }
    out.push_back(Token{Tok::End, "", line, col});
    return out;
  }
};

struct Parser {
  FormulaArena& arena;
  std::vector<Token> toks;
  std::size_t pos = 0;
  std::uint32_t next_flow_index = 1;

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos + ahead;
    return i < toks.size() ? toks[i] : toks.back();
  }
  Token take() { return toks[pos < toks.size() - 1 ? pos++ : pos]; }
  bool eat(Tok t) {
    if (peek().type == t) {
      ++pos;
      return true;
    }
    return false;
  }

  FormulaId parse_imp() {
    FormulaId lhs = parse_or();
    if (eat(Tok::Imp)) return arena.f_imp(lhs, parse_imp());
    return lhs;
  }

  FormulaId parse_or() {
    FormulaId acc = parse_and();
    while (eat(Tok::Or)) acc = arena.f_or(acc, parse_and());
    return acc;
  }

  FormulaId parse_and() {
    FormulaId acc = parse_temp();
    while (eat(Tok::And)) acc = arena.f_and(acc, parse_temp());
    return acc;
  }

  FormulaId parse_temp() {
    FormulaId lhs = parse_unary();
    switch (peek().type) {
      case Tok::Until:
        ++pos;
        return arena.f_until(lhs, parse_temp());
      case Tok::WUntil:
        ++pos;
        return arena.f_wuntil(lhs, parse_temp());
      case Tok::Release:
        ++pos;
        return arena.f_release(lhs, parse_temp());
      default:
        return lhs;
    }
  }

  FormulaId parse_unary() {
    const Token& t = peek();
    switch (t.type) {
      case Tok::Not:
        ++pos;
        return arena.f_not(parse_unary());
      case Tok::Next:
        ++pos;
        return arena.f_next(parse_unary());
      case Tok::Always:
        ++pos;
        return arena.f_always(parse_unary());
      case Tok::Eventually:
        ++pos;
        return arena.f_eventually(parse_unary());
      case Tok::Flow: {
        Token a = take();
        FormulaId body = parse_unary();
        if (contains_flowsub(arena, body))
          fail(a, "nested A operator is not allowed");
        return arena.f_flowsub(next_flow_index++, body);
      }
      default:
        return parse_primary();
    }
  }

  FormulaId parse_primary() {
    Token t = take();
    switch (t.type) {
      case Tok::True:
        return arena.tru();
      case Tok::False:
        return arena.fls();
      case Tok::Ident:
        return arena.atom(t.text);
      case Tok::LParen: {
        // `(a,b)` is a transition atom of that spelling
        if (peek(0).type == Tok::Ident && peek(1).type == Tok::Comma &&
            peek(2).type == Tok::Ident && peek(3).type == Tok::RParen) {
          std::string name = "(" + peek(0).text + "," + peek(2).text + ")";
          pos += 4;
          return arena.atom(name);
        }
        FormulaId inner = parse_imp();
        if (!eat(Tok::RParen)) fail(peek(), "expected ')'");
        return inner;
      }
      default:
        fail(t, "expected a formula");
    }
  }
};

int op_prec(FKind k) {
  switch (k) {
    case FKind::Imp:
      return 1;
    case FKind::Or:
      return 2;
    case FKind::And:
      return 3;
    case FKind::Until:
    case FKind::WeakUntil:
    case FKind::Release:
      return 4;
    case FKind::Not:
    case FKind::Next:
    case FKind::Always:
    case FKind::Eventually:
      return 5;
    default:
      return 6;
  }
}

const char* op_text(FKind k) {
  switch (k) {
    case FKind::Imp: return " -> ";
    case FKind::Or: return " || ";
    case FKind::And: return " && ";
    case FKind::Until: return " U ";
    case FKind::WeakUntil: return " W ";
    case FKind::Release: return " R ";
    default: return "";
  }
}

void render_rec(const FormulaArena& a, FormulaId f, std::string& out) {
  const FNode& n = a.node(f);
  int prec = op_prec(n.kind);
  auto child = [&](FormulaId c, bool needs_parens) {
    if (needs_parens) {
      out += '(';
      render_rec(a, c, out);
      out += ')';
    } else {
      render_rec(a, c, out);
    }
  };
  switch (n.kind) {
    case FKind::True:
      out += "true";
      break;
    case FKind::False:
      out += "false";
      break;
    case FKind::Atom:
      out += a.atom_name(n);
      break;
    case FKind::Not:
      out += '!';
      child(n.lhs, op_prec(a.node(n.lhs).kind) < 5);
      break;
    case FKind::Next:
    case FKind::Always:
    case FKind::Eventually:
      out += n.kind == FKind::Next ? "X " : n.kind == FKind::Always ? "G " : "F ";
      child(n.lhs, op_prec(a.node(n.lhs).kind) < 5);
      break;
    case FKind::FlowSub:
      out += "A (";
      render_rec(a, n.lhs, out);
      out += ')';
      break;
    case FKind::Until:
    case FKind::WeakUntil:
    case FKind::Release:
      // right-associative, one level: left operand at the same level needs parens
      child(n.lhs, op_prec(a.node(n.lhs).kind) <= prec);
      out += op_text(n.kind);
      child(n.rhs, op_prec(a.node(n.rhs).kind) < prec);
      break;
    case FKind::And:
    case FKind::Or:
      child(n.lhs, op_prec(a.node(n.lhs).kind) < prec);
      out += op_text(n.kind);
      child(n.rhs, op_prec(a.node(n.rhs).kind) <= prec);
      break;
    case FKind::Imp:
      child(n.lhs, op_prec(a.node(n.lhs).kind) <= prec);
      out += op_text(n.kind);
      child(n.rhs, op_prec(a.node(n.rhs).kind) < prec);
      break;
  }
}

}  // namespace

FormulaId parse_flow_ltl(FormulaArena& arena, const std::string& text) {
  Lexer lex{text};
  Parser parser{arena, lex.run()};
  FormulaId f = parser.parse_imp();
  if (parser.peek().type != Tok::End)
    fail(parser.peek(), "trailing input after formula");
  return f;
}

std::string render(const FormulaArena& arena, FormulaId f) {
  std::string out;
  render_rec(arena, f, out);
  return out;
}

}  // namespace transitmc
