#pragma once

// Text reader for the rule language.
//
// Grammar (whitespace-insensitive, `%` starts a line comment):
//   program    := { rule }
//   rule       := atom [ ":-" body ] "." | ":-" body "." | choice
//   choice     := [INT] "{" atom {sep atom} "}" [INT] [ ":-" body ] "."
//   body       := literal { sep literal }
//   sep        := "," | ";"
//   literal    := [ "not" ] atom
//   atom       := IDENT [ "(" term { "," term } ")" ]
//   term       := INT [ ".." INT ] | VAR [ "+" INT ] | IDENT [ "(" ... ")" ]
// Interval arguments `l..u` are sugar accepted only in facts and expand
// to one fact per combination. Arithmetic is restricted to `+1`.
// Aggregates are outside the language and rejected with an explicit
// error so callers never mistake them for parse noise.

#include <cctype>
#include <string>
#include <vector>

#include "fabula/program.hpp"
#include "fabula/term.hpp"

namespace fabula {

class ParseError : public std::runtime_error {
public:
  ParseError(int line, int col, const std::string& msg)
      : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                           std::to_string(col) + ": " + msg),
        line(line),
        col(col) {}
  int line;
  int col;
};

namespace detail {

enum class Tok {
  ident, var, integer, lparen, rparen, lbrace, rbrace,
  comma, semicolon, dot, dotdot, plus, arrow, end
};

struct Token {
  Tok kind;
  std::string text;
  long long value = 0;
  int line = 1, col = 1;
};

class Lexer {
public:
  explicit Lexer(const std::string& src) : src_(src) {}

  Token next() {
    skip_ws();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= src_.size()) {
      t.kind = Tok::end;
      return t;
    }
    char c = src_[pos_];
    if (c == '#') {
      std::string word = peek_word_after(1);
      if (word == "count" || word == "sum" || word == "min" || word == "max")
        fail("aggregates unsupported (found '#" + word + "')");
      fail("directives unsupported (found '#" + word + "')");
    }
    if (c == '=')
      fail("aggregates unsupported (found '=' assignment)");
    if (c == ':') {
      if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
        advance(2);
        t.kind = Tok::arrow;
        return t;
      }
      fail("expected ':-'");
    }
    if (c == '.') {
      if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '.') {
        advance(2);
        t.kind = Tok::dotdot;
        return t;
      }
      advance(1);
      t.kind = Tok::dot;
      return t;
    }
    switch (c) {
      case '(': advance(1); t.kind = Tok::lparen; return t;
      case ')': advance(1); t.kind = Tok::rparen; return t;
      case '{': advance(1); t.kind = Tok::lbrace; return t;
      case '}': advance(1); t.kind = Tok::rbrace; return t;
      case ',': advance(1); t.kind = Tok::comma; return t;
      case ';': advance(1); t.kind = Tok::semicolon; return t;
      case '+': advance(1); t.kind = Tok::plus; return t;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
        advance(1);
      t.kind = Tok::integer;
      t.text = src_.substr(start, pos_ - start);
      t.value = std::stoll(t.text);
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        advance(1);
      t.text = src_.substr(start, pos_ - start);
      t.kind = std::isupper(static_cast<unsigned char>(c)) ? Tok::var : Tok::ident;
      if (c == '_') fail("identifiers may not start with '_': " + t.text);
      return t;
    }
    fail(std::string("unexpected character '") + c + "'");
    return t;  // unreachable
  }

private:
  void skip_ws() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
      } else {
        break;
      }
    }
  }

  std::string peek_word_after(size_t offset) const {
    size_t p = pos_ + offset;
    std::string out;
    while (p < src_.size() && std::isalpha(static_cast<unsigned char>(src_[p])))
      out.push_back(src_[p++]);
    return out;
  }

  void advance(size_t n) {
    for (size_t i = 0; i < n && pos_ < src_.size(); ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, col_, msg); }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

class Parser {
public:
  explicit Parser(const std::string& src) : lex_(src) { shift(); }

  Program parse_program() {
    std::vector<Rule> rules;
    while (cur_.kind != Tok::end) parse_rule(rules);
    Program p(std::move(rules));
    p.validate();
    return p;
  }

  Atom parse_single_atom() {
    Atom a = parse_atom();
    expect(Tok::end, "end of input after atom");
    return a;
  }

private:
  void parse_rule(std::vector<Rule>& out) {
    if (cur_.kind == Tok::arrow) {
      shift();
      std::vector<Literal> body = parse_body();
      expect(Tok::dot, "'.' after constraint");
      out.push_back(Rule::constraint(std::move(body)));
      return;
    }
    if (cur_.kind == Tok::lbrace ||
        (cur_.kind == Tok::integer && peek_is_lbrace_)) {
      parse_choice(out);
      return;
    }
    if (cur_.kind != Tok::ident) fail("expected rule");
    Atom head = parse_atom();
    if (cur_.kind == Tok::dot) {
      shift();
      expand_fact(std::move(head), out);
      return;
    }
    expect(Tok::arrow, "':-' or '.' after rule head");
    std::vector<Literal> body = parse_body();
    expect(Tok::dot, "'.' after rule body");
    require_no_interval(head);
    Rule r = Rule::normal(std::move(head), std::move(body));
    for (const Literal& l : r.body()) require_no_interval(l.atom);
    out.push_back(std::move(r));
  }

  void parse_choice(std::vector<Rule>& out) {
    long long lower = 0;
    bool has_lower = false;
    if (cur_.kind == Tok::integer) {
      lower = cur_.value;
      has_lower = true;
      shift();
    }
    expect(Tok::lbrace, "'{' in choice rule");
    std::vector<Atom> heads;
    heads.push_back(parse_atom());
    while (cur_.kind == Tok::semicolon || cur_.kind == Tok::comma) {
      shift();
      heads.push_back(parse_atom());
    }
    expect(Tok::rbrace, "'}' in choice rule");
    long long upper = static_cast<long long>(heads.size());
    if (cur_.kind == Tok::integer) {
      upper = cur_.value;
      shift();
    }
    if (!has_lower) lower = 0;
    std::vector<Literal> body;
    if (cur_.kind == Tok::arrow) {
      shift();
      body = parse_body();
    }
    expect(Tok::dot, "'.' after choice rule");
    for (const Atom& h : heads) require_no_interval(h);
    for (const Literal& l : body) require_no_interval(l.atom);
    out.push_back(Rule::choice(lower, std::move(heads), upper, std::move(body)));
  }

  std::vector<Literal> parse_body() {
    std::vector<Literal> body;
    body.push_back(parse_literal());
    while (cur_.kind == Tok::comma || cur_.kind == Tok::semicolon) {
      shift();
      body.push_back(parse_literal());
    }
    return body;
  }

  Literal parse_literal() {
    if (cur_.kind == Tok::lbrace)
      fail("aggregates unsupported (found '{' in rule body)");
    bool neg = false;
    if (cur_.kind == Tok::ident && cur_.text == "not") {
      neg = true;
      shift();
    }
    return Literal(parse_atom(), neg);
  }

  Atom parse_atom() {
    if (cur_.kind == Tok::var) {
      // a leading variable usually heads an assignment; scanning one
      // token further lets the lexer report the '=' it finds there
      int line = cur_.line, col = cur_.col;
      shift();
      throw ParseError(line, col, "expected predicate name");
    }
    if (cur_.kind != Tok::ident) fail("expected predicate name");
    if (cur_.text == "not") fail("'not' is reserved");
    std::string pred = cur_.text;
    shift();
    std::vector<Term> args;
    if (cur_.kind == Tok::lparen) {
      shift();
      args.push_back(parse_term());
      while (cur_.kind == Tok::comma) {
        shift();
        args.push_back(parse_term());
      }
      expect(Tok::rparen, "')' closing argument list");
    }
    return Atom(std::move(pred), std::move(args));
  }

  Term parse_term() {
    switch (cur_.kind) {
      case Tok::integer: {
        long long lo = cur_.value;
        shift();
        if (cur_.kind == Tok::dotdot) {
          shift();
          if (cur_.kind != Tok::integer) fail("expected integer after '..'");
          long long hi = cur_.value;
          shift();
          if (hi < lo) fail("empty interval");
          // Marker compound, expanded by expand_fact; rejected elsewhere.
          return Term::compound("..", {Term::integer(lo), Term::integer(hi)});
        }
        return Term::integer(lo);
      }
      case Tok::var: {
        Term v = Term::variable(cur_.text);
        shift();
        if (cur_.kind == Tok::plus) {
          shift();
          if (cur_.kind != Tok::integer) fail("expected integer after '+'");
          if (cur_.value != 1) fail("only +1 arithmetic supported");
          shift();
          return Term::plus(std::move(v), 1);
        }
        return v;
      }
      case Tok::ident: {
        std::string name = cur_.text;
        shift();
        if (cur_.kind == Tok::lparen) {
          shift();
          std::vector<Term> args;
          args.push_back(parse_term());
          while (cur_.kind == Tok::comma) {
            shift();
            args.push_back(parse_term());
          }
          expect(Tok::rparen, "')' closing compound term");
          return Term::compound(std::move(name), std::move(args));
        }
        return Term::constant(std::move(name));
      }
      default:
        fail("expected term");
    }
    return Term();  // unreachable
  }

  static bool is_interval(const Term& t) {
    return t.kind() == Term::Kind::compound && t.name() == "..";
  }

  void require_no_interval(const Atom& a) const {
    for (const Term& t : a.args)
      if (contains_interval(t))
        throw ParseError(cur_.line, cur_.col,
                         "interval terms are only allowed in facts: " + a.str());
  }

  static bool contains_interval(const Term& t) {
    if (is_interval(t)) return true;
    for (const Term& a : t.args())
      if (contains_interval(a)) return true;
    return false;
  }

  // `time(1..3).` becomes time(1). time(2). time(3). Multiple interval
  // arguments expand as a cross product.
  void expand_fact(Atom head, std::vector<Rule>& out) {
    size_t slot = head.args.size();
    for (size_t i = 0; i < head.args.size(); ++i) {
      if (is_interval(head.args[i])) {
        slot = i;
        break;
      }
      if (contains_interval(head.args[i]))
        fail("interval terms may not be nested: " + head.str());
    }
    if (slot == head.args.size()) {
      out.push_back(Rule::fact(std::move(head)));
      return;
    }
    long long lo = head.args[slot].args()[0].value();
    long long hi = head.args[slot].args()[1].value();
    for (long long v = lo; v <= hi; ++v) {
      Atom inst = head;
      inst.args[slot] = Term::integer(v);
      expand_fact(std::move(inst), out);
    }
  }

  void shift() {
    cur_ = lex_.next();
    if (cur_.kind == Tok::integer) {
      Lexer probe = lex_;
      peek_is_lbrace_ = probe.next().kind == Tok::lbrace;
    } else {
      peek_is_lbrace_ = false;
    }
  }

  void expect(Tok k, const std::string& what) {
    if (cur_.kind != k) fail("expected " + what);
    shift();
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(cur_.line, cur_.col, msg);
  }

  Lexer lex_;
  Token cur_;
  bool peek_is_lbrace_ = false;
};

}  // namespace detail

// Parses and validates a whole program.
inline Program parse_program(const std::string& text) {
  return detail::Parser(text).parse_program();
}

// Parses a single atom; variables are allowed.
inline Atom parse_atom(const std::string& text) {
  return detail::Parser(text).parse_single_atom();
}

}  // namespace fabula
