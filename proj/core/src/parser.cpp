#include "luset/parser.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "luset/analysis.hpp"

namespace luset {

namespace {

enum class Tok { Ident, Int, Keyword, Symbol, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceSpan span;
};

const std::unordered_set<std::string> kKeywords = {
    "node", "returns", "var", "let", "tel", "fby", "when", "merge", "if", "then", "else",
    "not", "and", "or", "xor", "div", "mod", "true", "false", "int", "bool"};

struct SyntaxFailure {
  Diagnostic diag;
};

class Lexer {
 public:
  Lexer(std::string_view text, std::string file) : text_(text), file_(std::move(file)) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_blanks();
      Token t;
      t.span.file = file_;
      t.span.line = line_;
      t.span.col = col_;
      if (pos_ >= text_.size()) {
        t.kind = Tok::End;
        t.span.end_line = line_;
        t.span.end_col = col_;
        out.push_back(t);
        return out;
      }
      char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
          t.text += advance();
        t.kind = kKeywords.count(t.text) ? Tok::Keyword : Tok::Ident;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
          t.text += advance();
        t.kind = Tok::Int;
      } else {
        static const char* two[] = {"<>", "<=", ">="};
        t.kind = Tok::Symbol;
        for (const char* s : two)
          if (text_.substr(pos_, 2) == s) {
            t.text += advance();
            t.text += advance();
            break;
          }
        if (t.text.empty()) {
          if (std::string_view("(),;:=<>+-*").find(c) == std::string_view::npos) {
            Diagnostic d{ErrorKind::SyntaxError, t.span, "", -1,
                         std::string("unexpected character '") + c + "'"};
            throw SyntaxFailure{d};
          }
          t.text += advance();
        }
      }
      t.span.end_line = line_;
      t.span.end_col = col_;
      out.push_back(t);
    }
  }

 private:
  std::string_view text_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;

  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_blanks() {
    for (;;) {
      while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
      if (text_.substr(pos_, 2) == "--") {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (text_.substr(pos_, 2) == "(*") {
        SourceSpan start{file_, line_, col_, line_, col_};
        advance();
        advance();
        while (pos_ < text_.size() && text_.substr(pos_, 2) != "*)") advance();
        if (pos_ >= text_.size())
          throw SyntaxFailure{{ErrorKind::SyntaxError, start, "", -1, "unterminated comment"}};
        advance();
        advance();
      } else {
        return;
      }
    }
  }
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program program() {
    Program p;
    while (!at_end()) p.nodes.push_back(node());
    return p;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at_end() const { return peek().kind == Tok::End; }
  bool is(std::string_view s, std::size_t ahead = 0) const {
    const auto& t = peek(ahead);
    return (t.kind == Tok::Symbol || t.kind == Tok::Keyword) && t.text == s;
  }
  bool accept(std::string_view s) {
    if (!is(s)) return false;
    ++pos_;
    return true;
  }

  [[noreturn]] void error(const std::string& expected) const {
    const auto& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxFailure{{ErrorKind::SyntaxError, t.span, "", -1,
                         "syntax error: expected " + expected + ", found " + found}};
  }

  void expect(std::string_view s) {
    if (!accept(s)) error("'" + std::string(s) + "'");
  }

  std::string ident() {
    if (peek().kind != Tok::Ident) error("identifier");
    return toks_[pos_++].text;
  }

  SourceSpan span_from(const SourceSpan& start) const {
    SourceSpan s = start;
    const auto& last = toks_[pos_ == 0 ? 0 : pos_ - 1];
    s.end_line = last.span.end_line;
    s.end_col = last.span.end_col;
    return s;
  }

  Node node() {
    Node n;
    SourceSpan start = peek().span;
    expect("node");
    n.name = ident();
    expect("(");
    if (!is(")")) n.inputs = decls();
    expect(")");
    expect("returns");
    expect("(");
    n.outputs = decls();
    expect(")");
    accept(";");
    if (accept("var")) {
      n.locals = decls();
      accept(";");
    }
    expect("let");
    while (!is("tel")) n.equations.push_back(equation());
    expect("tel");
    accept(";");
    n.span = span_from(start);
    return n;
  }

  std::vector<VarDecl> decls() {
    std::vector<VarDecl> out;
    for (;;) {
      std::vector<std::pair<std::string, SourceSpan>> names;
      do {
        SourceSpan s = peek().span;
        names.emplace_back(ident(), s);
      } while (accept(","));
      expect(":");
      DataType t;
      if (accept("int"))
        t = DataType::Int;
      else if (accept("bool"))
        t = DataType::Bool;
      else
        error("type 'int' or 'bool'");
      Clock ck;
      while (accept("when")) {
        bool k = !accept("not");
        ck = ck.on(ident(), k);
      }
      for (auto& [name, s] : names) out.push_back({name, t, ck, s});
      if ((is(";") || is(",")) && peek(1).kind == Tok::Ident) {
        ++pos_;
        continue;
      }
      return out;
    }
  }

  Equation equation() {
    SourceSpan start = peek().span;
    std::vector<std::string> lhs;
    if (accept("(")) {
      do lhs.push_back(ident());
      while (accept(","));
      expect(")");
    } else {
      lhs.push_back(ident());
    }
    expect("=");
    auto rhs = flows();
    while (accept(",")) {
      auto more = flows();
      rhs.insert(rhs.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    }
    expect(";");
    Equation eq = Equation::def(std::move(lhs), std::move(rhs));
    eq.span = span_from(start);
    return eq;
  }

  Expr one(std::vector<Expr> es, const SourceSpan& at) {
    if (es.size() != 1)
      throw SyntaxFailure{{ErrorKind::SyntaxError, at, "", -1, "syntax error: expected a single flow"}};
    return std::move(es[0]);
  }

  // Full expression: a list of flows, since parentheses may build tuples.
  std::vector<Expr> flows() {
    SourceSpan start = peek().span;
    if (accept("if")) {
      Expr c = one(flows(), start);
      expect("then");
      auto ts = flows();
      expect("else");
      auto fs = flows();
      Expr e = Expr::ite(std::move(c), std::move(ts), std::move(fs));
      e.span = span_from(start);
      return {e};
    }
    auto lhs = level_or();
    if (accept("fby")) {
      auto rhs = flows();
      Expr e = Expr::fby(std::move(lhs), std::move(rhs));
      e.span = span_from(start);
      return {e};
    }
    return lhs;
  }

  template <typename Next>
  std::vector<Expr> binary_level(Next next, std::initializer_list<std::pair<std::string_view, BinOp>> ops) {
    SourceSpan start = peek().span;
    auto lhs = (this->*next)();
    for (;;) {
      const std::pair<std::string_view, BinOp>* hit = nullptr;
      for (const auto& op : ops)
        if (is(op.first)) hit = &op;
      if (!hit) return lhs;
      ++pos_;
      Expr a = one(std::move(lhs), start);
      Expr b = one((this->*next)(), start);
      Expr e = Expr::binary(hit->second, std::move(a), std::move(b));
      e.span = span_from(start);
      lhs = {e};
    }
  }

  std::vector<Expr> level_or() {
    return binary_level(&Parser::level_and, {{"or", BinOp::Or}, {"xor", BinOp::Xor}});
  }
  std::vector<Expr> level_and() { return binary_level(&Parser::level_cmp, {{"and", BinOp::And}}); }
  std::vector<Expr> level_cmp() {
    return binary_level(&Parser::level_add, {{"=", BinOp::Eq},
                                             {"<>", BinOp::Ne},
                                             {"<", BinOp::Lt},
                                             {"<=", BinOp::Le},
                                             {">", BinOp::Gt},
                                             {">=", BinOp::Ge}});
  }
  std::vector<Expr> level_add() {
    return binary_level(&Parser::level_mul, {{"+", BinOp::Add}, {"-", BinOp::Sub}});
  }
  std::vector<Expr> level_mul() {
    return binary_level(&Parser::level_unary,
                        {{"*", BinOp::Mul}, {"div", BinOp::Div}, {"mod", BinOp::Mod}});
  }

  std::vector<Expr> level_unary() {
    SourceSpan start = peek().span;
    if (accept("not")) {
      Expr e = Expr::unary(UnOp::Not, one(level_unary(), start));
      e.span = span_from(start);
      return {e};
    }
    if (is("-")) {
      ++pos_;
      if (peek().kind == Tok::Int && !is("when", 1)) {
        Expr e = Expr::constant(Literal::integer(negative_literal()));
        e.span = span_from(start);
        return {e};
      }
      Expr e = Expr::unary(UnOp::Neg, one(level_unary(), start));
      e.span = span_from(start);
      return {e};
    }
    return level_when();
  }

  std::int64_t negative_literal() {
    const auto& t = toks_[pos_];
    unsigned long long v = 0;
    try {
      v = std::stoull(t.text);
    } catch (...) {
      error("integer literal in range");
    }
    if (v > 9223372036854775808ULL) error("integer literal in range");
    ++pos_;
    return v == 9223372036854775808ULL ? INT64_MIN : -static_cast<std::int64_t>(v);
  }

  std::vector<Expr> level_when() {
    SourceSpan start = peek().span;
    auto es = primary();
    while (accept("when")) {
      bool k = true;
      if (accept("not")) k = false;
      std::string x = ident();
      if (is("=") && (is("true", 1) || is("false", 1))) {
        ++pos_;
        k = toks_[pos_++].text == "true" ? k : !k;
      }
      Expr e = Expr::when(std::move(es), std::move(x), k);
      e.span = span_from(start);
      es = {e};
    }
    return es;
  }

  std::vector<Expr> primary() {
    SourceSpan start = peek().span;
    const Token& t = peek();
    if (t.kind == Tok::Int) {
      ++pos_;
      std::int64_t v = 0;
      try {
        v = std::stoll(t.text);
      } catch (...) {
        --pos_;
        error("integer literal in range");
      }
      Expr e = Expr::constant(Literal::integer(v));
      e.span = span_from(start);
      return {e};
    }
    if (accept("true") || accept("false")) {
      Expr e = Expr::constant(Literal::boolean(toks_[pos_ - 1].text == "true"));
      e.span = span_from(start);
      return {e};
    }
    if (t.kind == Tok::Ident) {
      std::string name = ident();
      if (accept("(")) {
        std::vector<Expr> args;
        if (!is(")")) args = arguments();
        expect(")");
        Expr e = Expr::call(std::move(name), std::move(args));
        e.span = span_from(start);
        return {e};
      }
      Expr e = Expr::var(std::move(name));
      e.span = span_from(start);
      return {e};
    }
    if (accept("merge")) {
      std::string x = ident();
      auto ts = primary_or_when_operand();
      auto fs = primary_or_when_operand();
      Expr e = Expr::merge(std::move(x), std::move(ts), std::move(fs));
      e.span = span_from(start);
      return {e};
    }
    if (accept("(")) {
      auto es = arguments();
      expect(")");
      return es;
    }
    if (is("if")) return flows();
    error("expression");
  }

  std::vector<Expr> primary_or_when_operand() { return primary(); }

  std::vector<Expr> arguments() {
    auto es = flows();
    while (accept(",")) {
      auto more = flows();
      es.insert(es.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    }
    return es;
  }
};

// Printing precedence levels, lowest binding first.
enum Level { kIte = 0, kFby, kOr, kAnd, kCmp, kAdd, kMul, kUnary, kWhen, kAtom };

int binop_level(BinOp op) {
  switch (op) {
    case BinOp::Or: case BinOp::Xor: return kOr;
    case BinOp::And: return kAnd;
    case BinOp::Add: case BinOp::Sub: return kAdd;
    case BinOp::Mul: case BinOp::Div: case BinOp::Mod: return kMul;
    default: return kCmp;
  }
}

int level_of(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Const: return e.lit.type == DataType::Int && e.lit.value < 0 ? kUnary : kAtom;
    case Expr::Kind::Var:
    case Expr::Kind::Call:
    case Expr::Kind::Merge: return kAtom;
    case Expr::Kind::Unop: return kUnary;
    case Expr::Kind::Binop: return binop_level(e.binop);
    case Expr::Kind::When: return kWhen;
    case Expr::Kind::Ite: return kIte;
    case Expr::Kind::Fby: return kFby;
  }
  return kAtom;
}

void print(std::ostream& os, const Expr& e, int min_level);

void print_list(std::ostream& os, const std::vector<Expr>& es, int min_level) {
  if (es.size() == 1) {
    print(os, es[0], min_level);
    return;
  }
  os << '(';
  for (std::size_t i = 0; i < es.size(); ++i) {
    if (i) os << ", ";
    print(os, es[i], kIte);
  }
  os << ')';
}

void print(std::ostream& os, const Expr& e, int min_level) {
  bool paren = level_of(e) < min_level;
  if (paren) os << '(';
  switch (e.kind) {
    case Expr::Kind::Const: os << to_string(e.lit); break;
    case Expr::Kind::Var: os << e.name; break;
    case Expr::Kind::Unop:
      if (e.unop == UnOp::Not) {
        os << "not ";
        print(os, e.args[0], kUnary);
      } else {
        os << '-';
        if (e.args[0].kind == Expr::Kind::Var) {
          os << e.args[0].name;
        } else {
          os << '(';
          print(os, e.args[0], kIte);
          os << ')';
        }
      }
      break;
    case Expr::Kind::Binop: {
      int lvl = binop_level(e.binop);
      auto operand = [&](const Expr& a, int min) {
        if (a.kind == Expr::Kind::When) min = kAtom;
        print(os, a, min);
      };
      operand(e.args[0], lvl);
      os << ' ' << to_string(e.binop) << ' ';
      operand(e.args[1], lvl + 1);
      break;
    }
    case Expr::Kind::When:
      print_list(os, e.args, kWhen);
      os << " when " << (e.k ? "" : "not ") << e.name;
      break;
    case Expr::Kind::Merge:
      os << "merge " << e.name << ' ';
      // a bare variable followed by a parenthesised branch would read as a call
      if (e.on_true.size() == 1 && e.on_true[0].kind == Expr::Kind::Var)
        os << '(' << e.on_true[0].name << ')';
      else
        print_list(os, e.on_true, kAtom);
      os << ' ';
      print_list(os, e.on_false, kAtom);
      break;
    case Expr::Kind::Ite:
      os << "if ";
      print(os, e.args[0], kIte);
      os << " then ";
      print_list(os, e.on_true, kIte);
      os << " else ";
      print_list(os, e.on_false, kIte);
      break;
    case Expr::Kind::Fby:
      print_list(os, e.args, kOr);
      os << " fby ";
      print_list(os, e.next, kFby);
      break;
    case Expr::Kind::Call:
      os << e.name << '(';
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) os << ", ";
        print(os, e.args[i], kIte);
      }
      os << ')';
      break;
  }
  if (paren) os << ')';
}

void print_decls(std::ostream& os, const std::vector<VarDecl>& ds) {
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (i) os << "; ";
    os << ds[i].name << ": " << to_string(ds[i].type);
    for (const auto& st : ds[i].clock.steps) os << " when " << (st.k ? "" : "not ") << st.var;
  }
}

void print_equation(std::ostream& os, const Equation& eq) {
  os << "  ";
  if (eq.lhs.size() == 1) {
    os << eq.lhs[0];
  } else {
    os << '(';
    for (std::size_t i = 0; i < eq.lhs.size(); ++i) os << (i ? ", " : "") << eq.lhs[i];
    os << ')';
  }
  os << " = ";
  switch (eq.kind) {
    case Equation::Kind::Def: print_list(os, eq.rhs, kIte); break;
    case Equation::Kind::NDef: print(os, eq.rhs[0], kIte); break;
    case Equation::Kind::NFby:
      os << to_string(eq.init) << " fby ";
      print(os, eq.rhs[0], kFby);
      break;
    case Equation::Kind::NCall:
      os << eq.callee << '(';
      for (std::size_t i = 0; i < eq.rhs.size(); ++i) {
        if (i) os << ", ";
        print(os, eq.rhs[i], kIte);
      }
      os << ')';
      break;
  }
  os << ';';
  if (eq.kind != Equation::Kind::Def && !eq.clock.is_base()) os << " (* " << to_string(eq.clock) << " *)";
  os << '\n';
}

}  // namespace

ParseResult parse_program(std::string_view text, std::string file) {
  ParseResult r;
  try {
    Lexer lex(text, std::move(file));
    Parser p(lex.run());
    r.program = p.program();
  } catch (const SyntaxFailure& f) {
    r.diagnostics.push_back(f.diag);
  }
  return r;
}

Program load_program(std::string_view text, std::string file) {
  auto r = parse_program(text, std::move(file));
  if (!r.ok()) throw Error(r.diagnostics.front());
  auto diags = well_formed(*r.program);
  if (!diags.empty()) throw Error(diags.front());
  Program p = infer_clocks(*r.program);
  for (const auto& n : p.nodes) schedule(n);
  return p;
}

Program load_program_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_program(ss.str(), path);
}

std::string pretty_print(const Expr& e) {
  std::ostringstream os;
  print(os, e, kIte);
  return os.str();
}

std::string pretty_print(const Node& n) {
  std::ostringstream os;
  os << "node " << n.name << '(';
  print_decls(os, n.inputs);
  os << ")\n  returns (";
  print_decls(os, n.outputs);
  os << ");\n";
  if (!n.locals.empty()) {
    os << "var ";
    print_decls(os, n.locals);
    os << ";\n";
  }
  os << "let\n";
  for (const auto& eq : n.equations) print_equation(os, eq);
  os << "tel\n";
  return os.str();
}

std::string pretty_print(const Program& prog) {
  std::string out;
  for (std::size_t i = 0; i < prog.nodes.size(); ++i) {
    if (i) out += '\n';
    out += pretty_print(prog.nodes[i]);
  }
  return out;
}

}  // namespace luset
