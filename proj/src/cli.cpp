#include "infcalc/cli.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <variant>

#include "infcalc/oracle.hpp"
#include "infcalc/render.hpp"
#include "infcalc/riemann.hpp"
#include "infcalc/sets.hpp"
#include "infcalc/summation.hpp"

namespace infcalc {

namespace {

// -- lexer ------------------------------------------------------------------

struct Token {
  enum class Kind { Number, Ident, Op, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 1;
  int column = 1;
};

[[noreturn]] void syntax_error(int line, int column, const std::string& msg) {
  throw Error(ErrorCode::Syntax, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg);
}

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1;
  int column = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = column;
    if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j + 1 < text.size() && text[j] == '.' && std::isdigit(static_cast<unsigned char>(text[j + 1]))) {
        ++j;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      }
      t.kind = Token::Kind::Number;
      t.text = text.substr(i, j - i);
    } else if (std::isalpha(c) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      t.kind = Token::Kind::Ident;
      t.text = text.substr(i, j - i);
    } else {
      static const char* two[] = {"..", "<=", ">=", "==", "!="};
      t.kind = Token::Kind::Op;
      for (const char* op : two) {
        if (text.compare(i, 2, op) == 0) t.text = op;
      }
      if (t.text.empty()) {
        if (std::string("+-*/^(),~=<>").find(static_cast<char>(c)) == std::string::npos) {
          syntax_error(line, column, std::string("unexpected character '") + static_cast<char>(c) + "'");
        }
        t.text = std::string(1, static_cast<char>(c));
      }
    }
    advance(t.text.size());
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.column = column;
  out.push_back(end);
  return out;
}

// -- parser -----------------------------------------------------------------

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Ast statement() {
    if (peek().kind == Token::Kind::End) syntax_error(peek().line, peek().column, "empty input");
    Ast a = comparison();
    if (peek().kind != Token::Kind::End) syntax_error(peek().line, peek().column, "unexpected '" + peek().text + "'");
    return a;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool is_op(const std::string& op, std::size_t k = 0) const {
    return peek(k).kind == Token::Kind::Op && peek(k).text == op;
  }
  Token take() { return toks_[pos_++]; }
  void expect(const std::string& op) {
    if (!is_op(op)) {
      const Token& t = peek();
      syntax_error(t.line, t.column, "expected '" + op + "' but found " + (t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'"));
    }
    ++pos_;
  }

  static Ast node(Ast::Kind kind, const Token& at, std::string text = {}, std::vector<Ast> kids = {}) {
    Ast a;
    a.kind = kind;
    a.text = std::move(text);
    a.kids = std::move(kids);
    a.line = at.line;
    a.column = at.column;
    return a;
  }

  Ast comparison() {
    Ast lhs = expr();
    for (const char* op : {"<", "<=", ">", ">=", "==", "!="}) {
      if (is_op(op)) {
        const Token t = take();
        Ast rhs = expr();
        return node(Ast::Kind::Compare, t, t.text, {std::move(lhs), std::move(rhs)});
      }
    }
    return lhs;
  }

  Ast expr() {
    Ast lhs = term();
    while (is_op("+") || is_op("-")) {
      const Token t = take();
      lhs = node(Ast::Kind::Binary, t, t.text, {std::move(lhs), term()});
    }
    return lhs;
  }

  Ast term() {
    Ast lhs = unary();
    while (is_op("*") || is_op("/")) {
      const Token t = take();
      lhs = node(Ast::Kind::Binary, t, t.text, {std::move(lhs), unary()});
    }
    return lhs;
  }

  Ast unary() {
    if (is_op("-")) {
      const Token t = take();
      return node(Ast::Kind::Neg, t, "-", {unary()});
    }
    return power();
  }

  Ast power() {
    Ast base = atom();
    if (is_op("^")) {
      const Token t = take();
      return node(Ast::Kind::Binary, t, "^", {std::move(base), unary()});
    }
    return base;
  }

  Ast atom() {
    const Token& t = peek();
    if (t.kind == Token::Kind::Number) return node(Ast::Kind::Number, take(), t.text);
    if (is_op("~")) {
      const Token at = take();
      return node(Ast::Kind::Tilde, at, "~", {atom()});
    }
    if (is_op("(")) {
      take();
      Ast inner = comparison();
      expect(")");
      return inner;
    }
    if (t.kind == Token::Kind::Ident) {
      const Token name = take();
      if (!is_op("(")) return node(Ast::Kind::Name, name, name.text);
      take();
      std::vector<Ast> args;
      if (!is_op(")")) {
        args.push_back(argument());
        while (is_op(",")) {
          take();
          args.push_back(argument());
        }
      }
      expect(")");
      return node(Ast::Kind::Call, name, name.text, std::move(args));
    }
    syntax_error(t.line, t.column, t.kind == Token::Kind::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
  }

  Ast argument() {
    if (peek().kind == Token::Kind::Ident && is_op("=", 1)) {
      const Token name = take();
      take();
      return node(Ast::Kind::Keyword, name, name.text, {range_or_expr()});
    }
    return range_or_expr();
  }

  Ast range_or_expr() {
    Ast lo = comparison();
    if (is_op("..")) {
      const Token t = take();
      return node(Ast::Kind::Range, t, "..", {std::move(lo), expr()});
    }
    return lo;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// -- name resolution ----------------------------------------------------------

const std::set<std::string>& constants() {
  static const std::set<std::string> c{"lam", "pi", "gamma", "N", "Z", "Q", "B", "evens", "odds", "squares"};
  return c;
}

struct Arity {
  std::size_t min;
  std::size_t max;
};

const std::map<std::string, Arity>& functions() {
  static const std::map<std::string, Arity> f{
      {"sum", {2, 2}},     {"int", {2, 2}},     {"card", {1, 1}},    {"binom", {2, 2}},   {"exp", {1, 1}},
      {"ln", {1, 1}},      {"pow", {2, 2}},     {"O", {1, 1}},       {"compare", {2, 2}}, {"scenario", {1, 4}},
      {"oracle", {1, 2}},  {"seg", {1, 1}},     {"strings", {1, 2}}, {"stratum", {1, 1}},
  };
  return f;
}

[[noreturn]] void unknown(const Ast& a, const std::string& what) {
  throw Error(ErrorCode::UnknownIdentifier,
              "line " + std::to_string(a.line) + ", column " + std::to_string(a.column) + ": unknown " + what + " '" + a.text + "'");
}

void resolve(const Ast& a, std::vector<std::string>& scope) {
  switch (a.kind) {
    case Ast::Kind::Number:
      return;
    case Ast::Kind::Name:
      if (!constants().count(a.text) && std::find(scope.begin(), scope.end(), a.text) == scope.end()) {
        unknown(a, "identifier");
      }
      return;
    case Ast::Kind::Range:
    case Ast::Kind::Keyword:
      for (const auto& k : a.kids) resolve(k, scope);
      return;
    case Ast::Kind::Neg:
    case Ast::Kind::Binary:
    case Ast::Kind::Compare:
    case Ast::Kind::Tilde:
      for (const auto& k : a.kids) resolve(k, scope);
      return;
    case Ast::Kind::Call:
      break;
  }
  const auto f = functions().find(a.text);
  if (f == functions().end()) unknown(a, "function");
  if (a.kids.size() < f->second.min || a.kids.size() > f->second.max) {
    syntax_error(a.line, a.column, a.text + " takes " + std::to_string(f->second.min) +
                                       (f->second.max != f->second.min ? " to " + std::to_string(f->second.max) : "") +
                                       " argument(s)");
  }
  for (std::size_t i = 0; i < a.kids.size(); ++i) {
    if (a.kids[i].kind == Ast::Kind::Range && !(i == 0 && (a.text == "sum" || a.text == "int"))) {
      syntax_error(a.kids[i].line, a.kids[i].column, "a range is only allowed as the first argument of sum or int");
    }
  }
  if (a.text == "sum" || a.text == "int") {
    const Ast& r = a.kids[0];
    std::string var = "x";
    const Ast* range = &r;
    if (r.kind == Ast::Kind::Keyword) {
      var = r.text;
      range = &r.kids[0];
    } else if (a.text == "sum") {
      syntax_error(r.line, r.column, "sum needs an index, as in sum(n=1..lam, n)");
    }
    if (range->kind != Ast::Kind::Range) syntax_error(range->line, range->column, "expected a range lo..hi");
    resolve(*range, scope);
    scope.push_back(var);
    resolve(a.kids[1], scope);
    scope.pop_back();
    return;
  }
  if (a.text == "scenario") {
    if (a.kids[0].kind != Ast::Kind::Name) syntax_error(a.kids[0].line, a.kids[0].column, "expected a scenario name");
    for (std::size_t i = 1; i < a.kids.size(); ++i) {
      if (a.kids[i].kind != Ast::Kind::Keyword) {
        syntax_error(a.kids[i].line, a.kids[i].column, "scenario parameters are written name=value");
      }
      resolve(a.kids[i], scope);
    }
    return;
  }
  for (const auto& k : a.kids) {
    if (k.kind == Ast::Kind::Keyword) syntax_error(k.line, k.column, "unexpected keyword argument '" + k.text + "'");
    resolve(k, scope);
  }
}

// -- printer ----------------------------------------------------------------

int precedence(const Ast& a) {
  switch (a.kind) {
    case Ast::Kind::Compare:
      return 0;
    case Ast::Kind::Binary:
      if (a.text == "+" || a.text == "-") return 1;
      if (a.text == "*" || a.text == "/") return 2;
      return 4;
    case Ast::Kind::Neg:
      return 3;
    default:
      return 5;
  }
}

std::string print_at(const Ast& a, int min_prec) {
  const std::string s = print(a);
  return precedence(a) < min_prec ? "(" + s + ")" : s;
}

// -- values -----------------------------------------------------------------

struct IntegralOrigin {
  FuncExpr f;
  Scalar a;
  Scalar b;
};

using Payload = std::variant<LambdaExpr, StandardPart, SetExpr, bool, OrderDecision, ScenarioReport, OracleEvidence>;

struct Value {
  Payload v;
  std::optional<SumSpec> sum_origin;
  std::optional<IntegralOrigin> int_origin;
  std::optional<std::pair<LambdaExpr, LambdaExpr>> eq_origin;
};

Value of(Payload p) { return Value{std::move(p), std::nullopt, std::nullopt, std::nullopt}; }

std::string evidence_text(const OracleEvidence& e) {
  std::ostringstream out;
  if (e.kind == "identity") {
    if (e.pass) {
      out << "identity holds at N=";
      for (std::size_t i = 0; i < e.ns.size(); ++i) out << (i ? "," : "") << e.ns[i];
    } else {
      for (std::size_t i = 0; i < e.ns.size(); ++i) {
        if (e.lhs[i] != e.rhs[i]) {
          out << "identity fails at N=" << e.ns[i] << ": " << e.lhs[i] << " != " << e.rhs[i];
          break;
        }
      }
    }
  } else if (e.kind == "values") {
    for (std::size_t i = 0; i < e.ns.size(); ++i) out << (i ? "; " : "") << "N=" << e.ns[i] << ": " << e.lhs[i];
  } else {
    for (std::size_t i = 0; i < e.fields.size(); ++i) {
      out << (i ? "; " : "") << e.fields[i].first << ": " << e.fields[i].second;
    }
  }
  return out.str();
}

std::string render_value(const Payload& p) {
  struct {
    std::string operator()(const LambdaExpr& x) const { return render(x); }
    std::string operator()(const StandardPart& s) const { return render(s); }
    std::string operator()(const SetExpr& s) const { return s.to_string(); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(OrderDecision d) const { return to_string(d); }
    std::string operator()(const ScenarioReport& r) const {
      std::size_t passed = 0;
      for (const auto& e : r.evidence) passed += e.pass ? 1 : 0;
      return r.name + ": corrected " + r.corrected.to_string() + "; missing " + render(r.missing_terms) + "; catalog " +
             r.catalog.to_string() + (r.catalog_match ? " (match)" : " (mismatch)") + "; evidence " +
             std::to_string(passed) + "/" + std::to_string(r.evidence.size());
    }
    std::string operator()(const OracleEvidence& e) const { return evidence_text(e); }
  } visitor;
  return std::visit(visitor, p);
}

std::string oracle_number(const OracleValue& v) {
  if (const auto* q = std::get_if<mpq_class>(&v)) {
    const std::string s = q->get_str();
    if (s.size() <= 60) return s;
    return Interval::exact(*q, 128).to_string(20);
  }
  return std::get<Interval>(v).to_string(20);
}

OracleEvidence identity_record(const IdentityRecord& r) {
  OracleEvidence e;
  e.kind = "identity";
  e.pass = r.pass;
  for (std::size_t i = 0; i < r.ns.size(); ++i) {
    e.ns.push_back(r.ns[i].get_str());
    e.lhs.push_back(r.lhs[i].get_str());
    e.rhs.push_back(r.rhs[i].get_str());
  }
  return e;
}

OracleEvidence values_record(const LambdaExpr& x, const std::vector<mpz_class>& ns) {
  OracleEvidence e;
  e.kind = "values";
  for (const auto& n : ns) {
    e.ns.push_back(n.get_str());
    try {
      e.lhs.push_back(oracle_number(oracle_eval(x, FiniteAssignment(n))));
    } catch (const Error& err) {
      e.pass = false;
      e.lhs.push_back(std::string(code_name(err.code())));
    }
  }
  return e;
}

// -- summand recognition ------------------------------------------------------

using Poly = std::vector<LambdaExpr>;

Poly trim(Poly p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
  return p;
}

Poly padd(const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return trim(out);
}

Poly pmul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return trim(out);
}

Poly pscale(const Poly& a, const LambdaExpr& c) { return pmul(a, Poly{c}); }

struct GeomPart {
  LambdaExpr ratio;
  Poly poly;
};

struct RecipPart {
  Scalar num;
  mpq_class a;
  LambdaExpr shift;
  bool alternating = false;  // carries (-1)^{n+1}
};

struct IndexValue {
  std::vector<GeomPart> geo;
  std::vector<RecipPart> rec;

  static IndexValue constant(const LambdaExpr& c) {
    IndexValue v;
    if (!c.is_zero()) v.geo.push_back({LambdaExpr(1), {c}});
    return v;
  }
};

[[noreturn]] void grammar(const std::string& msg) { throw Error(ErrorCode::Grammar, msg); }

Scalar need_scalar(const LambdaExpr& x, const std::string& what) {
  if (auto c = x.as_constant()) return *c;
  throw Error(ErrorCode::Domain, what + " must be a finite constant, got " + render(x));
}

mpq_class need_rational(const LambdaExpr& x, const std::string& what) {
  if (auto c = x.as_constant()) {
    if (auto q = c->as_rational()) return *q;
  }
  throw Error(ErrorCode::Domain, what + " must be a rational constant, got " + render(x));
}

unsigned long need_count(const LambdaExpr& x, const std::string& what, unsigned long cap) {
  const mpq_class q = need_rational(x, what);
  if (q.get_den() != 1 || q < 0 || q > cap) {
    throw Error(ErrorCode::Domain, what + " must be an integer in [0, " + std::to_string(cap) + "], got " + q.get_str());
  }
  return q.get_num().get_ui();
}

IndexValue add(IndexValue a, const IndexValue& b) {
  for (const auto& g : b.geo) {
    bool merged = false;
    for (auto& h : a.geo) {
      if (h.ratio == g.ratio) {
        h.poly = padd(h.poly, g.poly);
        merged = true;
        break;
      }
    }
    if (!merged) a.geo.push_back(g);
  }
  a.rec.insert(a.rec.end(), b.rec.begin(), b.rec.end());
  std::erase_if(a.geo, [](const GeomPart& g) { return g.poly.empty(); });
  return a;
}

IndexValue negate(IndexValue a) {
  for (auto& g : a.geo) g.poly = pscale(g.poly, LambdaExpr(-1));
  for (auto& r : a.rec) r.num = -r.num;
  return a;
}

// single constant-coefficient part c·(±1)^n
std::optional<std::pair<Scalar, bool>> signed_constant(const IndexValue& v) {
  if (!v.rec.empty() || v.geo.size() != 1 || v.geo[0].poly.size() != 1) return std::nullopt;
  const GeomPart& g = v.geo[0];
  const auto c = g.poly[0].as_constant();
  if (!c) return std::nullopt;
  if (g.ratio == LambdaExpr(1)) return std::make_pair(*c, false);
  if (g.ratio == LambdaExpr(-1)) return std::make_pair(*c, true);
  return std::nullopt;
}

RecipPart scale_recip(RecipPart r, const Scalar& c, bool sign_flip) {
  if (sign_flip) {
    // (-1)^n = -(-1)^{n+1}, and (-1)^n (-1)^{n+1} = -1
    r.num = -(r.num * c);
    r.alternating = !r.alternating;
  } else {
    r.num = r.num * c;
  }
  return r;
}

IndexValue mul(const IndexValue& a, const IndexValue& b) {
  if (a.rec.empty() && b.rec.empty()) {
    IndexValue out;
    for (const auto& g : a.geo) {
      for (const auto& h : b.geo) out = add(out, IndexValue{{GeomPart{g.ratio * h.ratio, pmul(g.poly, h.poly)}}, {}});
    }
    return out;
  }
  if (a.geo.empty() && b.geo.empty()) grammar("product of two reciprocal summands");
  const IndexValue& rec = a.rec.empty() ? b : a;
  const IndexValue& other = a.rec.empty() ? a : b;
  if (other.geo.empty()) return {};
  const auto c = signed_constant(other);
  if (!c || !rec.geo.empty()) grammar("a reciprocal summand may only be scaled by a constant or (-1)^n");
  IndexValue out;
  for (const auto& r : rec.rec) out.rec.push_back(scale_recip(r, c->first, c->second));
  return out;
}

// -- integrand recognition -------------------------------------------------------

FuncExpr func_pow(const FuncExpr& f, unsigned long k) {
  FuncExpr out = FuncExpr::constant(Scalar(1));
  for (unsigned long i = 0; i < k; ++i) out = out * f;
  return out;
}

// s and t with f = s x + t, when f has that shape.
std::optional<std::pair<Scalar, Scalar>> linear_parts(const FuncExpr& f) {
  Scalar s;
  Scalar t;
  for (const auto& term : f.terms) {
    if (!term.rate.is_zero() || term.power > 1) return std::nullopt;
    (term.power == 1 ? s : t) += term.coeff;
  }
  return std::make_pair(s, t);
}

// -- evaluator ------------------------------------------------------------------

bool mentions(const Ast& a, const std::string& name) {
  if (a.kind == Ast::Kind::Name && a.text == name) return true;
  for (const auto& k : a.kids) {
    if (mentions(k, name)) return true;
  }
  return false;
}

mpq_class number_value(const std::string& text) {
  const auto dot = text.find('.');
  if (dot == std::string::npos) return mpq_class(mpz_class(text, 10));
  const std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, text.size() - dot - 1);
  mpq_class q(mpz_class(digits, 10), den);
  q.canonicalize();
  return q;
}

class Evaluator {
 public:
  explicit Evaluator(const EvalOptions& o) : opt_(o) {}

  Value eval(const Ast& a) {
    switch (a.kind) {
      case Ast::Kind::Number:
        return of(LambdaExpr(number_value(a.text)));
      case Ast::Kind::Name:
        return name(a);
      case Ast::Kind::Neg:
        return of(-expr(a.kids[0]));
      case Ast::Kind::Binary:
        return binary(a);
      case Ast::Kind::Compare:
        return comparison(a);
      case Ast::Kind::Tilde:
        return of(standard_part(expr(a.kids[0])));
      case Ast::Kind::Call:
        return call(a);
      case Ast::Kind::Range:
      case Ast::Kind::Keyword:
        break;
    }
    syntax_error(a.line, a.column, "misplaced argument form");
  }

  LambdaExpr expr(const Ast& a) { return as_expr(eval(a)); }

  static LambdaExpr as_expr(const Value& v) {
    if (const auto* x = std::get_if<LambdaExpr>(&v.v)) return *x;
    if (std::holds_alternative<StandardPart>(v.v)) {
      throw Error(ErrorCode::Terminal, "a standard part is a final report and takes no further arithmetic");
    }
    throw Error(ErrorCode::Domain, "expected a number, got " + render_value(v.v));
  }

  const std::vector<mpz_class>& ns() const { return opt_.oracle_ns.empty() ? default_ns_ : opt_.oracle_ns; }

 private:
  Value name(const Ast& a) {
    const std::string& n = a.text;
    if (n == "lam") return of(LambdaExpr::lambda());
    if (n == "pi") return of(LambdaExpr(Scalar::pi()));
    if (n == "gamma") return of(LambdaExpr(Scalar::euler_gamma()));
    if (n == "N") return of(SetExpr::naturals());
    if (n == "Z") return of(SetExpr::integers());
    if (n == "Q") return of(SetExpr::rationals());
    if (n == "B") return of(SetExpr::strings(2));
    if (n == "evens") return of(SetExpr::evens());
    if (n == "odds") return of(SetExpr::odds());
    if (n == "squares") return of(SetExpr::squares());
    throw Error(ErrorCode::UnknownIdentifier, "'" + n + "' is only defined inside its sum or integral");
  }

  Value binary(const Ast& a) {
    const Value l = eval(a.kids[0]);
    const Value r = eval(a.kids[1]);
    const auto* ls = std::get_if<SetExpr>(&l.v);
    const auto* rs = std::get_if<SetExpr>(&r.v);
    if (ls && rs) {
      if (a.text == "+") return of(SetExpr::disjoint_union({*ls, *rs}));
      if (a.text == "*") return of(SetExpr::product({*ls, *rs}));
      throw Error(ErrorCode::Domain, "sets combine only with + (disjoint union) and * (product)");
    }
    const LambdaExpr x = as_expr(l);
    const LambdaExpr y = as_expr(r);
    if (a.text == "+") return of(x + y);
    if (a.text == "-") return of(x - y);
    if (a.text == "*") return of(x * y);
    if (a.text == "/") return of(divide(x, y, opt_.trunc_order));
    return of(pow(x, y, opt_.trunc_order));
  }

  Value comparison(const Ast& a) {
    const LambdaExpr x = expr(a.kids[0]);
    const LambdaExpr y = expr(a.kids[1]);
    const OrderDecision d = decide(x, y);
    const std::string& op = a.text;
    bool b = false;
    if (op == "<") b = d == OrderDecision::Less;
    if (op == "<=") b = d != OrderDecision::Greater;
    if (op == ">") b = d == OrderDecision::Greater;
    if (op == ">=") b = d != OrderDecision::Less;
    if (op == "==") b = d == OrderDecision::Equal;
    if (op == "!=") b = d != OrderDecision::Equal;
    Value v = of(b);
    if (op == "==") v.eq_origin = std::make_pair(x, y);
    return v;
  }

  static OrderDecision decide(const LambdaExpr& x, const LambdaExpr& y) {
    const OrderDecision d = compare(x, y);
    if (d == OrderDecision::Undecided) {
      throw Error(ErrorCode::Undecided, "cannot order " + render(x) + " and " + render(y));
    }
    if (d == OrderDecision::ParityDependent) {
      throw Error(ErrorCode::ParityDependent, "order of " + render(x) + " and " + render(y) + " depends on the parity of lam");
    }
    return d;
  }

  Value call(const Ast& a) {
    const std::string& f = a.text;
    const auto& k = a.kids;
    if (f == "sum") return sum(a);
    if (f == "int") return integral_of(a);
    if (f == "scenario") return scenario(a);
    if (f == "oracle") return oracle(a);
    if (f == "exp") return of(exp(expr(k[0]), opt_.trunc_order));
    if (f == "ln") return of(ln(expr(k[0]), opt_.trunc_order));
    if (f == "pow") return of(pow(expr(k[0]), expr(k[1]), opt_.trunc_order));
    if (f == "compare") return of(decide(expr(k[0]), expr(k[1])));
    if (f == "O") {
      const LambdaExpr x = expr(k[0]);
      const auto scale = x.magnitude();
      if (!scale || x.terms().size() != 1) {
        throw Error(ErrorCode::Domain, "O(...) takes a single monomial scale, got " + render(x));
      }
      return of(LambdaExpr::big_o(*scale));
    }
    if (f == "binom") return of(binom(expr(k[0]), expr(k[1])));
    if (f == "card") {
      const Value v = eval(k[0]);
      if (const auto* s = std::get_if<SetExpr>(&v.v)) return of(card(*s));
      throw Error(ErrorCode::Domain, "card takes a set, got " + render_value(v.v));
    }
    if (f == "seg") return of(SetExpr::segment(expr(k[0])));
    if (f == "strings") {
      const unsigned long alphabet = need_count(expr(k[0]), "alphabet size", 1UL << 20);
      return of(SetExpr::strings(alphabet, k.size() > 1 ? expr(k[1]) : LambdaExpr::lambda()));
    }
    return of(SetExpr::stratum_of(stratum_index(expr(k[0]))));
  }

  static BinomIndex stratum_index(const LambdaExpr& k) {
    const LambdaExpr lam = LambdaExpr::lambda();
    if (k.as_constant()) return BinomIndex::finite(need_count(k, "stratum index", 1UL << 20));
    if (k == LambdaExpr(mpq_class(1, 2)) * lam) return BinomIndex::half_lambda();
    const LambdaExpr rest = lam - k;
    if (rest.as_constant()) return BinomIndex::lambda_minus(need_count(rest, "lam - k offset", 1UL << 20));
    throw Error(ErrorCode::Domain, "binomial index must be finite, lam/2 or lam-k; got " + render(k));
  }

  static LambdaExpr binom(const LambdaExpr& top, const LambdaExpr& k) {
    if (top == LambdaExpr::lambda()) return binom_lambda(stratum_index(k));
    const mpq_class t = need_rational(top, "binomial top");
    const mpq_class b = need_rational(k, "binomial index");
    if (t.get_den() != 1 || b.get_den() != 1 || t < 0 || b < 0 || !t.get_num().fits_ulong_p() ||
        !b.get_num().fits_ulong_p()) {
      throw Error(ErrorCode::Domain, "binomial arguments must be non-negative integers or (lam, index)");
    }
    mpz_class c;
    mpz_bin_uiui(c.get_mpz_t(), t.get_num().get_ui(), b.get_num().get_ui());
    return LambdaExpr(mpq_class(c));
  }

  // sum(n=lo..hi, body)
  Value sum(const Ast& a) {
    const Ast& binding = a.kids[0];
    const Ast& range = binding.kids[0];
    SumSpec spec;
    spec.index = binding.text;
    spec.lower = expr(range.kids[0]);
    spec.upper = expr(range.kids[1]);
    spec.body = summands(index_value(a.kids[1], spec.index));
    Value v = of(sum_eval(spec, opt_.trunc_order));
    v.sum_origin = spec;
    return v;
  }

  static std::vector<Summand> summands(const IndexValue& v) {
    std::vector<Summand> out;
    for (const auto& g : v.geo) {
      if (g.ratio == LambdaExpr(1)) {
        out.emplace_back(PolySummand{g.poly});
      } else if (g.ratio == LambdaExpr(-1)) {
        out.emplace_back(AlternatingPolySummand{pscale(g.poly, LambdaExpr(-1))});
      } else {
        out.emplace_back(GeometricSummand{g.ratio, g.poly});
      }
    }
    for (const auto& r : v.rec) {
      if (r.alternating) {
        out.emplace_back(AlternatingReciprocalSummand{r.num, r.a, r.shift});
      } else {
        out.emplace_back(ReciprocalSummand{r.num, r.a, r.shift});
      }
    }
    if (out.empty()) out.emplace_back(PolySummand{{LambdaExpr()}});
    return out;
  }

  IndexValue index_value(const Ast& a, const std::string& var) {
    if (!mentions(a, var)) return IndexValue::constant(expr(a));
    switch (a.kind) {
      case Ast::Kind::Name:
        return IndexValue{{GeomPart{LambdaExpr(1), {LambdaExpr(), LambdaExpr(1)}}}, {}};
      case Ast::Kind::Neg:
        return negate(index_value(a.kids[0], var));
      case Ast::Kind::Binary:
        break;
      case Ast::Kind::Call:
        if (a.text == "binom") return index_binom(a, var);
        if (a.text == "pow") return index_pow(a.kids[0], a.kids[1], var);
        grammar(a.text + "(...) of the summation index is outside the summand grammar");
      default:
        grammar("summand outside the supported grammar");
    }
    const Ast& l = a.kids[0];
    const Ast& r = a.kids[1];
    if (a.text == "+") return add(index_value(l, var), index_value(r, var));
    if (a.text == "-") return add(index_value(l, var), negate(index_value(r, var)));
    if (a.text == "*") return mul(index_value(l, var), index_value(r, var));
    if (a.text == "/") return index_div(l, r, var);
    return index_pow(l, r, var);
  }

  IndexValue index_div(const Ast& l, const Ast& r, const std::string& var) {
    const IndexValue num = index_value(l, var);
    if (!mentions(r, var)) {
      const LambdaExpr c = expr(r);
      if (c.is_zero()) throw Error(ErrorCode::DivisionByZero, "division by zero");
      return mul(num, IndexValue::constant(divide(LambdaExpr(1), c, opt_.trunc_order)));
    }
    const IndexValue den = index_value(r, var);
    if (!den.rec.empty() || den.geo.size() != 1) grammar("denominator outside the summand grammar");
    const GeomPart& g = den.geo[0];
    if (g.poly.size() == 1) {
      // c·r^n in the denominator
      const LambdaExpr inv_ratio = divide(LambdaExpr(1), g.ratio, opt_.trunc_order);
      const LambdaExpr inv_coeff = divide(LambdaExpr(1), g.poly[0], opt_.trunc_order);
      return mul(num, IndexValue{{GeomPart{inv_ratio, {inv_coeff}}}, {}});
    }
    if (g.poly.size() != 2 || !(g.ratio == LambdaExpr(1))) grammar("only linear denominators a*n + b are supported");
    const auto c = signed_constant(num);
    if (!c) grammar("a reciprocal summand needs a constant numerator, optionally times (-1)^n");
    RecipPart rp{Scalar(1), need_rational(g.poly[1], "coefficient of the index"), g.poly[0], false};
    return IndexValue{{}, {scale_recip(rp, c->first, c->second)}};
  }

  IndexValue index_pow(const Ast& l, const Ast& r, const std::string& var) {
    if (!mentions(r, var)) {
      const unsigned long k = need_count(expr(r), "power of the index", 64);
      const IndexValue base = index_value(l, var);
      IndexValue out = IndexValue::constant(LambdaExpr(1));
      for (unsigned long i = 0; i < k; ++i) out = mul(out, base);
      return out;
    }
    if (mentions(l, var)) grammar("the index may not appear in both base and exponent");
    const LambdaExpr base = expr(l);
    const IndexValue e = index_value(r, var);
    if (!e.rec.empty() || e.geo.size() != 1 || !(e.geo[0].ratio == LambdaExpr(1)) || e.geo[0].poly.size() != 2) {
      grammar("exponent must be linear in the index");
    }
    const mpq_class slope = need_rational(e.geo[0].poly[1], "exponent slope");
    if (slope.get_den() != 1) grammar("exponent slope must be an integer");
    const LambdaExpr ratio = pow(base, LambdaExpr(slope), opt_.trunc_order);
    const LambdaExpr coeff = pow(base, e.geo[0].poly[0], opt_.trunc_order);
    return IndexValue{{GeomPart{ratio, {coeff}}}, {}};
  }

  IndexValue index_binom(const Ast& a, const std::string& var) {
    if (mentions(a.kids[1], var)) grammar("binomial index may not depend on the summation index");
    const unsigned long k = need_count(expr(a.kids[1]), "binomial index", 64);
    const IndexValue top = index_value(a.kids[0], var);
    IndexValue out = IndexValue::constant(LambdaExpr(1));
    mpz_class fact = 1;
    for (unsigned long i = 0; i < k; ++i) {
      out = mul(out, add(top, IndexValue::constant(LambdaExpr(-static_cast<long>(i)))));
      fact *= i + 1;
    }
    return mul(out, IndexValue::constant(LambdaExpr(mpq_class(mpz_class(1), fact))));
  }

  // int(a..b, f) or int(x=a..b, f)
  Value integral_of(const Ast& a) {
    const Ast& first = a.kids[0];
    const std::string var = first.kind == Ast::Kind::Keyword ? first.text : "x";
    const Ast& range = first.kind == Ast::Kind::Keyword ? first.kids[0] : first;
    const Scalar lo = need_scalar(expr(range.kids[0]), "integration bound");
    const Scalar hi = need_scalar(expr(range.kids[1]), "integration bound");
    const FuncExpr f = func(a.kids[1], var);
    Value v = of(riemann_sum(f, lo, hi, opt_.trunc_order));
    v.int_origin = IntegralOrigin{f, lo, hi};
    return v;
  }

  FuncExpr func(const Ast& a, const std::string& var) {
    if (!mentions(a, var)) return FuncExpr::constant(need_scalar(expr(a), "integrand coefficient"));
    switch (a.kind) {
      case Ast::Kind::Name:
        return FuncExpr::monomial(Scalar(1), 1);
      case Ast::Kind::Neg:
        return -func(a.kids[0], var);
      case Ast::Kind::Call:
        if (a.text == "exp") return func_exp(func(a.kids[0], var));
        if (a.text == "pow") return func_pow_node(a.kids[0], a.kids[1], var);
        grammar(a.text + "(...) is outside the integrand grammar c*x^k*exp(s*x)");
      case Ast::Kind::Binary:
        break;
      default:
        grammar("integrand outside the grammar c*x^k*exp(s*x)");
    }
    const Ast& l = a.kids[0];
    const Ast& r = a.kids[1];
    if (a.text == "+") return func(l, var) + func(r, var);
    if (a.text == "-") return func(l, var) - func(r, var);
    if (a.text == "*") return func(l, var) * func(r, var);
    if (a.text == "/") {
      if (mentions(r, var)) grammar("integrand may not divide by the variable");
      const Scalar c = need_scalar(expr(r), "divisor");
      if (c.is_zero()) throw Error(ErrorCode::DivisionByZero, "division by zero");
      return func(l, var) * FuncExpr::constant(Scalar(1) / c);
    }
    return func_pow_node(l, r, var);
  }

  FuncExpr func_pow_node(const Ast& l, const Ast& r, const std::string& var) {
    if (!mentions(r, var)) return func_pow(func(l, var), need_count(expr(r), "power of the variable", kMaxFuncPower));
    if (mentions(l, var)) grammar("the variable may not appear in both base and exponent");
    const Scalar base = need_scalar(expr(l), "base");
    const auto lin = linear_parts(func(r, var));
    if (!lin) grammar("exponent must be linear in the variable");
    const Scalar log_base = ln(base);
    return FuncExpr::exp_term(exp(log_base * lin->second), 0, log_base * lin->first);
  }

  static FuncExpr func_exp(const FuncExpr& arg) {
    const auto lin = linear_parts(arg);
    if (!lin) grammar("exp argument must be linear in the variable");
    return FuncExpr::exp_term(exp(lin->second), 0, lin->first);
  }

  Value scenario(const Ast& a) {
    ScenarioParams p;
    for (std::size_t i = 1; i < a.kids.size(); ++i) {
      const Ast& kw = a.kids[i];
      const LambdaExpr v = expr(kw.kids[0]);
      if (kw.text == "m") {
        p.m = need_count(v, "m", 1UL << 20);
      } else if (kw.text == "steps") {
        p.steps = v;
      } else if (kw.text == "base") {
        const mpq_class b = need_rational(v, "base");
        if (b.get_den() != 1 || !b.get_num().fits_slong_p()) throw Error(ErrorCode::Domain, "base must be an integer");
        p.base = b.get_num().get_si();
      } else {
        throw Error(ErrorCode::UnknownIdentifier, "unknown scenario parameter '" + kw.text + "'");
      }
    }
    return of(run_scenario(a.kids[0].text, p));
  }

  Value oracle(const Ast& a) {
    std::vector<mpz_class> at = ns();
    if (a.kids.size() > 1) {
      const mpq_class n = need_rational(expr(a.kids[1]), "oracle N");
      if (n.get_den() != 1) throw Error(ErrorCode::Domain, "oracle N must be an integer");
      at = {n.get_num()};
    }
    const Value v = eval(a.kids[0]);
    if (auto e = evidence(v, at)) return of(*e);
    return of(values_record(as_expr(v), at));
  }

 public:
  // Oracle evidence attached to a result, when the result carries an identity.
  std::optional<OracleEvidence> evidence(const Value& v, const std::vector<mpz_class>& at) {
    if (v.eq_origin) return identity_record(oracle_identity(v.eq_origin->first, v.eq_origin->second, at));
    if (v.sum_origin) return identity_record(oracle_identity(*v.sum_origin, std::get<LambdaExpr>(v.v), at));
    if (v.int_origin) {
      const IntegralCheckReport r = integral_check(v.int_origin->f, v.int_origin->a, v.int_origin->b, opt_.trunc_order);
      OracleEvidence e;
      e.kind = "integral";
      e.pass = r.match;
      e.fields = {{"standard_part", render(r.standard_part)}, {"antiderivative", render(r.analytic_value)}};
      return e;
    }
    return std::nullopt;
  }

 private:
  const EvalOptions& opt_;
  const std::vector<mpz_class> default_ns_ = default_oracle_ns();
};

}  // namespace

Ast parse(const std::string& text) {
  Ast a = Parser(lex(text)).statement();
  std::vector<std::string> scope;
  resolve(a, scope);
  return a;
}

std::string print(const Ast& a) {
  switch (a.kind) {
    case Ast::Kind::Number:
    case Ast::Kind::Name:
      return a.text;
    case Ast::Kind::Neg:
      return "-" + print_at(a.kids[0], 3);
    case Ast::Kind::Tilde:
      return "~" + print_at(a.kids[0], 5);
    case Ast::Kind::Compare:
      return print_at(a.kids[0], 1) + " " + a.text + " " + print_at(a.kids[1], 1);
    case Ast::Kind::Range:
      return print(a.kids[0]) + ".." + print_at(a.kids[1], 1);
    case Ast::Kind::Keyword:
      return a.text + "=" + print(a.kids[0]);
    case Ast::Kind::Call: {
      std::string out = a.text + "(";
      for (std::size_t i = 0; i < a.kids.size(); ++i) out += (i ? ", " : "") + print(a.kids[i]);
      return out + ")";
    }
    case Ast::Kind::Binary:
      break;
  }
  const int p = precedence(a);
  if (a.text == "^") return print_at(a.kids[0], 5) + "^" + print_at(a.kids[1], 3);
  const std::string sep = p == 1 ? " " + a.text + " " : a.text;
  return print_at(a.kids[0], p) + sep + print_at(a.kids[1], p + 1);
}

bool same_tree(const Ast& a, const Ast& b) {
  if (a.kind != b.kind || a.text != b.text || a.kids.size() != b.kids.size()) return false;
  for (std::size_t i = 0; i < a.kids.size(); ++i) {
    if (!same_tree(a.kids[i], b.kids[i])) return false;
  }
  return true;
}

LineResult eval_line(const std::string& text, const EvalOptions& options) {
  LineResult out;
  out.input = text;
  try {
    const Ast ast = parse(text);
    const SignPrecisionScope precision(options.precision);
    Evaluator ev(options);
    const Value v = ev.eval(ast);
    out.result = render_value(v.v);
    out.ok = true;
    if (const auto* x = std::get_if<LambdaExpr>(&v.v)) out.value = *x;
    if (const auto* r = std::get_if<ScenarioReport>(&v.v)) {
      out.report = *r;
      out.ok = r->evidence_passed() && r->catalog_match;
      if (!out.ok) out.error = "scenario evidence or catalog check failed";
    }
    if (const auto* e = std::get_if<OracleEvidence>(&v.v)) {
      out.oracle = *e;
      out.ok = e->pass;
      if (!out.ok) out.error = "oracle check failed";
    }
    if (options.oracle && !out.oracle) {
      out.oracle = ev.evidence(v, ev.ns());
      if (!out.oracle && out.value) out.oracle = values_record(*out.value, ev.ns());
      if (out.oracle && !out.oracle->pass && out.oracle->kind != "values") {
        out.ok = false;
        out.error = "oracle check failed";
      }
    }
  } catch (const Error& e) {
    out.ok = false;
    out.code = e.code();
    out.error = e.what();
  } catch (const std::exception& e) {
    out.ok = false;
    out.code = ErrorCode::Domain;
    out.error = e.what();
  }
  return out;
}

int exit_code(const LineResult& r) {
  if (r.ok) return 0;
  if (r.code == ErrorCode::Syntax || r.code == ErrorCode::UnknownIdentifier) return 2;
  if (r.code == ErrorCode::Undecided) return 3;
  return 1;
}

std::string render(const ScenarioReport& r) {
  std::ostringstream out;
  out << "scenario " << r.name << "\n";
  out << "  classical: " << r.classical_claim << " => " << r.classical_value << "\n";
  out << "  corrected: " << r.corrected.to_string() << "\n";
  out << "  missing:   " << render(r.missing_terms) << "\n";
  out << "  catalog:   " << r.catalog.to_string() << (r.catalog_match ? " (match)" : " (mismatch)");
  if (!r.catalog_note.empty()) out << "; " << r.catalog_note;
  out << "\n";
  for (const auto& [k, v] : r.details) out << "  " << k << ": " << v << "\n";
  for (const auto& e : r.evidence) out << "  [" << (e.pass ? "pass" : "FAIL") << "] " << e.label << ": " << e.detail << "\n";
  return out.str();
}

}  // namespace infcalc
