#include "core/dsl.hpp"

#include <json.hpp>

#include <cctype>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "core/errors.hpp"

namespace superkilling {

namespace {

// ------------------------------------------------------------------ lexer

struct Token {
  enum class Kind { Ident, Number, Punct, End };
  Kind kind;
  std::string text;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) { tokenize(src); }

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  Token next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }

 private:
  void tokenize(const std::string& src) {
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t k) {
      for (std::size_t j = 0; j < k; ++j) {
        if (src[i + j] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
      i += k;
    };
    while (i < src.size()) {
      char c = src[i];
      if (c == '#') {
        while (i < src.size() && src[i] != '\n') advance(1);
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
        continue;
      }
      Token t;
      t.line = line;
      t.col = col;
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i;
        while (j < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[j])) ||
                src[j] == '_'))
          ++j;
        t.kind = Token::Kind::Ident;
        t.text = src.substr(i, j - i);
        advance(j - i);
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        bool dot = false;
        while (j < src.size() &&
               (std::isdigit(static_cast<unsigned char>(src[j])) ||
                (!dot && src[j] == '.'))) {
          if (src[j] == '.') dot = true;
          ++j;
        }
        t.kind = Token::Kind::Number;
        t.text = src.substr(i, j - i);
        advance(j - i);
      } else {
        t.kind = Token::Kind::Punct;
        if (c == '=' && i + 1 < src.size() && src[i + 1] == '=') {
          t.text = "==";
          advance(2);
        } else {
          t.text = std::string(1, c);
          advance(1);
        }
      }
      toks_.push_back(std::move(t));
    }
    Token end;
    end.kind = Token::Kind::End;
    end.line = line;
    end.col = col;
    toks_.push_back(end);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

[[noreturn]] void fail(const Token& t, const std::string& msg) {
  throw ParseError(msg, t.line, t.col);
}

Rational rational_from_token(const Token& t) {
  auto dot = t.text.find('.');
  if (dot == std::string::npos) return Rational(t.text);
  std::string digits = t.text.substr(0, dot) + t.text.substr(dot + 1);
  std::size_t frac = t.text.size() - dot - 1;
  Rational num(digits.empty() ? "0" : digits);
  Rational den(1);
  for (std::size_t k = 0; k < frac; ++k) den *= 10;
  Rational r = num / den;
  r.canonicalize();
  return r;
}

// ------------------------------------------------------- expression trees

struct Expr {
  enum class K { Num, Ident, Call, Add, Sub, Mul, Div, Neg, Pow };
  K k = K::Num;
  Rational value;
  std::string name;
  int ipow = 0;
  std::vector<Expr> kids;
  int line = 1, col = 1;
};

class ExprParser {
 public:
  explicit ExprParser(Lexer& lex) : lex_(lex) {}

  Expr parse() { return parse_sum(); }

 private:
  Expr parse_sum() {
    Expr e = parse_prod();
    while (is_punct("+") || is_punct("-")) {
      Token op = lex_.next();
      Expr rhs = parse_prod();
      Expr n;
      n.k = op.text == "+" ? Expr::K::Add : Expr::K::Sub;
      n.line = op.line;
      n.col = op.col;
      n.kids = {std::move(e), std::move(rhs)};
      e = std::move(n);
    }
    return e;
  }

  Expr parse_prod() {
    Expr e = parse_unary();
    while (is_punct("*") || is_punct("/")) {
      Token op = lex_.next();
      Expr rhs = parse_unary();
      Expr n;
      n.k = op.text == "*" ? Expr::K::Mul : Expr::K::Div;
      n.line = op.line;
      n.col = op.col;
      n.kids = {std::move(e), std::move(rhs)};
      e = std::move(n);
    }
    return e;
  }

  Expr parse_unary() {
    if (is_punct("-") || is_punct("+")) {
      Token op = lex_.next();
      Expr kid = parse_unary();
      if (op.text == "+") return kid;
      Expr n;
      n.k = Expr::K::Neg;
      n.line = op.line;
      n.col = op.col;
      n.kids = {std::move(kid)};
      return n;
    }
    return parse_pow();
  }

  Expr parse_pow() {
    Expr e = parse_atom();
    if (is_punct("^")) {
      Token op = lex_.next();
      bool neg = false;
      if (is_punct("-")) {
        lex_.next();
        neg = true;
      }
      const Token& t = lex_.peek();
      if (t.kind != Token::Kind::Number ||
          t.text.find('.') != std::string::npos)
        fail(t, "expected an integer exponent");
      lex_.next();
      Expr n;
      n.k = Expr::K::Pow;
      n.line = op.line;
      n.col = op.col;
      n.ipow = std::atoi(t.text.c_str());
      if (neg) n.ipow = -n.ipow;
      n.kids = {std::move(e)};
      return n;
    }
    return e;
  }

  Expr parse_atom() {
    const Token& t = lex_.peek();
    Expr e;
    e.line = t.line;
    e.col = t.col;
    if (t.kind == Token::Kind::Number) {
      lex_.next();
      e.k = Expr::K::Num;
      e.value = rational_from_token(t);
      return e;
    }
    if (t.kind == Token::Kind::Ident) {
      lex_.next();
      if (is_punct("(")) {
        lex_.next();
        Expr arg = parse_sum();
        if (!is_punct(")")) fail(lex_.peek(), "expected ')'");
        lex_.next();
        e.k = Expr::K::Call;
        e.name = t.text;
        e.kids = {std::move(arg)};
        return e;
      }
      e.k = Expr::K::Ident;
      e.name = t.text;
      return e;
    }
    if (t.kind == Token::Kind::Punct && t.text == "(") {
      lex_.next();
      e = parse_sum();
      if (!is_punct(")")) fail(lex_.peek(), "expected ')'");
      lex_.next();
      return e;
    }
    fail(t, "expected an expression");
  }

  bool is_punct(const char* p) const {
    const Token& t = lex_.peek();
    return t.kind == Token::Kind::Punct && t.text == p;
  }

  Lexer& lex_;
};

// -------------------------------------------------------------- evaluators

SuperFunction spow(const SuperFunction& f, int k, const Token* where) {
  if (k == 0) return SuperFunction::one(f.chart());
  SuperFunction base = f;
  if (k < 0) {
    try {
      base = f.invert();
    } catch (const Error& err) {
      if (where) fail(*where, err.what());
      throw;
    }
    k = -k;
  }
  SuperFunction acc = base;
  for (int i = 1; i < k; ++i) acc = acc * base;
  return acc;
}

/// Evaluation context for coefficient expressions: coordinates of `base`
/// resolve on `chart` (which may extend base); in fiber mode the names
/// d<coord> resolve to the fiber coordinates.
struct ScalarCtx {
  ChartPtr chart;
  ChartPtr base;
  const std::vector<SuperFunction>* fibers = nullptr;  // per base coordinate
};

std::optional<GenKind> function_kind(const std::string& name) {
  if (name == "sin") return GenKind::Sin;
  if (name == "cos") return GenKind::Cos;
  if (name == "exp") return GenKind::Exp;
  if (name == "log") return GenKind::Log;
  if (name == "sqrt") return GenKind::Sqrt;
  return std::nullopt;
}

SuperFunction eval_scalar_expr(const Expr& e, const ScalarCtx& ctx) {
  Token at;
  at.line = e.line;
  at.col = e.col;
  switch (e.k) {
    case Expr::K::Num:
      return SuperFunction::constant(ctx.chart, e.value);
    case Expr::K::Ident: {
      if (ctx.fibers && e.name.size() > 1 && e.name[0] == 'd') {
        auto fi = ctx.base->index_of(e.name.substr(1));
        if (fi) return (*ctx.fibers)[*fi];
      }
      auto ci = ctx.base->index_of(e.name);
      if (!ci) fail(at, "unknown symbol '" + e.name + "'");
      if (*ci < ctx.base->even_dim())
        return SuperFunction::scalar(
            ctx.chart, ScalarExpr::generator(ctx.base->even_symbol(*ci)));
      return SuperFunction::odd_coordinate(ctx.chart,
                                           *ci - ctx.base->even_dim());
    }
    case Expr::K::Call: {
      auto kind = function_kind(e.name);
      if (!kind) fail(at, "unknown function '" + e.name + "'");
      SuperFunction arg = eval_scalar_expr(e.kids[0], ctx);
      try {
        return apply_function(*kind, arg);
      } catch (const Error& err) {
        fail(at, err.what());
      }
    }
    case Expr::K::Add:
      return eval_scalar_expr(e.kids[0], ctx) + eval_scalar_expr(e.kids[1], ctx);
    case Expr::K::Sub:
      return eval_scalar_expr(e.kids[0], ctx) - eval_scalar_expr(e.kids[1], ctx);
    case Expr::K::Mul:
      return eval_scalar_expr(e.kids[0], ctx) * eval_scalar_expr(e.kids[1], ctx);
    case Expr::K::Div: {
      SuperFunction num = eval_scalar_expr(e.kids[0], ctx);
      SuperFunction den = eval_scalar_expr(e.kids[1], ctx);
      try {
        return num * den.invert();
      } catch (const Error& err) {
        fail(at, err.what());
      }
    }
    case Expr::K::Neg:
      return -eval_scalar_expr(e.kids[0], ctx);
    case Expr::K::Pow:
      return spow(eval_scalar_expr(e.kids[0], ctx), e.ipow, &at);
  }
  fail(at, "bad expression");
}

/// Value of a vector-field expression: a linear combination of basis
/// markers d_<coord> with coefficients written to their left.
struct VecValue {
  SuperFunction fn;
  std::vector<SuperFunction> comps;
  bool has_vec = false;
};

VecValue eval_vector_expr(const Expr& e, const ScalarCtx& ctx) {
  Token at;
  at.line = e.line;
  at.col = e.col;
  auto scalar_value = [&](const Expr& sub) {
    VecValue v;
    v.fn = eval_scalar_expr(sub, ctx);
    v.comps.assign(ctx.base->dim(), SuperFunction::zero(ctx.chart));
    return v;
  };
  switch (e.k) {
    case Expr::K::Ident:
      if (e.name.rfind("d_", 0) == 0) {
        auto ci = ctx.base->index_of(e.name.substr(2));
        if (!ci) fail(at, "unknown coordinate in '" + e.name + "'");
        VecValue v;
        v.fn = SuperFunction::zero(ctx.chart);
        v.comps.assign(ctx.base->dim(), SuperFunction::zero(ctx.chart));
        v.comps[*ci] = SuperFunction::one(ctx.chart);
        v.has_vec = true;
        return v;
      }
      return scalar_value(e);
    case Expr::K::Add:
    case Expr::K::Sub: {
      VecValue a = eval_vector_expr(e.kids[0], ctx);
      VecValue b = eval_vector_expr(e.kids[1], ctx);
      VecValue r;
      r.has_vec = a.has_vec || b.has_vec;
      bool sub = e.k == Expr::K::Sub;
      r.fn = sub ? a.fn - b.fn : a.fn + b.fn;
      r.comps.reserve(a.comps.size());
      for (std::size_t i = 0; i < a.comps.size(); ++i)
        r.comps.push_back(sub ? a.comps[i] - b.comps[i]
                              : a.comps[i] + b.comps[i]);
      return r;
    }
    case Expr::K::Neg: {
      VecValue a = eval_vector_expr(e.kids[0], ctx);
      a.fn = -a.fn;
      for (auto& c : a.comps) c = -c;
      return a;
    }
    case Expr::K::Mul: {
      VecValue b = eval_vector_expr(e.kids[1], ctx);
      if (b.has_vec) {
        // coefficient * basis; the coefficient side must be scalar
        SuperFunction c = eval_scalar_expr(e.kids[0], ctx);
        VecValue r = b;
        r.fn = c * b.fn;
        for (auto& comp : r.comps) comp = c * comp;
        return r;
      }
      VecValue a = eval_vector_expr(e.kids[0], ctx);
      if (a.has_vec)
        fail(at, "coefficients must be written to the left of d_ symbols");
      return scalar_value(e);
    }
    default: {
      // Any other node must be purely scalar.
      return scalar_value(e);
    }
  }
}

Rational eval_constant_expr(const Expr& e) {
  Token at;
  at.line = e.line;
  at.col = e.col;
  switch (e.k) {
    case Expr::K::Num: return e.value;
    case Expr::K::Add:
      return eval_constant_expr(e.kids[0]) + eval_constant_expr(e.kids[1]);
    case Expr::K::Sub:
      return eval_constant_expr(e.kids[0]) - eval_constant_expr(e.kids[1]);
    case Expr::K::Mul:
      return eval_constant_expr(e.kids[0]) * eval_constant_expr(e.kids[1]);
    case Expr::K::Div: {
      Rational d = eval_constant_expr(e.kids[1]);
      if (sgn(d) == 0) fail(at, "division by zero");
      return eval_constant_expr(e.kids[0]) / d;
    }
    case Expr::K::Neg: return -eval_constant_expr(e.kids[0]);
    case Expr::K::Pow: {
      Rational b = eval_constant_expr(e.kids[0]);
      Rational r(1);
      int k = e.ipow;
      bool inv = k < 0;
      if (inv && sgn(b) == 0) fail(at, "division by zero");
      for (int i = 0; i < (k < 0 ? -k : k); ++i) r *= b;
      return inv ? Rational(1) / r : r;
    }
    default: fail(at, "expected a rational constant");
  }
}

// ------------------------------------------------------------ metric load

struct FiberedChart {
  ChartPtr ext;
  std::vector<SuperFunction> fibers;        // per base coordinate
  std::vector<std::size_t> fiber_coord;     // ext coordinate index per base
};

FiberedChart make_fibered(const ChartPtr& base) {
  std::vector<std::string> fib_evens, fib_odds;
  for (std::size_t i = 0; i < base->even_dim(); ++i)
    fib_evens.push_back("d" + base->coord_name(i));
  for (std::size_t i = 0; i < base->odd_dim(); ++i)
    fib_odds.push_back("d" + base->coord_name(base->even_dim() + i));
  FiberedChart f;
  f.ext = base->extended("_T", fib_evens, fib_odds);
  std::size_t n = base->even_dim(), m = base->odd_dim();
  for (std::size_t c = 0; c < base->dim(); ++c) {
    std::size_t idx = c < n ? n + c : f.ext->even_dim() + m + (c - n);
    f.fiber_coord.push_back(idx);
    f.fibers.push_back(SuperFunction::coordinate(f.ext, idx));
  }
  return f;
}

MetricTensor metric_from_quadratic(const ChartPtr& base, const FiberedChart& f,
                                   const SuperFunction& g_ext,
                                   const Token& at) {
  std::size_t d = base->dim();
  std::vector<SuperFunction> ext_comps(d * d, SuperFunction::zero(f.ext));
  std::vector<SuperFunction> comps;
  comps.reserve(d * d);
  for (std::size_t b = 0; b < d; ++b)
    for (std::size_t a = 0; a < d; ++a) {
      SuperFunction v =
          g_ext.partial(f.fiber_coord[b]).partial(f.fiber_coord[a]);
      v = v.scale(ScalarExpr(Rational(1, 2)));
      if (base->parity(a) == Parity::Odd && base->parity(b) == Parity::Odd)
        v = -v;
      ext_comps[b * d + a] = v;
    }
  // The expression must be exactly quadratic in the fiber coordinates.
  SuperFunction rebuilt = SuperFunction::zero(f.ext);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      rebuilt = rebuilt + f.fibers[a] * f.fibers[b] * ext_comps[b * d + a];
  if (!(rebuilt - g_ext).is_zero())
    fail(at, "metric expression is not quadratic in the fiber symbols");
  for (std::size_t i = 0; i < d * d; ++i) {
    try {
      comps.push_back(ext_comps[i].on_chart(base));
    } catch (const Error& err) {
      fail(at, std::string("bad metric component: ") + err.what());
    }
  }
  try {
    return MetricTensor(base, std::move(comps));
  } catch (const Error& err) {
    fail(at, err.what());
  }
}

// ------------------------------------------------------------- the parser

const char* kDirectiveNames[] = {
    "homological", "killing",  "riemannian_q",   "divergence",   "modular",
    "unimodular",  "shander",  "morphism",       "liealg_killing",
    "liealg_trace",
};

std::optional<Directive::Kind> directive_kind(const std::string& name) {
  for (std::size_t i = 0; i < std::size(kDirectiveNames); ++i)
    if (name == kDirectiveNames[i]) return static_cast<Directive::Kind>(i);
  return std::nullopt;
}

class DocumentParser {
 public:
  explicit DocumentParser(const std::string& src) : lex_(src) {}

  Document run() {
    while (lex_.peek().kind != Token::Kind::End) {
      const Token& t = lex_.peek();
      if (t.kind != Token::Kind::Ident) fail(t, "expected an item");
      if (t.text == "chart") parse_chart();
      else if (t.text == "metric") parse_metric();
      else if (t.text == "vector") parse_vector();
      else if (t.text == "volume") parse_volume();
      else if (t.text == "change") parse_change();
      else if (t.text == "liealg") parse_liealg();
      else if (t.text == "check") parse_check();
      else fail(t, "unknown item '" + t.text + "'");
    }
    return std::move(doc_);
  }

 private:
  Token expect_punct(const char* p) {
    const Token& t = lex_.peek();
    if (t.kind != Token::Kind::Punct || t.text != p)
      fail(t, std::string("expected '") + p + "'");
    return lex_.next();
  }
  Token expect_ident() {
    const Token& t = lex_.peek();
    if (t.kind != Token::Kind::Ident) fail(t, "expected an identifier");
    return lex_.next();
  }
  Token expect_keyword(const char* kw) {
    Token t = expect_ident();
    if (t.text != kw) fail(t, std::string("expected '") + kw + "'");
    return t;
  }
  bool accept_punct(const char* p) {
    const Token& t = lex_.peek();
    if (t.kind == Token::Kind::Punct && t.text == p) {
      lex_.next();
      return true;
    }
    return false;
  }
  bool peek_ident(const char* kw) const {
    const Token& t = lex_.peek();
    return t.kind == Token::Kind::Ident && t.text == kw;
  }

  std::string fresh_name() {
    Token t = expect_ident();
    if (t.text.rfind("__", 0) == 0)
      fail(t, "names starting with '__' are reserved");
    if (!names_.insert(t.text).second)
      fail(t, "duplicate name '" + t.text + "'");
    return t.text;
  }

  double expect_number_signed() {
    bool neg = accept_punct("-");
    const Token& t = lex_.peek();
    if (t.kind != Token::Kind::Number) fail(t, "expected a number");
    lex_.next();
    double v = std::strtod(t.text.c_str(), nullptr);
    return neg ? -v : v;
  }

  std::vector<std::string> ident_list_until_semicolon() {
    std::vector<std::string> out;
    if (accept_punct(";")) return out;
    out.push_back(expect_ident().text);
    while (accept_punct(",")) out.push_back(expect_ident().text);
    expect_punct(";");
    return out;
  }

  ChartPtr chart_arg(const Token& at, const std::string& name) {
    const ChartPtr* c = doc_.find_chart(name);
    if (!c) fail(at, "unknown chart '" + name + "'");
    return *c;
  }

  void parse_chart() {
    expect_keyword("chart");
    Token at = lex_.peek();
    std::string name = fresh_name();
    expect_punct("{");
    expect_keyword("even");
    expect_punct(":");
    auto evens = ident_list_until_semicolon();
    expect_keyword("odd");
    expect_punct(":");
    auto odds = ident_list_until_semicolon();
    std::vector<Interval> box(evens.size());
    if (peek_ident("box")) {
      lex_.next();
      expect_punct(":");
      while (true) {
        Token ct = expect_ident();
        auto pos = std::find(evens.begin(), evens.end(), ct.text);
        if (pos == evens.end())
          fail(ct, "box entry for unknown even coordinate '" + ct.text + "'");
        expect_keyword("in");
        expect_punct("(");
        double lo = expect_number_signed();
        expect_punct(",");
        double hi = expect_number_signed();
        expect_punct(")");
        box[pos - evens.begin()] = {lo, hi};
        if (!accept_punct(",")) break;
      }
      expect_punct(";");
    }
    expect_punct("}");
    try {
      doc_.charts.emplace_back(name, Chart::create(name, evens, odds, box));
    } catch (const Error& err) {
      fail(at, err.what());
    }
  }

  void parse_metric() {
    expect_keyword("metric");
    Token at = lex_.peek();
    std::string name = fresh_name();
    expect_keyword("on");
    Token ct = lex_.peek();
    ChartPtr base = chart_arg(ct, expect_ident().text);
    expect_punct("=");
    Expr e = ExprParser(lex_).parse();
    expect_punct(";");
    FiberedChart f = make_fibered(base);
    ScalarCtx ctx{f.ext, base, &f.fibers};
    SuperFunction g_ext = eval_scalar_expr(e, ctx);
    doc_.metrics.emplace_back(name, metric_from_quadratic(base, f, g_ext, at));
  }

  void parse_vector() {
    expect_keyword("vector");
    Token at = lex_.peek();
    std::string name = fresh_name();
    expect_keyword("on");
    ChartPtr base = chart_arg(lex_.peek(), expect_ident().text);
    expect_punct("(");
    Token pt = expect_ident();
    Parity parity;
    if (pt.text == "even") parity = Parity::Even;
    else if (pt.text == "odd") parity = Parity::Odd;
    else fail(pt, "expected 'even' or 'odd'");
    expect_punct(")");
    expect_punct("=");
    Expr e = ExprParser(lex_).parse();
    expect_punct(";");
    ScalarCtx ctx{base, base, nullptr};
    VecValue v = eval_vector_expr(e, ctx);
    if (!v.has_vec) fail(at, "vector expression contains no d_ symbol");
    if (!v.fn.is_zero()) fail(at, "vector expression has a scalar part");
    try {
      doc_.vectors.emplace_back(name, VectorField(base, parity, v.comps));
    } catch (const Error& err) {
      fail(at, err.what());  // parity mismatch between declared and inferred
    }
  }

  void parse_volume() {
    expect_keyword("volume");
    Token at = lex_.peek();
    std::string name = fresh_name();
    expect_keyword("on");
    ChartPtr base = chart_arg(lex_.peek(), expect_ident().text);
    expect_punct("=");
    Expr e = ExprParser(lex_).parse();
    expect_punct(";");
    ScalarCtx ctx{base, base, nullptr};
    SuperFunction rho = eval_scalar_expr(e, ctx);
    try {
      doc_.volumes.emplace_back(name, BerezinVolume(base, rho));
    } catch (const Error& err) {
      fail(at, err.what());
    }
  }

  std::vector<SuperFunction> parse_image_block(const ChartPtr& from,
                                               const ChartPtr& to) {
    // Assignments "coord = expr;" for every coordinate of `to`,
    // expressions on `from`.
    std::vector<std::optional<SuperFunction>> images(to->dim());
    ScalarCtx ctx{from, from, nullptr};
    while (lex_.peek().kind == Token::Kind::Ident &&
           !peek_ident("inverse")) {
      Token ct = expect_ident();
      auto ci = to->index_of(ct.text);
      if (!ci) fail(ct, "'" + ct.text + "' is not a coordinate of chart " +
                            to->name());
      if (images[*ci]) fail(ct, "image of '" + ct.text + "' given twice");
      expect_punct("=");
      Expr e = ExprParser(lex_).parse();
      expect_punct(";");
      images[*ci] = eval_scalar_expr(e, ctx);
    }
    std::vector<SuperFunction> out;
    for (std::size_t i = 0; i < to->dim(); ++i) {
      if (!images[i])
        fail(lex_.peek(), "missing image for coordinate '" +
                              to->coord_name(i) + "'");
      out.push_back(*images[i]);
    }
    return out;
  }

  void parse_change() {
    expect_keyword("change");
    Token at = lex_.peek();
    std::string name = fresh_name();
    expect_keyword("from");
    ChartPtr src = chart_arg(lex_.peek(), expect_ident().text);
    expect_keyword("to");
    ChartPtr dst = chart_arg(lex_.peek(), expect_ident().text);
    expect_punct("{");
    std::vector<SuperFunction> images = parse_image_block(src, dst);
    std::optional<std::vector<SuperFunction>> inverse;
    if (peek_ident("inverse")) {
      lex_.next();
      expect_punct("{");
      inverse = parse_image_block(dst, src);
      expect_punct("}");
    }
    expect_punct("}");
    try {
      doc_.changes.emplace_back(
          name, CoordinateChange(src, dst, images, inverse));
    } catch (const Error& err) {
      fail(at, err.what());
    }
  }

  void interpret_lie_sum(const Expr& e, const Rational& scale,
                         std::vector<Rational>& out) {
    Token at;
    at.line = e.line;
    at.col = e.col;
    switch (e.k) {
      case Expr::K::Add:
        interpret_lie_sum(e.kids[0], scale, out);
        interpret_lie_sum(e.kids[1], scale, out);
        return;
      case Expr::K::Sub:
        interpret_lie_sum(e.kids[0], scale, out);
        interpret_lie_sum(e.kids[1], -scale, out);
        return;
      case Expr::K::Neg:
        interpret_lie_sum(e.kids[0], -scale, out);
        return;
      case Expr::K::Ident: {
        if (e.name.size() > 1 && e.name[0] == 'e') {
          char* end = nullptr;
          long k = std::strtol(e.name.c_str() + 1, &end, 10);
          if (*end == '\0' && k >= 1 && static_cast<std::size_t>(k) <= out.size()) {
            out[k - 1] += scale;
            return;
          }
        }
        fail(at, "expected a basis vector e1..e" + std::to_string(out.size()));
      }
      case Expr::K::Mul: {
        // constant * basis combination
        try {
          Rational c = eval_constant_expr(e.kids[0]);
          interpret_lie_sum(e.kids[1], scale * c, out);
          return;
        } catch (const ParseError&) {
        }
        Rational c = eval_constant_expr(e.kids[1]);
        interpret_lie_sum(e.kids[0], scale * c, out);
        return;
      }
      default:
        fail(at, "expected a linear combination of basis vectors");
    }
  }

  void parse_liealg() {
    expect_keyword("liealg");
    Token at = lex_.peek();
    std::string name = fresh_name();
    expect_punct("{");
    expect_keyword("dim");
    const Token& dt = lex_.peek();
    if (dt.kind != Token::Kind::Number) fail(dt, "expected the dimension");
    std::size_t dim = std::strtoul(lex_.next().text.c_str(), nullptr, 10);
    expect_punct(";");
    if (dim == 0 || dim % 2 != 0) fail(at, "dimension must be even");
    std::vector<Rational> q(dim * dim * dim, Rational(0));
    std::vector<Rational> form(dim * dim, Rational(0));
    auto bracket_index = [&](const char* what) {
      expect_punct("[");
      const Token& it = lex_.peek();
      if (it.kind != Token::Kind::Number) fail(it, "expected an index");
      std::size_t i = std::strtoul(lex_.next().text.c_str(), nullptr, 10);
      expect_punct(",");
      const Token& jt = lex_.peek();
      if (jt.kind != Token::Kind::Number) fail(jt, "expected an index");
      std::size_t j = std::strtoul(lex_.next().text.c_str(), nullptr, 10);
      expect_punct("]");
      if (i < 1 || i > dim || j < 1 || j > dim || i == j)
        fail(it, std::string("bad ") + what + " indices");
      return std::make_pair(i - 1, j - 1);
    };
    while (!accept_punct("}")) {
      if (peek_ident("bracket")) {
        lex_.next();
        auto [i, j] = bracket_index("bracket");
        expect_punct("=");
        Expr e = ExprParser(lex_).parse();
        expect_punct(";");
        std::vector<Rational> coeffs(dim, Rational(0));
        interpret_lie_sum(e, Rational(1), coeffs);
        for (std::size_t c = 0; c < dim; ++c) {
          q[(c * dim + i) * dim + j] = coeffs[c];
          q[(c * dim + j) * dim + i] = -coeffs[c];
        }
      } else if (peek_ident("form")) {
        lex_.next();
        auto [i, j] = bracket_index("form");
        expect_punct("=");
        Expr e = ExprParser(lex_).parse();
        expect_punct(";");
        Rational v = eval_constant_expr(e);
        form[i * dim + j] = v;
        form[j * dim + i] = -v;
      } else {
        fail(lex_.peek(), "expected 'bracket', 'form' or '}'");
      }
    }
    try {
      doc_.liealgs.emplace_back(name, LieAlgebraData(dim, q, form));
    } catch (const Error& err) {
      fail(at, err.what());
    }
  }

  void parse_check() {
    Token kt = expect_keyword("check");
    Token nt = expect_ident();
    auto kind = directive_kind(nt.text);
    if (!kind) fail(nt, "unknown check directive '" + nt.text + "'");
    Directive d;
    d.kind = *kind;
    d.line = kt.line;
    expect_punct("(");
    if (!accept_punct(")")) {
      d.args.push_back(expect_ident().text);
      while (accept_punct(",")) d.args.push_back(expect_ident().text);
      expect_punct(")");
    }
    resolve_args(d, nt);
    if (accept_punct("==")) {
      if (d.kind != Directive::Kind::Divergence &&
          d.kind != Directive::Kind::Modular)
        fail(lex_.peek(), "'==' is only supported for divergence/modular");
      const BerezinVolume* vol = doc_.find_volume(d.args[0]);
      Expr e = ExprParser(lex_).parse();
      ScalarCtx ctx{vol->chart(), vol->chart(), nullptr};
      d.expected_value = eval_scalar_expr(e, ctx);
    }
    if (peek_ident("expect")) {
      lex_.next();
      Token et = expect_ident();
      if (et.text == "pass") d.expect = Directive::Expect::Pass;
      else if (et.text == "fail") d.expect = Directive::Expect::Fail;
      else if (et.text == "error") d.expect = Directive::Expect::Error;
      else fail(et, "expected 'pass', 'fail' or 'error'");
    }
    expect_punct(";");
    std::string disp = std::string(directive_name(d.kind)) + "(";
    for (std::size_t i = 0; i < d.args.size(); ++i)
      disp += (i ? ", " : "") + d.args[i];
    disp += ")";
    d.display = disp;
    doc_.checks.push_back(std::move(d));
  }

  void resolve_args(const Directive& d, const Token& at) {
    auto want = [&](std::size_t n) {
      if (d.args.size() != n)
        fail(at, std::string(directive_name(d.kind)) + " takes " +
                     std::to_string(n) + " arguments");
    };
    auto metric = [&](const std::string& s) {
      if (!doc_.find_metric(s)) fail(at, "unknown metric '" + s + "'");
    };
    auto vector = [&](const std::string& s) {
      if (!doc_.find_vector(s)) fail(at, "unknown vector field '" + s + "'");
    };
    auto volume = [&](const std::string& s) {
      if (!doc_.find_volume(s)) fail(at, "unknown volume '" + s + "'");
    };
    auto liealg = [&](const std::string& s) {
      if (!doc_.find_liealg(s)) fail(at, "unknown lie algebra '" + s + "'");
    };
    switch (d.kind) {
      case Directive::Kind::Homological:
        want(1);
        vector(d.args[0]);
        break;
      case Directive::Kind::Killing:
      case Directive::Kind::RiemannianQ:
      case Directive::Kind::Unimodular:
        want(2);
        metric(d.args[0]);
        vector(d.args[1]);
        break;
      case Directive::Kind::Divergence:
      case Directive::Kind::Modular:
        want(2);
        volume(d.args[0]);
        vector(d.args[1]);
        break;
      case Directive::Kind::Shander: {
        want(2);
        metric(d.args[0]);
        const MetricTensor* g = doc_.find_metric(d.args[0]);
        auto ci = g->chart()->index_of(d.args[1]);
        if (!ci || g->chart()->parity(*ci) != Parity::Odd)
          fail(at, "'" + d.args[1] + "' is not an odd coordinate of chart " +
                       g->chart()->name());
        break;
      }
      case Directive::Kind::Morphism: {
        want(5);
        metric(d.args[0]);
        vector(d.args[1]);
        metric(d.args[2]);
        vector(d.args[3]);
        if (!doc_.find_change(d.args[4]))
          fail(at, "unknown change '" + d.args[4] + "'");
        break;
      }
      case Directive::Kind::LiealgKilling:
      case Directive::Kind::LiealgTrace:
        want(1);
        liealg(d.args[0]);
        break;
    }
  }

  Lexer lex_;
  Document doc_;
  std::set<std::string> names_;
};

}  // namespace

const char* directive_name(Directive::Kind k) {
  return kDirectiveNames[static_cast<int>(k)];
}

const ChartPtr* Document::find_chart(const std::string& name) const {
  for (const auto& [n, v] : charts)
    if (n == name) return &v;
  return nullptr;
}
const MetricTensor* Document::find_metric(const std::string& name) const {
  for (const auto& [n, v] : metrics)
    if (n == name) return &v;
  return nullptr;
}
const VectorField* Document::find_vector(const std::string& name) const {
  for (const auto& [n, v] : vectors)
    if (n == name) return &v;
  return nullptr;
}
const BerezinVolume* Document::find_volume(const std::string& name) const {
  for (const auto& [n, v] : volumes)
    if (n == name) return &v;
  return nullptr;
}
const CoordinateChange* Document::find_change(const std::string& name) const {
  for (const auto& [n, v] : changes)
    if (n == name) return &v;
  return nullptr;
}
const LieAlgebraData* Document::find_liealg(const std::string& name) const {
  for (const auto& [n, v] : liealgs)
    if (n == name) return &v;
  return nullptr;
}

Document parse(const std::string& source) {
  return DocumentParser(source).run();
}

// ---------------------------------------------------------------- printing

namespace {

std::string format_double(double v) {
  std::ostringstream out;
  out << v;
  std::string s = out.str();
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos)
    s += ".0";
  return s;
}

std::string sf_string(const SuperFunction& f) {
  return "(" + f.to_string() + ")";
}

void print_metric_terms(std::ostringstream& out, const MetricTensor& g) {
  const ChartPtr& chart = g.chart();
  std::size_t d = chart->dim();
  bool first = true;
  auto emit = [&](const SuperFunction& coeff, std::size_t i, std::size_t j) {
    if (coeff.is_zero()) return;
    out << (first ? "" : " + ") << sf_string(coeff) << "*d"
        << chart->coord_name(i) << "*d" << chart->coord_name(j);
    first = false;
  };
  for (std::size_t i = 0; i < d; ++i) {
    if (chart->parity(i) == Parity::Even) emit(g.at(i, i), i, i);
    for (std::size_t j = i + 1; j < d; ++j) {
      // term c * dx^i dx^j carries comp(j,i) = (-1)^{p(i)+p(j)} c / 2
      SuperFunction c = g.at(j, i) + g.at(j, i);
      if ((parity_int(chart->parity(i)) + parity_int(chart->parity(j))) & 1)
        c = -c;
      emit(c, i, j);
    }
  }
  if (first) out << "0*d" << chart->coord_name(0) << "*d" << chart->coord_name(0);
}

void print_vector_terms(std::ostringstream& out, const VectorField& x) {
  bool first = true;
  for (std::size_t a = 0; a < x.chart()->dim(); ++a) {
    if (x.component(a).is_zero()) continue;
    out << (first ? "" : " + ") << sf_string(x.component(a)) << "*d_"
        << x.chart()->coord_name(a);
    first = false;
  }
  if (first) out << "0*d_" << x.chart()->coord_name(0);
}

}  // namespace

std::string print(const Document& doc) {
  std::ostringstream out;
  for (const auto& [name, chart] : doc.charts) {
    out << "chart " << name << " {\n  even:";
    for (std::size_t i = 0; i < chart->even_dim(); ++i)
      out << (i ? ", " : " ") << chart->coord_name(i);
    out << ";\n  odd:";
    for (std::size_t i = 0; i < chart->odd_dim(); ++i)
      out << (i ? ", " : " ") << chart->coord_name(chart->even_dim() + i);
    out << ";\n";
    bool custom = false;
    for (const auto& iv : chart->box())
      if (iv.lo != 0.1 || iv.hi != 3.0) custom = true;
    if (custom) {
      out << "  box:";
      for (std::size_t i = 0; i < chart->even_dim(); ++i) {
        const Interval& iv = chart->box(i);
        out << (i ? ", " : " ") << chart->coord_name(i) << " in ("
            << format_double(iv.lo) << ", " << format_double(iv.hi) << ")";
      }
      out << ";\n";
    }
    out << "}\n";
  }
  for (const auto& [name, g] : doc.metrics) {
    out << "metric " << name << " on " << g.chart()->name() << " = ";
    print_metric_terms(out, g);
    out << ";\n";
  }
  for (const auto& [name, x] : doc.vectors) {
    out << "vector " << name << " on " << x.chart()->name() << " ("
        << (x.parity() == Parity::Even ? "even" : "odd") << ") = ";
    print_vector_terms(out, x);
    out << ";\n";
  }
  for (const auto& [name, v] : doc.volumes) {
    out << "volume " << name << " on " << v.chart()->name() << " = "
        << sf_string(v.density()) << ";\n";
  }
  for (const auto& [name, c] : doc.changes) {
    out << "change " << name << " from " << c.source()->name() << " to "
        << c.target()->name() << " {\n";
    for (std::size_t a = 0; a < c.target()->dim(); ++a)
      out << "  " << c.target()->coord_name(a) << " = "
          << sf_string(c.images()[a]) << ";\n";
    if (c.has_inverse()) {
      CoordinateChange inv = c.inverse();
      out << "  inverse {\n";
      for (std::size_t a = 0; a < c.source()->dim(); ++a)
        out << "    " << c.source()->coord_name(a) << " = "
            << sf_string(inv.images()[a]) << ";\n";
      out << "  }\n";
    }
    out << "}\n";
  }
  for (const auto& [name, l] : doc.liealgs) {
    out << "liealg " << name << " {\n  dim " << l.dim() << ";\n";
    for (std::size_t i = 0; i < l.dim(); ++i)
      for (std::size_t j = i + 1; j < l.dim(); ++j) {
        bool any = false;
        for (std::size_t c = 0; c < l.dim(); ++c)
          if (sgn(l.q(c, i, j)) != 0) any = true;
        if (!any) continue;
        out << "  bracket [" << i + 1 << "," << j + 1 << "] =";
        bool first = true;
        for (std::size_t c = 0; c < l.dim(); ++c) {
          if (sgn(l.q(c, i, j)) == 0) continue;
          out << (first ? " " : " + ") << l.q(c, i, j).get_str() << "*e"
              << c + 1;
          first = false;
        }
        out << ";\n";
      }
    for (std::size_t i = 0; i < l.dim(); ++i)
      for (std::size_t j = i + 1; j < l.dim(); ++j)
        if (sgn(l.form(i, j)) != 0)
          out << "  form [" << i + 1 << "," << j + 1
              << "] = " << l.form(i, j).get_str() << ";\n";
    out << "}\n";
  }
  for (const Directive& d : doc.checks) {
    out << "check " << d.display;
    if (d.expected_value) out << " == " << sf_string(*d.expected_value);
    if (d.expect == Directive::Expect::Fail) out << " expect fail";
    if (d.expect == Directive::Expect::Error) out << " expect error";
    out << ";\n";
  }
  return out.str();
}

// ------------------------------------------------------------- equivalence

namespace {

bool same_terms(const SuperFunction& a, const SuperFunction& b) {
  return a.terms() == b.terms();
}

bool same_chart(const ChartPtr& a, const ChartPtr& b) {
  if (a->even_dim() != b->even_dim() || a->odd_dim() != b->odd_dim())
    return false;
  for (std::size_t i = 0; i < a->dim(); ++i)
    if (a->coord_name(i) != b->coord_name(i)) return false;
  for (std::size_t i = 0; i < a->even_dim(); ++i)
    if (a->box(i).lo != b->box(i).lo || a->box(i).hi != b->box(i).hi)
      return false;
  return true;
}

template <typename T, typename F>
bool same_list(const std::vector<std::pair<std::string, T>>& a,
               const std::vector<std::pair<std::string, T>>& b, F&& eq) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].first != b[i].first || !eq(a[i].second, b[i].second))
      return false;
  return true;
}

bool same_components(const std::vector<SuperFunction>& a,
                     const std::vector<SuperFunction>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_terms(a[i], b[i])) return false;
  return true;
}

}  // namespace

bool equivalent(const Document& a, const Document& b) {
  if (!same_list(a.charts, b.charts, same_chart)) return false;
  if (!same_list(a.metrics, b.metrics,
                 [](const MetricTensor& x, const MetricTensor& y) {
                   return same_chart(x.chart(), y.chart()) &&
                          same_components(x.components(), y.components());
                 }))
    return false;
  if (!same_list(a.vectors, b.vectors,
                 [](const VectorField& x, const VectorField& y) {
                   return x.parity() == y.parity() &&
                          same_chart(x.chart(), y.chart()) &&
                          same_components(x.components(), y.components());
                 }))
    return false;
  if (!same_list(a.volumes, b.volumes,
                 [](const BerezinVolume& x, const BerezinVolume& y) {
                   return same_chart(x.chart(), y.chart()) &&
                          same_terms(x.density(), y.density());
                 }))
    return false;
  if (!same_list(a.changes, b.changes,
                 [](const CoordinateChange& x, const CoordinateChange& y) {
                   if (!same_chart(x.source(), y.source()) ||
                       !same_chart(x.target(), y.target()))
                     return false;
                   if (!same_components(x.images(), y.images())) return false;
                   if (x.has_inverse() != y.has_inverse()) return false;
                   if (x.has_inverse() &&
                       !same_components(x.inverse().images(),
                                        y.inverse().images()))
                     return false;
                   return true;
                 }))
    return false;
  if (!same_list(a.liealgs, b.liealgs,
                 [](const LieAlgebraData& x, const LieAlgebraData& y) {
                   if (x.dim() != y.dim()) return false;
                   for (std::size_t c = 0; c < x.dim(); ++c)
                     for (std::size_t i = 0; i < x.dim(); ++i)
                       for (std::size_t j = 0; j < x.dim(); ++j)
                         if (x.q(c, i, j) != y.q(c, i, j)) return false;
                   for (std::size_t i = 0; i < x.dim(); ++i)
                     for (std::size_t j = 0; j < x.dim(); ++j)
                       if (x.form(i, j) != y.form(i, j)) return false;
                   return true;
                 }))
    return false;
  if (a.checks.size() != b.checks.size()) return false;
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    const Directive& x = a.checks[i];
    const Directive& y = b.checks[i];
    if (x.kind != y.kind || x.args != y.args || x.expect != y.expect)
      return false;
    if (x.expected_value.has_value() != y.expected_value.has_value())
      return false;
    if (x.expected_value && !same_terms(*x.expected_value, *y.expected_value))
      return false;
  }
  return true;
}

// ------------------------------------------------------------ JSON liealg

LieAlgebraData liealg_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), 1, 1);
  }
  auto rational_of = [](const nlohmann::json& v) -> Rational {
    if (v.is_string()) {
      std::string s = v.get<std::string>();
      Token t;
      t.text = s;
      auto slash = s.find('/');
      if (slash != std::string::npos) {
        Rational r(s);
        r.canonicalize();
        return r;
      }
      t.text = s;
      return rational_from_token(t);
    }
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (v.is_number_float()) {
      Rational r;
      mpq_set_d(r.get_mpq_t(), v.get<double>());
      return r;
    }
    throw ParseError("expected a number or 'p/q' string", 1, 1);
  };
  if (!j.contains("dim") || !j["dim"].is_number_integer())
    throw ParseError("missing integer field 'dim'", 1, 1);
  std::size_t dim = j["dim"].get<std::size_t>();
  if (dim == 0 || dim % 2 != 0)
    throw ParseError("'dim' must be a positive even number", 1, 1);
  std::vector<Rational> q(dim * dim * dim, Rational(0));
  std::vector<Rational> form(dim * dim, Rational(0));
  std::vector<bool> qset(dim * dim * dim, false);
  auto index = [&](const nlohmann::json& v, const char* what) -> std::size_t {
    if (!v.is_number_integer())
      throw ParseError(std::string("bad index in ") + what, 1, 1);
    long k = v.get<long>();
    if (k < 1 || static_cast<std::size_t>(k) > dim)
      throw ParseError(std::string("index out of range in ") + what, 1, 1);
    return static_cast<std::size_t>(k - 1);
  };
  for (const auto& row : j.value("structure", nlohmann::json::array())) {
    if (!row.is_array() || row.size() != 4)
      throw ParseError("structure rows are [c,b,a,value]", 1, 1);
    std::size_t c = index(row[0], "structure");
    std::size_t b = index(row[1], "structure");
    std::size_t a = index(row[2], "structure");
    if (a == b) throw ParseError("structure entry with b == a", 1, 1);
    Rational v = rational_of(row[3]);
    std::size_t i1 = (c * dim + b) * dim + a;
    std::size_t i2 = (c * dim + a) * dim + b;
    if ((qset[i1] && q[i1] != v) || (qset[i2] && q[i2] != -v))
      throw ParseError("conflicting structure entries", 1, 1);
    q[i1] = v;
    q[i2] = -v;
    qset[i1] = qset[i2] = true;
  }
  for (const auto& row : j.value("form", nlohmann::json::array())) {
    if (!row.is_array() || row.size() != 3)
      throw ParseError("form rows are [b,a,value]", 1, 1);
    std::size_t b = index(row[0], "form");
    std::size_t a = index(row[1], "form");
    if (a == b) throw ParseError("form entry with b == a", 1, 1);
    Rational v = rational_of(row[2]);
    form[b * dim + a] = v;
    form[a * dim + b] = -v;
  }
  try {
    return LieAlgebraData(dim, std::move(q), std::move(form));
  } catch (const Error& err) {
    throw ParseError(err.what(), 1, 1);
  }
}

}  // namespace superkilling
