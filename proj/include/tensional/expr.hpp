#ifndef TENSIONAL_EXPR_HPP
#define TENSIONAL_EXPR_HPP

// Chart-level expression language: parse / print / evaluate on jets.
//
// Grammar:
//   expr     := term (('+'|'-') term)*
//   term     := factor (('*'|'/') factor)*
//   factor   := base ('^' exponent)?
//   base     := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')' | '-' factor
//   exponent := ['+'|'-'] (number | ident) | '(' constant-expr ')'
// Identifiers [a-zA-Z_][a-zA-Z0-9_]*. Functions: sin cos exp log sqrt norm.
// Identifiers that are not declared variables must be bound parameters; they
// fold to constants at parse time. Pow exponents are real constants.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tensional/errors.hpp"
#include "tensional/jet.hpp"

namespace tensional {

enum class AstKind : unsigned char { Constant, Variable, Add, Sub, Mul, Div, Pow, Neg, Call };
enum class Func : unsigned char { Sin, Cos, Exp, Log, Sqrt, Norm };

inline const char* func_name(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sqrt: return "sqrt";
    default: return "norm";
  }
}

struct ExprAst {
  AstKind kind = AstKind::Constant;
  double constant = 0.0;          // Constant
  int var = -1;                   // Variable index into the declared list
  std::string name;               // Variable name as written
  Func func = Func::Sin;          // Call
  double exponent = 0.0;          // Pow
  std::vector<ExprAst> children;

  static ExprAst make_constant(double v) {
    ExprAst a;
    a.kind = AstKind::Constant;
    a.constant = v;
    return a;
  }
  static ExprAst make_variable(int idx, std::string nm) {
    ExprAst a;
    a.kind = AstKind::Variable;
    a.var = idx;
    a.name = std::move(nm);
    return a;
  }
  static ExprAst make_binary(AstKind k, ExprAst l, ExprAst r) {
    ExprAst a;
    a.kind = k;
    a.children.push_back(std::move(l));
    a.children.push_back(std::move(r));
    return a;
  }
  static ExprAst make_neg(ExprAst c) {
    if (c.kind == AstKind::Constant) return make_constant(-c.constant);
    ExprAst a;
    a.kind = AstKind::Neg;
    a.children.push_back(std::move(c));
    return a;
  }
  static ExprAst make_pow(ExprAst b, double e) {
    ExprAst a;
    a.kind = AstKind::Pow;
    a.exponent = e;
    a.children.push_back(std::move(b));
    return a;
  }
  static ExprAst make_call(Func f, std::vector<ExprAst> args) {
    ExprAst a;
    a.kind = AstKind::Call;
    a.func = f;
    a.children = std::move(args);
    return a;
  }

  friend bool operator==(const ExprAst& a, const ExprAst& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case AstKind::Constant:
        if (a.constant != b.constant) return false;
        break;
      case AstKind::Variable:
        if (a.var != b.var || a.name != b.name) return false;
        break;
      case AstKind::Pow:
        if (a.exponent != b.exponent) return false;
        break;
      case AstKind::Call:
        if (a.func != b.func) return false;
        break;
      default: break;
    }
    if (a.children.size() != b.children.size()) return false;
    for (std::size_t i = 0; i < a.children.size(); ++i)
      if (!(a.children[i] == b.children[i])) return false;
    return true;
  }
};

using Params = std::map<std::string, double>;

namespace detail {

class Parser {
 public:
  Parser(std::string_view src, const std::vector<std::string>& vars, const Params& params)
      : src_(src), vars_(vars), params_(params) {}

  ExprAst run() {
    ExprAst e = parse_expr();
    skip_ws();
    if (pos_ < src_.size())
      throw ParseError(ParseErrorKind::Syntax, offset(), "unexpected trailing input",
                       "operator or end of input");
    return e;
  }

 private:
  // 1-based offset of the current position, clamped into the source so that
  // end-of-input errors point at the final byte.
  std::size_t offset() const {
    std::size_t o = pos_ + 1;
    std::size_t n = src_.empty() ? 1 : src_.size();
    return o > n ? n : o;
  }

  void skip_ws() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' ||
                                  src_[pos_] == '\r'))
      ++pos_;
  }

  bool peek_is(char c) {
    skip_ws();
    return pos_ < src_.size() && src_[pos_] == c;
  }

  bool consume_if(char c) {
    if (peek_is(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprAst parse_expr() {
    ExprAst e = parse_term();
    for (;;) {
      if (consume_if('+'))
        e = ExprAst::make_binary(AstKind::Add, std::move(e), parse_term());
      else if (consume_if('-'))
        e = ExprAst::make_binary(AstKind::Sub, std::move(e), parse_term());
      else
        return e;
    }
  }

  ExprAst parse_term() {
    ExprAst e = parse_factor();
    for (;;) {
      if (consume_if('*'))
        e = ExprAst::make_binary(AstKind::Mul, std::move(e), parse_factor());
      else if (consume_if('/'))
        e = ExprAst::make_binary(AstKind::Div, std::move(e), parse_factor());
      else
        return e;
    }
  }

  ExprAst parse_factor() {
    ExprAst b = parse_base();
    if (consume_if('^')) return ExprAst::make_pow(std::move(b), parse_exponent());
    return b;
  }

  ExprAst parse_base() {
    skip_ws();
    if (pos_ >= src_.size())
      throw ParseError(ParseErrorKind::Syntax, offset(), "unexpected end of input",
                       "number, identifier, '(' or '-'");
    char c = src_[pos_];
    if (c == '-') {
      ++pos_;
      return ExprAst::make_neg(parse_factor());
    }
    if (c == '(') {
      ++pos_;
      ExprAst e = parse_expr();
      expect(')');
      return e;
    }
    if (is_digit(c)) return ExprAst::make_constant(parse_number());
    if (is_ident_start(c)) return parse_ident();
    throw ParseError(ParseErrorKind::Syntax, offset(),
                     std::string("unexpected character '") + c + "'",
                     "number, identifier, '(' or '-'");
  }

  double parse_exponent() {
    skip_ws();
    double sign = 1.0;
    if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
      if (src_[pos_] == '-') sign = -1.0;
      ++pos_;
      skip_ws();
    }
    if (pos_ >= src_.size())
      throw ParseError(ParseErrorKind::Syntax, offset(), "missing exponent",
                       "number, parameter or '('");
    std::size_t at = offset();
    char c = src_[pos_];
    if (is_digit(c)) return sign * parse_number();
    if (c == '(') {
      ++pos_;
      ExprAst e = parse_expr();
      expect(')');
      return sign * fold_constant(e, at);
    }
    if (is_ident_start(c)) {
      std::string name = parse_ident_name();
      auto it = params_.find(name);
      if (it == params_.end())
        throw ParseError(ParseErrorKind::Syntax, at,
                         "exponent must be a constant ('" + name + "' is not a bound parameter)",
                         "number, parameter or '('");
      return sign * it->second;
    }
    throw ParseError(ParseErrorKind::Syntax, at, "malformed exponent", "number, parameter or '('");
  }

  double fold_constant(const ExprAst& e, std::size_t at) {
    switch (e.kind) {
      case AstKind::Constant: return e.constant;
      case AstKind::Variable:
        throw ParseError(ParseErrorKind::Syntax, at,
                         "exponent must be a constant expression but uses variable '" + e.name + "'");
      case AstKind::Add: return fold_constant(e.children[0], at) + fold_constant(e.children[1], at);
      case AstKind::Sub: return fold_constant(e.children[0], at) - fold_constant(e.children[1], at);
      case AstKind::Mul: return fold_constant(e.children[0], at) * fold_constant(e.children[1], at);
      case AstKind::Div: return fold_constant(e.children[0], at) / fold_constant(e.children[1], at);
      case AstKind::Pow: return std::pow(fold_constant(e.children[0], at), e.exponent);
      case AstKind::Neg: return -fold_constant(e.children[0], at);
      case AstKind::Call: {
        std::vector<double> a;
        a.reserve(e.children.size());
        for (const auto& ch : e.children) a.push_back(fold_constant(ch, at));
        switch (e.func) {
          case Func::Sin: return std::sin(a[0]);
          case Func::Cos: return std::cos(a[0]);
          case Func::Exp: return std::exp(a[0]);
          case Func::Log:
            if (a[0] <= 0) throw DomainError("log of a non-positive constant");
            return std::log(a[0]);
          case Func::Sqrt:
            if (a[0] < 0) throw DomainError("sqrt of a negative constant");
            return std::sqrt(a[0]);
          default: {
            double s = 0;
            for (double x : a) s += x * x;
            return std::sqrt(s);
          }
        }
      }
    }
    throw ParseError(ParseErrorKind::Syntax, at, "malformed exponent");
  }

  ExprAst parse_ident() {
    std::size_t at = offset();
    std::string name = parse_ident_name();
    if (peek_is('(')) {
      std::optional<Func> f = lookup_func(name);
      if (!f)
        throw ParseError(ParseErrorKind::UnknownFunction, at, "unknown function '" + name + "'",
                         "sin, cos, exp, log, sqrt or norm");
      ++pos_;  // '('
      std::vector<ExprAst> args;
      args.push_back(parse_expr());
      while (consume_if(',')) args.push_back(parse_expr());
      expect(')');
      if (*f != Func::Norm && args.size() != 1)
        throw ParseError(ParseErrorKind::Syntax, at,
                         "function '" + name + "' takes exactly one argument");
      if (*f == Func::Norm && args.empty())
        throw ParseError(ParseErrorKind::Syntax, at, "norm needs at least one argument");
      return ExprAst::make_call(*f, std::move(args));
    }
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == name) return ExprAst::make_variable(static_cast<int>(i), name);
    auto it = params_.find(name);
    if (it != params_.end()) return ExprAst::make_constant(it->second);
    throw ParseError(ParseErrorKind::UnknownVariable, at,
                     "'" + name + "' is not a declared variable or bound parameter");
  }

  std::string parse_ident_name() {
    std::size_t start = pos_;
    ++pos_;
    while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
    return std::string(src_.substr(start, pos_ - start));
  }

  double parse_number() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t mark = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && is_digit(src_[pos_])) {
        while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
      } else {
        pos_ = mark;  // 'e' belongs to the next token
      }
    }
    double v = 0;
    auto res = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (res.ec != std::errc())
      throw ParseError(ParseErrorKind::Syntax, start + 1, "malformed number");
    return v;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= src_.size() || src_[pos_] != c)
      throw ParseError(ParseErrorKind::Syntax, offset(),
                       std::string("expected '") + c + "'", std::string(1, c));
    ++pos_;
  }

  static std::optional<Func> lookup_func(const std::string& n) {
    if (n == "sin") return Func::Sin;
    if (n == "cos") return Func::Cos;
    if (n == "exp") return Func::Exp;
    if (n == "log") return Func::Log;
    if (n == "sqrt") return Func::Sqrt;
    if (n == "norm") return Func::Norm;
    return std::nullopt;
  }

  static bool is_digit(char c) { return c >= '0' && c <= '9'; }
  static bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

  std::string_view src_;
  std::size_t pos_ = 0;
  const std::vector<std::string>& vars_;
  const Params& params_;
};

inline std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace detail

inline ExprAst parse(std::string_view source, const std::vector<std::string>& variables,
                     const Params& parameters = {}) {
  return detail::Parser(source, variables, parameters).run();
}

// Precedence levels used by the printer so that print/parse round-trips to a
// structurally identical tree.
namespace detail {
inline int print_level(const ExprAst& a) {
  switch (a.kind) {
    case AstKind::Add:
    case AstKind::Sub: return 1;
    case AstKind::Mul:
    case AstKind::Div: return 2;
    case AstKind::Neg: return 3;
    case AstKind::Constant: return a.constant < 0 ? 3 : 5;
    case AstKind::Pow: return 4;
    default: return 5;
  }
}

inline void print_rec(const ExprAst& a, std::string& out, int min_level) {
  bool parens = print_level(a) < min_level;
  if (parens) out += '(';
  switch (a.kind) {
    case AstKind::Constant: out += format_double(a.constant); break;
    case AstKind::Variable: out += a.name; break;
    case AstKind::Add:
      print_rec(a.children[0], out, 1);
      out += " + ";
      print_rec(a.children[1], out, 2);
      break;
    case AstKind::Sub:
      print_rec(a.children[0], out, 1);
      out += " - ";
      print_rec(a.children[1], out, 2);
      break;
    case AstKind::Mul:
      print_rec(a.children[0], out, 2);
      out += "*";
      print_rec(a.children[1], out, 3);
      break;
    case AstKind::Div:
      print_rec(a.children[0], out, 2);
      out += "/";
      print_rec(a.children[1], out, 3);
      break;
    case AstKind::Neg:
      out += "-";
      print_rec(a.children[0], out, 4);
      break;
    case AstKind::Pow:
      print_rec(a.children[0], out, 5);
      out += "^";
      out += format_double(a.exponent);
      break;
    case AstKind::Call:
      out += func_name(a.func);
      out += "(";
      for (std::size_t i = 0; i < a.children.size(); ++i) {
        if (i) out += ", ";
        print_rec(a.children[i], out, 1);
      }
      out += ")";
      break;
  }
  if (parens) out += ')';
}
}  // namespace detail

inline std::string print(const ExprAst& a) {
  std::string out;
  detail::print_rec(a, out, 1);
  return out;
}

// ---- evaluation -------------------------------------------------------------

// Evaluate with an explicit environment: env[i] is the jet of variable i.
// All env jets must share `sp` and `base`. This is what makes composition
// with maps work: pass the map's component jets as the environment.
inline Jet eval_jet(const ExprAst& a, const std::vector<Jet>& env, const JetSpacePtr& sp,
                    const std::vector<double>& base) {
  switch (a.kind) {
    case AstKind::Constant: return Jet::constant(sp, base, a.constant);
    case AstKind::Variable:
      if (a.var < 0 || a.var >= static_cast<int>(env.size()))
        throw Error("expression references variable index " + std::to_string(a.var) +
                    " outside the environment");
      return env[static_cast<std::size_t>(a.var)];
    case AstKind::Add:
      return eval_jet(a.children[0], env, sp, base) + eval_jet(a.children[1], env, sp, base);
    case AstKind::Sub:
      return eval_jet(a.children[0], env, sp, base) - eval_jet(a.children[1], env, sp, base);
    case AstKind::Mul:
      return eval_jet(a.children[0], env, sp, base) * eval_jet(a.children[1], env, sp, base);
    case AstKind::Div:
      return eval_jet(a.children[0], env, sp, base) / eval_jet(a.children[1], env, sp, base);
    case AstKind::Pow: return pow(eval_jet(a.children[0], env, sp, base), a.exponent);
    case AstKind::Neg: return -eval_jet(a.children[0], env, sp, base);
    case AstKind::Call: {
      if (a.func == Func::Norm) {
        Jet s = Jet::constant(sp, base, 0.0);
        for (const auto& ch : a.children) {
          Jet x = eval_jet(ch, env, sp, base);
          s = s + x * x;
        }
        if (s.value() == 0.0) throw DomainError("norm evaluated at the origin");
        return pow(s, 0.5);
      }
      Jet x = eval_jet(a.children[0], env, sp, base);
      switch (a.func) {
        case Func::Sin: return sin(x);
        case Func::Cos: return cos(x);
        case Func::Exp: return exp(x);
        case Func::Log: return log(x);
        default: return sqrt(x);
      }
    }
  }
  throw Error("malformed expression tree");
}

// Evaluate at a point: coordinate jets of the given order form the environment.
inline Jet eval_jet(const ExprAst& a, const std::vector<double>& point, int order,
                    int order_cap = kMaxJetOrder) {
  if (order > order_cap)
    throw OrderTooLarge("requested jet order " + std::to_string(order) + " exceeds the cap " +
                        std::to_string(order_cap));
  auto sp = JetSpace::get(static_cast<int>(point.size()), order);
  std::vector<Jet> env;
  env.reserve(point.size());
  for (std::size_t v = 0; v < point.size(); ++v)
    env.push_back(Jet::variable(sp, point, static_cast<int>(v)));
  return eval_jet(a, env, sp, point);
}

// Constant (variable-free) evaluation; used for parameter strings.
inline double evaluate_constant(const ExprAst& a) {
  switch (a.kind) {
    case AstKind::Constant: return a.constant;
    case AstKind::Variable: throw Error("expression is not constant: uses '" + a.name + "'");
    case AstKind::Add: return evaluate_constant(a.children[0]) + evaluate_constant(a.children[1]);
    case AstKind::Sub: return evaluate_constant(a.children[0]) - evaluate_constant(a.children[1]);
    case AstKind::Mul: return evaluate_constant(a.children[0]) * evaluate_constant(a.children[1]);
    case AstKind::Div: {
      double d = evaluate_constant(a.children[1]);
      if (d == 0) throw DomainError("division by zero in constant expression");
      return evaluate_constant(a.children[0]) / d;
    }
    case AstKind::Pow: return std::pow(evaluate_constant(a.children[0]), a.exponent);
    case AstKind::Neg: return -evaluate_constant(a.children[0]);
    case AstKind::Call: {
      std::vector<double> args;
      for (const auto& ch : a.children) args.push_back(evaluate_constant(ch));
      switch (a.func) {
        case Func::Sin: return std::sin(args[0]);
        case Func::Cos: return std::cos(args[0]);
        case Func::Exp: return std::exp(args[0]);
        case Func::Log:
          if (args[0] <= 0) throw DomainError("log of a non-positive constant");
          return std::log(args[0]);
        case Func::Sqrt:
          if (args[0] < 0) throw DomainError("sqrt of a negative constant");
          return std::sqrt(args[0]);
        default: {
          double s = 0;
          for (double x : args) s += x * x;
          return std::sqrt(s);
        }
      }
    }
  }
  throw Error("malformed expression tree");
}

// ---- multilinear polynomial analysis ---------------------------------------

enum class PolyVerdict { Multilinear, NotMultilinear, NotPolynomial };

struct MultilinearResult {
  PolyVerdict verdict = PolyVerdict::NotPolynomial;
  // subset of variable indices (sorted) -> coefficient; empty subset = constant term
  std::map<std::vector<int>, double> coefficients;
};

namespace detail {

using Monomials = std::map<std::vector<std::uint16_t>, double>;
inline constexpr std::size_t kMonomialCap = std::size_t(1) << 20;

inline void add_into(Monomials& acc, const Monomials& b, double scale) {
  for (const auto& [e, c] : b) {
    acc[e] += scale * c;
    if (acc.size() > kMonomialCap)
      throw ExpansionTooLarge("polynomial expansion exceeds the monomial cap");
  }
}

inline Monomials mul_mono(const Monomials& a, const Monomials& b, int nvars) {
  Monomials r;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      std::vector<std::uint16_t> e(static_cast<std::size_t>(nvars), 0);
      for (int v = 0; v < nvars; ++v)
        e[v] = static_cast<std::uint16_t>(ea[v] + eb[v]);
      r[e] += ca * cb;
      if (r.size() > kMonomialCap)
        throw ExpansionTooLarge("polynomial expansion exceeds the monomial cap");
    }
  }
  return r;
}

// nullopt = not a polynomial under the admitted node kinds
inline std::optional<Monomials> expand_poly(const ExprAst& a, int nvars) {
  switch (a.kind) {
    case AstKind::Constant: {
      Monomials m;
      if (a.constant != 0.0) m[std::vector<std::uint16_t>(static_cast<std::size_t>(nvars), 0)] = a.constant;
      return m;
    }
    case AstKind::Variable: {
      Monomials m;
      std::vector<std::uint16_t> e(static_cast<std::size_t>(nvars), 0);
      e[a.var] = 1;
      m[e] = 1.0;
      return m;
    }
    case AstKind::Add:
    case AstKind::Sub: {
      auto l = expand_poly(a.children[0], nvars);
      auto r = expand_poly(a.children[1], nvars);
      if (!l || !r) return std::nullopt;
      add_into(*l, *r, a.kind == AstKind::Add ? 1.0 : -1.0);
      return l;
    }
    case AstKind::Neg: {
      auto c = expand_poly(a.children[0], nvars);
      if (!c) return std::nullopt;
      for (auto& [e, coef] : *c) coef = -coef;
      return c;
    }
    case AstKind::Mul: {
      auto l = expand_poly(a.children[0], nvars);
      auto r = expand_poly(a.children[1], nvars);
      if (!l || !r) return std::nullopt;
      return mul_mono(*l, *r, nvars);
    }
    case AstKind::Pow: {
      double e = a.exponent;
      if (e != std::nearbyint(e) || e < 0 || e > 4096) return std::nullopt;
      auto b = expand_poly(a.children[0], nvars);
      if (!b) return std::nullopt;
      Monomials acc;
      acc[std::vector<std::uint16_t>(static_cast<std::size_t>(nvars), 0)] = 1.0;
      auto n = static_cast<unsigned long>(e);
      Monomials base = *b;
      while (n) {
        if (n & 1UL) acc = mul_mono(acc, base, nvars);
        n >>= 1UL;
        if (n) base = mul_mono(base, base, nvars);
      }
      return acc;
    }
    default: return std::nullopt;
  }
}

}  // namespace detail

inline MultilinearResult is_multilinear_polynomial(const ExprAst& a, int nvars) {
  MultilinearResult res;
  auto mono = detail::expand_poly(a, nvars);
  if (!mono) {
    res.verdict = PolyVerdict::NotPolynomial;
    return res;
  }
  bool multilinear = true;
  for (const auto& [e, c] : *mono) {
    if (c == 0.0) continue;
    for (auto ev : e)
      if (ev > 1) multilinear = false;
  }
  if (!multilinear) {
    res.verdict = PolyVerdict::NotMultilinear;
    return res;
  }
  res.verdict = PolyVerdict::Multilinear;
  for (const auto& [e, c] : *mono) {
    if (c == 0.0) continue;
    std::vector<int> subset;
    for (int v = 0; v < nvars; ++v)
      if (e[v]) subset.push_back(v);
    res.coefficients[subset] = c;
  }
  return res;
}

}  // namespace tensional

#endif
