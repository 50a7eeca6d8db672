#pragma once

#include <cctype>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "tmsim/errors.hpp"
#include "tmsim/numerics/interval.hpp"
#include "tmsim/numerics/real.hpp"

namespace tmsim {

enum class Op { Var, Const, Add, Sub, Mul, Div, Neg, Sin, Cos, ArcSin, ArcTan, Exp, Log2, Pow };

struct Node;

/// Immutable closed-form expression; subtrees are shared.
class Expr {
 public:
  Expr() = default;
  explicit Expr(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  const Node& node() const { return *n_; }
  const Node* get() const { return n_.get(); }
  explicit operator bool() const { return static_cast<bool>(n_); }

 private:
  std::shared_ptr<const Node> n_;
};

struct Node {
  Op op;
  std::vector<Expr> kids;
  int var = 0;               // Var
  std::string name;          // Var display name, or Const value ("pi", "e" or a decimal literal)
  std::string provenance;    // Const: where the constant comes from
  long exponent = 0;         // Pow
  std::string margin;        // ArcSin: certified |argument| <= 1 - margin, as a decimal literal
};

namespace ex {

inline Expr make(Node n) { return Expr(std::make_shared<const Node>(std::move(n))); }

inline Expr var(int index, std::string name) {
  Node n{Op::Var, {}, index, std::move(name), {}, 0, {}};
  return make(std::move(n));
}
inline Expr cnst(std::string value, std::string provenance = {}) {
  Node n{Op::Const, {}, 0, std::move(value), std::move(provenance), 0, {}};
  return make(std::move(n));
}
inline Expr cnst(long v, std::string provenance = {}) { return cnst(std::to_string(v), std::move(provenance)); }
inline Expr node(Op op, std::vector<Expr> kids) {
  Node n{op, std::move(kids), 0, {}, {}, 0, {}};
  return make(std::move(n));
}
inline Expr add(Expr a, Expr b) { return node(Op::Add, {a, b}); }
inline Expr sub(Expr a, Expr b) { return node(Op::Sub, {a, b}); }
inline Expr mul(Expr a, Expr b) { return node(Op::Mul, {a, b}); }
inline Expr div(Expr a, Expr b) { return node(Op::Div, {a, b}); }
inline Expr neg(Expr a) { return node(Op::Neg, {a}); }
inline Expr sin(Expr a) { return node(Op::Sin, {a}); }
inline Expr cos(Expr a) { return node(Op::Cos, {a}); }
inline Expr arctan(Expr a) { return node(Op::ArcTan, {a}); }
inline Expr exp(Expr a) { return node(Op::Exp, {a}); }
inline Expr log2(Expr a) { return node(Op::Log2, {a}); }
/// margin, if given, certifies |a| <= 1 - margin on the declared domain.
inline Expr arcsin(Expr a, std::string margin = {}) {
  Node n{Op::ArcSin, {a}, 0, {}, {}, 0, std::move(margin)};
  return make(std::move(n));
}
inline Expr pow(Expr a, long k) {
  Node n{Op::Pow, {a}, 0, {}, {}, k, {}};
  return make(std::move(n));
}
inline Expr pi() { return cnst("pi", "circle constant"); }

}  // namespace ex

inline Expr operator+(Expr a, Expr b) { return ex::add(a, b); }
inline Expr operator-(Expr a, Expr b) { return ex::sub(a, b); }
inline Expr operator*(Expr a, Expr b) { return ex::mul(a, b); }
inline Expr operator/(Expr a, Expr b) { return ex::div(a, b); }
inline Expr operator-(Expr a) { return ex::neg(a); }

/// Number of variables: one more than the largest Var index.
inline int arity(const Expr& e) {
  const Node& n = e.node();
  int a = n.op == Op::Var ? n.var + 1 : 0;
  for (auto& k : n.kids) a = std::max(a, arity(k));
  return a;
}

inline std::size_t node_count(const Expr& e) {
  std::size_t c = 1;
  for (auto& k : e.node().kids) c += node_count(k);
  return c;
}

namespace detail {

inline Real const_value(const Node& n, long bits) {
  if (n.name == "pi") return pi_at(bits);
  if (n.name == "e") return exp(Real(1).rounded(bits));
  return Real::from_string(n.name, bits);
}

inline Interval const_interval(const Node& n, long bits) {
  if (n.name == "pi") return pi_interval(bits);
  if (n.name == "e") return exp(Interval(Real(1).rounded(bits)));
  return Interval::from_decimal(n.name, bits);
}

template <class T>
struct Evaluator {
  const std::vector<T>& args;
  long bits;
  std::unordered_map<const Node*, T> memo;

  T operator()(const Expr& e) {
    auto it = memo.find(e.get());
    if (it != memo.end()) return it->second;
    T v = compute(e.node());
    memo.emplace(e.get(), v);
    return v;
  }

  T compute(const Node& n) {
    switch (n.op) {
      case Op::Var:
        return args[static_cast<std::size_t>(n.var)];
      case Op::Const:
        if constexpr (std::is_same_v<T, Real>)
          return const_value(n, bits);
        else
          return const_interval(n, bits);
      case Op::Add:
        return (*this)(n.kids[0]) + (*this)(n.kids[1]);
      case Op::Sub:
        return (*this)(n.kids[0]) - (*this)(n.kids[1]);
      case Op::Mul:
        return (*this)(n.kids[0]) * (*this)(n.kids[1]);
      case Op::Div: {
        T d = (*this)(n.kids[1]);
        if constexpr (std::is_same_v<T, Real>) {
          if (d.is_zero()) throw DomainError("division by zero in expression");
        }
        return (*this)(n.kids[0]) / d;
      }
      case Op::Neg:
        return -(*this)(n.kids[0]);
      case Op::Sin:
        return sin((*this)(n.kids[0]));
      case Op::Cos:
        return cos((*this)(n.kids[0]));
      case Op::ArcSin: {
        T a = (*this)(n.kids[0]);
        if constexpr (std::is_same_v<T, Real>) {
          if (abs(a) > Real(1)) throw DomainError("arcsin argument " + a.str(20) + " leaves [-1, 1]");
        }
        return asin(a);
      }
      case Op::ArcTan:
        return atan((*this)(n.kids[0]));
      case Op::Exp:
        return exp((*this)(n.kids[0]));
      case Op::Log2: {
        T a = (*this)(n.kids[0]);
        if constexpr (std::is_same_v<T, Real>) {
          if (a.sign() <= 0) throw DomainError("log2 of a nonpositive value");
        }
        return log2(a);
      }
      case Op::Pow:
        return pow((*this)(n.kids[0]), n.exponent);
    }
    throw DomainError("corrupt expression node");
  }
};

}  // namespace detail

/// Point evaluation. Intermediate results carry guard_bits extra bits; the result is rounded
/// to the working precision.
inline Real eval(const Expr& e, const std::vector<Real>& args, long guard_bits = 64) {
  if (arity(e) > static_cast<int>(args.size()))
    throw ArityMismatch("expression needs " + std::to_string(arity(e)) + " arguments, got " +
                        std::to_string(args.size()));
  const long bits = default_precision();
  Real out;
  {
    PrecisionGuard g(bits + guard_bits);
    std::vector<Real> wide;
    for (auto& a : args) wide.push_back(a.rounded(std::max(a.prec(), bits + guard_bits)));
    detail::Evaluator<Real> ev{wide, bits + guard_bits, {}};
    out = ev(e);
  }
  return out.rounded(bits);
}

/// Interval evaluation: the result encloses the image of the box.
inline Interval eval_interval(const Expr& e, const std::vector<Interval>& boxes) {
  if (arity(e) > static_cast<int>(boxes.size()))
    throw ArityMismatch("expression needs " + std::to_string(arity(e)) + " arguments, got " +
                        std::to_string(boxes.size()));
  detail::Evaluator<Interval> ev{boxes, default_precision(), {}};
  return ev(e);
}

/// Checks every annotated arcsin over the box: the argument enclosure must stay within
/// [-1 + margin, 1 - margin]. Runs at a width that resolves the margin.
inline bool certificates_hold(const Expr& e, const std::vector<Interval>& boxes) {
  const Node& n = e.node();
  for (auto& k : n.kids)
    if (!certificates_hold(k, boxes)) return false;
  if (n.op == Op::ArcSin && !n.margin.empty()) {
    Real m = Real::from_string(n.margin, 64, MPFR_RNDD);
    if (m.sign() <= 0 || m >= Real(1)) return false;
    long need = std::max(default_precision(), static_cast<long>(-mpfr_get_exp(m.raw())) + 64);
    PrecisionGuard g(need);
    Interval arg = eval_interval(n.kids[0], boxes);
    return (Interval(1) - abs(arg)).lo() >= Real::from_string(n.margin, need, MPFR_RNDU);
  }
  return true;
}

/// Substitutes inners[i] for variable i of outer.
inline Expr compose(const Expr& outer, const std::vector<Expr>& inners) {
  if (arity(outer) > static_cast<int>(inners.size()))
    throw ArityMismatch("compose: outer expression has arity " + std::to_string(arity(outer)) + " but " +
                        std::to_string(inners.size()) + " inner expressions were given");
  std::unordered_map<const Node*, Expr> memo;
  std::function<Expr(const Expr&)> go = [&](const Expr& e) -> Expr {
    auto it = memo.find(e.get());
    if (it != memo.end()) return it->second;
    const Node& n = e.node();
    Expr out;
    if (n.op == Op::Var) {
      out = inners[static_cast<std::size_t>(n.var)];
    } else if (n.kids.empty()) {
      out = e;
    } else {
      Node copy = n;
      for (auto& k : copy.kids) k = go(k);
      out = ex::make(std::move(copy));
    }
    memo.emplace(e.get(), out);
    return out;
  };
  return go(outer);
}

// ---------------------------------------------------------------------------
// Rendering

namespace detail {

inline int precedence(const Node& n) {
  switch (n.op) {
    case Op::Add:
    case Op::Sub:
      return 1;
    case Op::Mul:
    case Op::Div:
      return 2;
    case Op::Neg:
      return 3;
    case Op::Pow:
      return 4;
    case Op::Const:
      // A negative literal behaves like a negation.
      return !n.name.empty() && n.name[0] == '-' ? 3 : 5;
    default:
      return 5;
  }
}

inline const char* function_name(Op op) {
  switch (op) {
    case Op::Sin:
      return "sin";
    case Op::Cos:
      return "cos";
    case Op::ArcSin:
      return "arcsin";
    case Op::ArcTan:
      return "arctan";
    case Op::Exp:
      return "exp";
    case Op::Log2:
      return "log2";
    default:
      return nullptr;
  }
}

inline void infix(const Expr& e, std::ostream& os);

inline void infix_child(const Expr& c, int min_prec, std::ostream& os) {
  if (precedence(c.node()) < min_prec) {
    os << "(";
    infix(c, os);
    os << ")";
  } else {
    infix(c, os);
  }
}

inline void infix(const Expr& e, std::ostream& os) {
  const Node& n = e.node();
  switch (n.op) {
    case Op::Var:
      os << n.name;
      return;
    case Op::Const:
      os << n.name;
      return;
    case Op::Add:
      infix_child(n.kids[0], 1, os);
      os << " + ";
      infix_child(n.kids[1], 1, os);
      return;
    case Op::Sub:
      infix_child(n.kids[0], 1, os);
      os << " - ";
      infix_child(n.kids[1], 2, os);
      return;
    case Op::Mul:
      infix_child(n.kids[0], 2, os);
      os << "*";
      infix_child(n.kids[1], 3, os);
      return;
    case Op::Div:
      infix_child(n.kids[0], 2, os);
      os << "/";
      infix_child(n.kids[1], 3, os);
      return;
    case Op::Neg:
      os << "-";
      infix_child(n.kids[0], 4, os);
      return;
    case Op::Pow:
      infix_child(n.kids[0], 5, os);
      os << "^" << n.exponent;
      return;
    default:
      os << function_name(n.op) << "(";
      infix(n.kids[0], os);
      os << ")";
      return;
  }
}

inline std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

inline const char* sexpr_head(Op op) {
  switch (op) {
    case Op::Var:
      return "var";
    case Op::Const:
      return "const";
    case Op::Add:
      return "add";
    case Op::Sub:
      return "sub";
    case Op::Mul:
      return "mul";
    case Op::Div:
      return "div";
    case Op::Neg:
      return "neg";
    case Op::Sin:
      return "sin";
    case Op::Cos:
      return "cos";
    case Op::ArcSin:
      return "arcsin";
    case Op::ArcTan:
      return "arctan";
    case Op::Exp:
      return "exp";
    case Op::Log2:
      return "log2";
    case Op::Pow:
      return "pow";
  }
  return "?";
}

inline void sexpr(const Expr& e, std::ostream& os) {
  const Node& n = e.node();
  os << "(" << sexpr_head(n.op);
  switch (n.op) {
    case Op::Var:
      os << " " << n.var << " " << n.name;
      break;
    case Op::Const:
      os << " " << n.name;
      if (!n.provenance.empty()) os << " " << quote(n.provenance);
      break;
    case Op::Pow:
      os << " ";
      sexpr(n.kids[0], os);
      os << " " << n.exponent;
      break;
    default:
      for (auto& k : n.kids) {
        os << " ";
        sexpr(k, os);
      }
      if (n.op == Op::ArcSin && !n.margin.empty()) os << " (margin " << n.margin << ")";
  }
  os << ")";
}

}  // namespace detail

/// Conventional infix form, e.g. x - 0.2*sin(2*pi*x).
inline std::string to_infix(const Expr& e) {
  std::ostringstream os;
  detail::infix(e, os);
  return os.str();
}

/// Canonical S-expression; parse_sexpr(to_sexpr(e)) reproduces e.
inline std::string to_sexpr(const Expr& e) {
  std::ostringstream os;
  detail::sexpr(e, os);
  return os.str();
}

namespace detail {

struct SexprParser {
  const std::string& s;
  std::size_t pos = 0, line = 1, col = 1;

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, line, col); }

  void advance() {
    if (s[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }
  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) advance();
  }
  void expect(char c) {
    skip_ws();
    if (pos >= s.size() || s[pos] != c) fail(std::string("expected '") + c + "'");
    advance();
  }
  bool peek(char c) {
    skip_ws();
    return pos < s.size() && s[pos] == c;
  }
  std::string atom() {
    skip_ws();
    std::string out;
    while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) && s[pos] != '(' && s[pos] != ')' &&
           s[pos] != '"') {
      out += s[pos];
      advance();
    }
    if (out.empty()) fail("expected an atom");
    return out;
  }
  std::string quoted() {
    expect('"');
    std::string out;
    while (pos < s.size() && s[pos] != '"') {
      if (s[pos] == '\\') advance();
      if (pos >= s.size()) break;
      out += s[pos];
      advance();
    }
    if (pos >= s.size()) fail("unterminated string");
    advance();
    return out;
  }
  long integer() {
    std::size_t l = line, c = col;
    std::string a = atom();
    try {
      std::size_t used = 0;
      long v = std::stol(a, &used);
      if (used != a.size()) throw std::invalid_argument(a);
      return v;
    } catch (const std::exception&) {
      throw ParseError("expected an integer, got '" + a + "'", l, c);
    }
  }

  Expr parse() {
    expect('(');
    std::size_t hl = line, hc = col;
    std::string head = atom();
    static const std::map<std::string, Op> heads = {
        {"var", Op::Var},       {"const", Op::Const}, {"add", Op::Add},   {"sub", Op::Sub},   {"mul", Op::Mul},
        {"div", Op::Div},       {"neg", Op::Neg},     {"sin", Op::Sin},   {"cos", Op::Cos},   {"arcsin", Op::ArcSin},
        {"arctan", Op::ArcTan}, {"exp", Op::Exp},     {"log2", Op::Log2}, {"pow", Op::Pow}};
    auto it = heads.find(head);
    if (it == heads.end()) throw ParseError("unknown node '" + head + "'", hl, hc);
    Op op = it->second;
    Expr out;
    switch (op) {
      case Op::Var: {
        long idx = integer();
        if (idx < 0) fail("negative variable index");
        out = ex::var(static_cast<int>(idx), atom());
        break;
      }
      case Op::Const: {
        std::size_t cl = line, cc = col;
        std::string v = atom();
        if (v != "pi" && v != "e") {
          try {
            (void)Real::from_string(v, 64);
          } catch (const DomainError&) {
            throw ParseError("bad constant '" + v + "'", cl, cc);
          }
        }
        std::string prov = peek('"') ? quoted() : std::string();
        out = ex::cnst(v, prov);
        break;
      }
      case Op::Pow: {
        Expr base = parse();
        out = ex::pow(base, integer());
        break;
      }
      case Op::Add:
      case Op::Sub:
      case Op::Mul:
      case Op::Div: {
        Expr a = parse();
        Expr b = parse();
        out = ex::node(op, {a, b});
        break;
      }
      case Op::ArcSin: {
        Expr a = parse();
        std::string margin;
        if (peek('(')) {
          expect('(');
          if (atom() != "margin") fail("expected 'margin'");
          std::size_t ml = line, mc = col;
          margin = atom();
          try {
            (void)Real::from_string(margin, 64);
          } catch (const DomainError&) {
            throw ParseError("bad margin '" + margin + "'", ml, mc);
          }
          expect(')');
        }
        out = ex::arcsin(a, margin);
        break;
      }
      default:
        out = ex::node(op, {parse()});
    }
    expect(')');
    return out;
  }
};

}  // namespace detail

inline Expr parse_sexpr(const std::string& text) {
  detail::SexprParser p{text};
  Expr e = p.parse();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input after expression");
  return e;
}

}  // namespace tmsim
