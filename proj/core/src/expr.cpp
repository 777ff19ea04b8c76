#include "finsler/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>
#include <utility>

namespace finsler {

namespace {

bool is_unary(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::Negate:
    case Expr::Kind::Exp:
    case Expr::Kind::Log:
    case Expr::Kind::Sin:
    case Expr::Kind::Cos:
    case Expr::Kind::Sqrt:
      return true;
    default:
      return false;
  }
}

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) return std::to_string(v);
  return std::string(buf, end);
}

int precedence(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::Add:
    case Expr::Kind::Subtract:
      return 1;
    case Expr::Kind::Multiply:
    case Expr::Kind::Divide:
      return 2;
    case Expr::Kind::Negate:
      return 3;
    case Expr::Kind::Power:
      return 4;
    default:
      return 5;
  }
}

const char* function_name(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::Exp: return "exp";
    case Expr::Kind::Log: return "log";
    case Expr::Kind::Sin: return "sin";
    case Expr::Kind::Cos: return "cos";
    case Expr::Kind::Sqrt: return "sqrt";
    default: return nullptr;
  }
}

std::optional<Expr::Kind> function_kind(std::string_view name) {
  if (name == "exp") return Expr::Kind::Exp;
  if (name == "log") return Expr::Kind::Log;
  if (name == "sin") return Expr::Kind::Sin;
  if (name == "cos") return Expr::Kind::Cos;
  if (name == "sqrt") return Expr::Kind::Sqrt;
  return std::nullopt;
}

void render(const Expr& e, std::string& out) {
  const auto k = e.kind();
  switch (k) {
    case Expr::Kind::Number:
      if (e.value() < 0) {
        out += '(' + format_number(e.value()) + ')';
      } else {
        out += format_number(e.value());
      }
      return;
    case Expr::Kind::Variable:
      out += 'x' + std::to_string(e.index() + 1);
      return;
    case Expr::Kind::Negate: {
      out += '-';
      const bool wrap = precedence(e.operand(0).kind()) < precedence(k);
      if (wrap) out += '(';
      render(e.operand(0), out);
      if (wrap) out += ')';
      return;
    }
    default:
      break;
  }
  if (const char* fn = function_name(k)) {
    out += fn;
    out += '(';
    render(e.operand(0), out);
    out += ')';
    return;
  }
  const int p = precedence(k);
  const char* sym = k == Expr::Kind::Add ? " + " : k == Expr::Kind::Subtract ? " - "
                    : k == Expr::Kind::Multiply ? "*" : k == Expr::Kind::Divide ? "/" : "^";
  const int lp = precedence(e.operand(0).kind());
  const int rp = precedence(e.operand(1).kind());
  const bool wrap_l = k == Expr::Kind::Power ? lp <= p : lp < p;
  const bool wrap_r = k == Expr::Kind::Power ? rp < p : (rp < p || (rp == p && (k == Expr::Kind::Subtract || k == Expr::Kind::Divide)));
  if (wrap_l) out += '(';
  render(e.operand(0), out);
  if (wrap_l) out += ')';
  out += sym;
  if (wrap_r) out += '(';
  render(e.operand(1), out);
  if (wrap_r) out += ')';
}

// ---- parser -----------------------------------------------------------------

class Parser {
 public:
  Parser(std::string_view text, const ConstantTable& constants) : text_(text), constants_(constants) {}

  Expr parse_all() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("empty expression", pos_);
    Expr e = parse_expr();
    skip_ws();
    if (pos_ < text_.size()) throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError(what + ", found end of input", pos_);
    throw ParseError(what + ", found '" + text_[pos_] + "'", pos_);
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = Expr::binary(Expr::Kind::Add, lhs, parse_term());
      } else if (accept('-')) {
        lhs = Expr::binary(Expr::Kind::Subtract, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = Expr::binary(Expr::Kind::Multiply, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = Expr::binary(Expr::Kind::Divide, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_unary() {
    if (accept('-')) return -parse_unary();
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (accept('^')) return Expr::binary(Expr::Kind::Power, base, parse_exponent());
    return base;
  }

  Expr parse_exponent() {
    if (accept('-')) return -parse_exponent();
    return parse_power();
  }

  Expr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("expected operand");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = parse_expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail("expected operand");
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    double value = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) throw ParseError("malformed number", start);
    return Expr::number(value);
  }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);

    if (auto fk = function_kind(name)) {
      if (!accept('(')) throw ParseError("function '" + std::string(name) + "' expects 1 argument", pos_);
      Expr arg = parse_expr();
      if (accept(',')) throw ParseError("arity mismatch: function '" + std::string(name) + "' takes 1 argument", pos_ - 1);
      if (!accept(')')) fail("expected ')'");
      return Expr::unary(*fk, arg);
    }

    std::optional<Expr> atom;
    if (name.size() >= 2 && name[0] == 'x' && name[1] != '0' &&
        std::all_of(name.begin() + 1, name.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
      std::size_t idx = 0;
      std::from_chars(name.data() + 1, name.data() + name.size(), idx);
      atom = Expr::variable(idx - 1);
    } else if (auto it = constants_.find(name); it != constants_.end()) {
      atom = Expr::number(it->second, std::string(name));
    }
    if (!atom) throw ParseError("unknown identifier '" + std::string(name) + "'", start);

    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      throw ParseError("arity mismatch: '" + std::string(name) + "' is not a function", pos_);
    }
    return *atom;
  }

  std::string_view text_;
  const ConstantTable& constants_;
  std::size_t pos_ = 0;
};

}  // namespace

// ---- construction -----------------------------------------------------------

Expr::Expr() {
  static const Expr zero = Expr::number(0.0);
  node_ = zero.node_;
}

Expr Expr::number(double value, std::string label) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Number;
  n->value = value;
  n->label = std::move(label);
  return Expr(std::move(n));
}

Expr Expr::variable(std::size_t index) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->index = index;
  n->dimension = index + 1;
  return Expr(std::move(n));
}

Expr Expr::unary(Kind kind, Expr operand) {
  if (!is_unary(kind)) throw Error("Expr::unary called with a binary kind");
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->dimension = operand.dimension();
  n->size = 1 + operand.size();
  n->operands[0] = std::move(operand);
  return Expr(std::move(n));
}

Expr Expr::binary(Kind kind, Expr lhs, Expr rhs) {
  if (is_unary(kind) || kind == Kind::Number || kind == Kind::Variable) {
    throw Error("Expr::binary called with a non-binary kind");
  }
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->dimension = std::max(lhs.dimension(), rhs.dimension());
  n->size = 1 + lhs.size() + rhs.size();
  n->operands[0] = std::move(lhs);
  n->operands[1] = std::move(rhs);
  return Expr(std::move(n));
}

std::string Expr::str() const {
  std::string out;
  render(*this, out);
  return out;
}

Expr parse(std::string_view text, const ConstantTable& constants) {
  return Parser(text, constants).parse_all();
}

double eval(const Expr& e, std::span<const double> x) { return e.eval<double>(x); }

// ---- folding builders -------------------------------------------------------

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_number(0.0)) return b;
  if (b.is_number(0.0)) return a;
  if (a.is_number() && b.is_number()) return Expr::number(a.value() + b.value());
  return Expr::binary(Expr::Kind::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_number(0.0)) return a;
  if (a.is_number(0.0)) return -b;
  if (a.is_number() && b.is_number()) return Expr::number(a.value() - b.value());
  return Expr::binary(Expr::Kind::Subtract, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_number(0.0) || b.is_number(0.0)) return Expr::number(0.0);
  if (a.is_number(1.0)) return b;
  if (b.is_number(1.0)) return a;
  if (a.is_number() && b.is_number()) return Expr::number(a.value() * b.value());
  return Expr::binary(Expr::Kind::Multiply, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_number(1.0)) return a;
  if (a.is_number(0.0) && !b.is_number(0.0)) return Expr::number(0.0);
  return Expr::binary(Expr::Kind::Divide, a, b);
}

Expr operator-(const Expr& a) {
  if (a.is_number()) return Expr::number(-a.value());
  if (a.kind() == Expr::Kind::Negate) return a.operand(0);
  return Expr::unary(Expr::Kind::Negate, a);
}

namespace {

Expr power(const Expr& base, const Expr& exponent) {
  if (exponent.is_number(1.0)) return base;
  if (exponent.is_number(0.0)) return Expr::number(1.0);
  return Expr::binary(Expr::Kind::Power, base, exponent);
}

}  // namespace

Expr diff(const Expr& e, std::size_t var) {
  using K = Expr::Kind;
  if (e.dimension() <= var) {
    // Fast path: the subtree does not mention x_var at all.
    return Expr::number(0.0);
  }
  switch (e.kind()) {
    case K::Number:
      return Expr::number(0.0);
    case K::Variable:
      return Expr::number(e.index() == var ? 1.0 : 0.0);
    case K::Negate:
      return -diff(e.operand(0), var);
    case K::Add:
      return diff(e.operand(0), var) + diff(e.operand(1), var);
    case K::Subtract:
      return diff(e.operand(0), var) - diff(e.operand(1), var);
    case K::Multiply: {
      const Expr& u = e.operand(0);
      const Expr& v = e.operand(1);
      return diff(u, var) * v + u * diff(v, var);
    }
    case K::Divide: {
      const Expr& u = e.operand(0);
      const Expr& v = e.operand(1);
      const Expr du = diff(u, var);
      const Expr dv = diff(v, var);
      if (dv.is_number(0.0)) return du / v;
      return (du * v - u * dv) / (v * v);
    }
    case K::Power: {
      const Expr& u = e.operand(0);
      const Expr& w = e.operand(1);
      const Expr du = diff(u, var);
      if (w.is_number()) {
        const double c = w.value();
        return Expr::number(c) * power(u, Expr::number(c - 1.0)) * du;
      }
      const Expr dw = diff(w, var);
      return e * (dw * Expr::unary(K::Log, u) + w * du / u);
    }
    case K::Exp:
      return e * diff(e.operand(0), var);
    case K::Log:
      return diff(e.operand(0), var) / e.operand(0);
    case K::Sin:
      return Expr::unary(K::Cos, e.operand(0)) * diff(e.operand(0), var);
    case K::Cos:
      return -(Expr::unary(K::Sin, e.operand(0)) * diff(e.operand(0), var));
    case K::Sqrt:
      return diff(e.operand(0), var) / (Expr::number(2.0) * e);
  }
  throw Error("corrupt expression node");
}

}  // namespace finsler
