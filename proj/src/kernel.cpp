#include "nceig/kernel.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <utility>

#include "nceig/errors.hpp"

namespace nceig {

bool operator==(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  auto same_child = [](const ExprPtr& p, const ExprPtr& q) {
    if (!p || !q) return !p && !q;
    return *p == *q;
  };
  switch (a.kind) {
    case Expr::Kind::number:
      return a.value == b.value;
    case Expr::Kind::var_x:
    case Expr::Kind::var_u:
      return true;
    case Expr::Kind::func:
      return a.func == b.func && same_child(a.lhs, b.lhs);
    default:
      return same_child(a.lhs, b.lhs) && same_child(a.rhs, b.rhs);
  }
}

namespace {

struct FuncName {
  std::string_view name;
  Expr::Func func;
};

constexpr std::array<FuncName, 6> functions{{
    {"exp", Expr::Func::exp},
    {"sin", Expr::Func::sin},
    {"cos", Expr::Func::cos},
    {"sqrt", Expr::Func::sqrt},
    {"abs", Expr::Func::abs},
    {"log", Expr::Func::log},
}};

std::string_view func_name(Expr::Func f) {
  for (const auto& entry : functions) {
    if (entry.func == f) return entry.name;
  }
  return "?";
}

ExprPtr make_leaf(Expr::Kind kind, double value = 0.0) {
  auto e = std::make_unique<Expr>();
  e->kind = kind;
  e->value = value;
  return e;
}

ExprPtr make_node(Expr::Kind kind, ExprPtr lhs, ExprPtr rhs = nullptr) {
  auto e = std::make_unique<Expr>();
  e->kind = kind;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ExprPtr parse() {
    skip_space();
    if (pos_ == text_.size()) fail("expected an expression, got end of input");
    auto e = expression();
    skip_space();
    if (pos_ != text_.size()) fail("expected operator or end of input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(pos_, msg); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ == text_.size()) fail(std::string("expected '") + c + "', got end of input");
      fail(std::string("expected '") + c + "'");
    }
  }

  bool accept_power() {
    if (peek() == '^') {
      ++pos_;
      return true;
    }
    if (text_.substr(pos_, 2) == "**") {
      pos_ += 2;
      return true;
    }
    return false;
  }

  ExprPtr expression() {
    auto lhs = term();
    for (;;) {
      const char c = peek();
      if (c != '+' && c != '-') return lhs;
      ++pos_;
      lhs = make_node(c == '+' ? Expr::Kind::add : Expr::Kind::sub, std::move(lhs), term());
    }
  }

  ExprPtr term() {
    auto lhs = unary();
    for (;;) {
      const char c = peek();
      if (c == '*' && text_.substr(pos_, 2) == "**") return lhs;
      if (c != '*' && c != '/') return lhs;
      ++pos_;
      lhs = make_node(c == '*' ? Expr::Kind::mul : Expr::Kind::div, std::move(lhs), unary());
    }
  }

  ExprPtr unary() {
    if (accept('-')) return make_node(Expr::Kind::neg, unary());
    return power();
  }

  ExprPtr power() {
    auto base = primary();
    if (accept_power()) return make_node(Expr::Kind::pow, std::move(base), unary());
    return base;
  }

  ExprPtr primary() {
    const char c = peek();
    if (c == '\0') fail("expected a number, variable, function or '(', got end of input");
    if (c == '(') {
      ++pos_;
      auto e = expression();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail(std::string("expected a number, variable, function or '(', got '") + c + "'");
  }

  ExprPtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t count = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++count;
      }
      return count;
    };
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) {
      pos_ = start;
      fail("malformed number");
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      const std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) {
        pos_ = save;
        fail("malformed exponent in number");
      }
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_ || !std::isfinite(value)) {
      pos_ = start;
      fail("number literal out of range");
    }
    return make_leaf(Expr::Kind::number, value);
  }

  ExprPtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "x") return make_leaf(Expr::Kind::var_x);
    if (name == "u") return make_leaf(Expr::Kind::var_u);
    for (const auto& entry : functions) {
      if (entry.name == name) {
        expect('(');
        auto arg = expression();
        expect(')');
        auto e = make_node(Expr::Kind::func, std::move(arg));
        e->func = entry.func;
        return e;
      }
    }
    throw UnknownIdentifierError(start, std::string(name));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), ptr);
}

void print(const Expr& e, std::ostringstream& out, bool nested) {
  switch (e.kind) {
    case Expr::Kind::number:
      out << format_number(e.value);
      return;
    case Expr::Kind::var_x:
      out << 'x';
      return;
    case Expr::Kind::var_u:
      out << 'u';
      return;
    case Expr::Kind::neg:
      // Unary minus binds looser than '^', so a nested negation keeps parens.
      if (nested) out << '(';
      out << '-';
      print(*e.lhs, out, true);
      if (nested) out << ')';
      return;
    case Expr::Kind::func:
      out << func_name(e.func) << '(';
      print(*e.lhs, out, false);
      out << ')';
      return;
    default:
      break;
  }
  const char* op = " + ";
  switch (e.kind) {
    case Expr::Kind::sub: op = " - "; break;
    case Expr::Kind::mul: op = " * "; break;
    case Expr::Kind::div: op = " / "; break;
    case Expr::Kind::pow: op = " ^ "; break;
    default: break;
  }
  if (nested) out << '(';
  print(*e.lhs, out, true);
  out << op;
  print(*e.rhs, out, true);
  if (nested) out << ')';
}

}  // namespace

ExprPtr parse_kernel(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const Expr& e) {
  std::ostringstream out;
  print(e, out, false);
  return out.str();
}

double evaluate(const Expr& e, double x, double u) {
  switch (e.kind) {
    case Expr::Kind::number: return e.value;
    case Expr::Kind::var_x: return x;
    case Expr::Kind::var_u: return u;
    case Expr::Kind::add: return evaluate(*e.lhs, x, u) + evaluate(*e.rhs, x, u);
    case Expr::Kind::sub: return evaluate(*e.lhs, x, u) - evaluate(*e.rhs, x, u);
    case Expr::Kind::mul: return evaluate(*e.lhs, x, u) * evaluate(*e.rhs, x, u);
    case Expr::Kind::div: return evaluate(*e.lhs, x, u) / evaluate(*e.rhs, x, u);
    case Expr::Kind::pow: return std::pow(evaluate(*e.lhs, x, u), evaluate(*e.rhs, x, u));
    case Expr::Kind::neg: return -evaluate(*e.lhs, x, u);
    case Expr::Kind::func: {
      const double a = evaluate(*e.lhs, x, u);
      switch (e.func) {
        case Expr::Func::exp: return std::exp(a);
        case Expr::Func::sin: return std::sin(a);
        case Expr::Func::cos: return std::cos(a);
        case Expr::Func::sqrt: return std::sqrt(a);
        case Expr::Func::abs: return std::abs(a);
        case Expr::Func::log: return std::log(a);
      }
    }
  }
  return std::nan("");
}

Kernel Kernel::gaussian() { return Kernel(Builtin::gaussian, "gaussian"); }
Kernel Kernel::cauchy() { return Kernel(Builtin::cauchy, "cauchy"); }

Kernel Kernel::from_expression(std::string_view text) {
  std::shared_ptr<const Expr> e = parse_kernel(text);
  return Kernel(std::move(e), std::string(text));
}

Kernel Kernel::from_spec(std::string_view text) {
  if (text == "gaussian") return gaussian();
  if (text == "cauchy") return cauchy();
  return from_expression(text);
}

double Kernel::raw(double x, double u) const {
  if (expr_) return evaluate(*expr_, x, u);
  const double d = u - x;
  switch (builtin_) {
    case Builtin::gaussian: return std::exp(-(d * d));
    case Builtin::cauchy: return 1.0 / (1.0 + d * d);
  }
  return std::nan("");
}

double eval_kernel(const Kernel& k, double x, double u) {
  const double v = k.raw(x, u);
  if (!std::isfinite(v)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "kernel '" << k.source() << "' is not finite at (x, u) = (" << x << ", " << u
        << "): " << v;
    throw NonFiniteKernelError(x, u, msg.str());
  }
  return v;
}

}  // namespace nceig
