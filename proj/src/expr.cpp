#include "dspc/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <unordered_set>

#include "dspc/errors.hpp"

namespace dspc {

using Kind = Expr::Kind;
using NodePtr = Expr::NodePtr;

bool is_unary(Kind kind) noexcept {
  switch (kind) {
    case Kind::neg:
    case Kind::exp:
    case Kind::log:
    case Kind::sin:
    case Kind::cos:
    case Kind::sqrt:
      return true;
    default:
      return false;
  }
}

bool is_binary(Kind kind) noexcept {
  switch (kind) {
    case Kind::add:
    case Kind::sub:
    case Kind::mul:
    case Kind::div:
    case Kind::pow:
      return true;
    default:
      return false;
  }
}

NodePtr make_constant(double value) {
  if (!std::isfinite(value)) throw InvalidArgument("expression constant must be finite");
  return std::make_shared<const Expr::Node>(Expr::Node{Kind::constant, value, 0, nullptr, nullptr});
}

NodePtr make_variable(std::size_t slot) {
  return std::make_shared<const Expr::Node>(Expr::Node{Kind::variable, 0.0, slot, nullptr, nullptr});
}

NodePtr make_unary(Kind kind, NodePtr operand) {
  if (!is_unary(kind) || !operand) throw InvalidArgument("malformed unary node");
  return std::make_shared<const Expr::Node>(Expr::Node{kind, 0.0, 0, std::move(operand), nullptr});
}

NodePtr make_binary(Kind kind, NodePtr lhs, NodePtr rhs) {
  if (!is_binary(kind) || !lhs || !rhs) throw InvalidArgument("malformed binary node");
  return std::make_shared<const Expr::Node>(Expr::Node{kind, 0.0, 0, std::move(lhs), std::move(rhs)});
}

namespace {

void check_slots(const Expr::Node& node, std::size_t n_vars) {
  if (node.kind == Kind::variable && node.slot >= n_vars) {
    throw InvalidArgument("variable slot " + std::to_string(node.slot) + " out of range");
  }
  if (node.lhs) check_slots(*node.lhs, n_vars);
  if (node.rhs) check_slots(*node.rhs, n_vars);
}

bool same_tree(const Expr::Node& a, const Expr::Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Kind::constant:
      return a.value == b.value;
    case Kind::variable:
      return a.slot == b.slot;
    default:
      break;
  }
  if (!same_tree(*a.lhs, *b.lhs)) return false;
  return !is_binary(a.kind) || same_tree(*a.rhs, *b.rhs);
}

}  // namespace

Expr::Expr(NodePtr root, std::vector<std::string> variables)
    : root_(std::move(root)), variables_(std::move(variables)) {
  if (!root_) throw InvalidArgument("expression has no root");
  std::unordered_set<std::string> seen;
  for (const auto& name : variables_) {
    if (!seen.insert(name).second) throw InvalidArgument("duplicate variable '" + name + "'");
  }
  check_slots(*root_, variables_.size());
}

std::size_t Expr::slot_of(std::string_view name) const {
  auto it = std::find(variables_.begin(), variables_.end(), name);
  if (it == variables_.end()) throw UnknownIdentifier(std::string(name));
  return static_cast<std::size_t>(it - variables_.begin());
}

bool operator==(const Expr& a, const Expr& b) {
  return a.variables_ == b.variables_ && same_tree(*a.root_, *b.root_);
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& variables)
      : text_(text), variables_(variables) {}

  NodePtr parse() {
    skip_space();
    if (pos_ == text_.size()) throw SyntaxError("empty expression", pos_);
    NodePtr node = parse_sum();
    skip_space();
    if (pos_ != text_.size()) {
      throw SyntaxError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    }
    return node;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ == text_.size()) {
        throw SyntaxError(std::string("expected '") + c + "' but reached end of input", pos_);
      }
      throw SyntaxError(std::string("expected '") + c + "'", pos_);
    }
  }

  NodePtr parse_sum() {
    NodePtr lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(Kind::add, lhs, parse_product());
      } else if (accept('-')) {
        lhs = make_binary(Kind::sub, lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_product() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(Kind::mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = make_binary(Kind::div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  // Unary minus binds looser than ^, so -a^2 is -(a^2).
  NodePtr parse_unary() {
    if (accept('-')) return make_unary(Kind::neg, parse_unary());
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (accept('^')) return make_binary(Kind::pow, base, parse_unary());
    return base;
  }

  NodePtr parse_primary() {
    skip_space();
    if (pos_ == text_.size()) throw SyntaxError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_sum();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw SyntaxError(std::string("unexpected '") + c + "'", pos_);
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw SyntaxError("malformed number", start);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) throw SyntaxError("malformed exponent", start);
    }
    double value = 0.0;
    auto [end, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || end != text_.data() + pos_ || !std::isfinite(value)) {
      throw SyntaxError("number out of range", start);
    }
    return make_constant(value);
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string name(text_.substr(start, pos_ - start));
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      static const std::pair<const char*, Kind> functions[] = {
          {"exp", Kind::exp}, {"log", Kind::log}, {"sin", Kind::sin},
          {"cos", Kind::cos}, {"sqrt", Kind::sqrt}};
      for (const auto& [fname, kind] : functions) {
        if (name == fname) {
          ++pos_;
          NodePtr arg = parse_sum();
          expect(')');
          return make_unary(kind, arg);
        }
      }
      throw UnknownIdentifier(name);
    }
    auto it = std::find(variables_.begin(), variables_.end(), name);
    if (it == variables_.end()) throw UnknownIdentifier(name);
    return make_variable(static_cast<std::size_t>(it - variables_.begin()));
  }

  std::string_view text_;
  const std::vector<std::string>& variables_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text, std::vector<std::string> variables) {
  NodePtr root = Parser(text, variables).parse();
  return Expr(std::move(root), std::move(variables));
}

// ---------------------------------------------------------------------------
// Printer

namespace {

const char* function_name(Kind kind) {
  switch (kind) {
    case Kind::exp: return "exp";
    case Kind::log: return "log";
    case Kind::sin: return "sin";
    case Kind::cos: return "cos";
    case Kind::sqrt: return "sqrt";
    default: return nullptr;
  }
}

char operator_symbol(Kind kind) {
  switch (kind) {
    case Kind::add: return '+';
    case Kind::sub: return '-';
    case Kind::mul: return '*';
    case Kind::div: return '/';
    default: return '^';
  }
}

void print(const Expr::Node& node, const std::vector<std::string>& names, std::string& out) {
  switch (node.kind) {
    case Kind::constant: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", node.value);
      out += buf;
      return;
    }
    case Kind::variable:
      out += names[node.slot];
      return;
    case Kind::neg:
      out += "(-";
      print(*node.lhs, names, out);
      out += ')';
      return;
    default:
      break;
  }
  if (const char* fn = function_name(node.kind)) {
    out += fn;
    out += '(';
    print(*node.lhs, names, out);
    out += ')';
    return;
  }
  out += '(';
  print(*node.lhs, names, out);
  out += ' ';
  out += operator_symbol(node.kind);
  out += ' ';
  print(*node.rhs, names, out);
  out += ')';
}

}  // namespace

std::string to_string(const Expr& expr) {
  std::string out;
  print(expr.root(), expr.variables(), out);
  return out;
}

// ---------------------------------------------------------------------------
// Point evaluation

namespace {

bool is_integral(double y) { return std::nearbyint(y) == y; }

double checked(double v, const char* op) {
  if (!std::isfinite(v)) throw DomainError(std::string(op) + " produced a non-finite value");
  return v;
}

double real_pow(double x, double y) {
  if (is_integral(y)) {
    if (x == 0.0 && y < 0.0) throw DomainError("0 raised to a negative power");
  } else if (x <= 0.0) {
    throw DomainError("real-exponent power of a non-positive base");
  }
  return checked(std::pow(x, y), "pow");
}

double eval_node(const Expr::Node& node, std::span<const double> values) {
  switch (node.kind) {
    case Kind::constant:
      return node.value;
    case Kind::variable:
      return values[node.slot];
    case Kind::neg:
      return -eval_node(*node.lhs, values);
    case Kind::exp:
      return checked(std::exp(eval_node(*node.lhs, values)), "exp");
    case Kind::log: {
      const double x = eval_node(*node.lhs, values);
      if (x <= 0.0) throw DomainError("log of a non-positive value");
      return std::log(x);
    }
    case Kind::sin:
      return std::sin(eval_node(*node.lhs, values));
    case Kind::cos:
      return std::cos(eval_node(*node.lhs, values));
    case Kind::sqrt: {
      const double x = eval_node(*node.lhs, values);
      if (x < 0.0) throw DomainError("sqrt of a negative value");
      return std::sqrt(x);
    }
    case Kind::add:
      return checked(eval_node(*node.lhs, values) + eval_node(*node.rhs, values), "+");
    case Kind::sub:
      return checked(eval_node(*node.lhs, values) - eval_node(*node.rhs, values), "-");
    case Kind::mul:
      return checked(eval_node(*node.lhs, values) * eval_node(*node.rhs, values), "*");
    case Kind::div: {
      const double num = eval_node(*node.lhs, values);
      const double den = eval_node(*node.rhs, values);
      if (den == 0.0) throw DomainError("division by zero");
      return checked(num / den, "/");
    }
    case Kind::pow:
      return real_pow(eval_node(*node.lhs, values), eval_node(*node.rhs, values));
  }
  throw InvalidArgument("unknown expression node");
}

}  // namespace

double eval_point(const Expr& expr, std::span<const double> values) {
  if (values.size() != expr.variables().size()) {
    throw InvalidArgument("expected " + std::to_string(expr.variables().size()) +
                          " variable values, got " + std::to_string(values.size()));
  }
  return eval_node(expr.root(), values);
}

double eval_point(const Expr& expr, const std::map<std::string, double>& assignment) {
  std::vector<double> values;
  values.reserve(expr.variables().size());
  for (const auto& name : expr.variables()) {
    auto it = assignment.find(name);
    if (it == assignment.end()) throw InvalidArgument("no value for variable '" + name + "'");
    values.push_back(it->second);
  }
  return eval_node(expr.root(), values);
}

// ---------------------------------------------------------------------------
// Interval evaluation

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double next_down(double x) { return std::nextafter(x, -kInf); }
double next_up(double x) { return std::nextafter(x, kInf); }

// Round-to-nearest result plus the sign of its error, from error-free
// transformations. `err` is the exact value minus the returned value.
struct Rounded {
  double value;
  double err;
  double down() const { return err < 0.0 ? next_down(value) : value; }
  double up() const { return err > 0.0 ? next_up(value) : value; }
};

Rounded add_r(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

Rounded mul_r(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

Rounded div_r(double a, double b) {
  const double q = a / b;
  const double r = std::fma(-q, b, a);  // a - q*b, exact
  return {q, (b > 0.0) ? r : -r};
}

// Libm results are not exact; widen one ulp on each side.
Interval widen(double lo, double hi) { return {next_down(lo), next_up(hi)}; }

Interval finite_or_throw(double lo, double hi, const char* op) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw DomainError(std::string(op) + " overflowed");
  }
  return {lo, hi};
}

Interval i_add(const Interval& x, const Interval& y) {
  return finite_or_throw(add_r(x.lo(), y.lo()).down(), add_r(x.hi(), y.hi()).up(), "+");
}

Interval i_sub(const Interval& x, const Interval& y) {
  return finite_or_throw(add_r(x.lo(), -y.hi()).down(), add_r(x.hi(), -y.lo()).up(), "-");
}

Interval i_mul(const Interval& x, const Interval& y) {
  const Rounded p[] = {mul_r(x.lo(), y.lo()), mul_r(x.lo(), y.hi()), mul_r(x.hi(), y.lo()),
                       mul_r(x.hi(), y.hi())};
  double lo = kInf, hi = -kInf;
  for (const auto& r : p) {
    lo = std::min(lo, r.down());
    hi = std::max(hi, r.up());
  }
  return finite_or_throw(lo, hi, "*");
}

Interval i_div(const Interval& x, const Interval& y) {
  if (y.contains(0.0)) throw DomainError("division by an interval containing zero");
  const Rounded q[] = {div_r(x.lo(), y.lo()), div_r(x.lo(), y.hi()), div_r(x.hi(), y.lo()),
                       div_r(x.hi(), y.hi())};
  double lo = kInf, hi = -kInf;
  for (const auto& r : q) {
    lo = std::min(lo, r.down());
    hi = std::max(hi, r.up());
  }
  return finite_or_throw(lo, hi, "/");
}

Interval i_exp(const Interval& x) {
  const Interval r = widen(std::exp(x.lo()), std::exp(x.hi()));
  return finite_or_throw(std::max(0.0, r.lo()), r.hi(), "exp");
}

Interval i_log(const Interval& x) {
  if (x.lo() <= 0.0) throw DomainError("log of an interval reaching non-positive values");
  return widen(std::log(x.lo()), std::log(x.hi()));
}

Interval i_sqrt(const Interval& x) {
  if (x.lo() < 0.0) throw DomainError("sqrt of an interval reaching negative values");
  const Interval r = widen(std::sqrt(x.lo()), std::sqrt(x.hi()));
  return {std::max(0.0, r.lo()), r.hi()};
}

// True if some point c + 2*pi*k lies in x.
bool hits_periodic(const Interval& x, double c) {
  constexpr double period = 2.0 * std::numbers::pi;
  const double k = std::ceil((x.lo() - c) / period);
  return c + k * period <= x.hi();
}

Interval trig(const Interval& x, double (*fn)(double), double peak, double trough) {
  if (x.width() >= 2.0 * std::numbers::pi) return {-1.0, 1.0};
  const double a = fn(x.lo());
  const double b = fn(x.hi());
  Interval r = widen(std::min(a, b), std::max(a, b));
  double lo = std::max(-1.0, r.lo());
  double hi = std::min(1.0, r.hi());
  if (hits_periodic(x, peak)) hi = 1.0;
  if (hits_periodic(x, trough)) lo = -1.0;
  return {lo, hi};
}

Interval i_sin(const Interval& x) {
  return trig(x, [](double v) { return std::sin(v); }, std::numbers::pi / 2, -std::numbers::pi / 2);
}

Interval i_cos(const Interval& x) {
  return trig(x, [](double v) { return std::cos(v); }, 0.0, std::numbers::pi);
}

Interval i_int_pow(const Interval& x, long long n) {
  if (n == 0) return {1.0, 1.0};
  if (n < 0) {
    if (x.contains(0.0)) throw DomainError("negative power of an interval containing zero");
    return i_div(Interval(1.0, 1.0), i_int_pow(x, -n));
  }
  const double n_d = static_cast<double>(n);
  const double a = std::pow(x.lo(), n_d);
  const double b = std::pow(x.hi(), n_d);
  if (n == 1) return x;
  if (n % 2 == 1) return finite_or_throw(next_down(a), next_up(b), "pow");
  if (x.contains(0.0)) return finite_or_throw(0.0, next_up(std::max(a, b)), "pow");
  const Interval r = widen(std::min(a, b), std::max(a, b));
  return finite_or_throw(std::max(0.0, r.lo()), r.hi(), "pow");
}

Interval eval_inode(const Expr::Node& node, std::span<const Interval> values) {
  switch (node.kind) {
    case Kind::constant:
      return Interval::point(node.value);
    case Kind::variable:
      return values[node.slot];
    case Kind::neg: {
      const Interval x = eval_inode(*node.lhs, values);
      return {-x.hi(), -x.lo()};
    }
    case Kind::exp:
      return i_exp(eval_inode(*node.lhs, values));
    case Kind::log:
      return i_log(eval_inode(*node.lhs, values));
    case Kind::sin:
      return i_sin(eval_inode(*node.lhs, values));
    case Kind::cos:
      return i_cos(eval_inode(*node.lhs, values));
    case Kind::sqrt:
      return i_sqrt(eval_inode(*node.lhs, values));
    case Kind::add:
      return i_add(eval_inode(*node.lhs, values), eval_inode(*node.rhs, values));
    case Kind::sub:
      return i_sub(eval_inode(*node.lhs, values), eval_inode(*node.rhs, values));
    case Kind::mul:
      return i_mul(eval_inode(*node.lhs, values), eval_inode(*node.rhs, values));
    case Kind::div:
      return i_div(eval_inode(*node.lhs, values), eval_inode(*node.rhs, values));
    case Kind::pow: {
      const Interval base = eval_inode(*node.lhs, values);
      const Expr::Node& exponent = *node.rhs;
      if (exponent.kind == Kind::constant && is_integral(exponent.value) &&
          std::fabs(exponent.value) < 9.0e15) {
        return i_int_pow(base, static_cast<long long>(exponent.value));
      }
      if (base.lo() <= 0.0) {
        throw DomainError("real-exponent power of an interval reaching non-positive values");
      }
      return i_exp(i_mul(eval_inode(exponent, values), i_log(base)));
    }
  }
  throw InvalidArgument("unknown expression node");
}

}  // namespace

Interval eval_interval(const Expr& expr, std::span<const Interval> values) {
  if (values.size() != expr.variables().size()) {
    throw InvalidArgument("expected " + std::to_string(expr.variables().size()) +
                          " variable intervals, got " + std::to_string(values.size()));
  }
  return eval_inode(expr.root(), values);
}

Interval eval_interval(const Expr& expr, const std::map<std::string, Interval>& assignment) {
  std::vector<Interval> values;
  values.reserve(expr.variables().size());
  for (const auto& name : expr.variables()) {
    auto it = assignment.find(name);
    if (it == assignment.end()) throw InvalidArgument("no interval for variable '" + name + "'");
    values.push_back(it->second);
  }
  return eval_inode(expr.root(), values);
}

// ---------------------------------------------------------------------------

namespace {

NodePtr substitute(const NodePtr& node, std::size_t slot, double value) {
  switch (node->kind) {
    case Kind::constant:
      return node;
    case Kind::variable:
      if (node->slot == slot) return make_constant(value);
      if (node->slot > slot) return make_variable(node->slot - 1);
      return node;
    default:
      break;
  }
  if (is_unary(node->kind)) return make_unary(node->kind, substitute(node->lhs, slot, value));
  return make_binary(node->kind, substitute(node->lhs, slot, value),
                     substitute(node->rhs, slot, value));
}

}  // namespace

Expr bind_variable(const Expr& expr, std::string_view name, double value) {
  const std::size_t slot = expr.slot_of(name);
  std::vector<std::string> rest = expr.variables();
  rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(slot));
  return Expr(substitute(expr.root_ptr(), slot, value), std::move(rest));
}

}  // namespace dspc
