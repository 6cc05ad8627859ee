#include "remrec/expr.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

namespace remrec::expr {

namespace {

constexpr int kMaxDepth = 200;

struct FunctionInfo {
  std::string_view name;
  Op op;
  int arity;
};

constexpr FunctionInfo kFunctions[] = {
    {"sin", Op::Sin, 1},   {"cos", Op::Cos, 1},     {"abs", Op::Abs, 1},
    {"ln", Op::Ln, 1},     {"exp", Op::Exp, 1},     {"sqrt", Op::Sqrt, 1},
    {"floor", Op::Floor, 1}, {"min", Op::Min, 2},   {"max", Op::Max, 2},
};

const FunctionInfo* find_function(std::string_view name) {
  for (const auto& f : kFunctions)
    if (f.name == name) return &f;
  return nullptr;
}

const FunctionInfo* function_for(Op op) {
  for (const auto& f : kFunctions)
    if (f.op == op) return &f;
  return nullptr;
}

enum class Tok { Number, Name, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  Tok kind;
  std::size_t begin;
  std::size_t end;
  double number = 0.0;
};

bool is_name_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    const char c = src[i];
    if (is_space(c)) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    auto single = [&](Tok k) {
      out.push_back({k, start, start + 1});
      ++i;
    };
    switch (c) {
      case '+': single(Tok::Plus); continue;
      case '-': single(Tok::Minus); continue;
      case '*': single(Tok::Star); continue;
      case '/': single(Tok::Slash); continue;
      case '^': single(Tok::Caret); continue;
      case '(': single(Tok::LParen); continue;
      case ')': single(Tok::RParen); continue;
      case ',': single(Tok::Comma); continue;
      default: break;
    }
    if (is_digit(c) || (c == '.' && i + 1 < src.size() && is_digit(src[i + 1]))) {
      while (i < src.size() && is_digit(src[i])) ++i;
      if (i < src.size() && src[i] == '.') {
        ++i;
        while (i < src.size() && is_digit(src[i])) ++i;
      }
      // exponent only when followed by digits, so "2e" stays number + name
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
        if (j < src.size() && is_digit(src[j])) {
          while (j < src.size() && is_digit(src[j])) ++j;
          i = j;
        }
      }
      double value = 0.0;
      const auto res = std::from_chars(src.data() + start, src.data() + i, value);
      if (res.ec != std::errc{} || res.ptr != src.data() + i || !std::isfinite(value))
        throw ExprError(ErrorKind::Syntax, start, i, "number out of range");
      out.push_back({Tok::Number, start, i, value});
      continue;
    }
    if (is_name_start(c)) {
      while (i < src.size() && (is_name_start(src[i]) || is_digit(src[i]))) ++i;
      out.push_back({Tok::Name, start, i});
      continue;
    }
    throw ExprError(ErrorKind::Syntax, start, start + 1, "unexpected character",
                    {"number", "name", "operator", "(", ")"});
  }
  out.push_back({Tok::End, src.size(), src.size()});
  return out;
}

}  // namespace

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "syntax error";
    case ErrorKind::UnknownFunction: return "unknown function";
    case ErrorKind::Arity: return "arity mismatch";
    case ErrorKind::UnboundName: return "unbound name";
    case ErrorKind::Domain: return "domain error";
  }
  return "error";
}

namespace {
std::string decorate(ErrorKind kind, std::size_t offset, const std::string& message,
                     const std::vector<std::string>& expected) {
  std::ostringstream os;
  os << to_string(kind) << " at offset " << offset << ": " << message;
  if (!expected.empty()) {
    os << " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) os << (i ? ", " : "") << expected[i];
    os << ")";
  }
  return os.str();
}
}  // namespace

ExprError::ExprError(ErrorKind kind, std::size_t offset, std::size_t end, std::string message,
                     std::vector<std::string> expected)
    : std::runtime_error(decorate(kind, offset, message, expected)),
      kind_(kind),
      offset_(offset),
      end_(end),
      expected_(std::move(expected)) {}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  Parser(std::string_view src, std::vector<Node>& nodes, std::vector<std::string>& params)
      : src_(src), toks_(tokenize(src)), nodes_(nodes), params_(params) {}

  std::int32_t parse_all() {
    const auto root = sum();
    if (peek().kind != Tok::End) {
      const auto& t = peek();
      throw ExprError(ErrorKind::Syntax, t.begin, t.end, "unexpected token",
                      {"+", "-", "*", "/", "^", "end of input"});
    }
    return root;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }

  std::int32_t push(Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<std::int32_t>(nodes_.size() - 1);
  }

  std::int32_t binary(Op op, std::int32_t l, std::int32_t r) {
    Node n;
    n.op = op;
    n.lhs = l;
    n.rhs = r;
    n.begin = nodes_[l].begin;
    n.end = nodes_[r].end;
    return push(std::move(n));
  }

  struct DepthGuard {
    int& depth;
    DepthGuard(int& d, std::size_t offset) : depth(d) {
      if (++depth > kMaxDepth)
        throw ExprError(ErrorKind::Syntax, offset, offset + 1, "expression nested too deeply");
    }
    ~DepthGuard() { --depth; }
  };

  std::int32_t sum() {
    auto lhs = product();
    for (;;) {
      const Tok k = peek().kind;
      if (k != Tok::Plus && k != Tok::Minus) return lhs;
      take();
      const auto rhs = product();
      lhs = binary(k == Tok::Plus ? Op::Add : Op::Sub, lhs, rhs);
    }
  }

  std::int32_t product() {
    auto lhs = unary();
    for (;;) {
      const Tok k = peek().kind;
      if (k != Tok::Star && k != Tok::Slash) return lhs;
      take();
      const auto rhs = unary();
      lhs = binary(k == Tok::Star ? Op::Mul : Op::Div, lhs, rhs);
    }
  }

  std::int32_t unary() {
    DepthGuard guard(depth_, peek().begin);
    if (peek().kind == Tok::Minus) {
      const auto start = take().begin;
      const auto operand = unary();
      Node n;
      n.op = Op::Neg;
      n.lhs = operand;
      n.begin = start;
      n.end = nodes_[operand].end;
      return push(std::move(n));
    }
    return power();
  }

  std::int32_t power() {
    const auto base = primary();
    if (peek().kind != Tok::Caret) return base;
    take();
    const auto exponent = unary();
    return binary(Op::Pow, base, exponent);
  }

  void expect(Tok kind, const char* what, std::vector<std::string> expected) {
    if (peek().kind != kind) {
      const auto& t = peek();
      throw ExprError(ErrorKind::Syntax, t.begin, t.end, std::string("expected ") + what,
                      std::move(expected));
    }
    take();
  }

  std::int32_t primary() {
    DepthGuard guard(depth_, peek().begin);
    const Token tok = peek();
    switch (tok.kind) {
      case Tok::Number: {
        take();
        Node n;
        n.op = Op::Constant;
        n.value = tok.number;
        n.begin = tok.begin;
        n.end = tok.end;
        return push(std::move(n));
      }
      case Tok::LParen: {
        take();
        const auto inner = sum();
        expect(Tok::RParen, "')'", {")", "+", "-", "*", "/", "^"});
        return inner;
      }
      case Tok::Name: return name(tok);
      default:
        throw ExprError(ErrorKind::Syntax, tok.begin, tok.end, "expected an operand",
                        {"number", "name", "(", "-"});
    }
  }

  std::int32_t name(const Token& tok) {
    take();
    const std::string_view id = src_.substr(tok.begin, tok.end - tok.begin);
    if (peek().kind == Tok::LParen) {
      const FunctionInfo* fn = find_function(id);
      if (!fn)
        throw ExprError(ErrorKind::UnknownFunction, tok.begin, tok.end,
                        "unknown function '" + std::string(id) + "'");
      take();
      std::vector<std::int32_t> args;
      if (peek().kind != Tok::RParen) {
        args.push_back(sum());
        while (peek().kind == Tok::Comma) {
          take();
          args.push_back(sum());
        }
      }
      const std::size_t close = peek().end;
      expect(Tok::RParen, "')'", {")", ","});
      if (static_cast<int>(args.size()) != fn->arity)
        throw ExprError(ErrorKind::Arity, tok.begin, close,
                        std::string(id) + " takes " + std::to_string(fn->arity) +
                            " argument(s), got " + std::to_string(args.size()));
      Node n;
      n.op = fn->op;
      n.lhs = args[0];
      if (fn->arity == 2) n.rhs = args[1];
      n.begin = tok.begin;
      n.end = close;
      return push(std::move(n));
    }
    if (find_function(id))
      throw ExprError(ErrorKind::Syntax, tok.begin, tok.end,
                      "function '" + std::string(id) + "' needs an argument list", {"("});
    Node n;
    n.begin = tok.begin;
    n.end = tok.end;
    if (id == "t" || id == "n") {
      n.op = Op::VarT;
    } else if (id == "x") {
      n.op = Op::VarX;
    } else if (id == "pi") {
      n.op = Op::Constant;
      n.value = std::numbers::pi;
      n.name = "pi";
    } else if (id == "e") {
      n.op = Op::Constant;
      n.value = std::numbers::e;
      n.name = "e";
    } else {
      n.op = Op::Param;
      n.name = std::string(id);
      std::int32_t slot = -1;
      for (std::size_t i = 0; i < params_.size(); ++i)
        if (params_[i] == n.name) slot = static_cast<std::int32_t>(i);
      if (slot < 0) {
        params_.push_back(n.name);
        slot = static_cast<std::int32_t>(params_.size() - 1);
      }
      n.slot = slot;
    }
    return push(std::move(n));
  }

  std::string_view src_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  std::vector<Node>& nodes_;
  std::vector<std::string>& params_;
};

}  // namespace

Expression parse(std::string_view source) {
  Expression e;
  e.source_ = std::string(source);
  Parser p(e.source_, e.nodes_, e.parameters_);
  e.root_ = p.parse_all();
  return e;
}

// ---------------------------------------------------------------------------
// Evaluation

bool Expression::uses_x() const noexcept {
  for (const auto& n : nodes_)
    if (n.op == Op::VarX) return true;
  return false;
}

bool Expression::uses_t() const noexcept {
  for (const auto& n : nodes_)
    if (n.op == Op::VarT) return true;
  return false;
}

std::vector<double> Expression::bind(const ParamMap& params) const {
  std::vector<double> slots(parameters_.size());
  for (std::size_t i = 0; i < parameters_.size(); ++i) {
    auto it = params.find(parameters_[i]);
    if (it == params.end()) {
      std::size_t at = 0, end = 0;
      for (const auto& n : nodes_)
        if (n.op == Op::Param && n.name == parameters_[i]) {
          at = n.begin;
          end = n.end;
          break;
        }
      throw ExprError(ErrorKind::UnboundName, at, end,
                      "parameter '" + parameters_[i] + "' is not bound");
    }
    slots[i] = it->second;
  }
  return slots;
}

double Expression::evaluate(double t, double x, std::span<const double> slots) const {
  if (root_ < 0) throw ExprError(ErrorKind::Syntax, 0, 0, "empty expression");
  if (slots.size() < parameters_.size())
    throw ExprError(ErrorKind::UnboundName, 0, 0, "not all parameters are bound");
  return eval_node(root_, t, x, slots);
}

namespace {
[[noreturn]] void domain_error(const Node& n, const char* what) {
  throw ExprError(ErrorKind::Domain, n.begin, n.end, what);
}

bool is_integer(double v) { return std::isfinite(v) && std::floor(v) == v; }
}  // namespace

double Expression::eval_node(std::int32_t index, double t, double x,
                             std::span<const double> slots) const {
  const Node& n = nodes_[static_cast<std::size_t>(index)];
  double r = 0.0;
  switch (n.op) {
    case Op::Constant: return n.value;
    case Op::VarT: return t;
    case Op::VarX: return x;
    case Op::Param: return slots[static_cast<std::size_t>(n.slot)];
    case Op::Neg: return -eval_node(n.lhs, t, x, slots);
    case Op::Add: r = eval_node(n.lhs, t, x, slots) + eval_node(n.rhs, t, x, slots); break;
    case Op::Sub: r = eval_node(n.lhs, t, x, slots) - eval_node(n.rhs, t, x, slots); break;
    case Op::Mul: r = eval_node(n.lhs, t, x, slots) * eval_node(n.rhs, t, x, slots); break;
    case Op::Div: {
      const double a = eval_node(n.lhs, t, x, slots);
      const double b = eval_node(n.rhs, t, x, slots);
      if (b == 0.0) domain_error(n, "division by zero");
      r = a / b;
      break;
    }
    case Op::Pow: {
      const double a = eval_node(n.lhs, t, x, slots);
      const double b = eval_node(n.rhs, t, x, slots);
      if (a < 0.0 && !is_integer(b)) domain_error(n, "fractional power of a negative base");
      if (a == 0.0 && b < 0.0) domain_error(n, "zero raised to a negative power");
      r = std::pow(a, b);
      break;
    }
    case Op::Sin: r = std::sin(eval_node(n.lhs, t, x, slots)); break;
    case Op::Cos: r = std::cos(eval_node(n.lhs, t, x, slots)); break;
    case Op::Abs: return std::fabs(eval_node(n.lhs, t, x, slots));
    case Op::Ln: {
      const double a = eval_node(n.lhs, t, x, slots);
      if (!(a > 0.0)) domain_error(n, "logarithm of a non-positive number");
      r = std::log(a);
      break;
    }
    case Op::Exp: r = std::exp(eval_node(n.lhs, t, x, slots)); break;
    case Op::Sqrt: {
      const double a = eval_node(n.lhs, t, x, slots);
      if (a < 0.0) domain_error(n, "square root of a negative number");
      r = std::sqrt(a);
      break;
    }
    case Op::Floor: return std::floor(eval_node(n.lhs, t, x, slots));
    case Op::Min:
      r = std::fmin(eval_node(n.lhs, t, x, slots), eval_node(n.rhs, t, x, slots));
      break;
    case Op::Max:
      r = std::fmax(eval_node(n.lhs, t, x, slots), eval_node(n.rhs, t, x, slots));
      break;
  }
  if (!std::isfinite(r)) domain_error(n, "non-finite result");
  return r;
}

double eval(const Expression& expr, const EvalContext& ctx) {
  const auto slots = expr.bind(ctx.params);
  return expr.evaluate(ctx.t, ctx.x, slots);
}

// ---------------------------------------------------------------------------
// Printing and comparison

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

void print_node(const Expression& e, std::int32_t index, std::string& out) {
  const Node& n = e.nodes()[static_cast<std::size_t>(index)];
  auto bin = [&](const char* op) {
    out += '(';
    print_node(e, n.lhs, out);
    out += ' ';
    out += op;
    out += ' ';
    print_node(e, n.rhs, out);
    out += ')';
  };
  switch (n.op) {
    case Op::Constant:
      if (!n.name.empty()) {
        out += n.name;
      } else if (std::signbit(n.value)) {
        out += "(-" + format_number(-n.value) + ")";
      } else {
        out += format_number(n.value);
      }
      return;
    case Op::VarT: out += 't'; return;
    case Op::VarX: out += 'x'; return;
    case Op::Param: out += n.name; return;
    case Op::Neg:
      out += "(-";
      print_node(e, n.lhs, out);
      out += ')';
      return;
    case Op::Add: bin("+"); return;
    case Op::Sub: bin("-"); return;
    case Op::Mul: bin("*"); return;
    case Op::Div: bin("/"); return;
    case Op::Pow: bin("^"); return;
    default: break;
  }
  const FunctionInfo* fn = function_for(n.op);
  out += fn->name;
  out += '(';
  print_node(e, n.lhs, out);
  if (fn->arity == 2) {
    out += ", ";
    print_node(e, n.rhs, out);
  }
  out += ')';
}

bool equal_nodes(const Expression& a, std::int32_t ia, const Expression& b, std::int32_t ib) {
  if ((ia < 0) != (ib < 0)) return false;
  if (ia < 0) return true;
  const Node& x = a.nodes()[static_cast<std::size_t>(ia)];
  const Node& y = b.nodes()[static_cast<std::size_t>(ib)];
  if (x.op != y.op) return false;
  if (x.op == Op::Constant && x.value != y.value) return false;
  if (x.op == Op::Param && x.name != y.name) return false;
  return equal_nodes(a, x.lhs, b, y.lhs) && equal_nodes(a, x.rhs, b, y.rhs);
}

}  // namespace

std::string print(const Expression& expr) {
  std::string out;
  if (!expr.empty()) print_node(expr, expr.root(), out);
  return out;
}

bool structurally_equal(const Expression& a, const Expression& b) {
  return equal_nodes(a, a.root_, b, b.root_);
}

}  // namespace remrec::expr
