#pragma once

// Small arithmetic expression language used for right-hand sides f(t,x),
// forcing terms and coefficient sequences.
//
//   expr    := sum
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | name | name '(' expr (',' expr)* ')' | '(' expr ')'
//
// Names: `t` and `x` are the variables (`n` is accepted as a spelling of `t`
// for sequences), `pi` and `e` are constants, anything else is a parameter.

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace remrec::expr {

enum class Op : std::uint8_t {
  Constant,
  VarT,
  VarX,
  Param,
  Neg,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Sin,
  Cos,
  Abs,
  Ln,
  Exp,
  Sqrt,
  Floor,
  Min,
  Max,
};

enum class ErrorKind { Syntax, UnknownFunction, Arity, UnboundName, Domain };

const char* to_string(ErrorKind kind);

/// Parse or evaluation failure. Offsets are 0-based byte positions into the
/// source text; `end` is one past the offending span.
class ExprError : public std::runtime_error {
 public:
  ExprError(ErrorKind kind, std::size_t offset, std::size_t end, std::string message,
            std::vector<std::string> expected = {});

  ErrorKind kind() const noexcept { return kind_; }
  std::size_t offset() const noexcept { return offset_; }
  std::size_t end() const noexcept { return end_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  ErrorKind kind_;
  std::size_t offset_;
  std::size_t end_;
  std::vector<std::string> expected_;
};

struct Node {
  Op op = Op::Constant;
  double value = 0.0;   // Constant
  std::string name;     // Param slot name, or "pi"/"e" for named constants
  std::int32_t slot = -1;
  std::int32_t lhs = -1;
  std::int32_t rhs = -1;
  std::size_t begin = 0;  // source span
  std::size_t end = 0;
};

using ParamMap = std::map<std::string, double, std::less<>>;

struct EvalContext {
  double t = 0.0;
  double x = 0.0;
  ParamMap params;
};

/// Immutable parsed expression. Nodes live in a flat vector; parameters are
/// numbered in order of first appearance so callers can bind them once and
/// evaluate through `evaluate(t, x, slots)`.
class Expression {
 public:
  Expression() = default;

  const std::string& source() const noexcept { return source_; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  std::int32_t root() const noexcept { return root_; }
  bool empty() const noexcept { return root_ < 0; }

  /// Distinct parameter names, indexed by slot.
  const std::vector<std::string>& parameters() const noexcept { return parameters_; }
  bool uses_x() const noexcept;
  bool uses_t() const noexcept;

  /// Fast path: `slots[i]` is the value of `parameters()[i]`.
  double evaluate(double t, double x, std::span<const double> slots) const;

  /// Resolve parameter slots against a name map; throws UnboundName.
  std::vector<double> bind(const ParamMap& params) const;

  friend bool structurally_equal(const Expression& a, const Expression& b);
  friend Expression parse(std::string_view source);

 private:
  double eval_node(std::int32_t index, double t, double x, std::span<const double> slots) const;

  std::string source_;
  std::vector<Node> nodes_;
  std::vector<std::string> parameters_;
  std::int32_t root_ = -1;
};

Expression parse(std::string_view source);

double eval(const Expression& expr, const EvalContext& ctx);

/// Fully parenthesized text that parses back to a structurally equal tree.
std::string print(const Expression& expr);

bool structurally_equal(const Expression& a, const Expression& b);

/// Shortest decimal text that round-trips to the same double.
std::string format_number(double value);

}  // namespace remrec::expr
