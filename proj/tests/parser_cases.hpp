#pragma once

// Golden parser cases: source text and a hand-written C++ evaluation of
// the same formula, with parameter a bound to kA. Shared by the unit tests
// and the acceptance binary.

#include <cmath>
#include <numbers>
#include <vector>

namespace cases {

inline constexpr double kA = 2.5;

struct Golden {
  const char* text;
  double (*value)(double t, double x, double a);
};

using std::abs;
using std::cos;
using std::exp;
using std::floor;
using std::fmax;
using std::fmin;
using std::log;
using std::pow;
using std::sin;
using std::sqrt;
inline constexpr double pi = std::numbers::pi;
inline constexpr double e = std::numbers::e;

#define G(text, body) Golden{text, [](double t, double x, double a) -> double { (void)t; (void)x; (void)a; return body; }}

inline const std::vector<Golden>& golden() {
  static const std::vector<Golden> g = {
      G("1", 1.0),
      G("0.5", 0.5),
      G("1e-3", 1e-3),
      G("2.5E2", 250.0),
      G("t", t),
      G("x", x),
      G("n", t),
      G("a", a),
      G("pi", pi),
      G("e", e),
      G("t+x", t + x),
      G("t-x", t - x),
      G("t*x", t * x),
      G("t/x", t / x),
      G("t^2", t * t),
      G("-t", -t),
      G("--t", t),
      G("-t^2", -(t * t)),
      G("(-t)^2", t * t),
      G("2^3^2", 512.0),
      G("2^-1", 0.5),
      G("1-2-3", -4.0),
      G("8/4/2", 1.0),
      G("1+2*3", 7.0),
      G("(1+2)*3", 9.0),
      G("2*t+3*x", 2 * t + 3 * x),
      G("t*x-x/t", t * x - x / t),
      G("sin(t)", sin(t)),
      G("cos(t)", cos(t)),
      G("abs(t-x)", abs(t - x)),
      G("ln(x)", log(x)),
      G("exp(t)", exp(t)),
      G("sqrt(x)", sqrt(x)),
      G("floor(t*3)", floor(t * 3)),
      G("min(t,x)", fmin(t, x)),
      G("max(t,x)", fmax(t, x)),
      G("-x+sin(t)", -x + sin(t)),
      G("-x + sin(t) + sin(sqrt(2)*t)", -x + sin(t) + sin(sqrt(2.0) * t)),
      G("-x+sin(ln(1+t))", -x + sin(log(1 + t))),
      G("sin(ln(1+abs(t)))", sin(log(1 + abs(t)))),
      G("sin(t+ln(1+abs(t)))", sin(t + log(1 + abs(t)))),
      G("2*t*cos((t^2+pi^3)^(1/3))/(3*(t^2+pi^3)^(2/3))",
        2 * t * cos(std::cbrt(t * t + pi * pi * pi)) / (3 * pow(t * t + pi * pi * pi, 2.0 / 3.0))),
      G("x+sin((t^2+pi^3)^(1/3))", x + sin(std::cbrt(t * t + pi * pi * pi))),
      G("a*10*x/(10+(a-1)*x)", a * 10 * x / (10 + (a - 1) * x)),
      G("a*x", a * x),
      G("a^2", a * a),
      G("x/a+a/x", x / a + a / x),
      G("10+sin(ln(1+n))", 10 + sin(log(1 + t))),
      G("x/10+sin(t)", x / 10 + sin(t)),
      G("(sin(t)-cos(t))/2+(x+1/2)*exp(-t)", (sin(t) - cos(t)) / 2 + (x + 0.5) * exp(-t)),
      G("2*abs(sin(t/2))", 2 * abs(sin(t / 2))),
      G("sin(t)^2+cos(t)^2", pow(sin(t), 2) + pow(cos(t), 2)),
      G("exp(ln(x))", x),
      G("ln(exp(t))", t),
      G("sqrt(t^2)", abs(t)),
      G("((((t))))", t),
      G("t - -x", t + x),
      G("t*-x", -t * x),
      G("t/-x", -t / x),
      G("-(t+x)", -(t + x)),
      G("1/(1+x^2)", 1 / (1 + x * x)),
      G("x^3-3*x^2+2*x-1", x * x * x - 3 * x * x + 2 * x - 1),
      G("(t+1)*(t-1)", (t + 1) * (t - 1)),
      G("t^0.5", sqrt(t)),
      G("x^(1/3)", std::cbrt(x)),
      G("pi*t", pi * t),
      G("e^t", exp(t)),
      G("max(sin(t),cos(t))", fmax(sin(t), cos(t))),
      G("min(max(t,0),1)", fmin(fmax(t, 0.0), 1.0)),
      G("floor(t)+floor(-t)", floor(t) + floor(-t)),
      G("abs(-3)", 3.0),
      G("sin(pi/2)", 1.0),
      G("cos(0)", 1.0),
      G("sin(a*t)*cos(x/a)", sin(a * t) * cos(x / a)),
      G("exp(-a*t)*x", exp(-a * t) * x),
      G("ln(1+a*x)", log(1 + a * x)),
      G("sqrt(a+t)", sqrt(a + t)),
      G("a*t^2/2", a * t * t / 2),
      G("(a-1)*x", (a - 1) * x),
      G("x*(1-x)", x * (1 - x)),
      G("a*x*(1-x/10)", a * x * (1 - x / 10)),
      G("t*exp(-t)", t * exp(-t)),
      G("sin(t)*sin(sqrt(2)*t)", sin(t) * sin(sqrt(2.0) * t)),
      G("2^t", pow(2.0, t)),
      G("t^x", pow(t, x)),
      G("x^a", pow(x, a)),
      G("1 + 2 + 3 + 4 + 5", 15.0),
      G("1*2*3*4*5", 120.0),
      G("100/10/10", 1.0),
      G("-2^2", -4.0),
      G("(-2)^2", 4.0),
      G("(-2)^3", -8.0),
      G("0.1+0.2", 0.1 + 0.2),
      G("1e3*t", 1e3 * t),
      G(" t \t+\n x ", t + x),
      G("sin( t )", sin(t)),
      G("max(t,1)", fmax(t, 1.0)),
      G("abs(sin(t)-sin(x))", abs(sin(t) - sin(x))),
      G("exp(sin(t))-1", exp(sin(t)) - 1),
      G("cos(t)^3", pow(cos(t), 3)),
  };
  return g;
}

#undef G

/// Evaluation points; all formulas above are defined at both.
struct Point {
  double t;
  double x;
};
inline constexpr Point kPoints[] = {{0.7, 1.3}, {3.2, 0.45}};

}  // namespace cases
