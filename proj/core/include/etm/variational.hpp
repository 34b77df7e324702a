#pragma once

#include <string>
#include <vector>

#include "etm/rational.hpp"

namespace etm {

// I(u) = (u ln u + (1-u) ln(1-u)) / 2, with 0 ln 0 = 0.
double entropy(double u);

// All global maximizers of beta1*u + beta2*u^3 - I(u) on [0,1]. Stationary
// points are found by sign-change bracketing plus bisection; maximizers whose
// objective is within 1e-10 of the best are all returned (deduplicated at
// 1e-8 in u, sorted).
std::vector<double> solve_scalar(double beta1, double beta2);

enum class LimitSign { PlusInf, MinusInf };

// The parameter ray beta1 = a*beta2 + b with beta2 -> +-inf.
struct Line {
  double a;
  double b;
  LimitSign limit;
};

struct ExtremalClass {
  enum class Kind { Empty, Complete, EmptyOrComplete, Turan, TuranPair, DilutedBipartite };
  Kind kind;
  long long classes = 0;     // Turan / first of a TuranPair
  long long classes_hi = 0;  // second of a TuranPair
  double p = 0.0;            // DilutedBipartite edge retention e^{2b}/(1+e^{2b})
};

struct LineClassification {
  ExtremalClass cls;
  long long nearest_k;  // index of the nearest critical slope; -1 means the limit -3
  double ak_distance;   // |a - a_{nearest_k}| (or |a + 3| when nearest_k = -1)
};

// Slopes within 1e-12 of a critical slope a_k are treated as critical.
LineClassification classify_line(const Line& line);
// Exact-slope variant used when a and b are known rationals.
LineClassification classify_line_exact(const Rational& a, const Rational& b, LimitSign limit);

// Argmin set of a*e + t(e) over the lower boundary of the feasible region,
// for a < 0. Minima sit at connection points e_k = k/(k+1); a critical slope
// yields two of them, and a <= -3 yields {1}.
std::vector<Rational> razborov_minimizer(double a);

std::string classification_json(const Line& line, const LineClassification& result);

}  // namespace etm
