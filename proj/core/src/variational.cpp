#include "etm/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "etm/geometry.hpp"

namespace etm {

namespace {

constexpr double kCriticalTol = 1e-12;

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double z = std::exp(x);
  return z / (1.0 + z);
}

// Real solution k of a_k = a for a in (-3, 0); the discriminant is (a+3)^2 + 16.
double critical_index_real(double a) {
  return (-(3 * a + 5) + std::sqrt((a + 3) * (a + 3) + 16.0)) / (2 * (3 + a));
}

struct SegmentLocation {
  long long k;          // a_k > a > a_{k+1} when not critical
  long long nearest;    // nearest critical index
  double distance;      // |a - a_nearest|
  bool critical;        // distance <= kCriticalTol
};

SegmentLocation locate_slope(double a) {
  const double kr = critical_index_real(a);
  long long kf = static_cast<long long>(std::floor(kr));
  if (kf < 0) kf = 0;

  SegmentLocation loc{};
  loc.distance = std::numeric_limits<double>::infinity();
  for (long long m = std::max<long long>(0, kf - 1); m <= kf + 2; ++m) {
    const double d = std::abs(a - critical_slope_f(m));
    if (d < loc.distance) {
      loc.distance = d;
      loc.nearest = m;
    }
  }
  loc.critical = loc.distance <= kCriticalTol;
  loc.k = a >= critical_slope_f(loc.nearest) ? loc.nearest - 1 : loc.nearest;
  if (loc.k < 0) loc.k = 0;
  return loc;
}

}  // namespace

double entropy(double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("entropy: u must lie in [0,1]");
  if (u == 0.0 || u == 1.0) return 0.0;
  return (u * std::log(u) + (1.0 - u) * std::log1p(-u)) / 2.0;
}

std::vector<double> solve_scalar(double beta1, double beta2) {
  if (!std::isfinite(beta1) || !std::isfinite(beta2))
    throw std::domain_error("solve_scalar: parameters must be finite");

  const auto objective = [&](double u) { return beta1 * u + beta2 * u * u * u - entropy(u); };
  const auto slope = [&](double u) {
    return beta1 + 3 * beta2 * u * u - 0.5 * std::log(u / (1.0 - u));
  };

  const int kCells = 10000;
  const double u_min = 1e-300;
  const double u_max = std::nextafter(1.0, 0.0);

  std::vector<double> knots;
  knots.reserve(kCells + 1);
  knots.push_back(u_min);
  for (int i = 1; i < kCells; ++i) knots.push_back(static_cast<double>(i) / kCells);
  knots.push_back(u_max);

  std::vector<double> candidates{0.0, 1.0};
  double g_prev = slope(knots[0]);
  for (std::size_t i = 1; i < knots.size(); ++i) {
    const double g_cur = slope(knots[i]);
    if ((g_prev > 0) != (g_cur > 0)) {
      double lo = knots[i - 1], hi = knots[i];
      bool lo_pos = g_prev > 0;
      for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((slope(mid) > 0) == lo_pos) lo = mid;
        else hi = mid;
      }
      candidates.push_back(0.5 * (lo + hi));
    }
    g_prev = g_cur;
  }

  double best = -std::numeric_limits<double>::infinity();
  for (double u : candidates) best = std::max(best, objective(u));

  std::vector<double> keep;
  for (double u : candidates) {
    if (objective(u) >= best - 1e-10) keep.push_back(u);
  }
  std::sort(keep.begin(), keep.end());
  std::vector<double> out;
  for (double u : keep) {
    if (out.empty() || u - out.back() > 1e-8) out.push_back(u);
  }
  return out;
}

LineClassification classify_line(const Line& line) {
  const double a = line.a, b = line.b;
  if (!std::isfinite(a) || !std::isfinite(b))
    throw std::domain_error("classify_line: line parameters must be finite");

  LineClassification res{};
  auto& cls = res.cls;
  using K = ExtremalClass::Kind;

  if (line.limit == LimitSign::PlusInf) {
    res.nearest_k = -1;
    res.ak_distance = std::abs(a + 1.0);
    if (res.ak_distance <= kCriticalTol) {
      if (b > 0) cls.kind = K::Complete;
      else if (b < 0) cls.kind = K::Empty;
      else cls.kind = K::EmptyOrComplete;
    } else {
      cls.kind = a > -1.0 ? K::Complete : K::Empty;
    }
    return res;
  }

  // beta2 -> -inf
  if (a > kCriticalTol) {
    cls.kind = K::Empty;
    res.nearest_k = 0;
    res.ak_distance = std::abs(a);
    return res;
  }
  if (std::abs(a) <= kCriticalTol) {
    cls.kind = K::DilutedBipartite;
    cls.p = sigmoid(2 * b);
    res.nearest_k = 0;
    res.ak_distance = std::abs(a);
    return res;
  }
  if (a <= -3.0) {
    cls.kind = K::Complete;
    res.nearest_k = -1;
    res.ak_distance = std::abs(a + 3.0);
    return res;
  }

  const SegmentLocation loc = locate_slope(a);
  res.nearest_k = loc.nearest;
  res.ak_distance = loc.distance;
  if (loc.critical) {
    const long long m = loc.nearest;
    if (b > 0) {
      cls.kind = K::Turan;
      cls.classes = m + 2;
    } else if (b < 0) {
      cls.kind = K::Turan;
      cls.classes = m + 1;
    } else {
      cls.kind = K::TuranPair;
      cls.classes = m + 1;
      cls.classes_hi = m + 2;
    }
  } else {
    cls.kind = K::Turan;
    cls.classes = loc.k + 2;
  }
  return res;
}

LineClassification classify_line_exact(const Rational& a, const Rational& b, LimitSign limit) {
  LineClassification res{};
  auto& cls = res.cls;
  using K = ExtremalClass::Kind;
  const double af = to_double(a);

  if (limit == LimitSign::PlusInf) {
    res.nearest_k = -1;
    res.ak_distance = std::abs(to_double(Rational(a + 1)));
    if (a == -1) {
      if (b > 0) cls.kind = K::Complete;
      else if (b < 0) cls.kind = K::Empty;
      else cls.kind = K::EmptyOrComplete;
    } else {
      cls.kind = a > -1 ? K::Complete : K::Empty;
    }
    return res;
  }

  if (a > 0) {
    cls.kind = K::Empty;
    res.nearest_k = 0;
    res.ak_distance = af;
    return res;
  }
  if (a == 0) {
    cls.kind = K::DilutedBipartite;
    cls.p = sigmoid(2 * to_double(b));
    res.nearest_k = 0;
    res.ak_distance = 0.0;
    return res;
  }
  if (a <= -3) {
    cls.kind = K::Complete;
    res.nearest_k = -1;
    res.ak_distance = std::abs(to_double(Rational(a + 3)));
    return res;
  }

  // a in (-3, 0): pin the segment with exact comparisons around a double guess.
  const double kr = critical_index_real(af);
  long long kf = static_cast<long long>(std::floor(kr));
  if (kf < 0) kf = 0;
  long long lo = std::max<long long>(0, kf - 2);
  long long crit = -1;
  long long seg = -1;
  res.ak_distance = std::numeric_limits<double>::infinity();
  for (long long m = lo; m <= kf + 3; ++m) {
    const Rational am = critical_slope(m);
    const Rational diff = a - am;
    const double d = std::abs(to_double(diff));
    if (d < res.ak_distance) {
      res.ak_distance = d;
      res.nearest_k = m;
    }
    if (diff == 0) crit = m;
    if (m > lo && critical_slope(m - 1) > a && a > am) seg = m - 1;
  }
  if (crit >= 0) {
    if (b > 0) {
      cls.kind = K::Turan;
      cls.classes = crit + 2;
    } else if (b < 0) {
      cls.kind = K::Turan;
      cls.classes = crit + 1;
    } else {
      cls.kind = K::TuranPair;
      cls.classes = crit + 1;
      cls.classes_hi = crit + 2;
    }
  } else {
    if (seg < 0) throw std::logic_error("classify_line_exact: segment search failed");
    cls.kind = K::Turan;
    cls.classes = seg + 2;
  }
  return res;
}

std::vector<Rational> razborov_minimizer(double a) {
  if (!(a < 0)) throw std::domain_error("razborov_minimizer: slope must be negative");
  if (a <= -3.0) return {Rational(1)};

  const SegmentLocation loc = locate_slope(a);
  const auto e_k = [](long long k) { return Rational(BigInt(k), BigInt(k + 1)); };
  if (loc.critical) return {e_k(loc.nearest), e_k(loc.nearest + 1)};
  return {e_k(loc.k + 1)};
}

std::string classification_json(const Line& line, const LineClassification& result) {
  nlohmann::ordered_json out;
  out["input"] = {{"a", line.a},
                  {"b", line.b},
                  {"limit", line.limit == LimitSign::PlusInf ? "+inf" : "-inf"}};
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  const auto& cls = result.cls;
  using K = ExtremalClass::Kind;
  const char* name = "";
  switch (cls.kind) {
    case K::Empty: name = "empty"; break;
    case K::Complete: name = "complete"; break;
    case K::EmptyOrComplete: name = "empty_or_complete"; break;
    case K::Turan:
      name = "turan";
      params["classes"] = cls.classes;
      break;
    case K::TuranPair:
      name = "turan_pair";
      params["classes"] = {cls.classes, cls.classes_hi};
      break;
    case K::DilutedBipartite:
      name = "diluted_bipartite";
      params["p"] = cls.p;
      break;
  }
  out["class"] = name;
  out["parameters"] = std::move(params);
  out["nearest_critical_slope"] = {{"k", result.nearest_k}, {"distance", result.ak_distance}};
  return out.dump(2);
}

}  // namespace etm
