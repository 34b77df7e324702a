#include "etm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace etm {

namespace {

constexpr double kNearCriticalTol = 1e-12;

void require(bool cond, const char* msg) {
  if (!cond) throw std::domain_error(msg);
}

// <o, v_k> for arbitrary-precision k.
Rational objective_at(const Vec2& o, const BigInt& k) {
  const BigInt kp1 = k + 1;
  return o.x * Rational(k, kp1) + o.y * Rational(k * (k - 1), kp1 * kp1);
}

long long to_index(const BigInt& k) {
  if (k > BigInt(std::int64_t(1) << 62))
    throw std::domain_error("classify_direction: direction too close to the limiting slope 3");
  return k.convert_to<long long>();
}

}  // namespace

DensityPoint extreme_point(long long k) {
  require(k >= 0, "extreme_point: k must be nonnegative");
  const BigInt kk(k), kp1(k + 1);
  return {Rational(kk, kp1), Rational(kk * (kk - 1), kp1 * kp1)};
}

Rational critical_slope(long long k) {
  require(k >= 0, "critical_slope: k must be nonnegative");
  const BigInt kk(k);
  return -Rational(kk * (3 * kk + 5), BigInt(k + 1) * BigInt(k + 2));
}

double critical_slope_f(long long k) { return to_double(critical_slope(k)); }

Vec2 critical_direction(long long k) {
  require(k >= -1, "critical_direction: k must be at least -1");
  if (k == -1) return {Rational(-1), Rational(1)};
  if (k == 0) return {Rational(0), Rational(-1)};
  const BigInt kk(k);
  return {Rational(1), -Rational(BigInt(k + 1) * BigInt(k + 2), kk * (3 * kk + 5))};
}

Vec2 facet_tangent(long long k) {
  require(k >= 1, "facet_tangent: k must be positive");
  const BigInt kk(k);
  return {Rational(BigInt(k + 1) * BigInt(k + 2)), Rational(kk * (3 * kk + 5))};
}

std::array<double, 2> facet_tangent_unit(long long k) {
  const Vec2 t = facet_tangent(k);
  const double x = to_double(t.x), y = to_double(t.y);
  const double norm = std::hypot(x, y);
  return {x / norm, y / norm};
}

double razborov_segment(long long k, double e) {
  const double kd = static_cast<double>(k);
  const double rad = kd * (kd - e * (kd + 1));
  const double s = std::sqrt(std::max(0.0, rad));
  return (kd - 1) * (kd - 2 * s) * (kd + s) * (kd + s) / (kd * kd * (kd + 1) * (kd + 1));
}

double razborov_lower(double e) {
  require(e >= 0.0 && e <= 1.0, "razborov_lower: e must lie in [0,1]");
  if (e <= 0.5) return 0.0;
  if (e >= 1.0) return 1.0;
  const double x = 1.0 / (1.0 - e);
  long long k = static_cast<long long>(std::ceil(x)) - 1;
  if (k < 2) k = 2;
  return razborov_segment(k, e);
}

Rational razborov_lower_exact(const Rational& e) {
  require(e >= 0 && e <= 1, "razborov_lower_exact: e must lie in [0,1]");
  if (e <= Rational(1, 2)) return Rational(0);
  if (e == 1) return Rational(1);
  BigInt k = ceil_rational(Rational(1) / (1 - e)) - 1;
  if (k < 2) k = 2;
  const Rational rad = Rational(k) * (Rational(k) - e * Rational(k + 1));
  const auto s = exact_sqrt(rad);
  if (!s) throw std::domain_error("razborov_lower_exact: value is irrational at this e");
  const Rational kq(k);
  return (kq - 1) * (kq - 2 * *s) * (kq + *s) * (kq + *s) / (kq * kq * (kq + 1) * (kq + 1));
}

double kk_upper(double e) {
  require(e >= 0.0 && e <= 1.0, "kk_upper: e must lie in [0,1]");
  return e * std::sqrt(e);
}

RayClassification classify_direction(const Vec2& o) {
  const Rational& x = o.x;
  const Rational& y = o.y;
  require(x != 0 || y != 0, "classify_direction: zero direction");

  // With s = 1/(k+1), <o, v_k> = (x+y) - (x+3y)s + 2y s^2; s = 0 is (1,1).
  const auto cone = [](long long k) {
    return RayClassification{RayClassification::Kind::InteriorCone, k};
  };
  const auto at_one = [] { return RayClassification{RayClassification::Kind::ConeAtOne, 0}; };
  const auto critical = [](long long k) {
    return RayClassification{RayClassification::Kind::CriticalRay, k};
  };

  if (y > 0) {
    const Rational lim = x + y;
    if (lim > 0) return at_one();
    if (lim < 0) return cone(0);
    return critical(-1);  // o is a positive multiple of (-1, 1)
  }
  if (y == 0) return x > 0 ? at_one() : cone(0);

  // y < 0: concave in s.
  const Rational x3y = x + 3 * y;
  if (x3y >= 0) return at_one();

  const Rational kstar = (y - x) / x3y;  // real argmax over k
  BigInt kf = floor_rational(kstar);
  if (kf < 0) kf = 0;
  const long long k_lo = to_index(kf);
  const Rational f_lo = objective_at(o, BigInt(k_lo));
  const Rational f_hi = objective_at(o, BigInt(k_lo) + 1);
  if (f_lo == f_hi) return critical(k_lo);
  return cone(f_lo > f_hi ? k_lo : k_lo + 1);
}

RayClassification classify_direction(double x, double y) {
  RayClassification r = classify_direction(Vec2{rational_from_double(x), rational_from_double(y)});
  if (r.kind == RayClassification::Kind::CriticalRay) return r;

  const auto near_ray = [&](long long m) {
    r.near_critical = true;
    r.nearest_critical = m;
  };
  const double scale = std::abs(x) + std::abs(y);
  if (std::abs(x + y) <= kNearCriticalTol * scale && y > 0) near_ray(-1);
  if (y < 0) {
    const double a = x / y;
    long long lo = 0, hi = 0;
    if (r.kind == RayClassification::Kind::InteriorCone && r.k >= 1) {
      lo = r.k - 1;
      hi = r.k;
    }
    for (long long m = lo; m <= hi; ++m) {
      const double am = critical_slope_f(m);
      if (std::abs(a - am) <= kNearCriticalTol * std::max(1.0, std::abs(am))) near_ray(m);
    }
  }
  return r;
}

int hyperplane_side(long long k, const Vec2& beta) {
  const Rational s = dot(facet_tangent(k), beta);
  if (s > 0) return 1;
  if (s < 0) return -1;
  return 0;
}

int hyperplane_side(long long k, double beta1, double beta2) {
  return hyperplane_side(k, Vec2{rational_from_double(beta1), rational_from_double(beta2)});
}

std::vector<BoundaryRow> boundary_samples(int resolution) {
  require(resolution >= 2, "boundary_samples: resolution must be at least 2");
  std::vector<BoundaryRow> rows;
  rows.reserve(resolution);
  for (int i = 0; i < resolution; ++i) {
    const Rational e_exact(i, resolution - 1);
    const double e = to_double(e_exact);
    long long vertex = -2;
    if (e_exact == 1) {
      vertex = -1;
    } else {
      const Rational k = e_exact / (1 - e_exact);
      if (denominator(k) == 1) vertex = numerator(k).convert_to<long long>();
    }
    rows.push_back({e, razborov_lower(e), kk_upper(e), vertex});
  }
  return rows;
}

void write_boundary_csv(std::ostream& os, const std::vector<BoundaryRow>& rows) {
  char buf[32];
  const auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
  };
  os << "e,lower,upper,vertex\n";
  for (const auto& r : rows) {
    put(r.e);
    os << ',';
    put(r.lower);
    os << ',';
    put(r.upper);
    os << ',';
    if (r.vertex_k == -1) os << "inf";
    else if (r.vertex_k >= 0) os << r.vertex_k;
    os << '\n';
  }
}

std::string cone_complex_json(long long max_k) {
  require(max_k >= 0, "cone_complex_json: max_k must be nonnegative");
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (long long k = 0; k <= max_k; ++k) {
    const DensityPoint apex = extreme_point(k);
    const Vec2 lo = critical_direction(k - 1);
    const Vec2 hi = critical_direction(k);
    nlohmann::ordered_json item;
    item["k"] = k;
    item["apex"] = nlohmann::ordered_json::array({apex.ef(), apex.tf()});
    item["apex_exact"] =
        nlohmann::ordered_json::array({to_fraction_string(apex.e), to_fraction_string(apex.t)});
    item["generators"] = nlohmann::ordered_json::array(
        {nlohmann::ordered_json::array({to_double(lo.x), to_double(lo.y)}),
         nlohmann::ordered_json::array({to_double(hi.x), to_double(hi.y)})});
    item["generators_exact"] = nlohmann::ordered_json::array(
        {nlohmann::ordered_json::array({to_fraction_string(lo.x), to_fraction_string(lo.y)}),
         nlohmann::ordered_json::array({to_fraction_string(hi.x), to_fraction_string(hi.y)})});
    out.push_back(std::move(item));
  }
  return out.dump(2);
}

bool critical_orthogonal(long long k, const Vec2& o) {
  require(k >= -1, "critical_orthogonal: k must be at least -1");
  if (k == -1) {
    const DensityPoint v0 = extreme_point(0);
    return o.x * (1 - v0.e) + o.y * (1 - v0.t) == 0;
  }
  const DensityPoint a = extreme_point(k);
  const DensityPoint b = extreme_point(k + 1);
  return o.x * (b.e - a.e) + o.y * (b.t - a.t) == 0;
}

}  // namespace etm
