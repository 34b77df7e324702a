#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "etm/point.hpp"

namespace etm {

// v_k = (k/(k+1), k(k-1)/(k+1)^2): densities of the complete (k+1)-partite limit.
DensityPoint extreme_point(long long k);

// Critical slope a_k = -k(3k+5)/((k+1)(k+2)); strictly decreasing, -> -3.
Rational critical_slope(long long k);
double critical_slope_f(long long k);

// Outer normal of the boundary segment between v_k and v_{k+1}
// ((1,1)-v_0 for k = -1, the horizontal facet for k = 0).
Vec2 critical_direction(long long k);

// Integer vector parallel to the segment [v_k, v_{k+1}]: ((k+1)(k+2), k(3k+5)).
Vec2 facet_tangent(long long k);
// Same direction, unit norm.
std::array<double, 2> facet_tangent_unit(long long k);

// Lower boundary of the feasible (e, t) region: 0 up to e = 1/2, then the
// flag-algebra curve segment by segment between consecutive v_k.
double razborov_lower(double e);
// Segment-k curve (k >= 2), valid on [(k-1)/k, k/(k+1)]; exposed for
// continuity checks across shared endpoints.
double razborov_segment(long long k, double e);
// Exact evaluation; defined when the radicand k(k - e(k+1)) is a perfect
// rational square (true at every segment endpoint).
Rational razborov_lower_exact(const Rational& e);

// Upper boundary t = e^{3/2}.
double kk_upper(double e);

struct RayClassification {
  enum class Kind { InteriorCone, ConeAtOne, CriticalRay };
  Kind kind;
  long long k = 0;                  // cone/ray index; ignored for ConeAtOne
  bool near_critical = false;       // float input within 1e-12 of a critical ray
  long long nearest_critical = 0;   // set when near_critical
};

// Exact classification of a nonzero direction by the argmax of <o, v> over
// the extreme points {v_k} and (1,1).
RayClassification classify_direction(const Vec2& o);
// Classifies the exact dyadic values of the doubles, then flags proximity to
// a critical ray that exact arithmetic cannot certify from float input.
RayClassification classify_direction(double x, double y);

// Sign of <l_k, beta>: -1, 0, +1, exact.
int hyperplane_side(long long k, const Vec2& beta);
int hyperplane_side(long long k, double beta1, double beta2);

struct BoundaryRow {
  double e;
  double lower;
  double upper;
  long long vertex_k;  // -2: not a vertex; -1: the limit point (1,1); else k with e = k/(k+1)
};
std::vector<BoundaryRow> boundary_samples(int resolution);
void write_boundary_csv(std::ostream& os, const std::vector<BoundaryRow>& rows);

// Normal-cone complex: [{k, apex: v_k, generators: [o_{k-1}, o_k]}, ...].
std::string cone_complex_json(long long max_k);

// <o, v_{k+1} - v_k> == 0 (k >= 0), or <o, (1,1) - v_0> == 0 for k = -1.
bool critical_orthogonal(long long k, const Vec2& o);

}  // namespace etm
