#pragma once

#include "bgt/geometry.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace bgt::flows {

using geometry::ChartPoint;
using geometry::Space;
using geometry::Submanifold;

struct FlowOptions {
  double step = 1e-3;
  // Relative drift of g(v, v) that aborts an integration as step-too-large.
  double drift_tolerance = 1e-3;
  bool keep_samples = true;
};

struct TangentVector {
  int chart = -1;
  Vec x;  // base point in reference-chart coordinates
  Vec v;  // components in the same chart
};

struct PathSample {
  double t = 0.0;
  int chart = -1;
  Vec x;
  Vec v;
};

struct AnchorEvent {
  double t = 0.0;
  int from = -1;
  int to = -1;
};

struct GeodesicPath {
  TangentVector start;
  TangentVector end;
  double duration = 0.0;
  double step = 0.0;
  double max_drift = 0.0;  // max relative change of g(v, v)
  std::vector<PathSample> samples;
  std::vector<AnchorEvent> anchors;
};

// g(v, v) at the base point.
double energy(const Space& m, const TangentVector& tv);

// RK4 for x'' = -Gamma(x)[x', x'], re-anchoring to another reference chart when
// the state leaves the current chart's safe domain.
GeodesicPath integrate_geodesic(const Space& m, const TangentVector& start, double duration,
                                const FlowOptions& opts = {});

// exp_z(v) = c_v(1). Uses the preset's closed form when it has one.
Point exp_map(const Space& m, const ChartPoint& z, const Vec& v, const FlowOptions& opts = {});
// Same, always by numerical integration.
Point exp_numeric(const Space& m, const ChartPoint& z, const Vec& v, const FlowOptions& opts = {});

struct Transported {
  TangentVector end;  // endpoint of the geodesic
  Vec w;              // transported vector, components in end.chart
};

// Solves w' + Gamma(x)[x', w] = 0 along the path (re-integrated together with it).
Transported parallel_transport(const Space& m, const GeodesicPath& path, const Vec& w0);

// Exponential and logarithm used to build charts: closed form when available,
// otherwise RK4 with a fixed number of steps and a Newton inverse. Both are
// deterministic smooth maps, so charts built from them are exact inverses.
Point chart_exp(const Space& m, const ChartPoint& base, const Vec& v);
std::optional<Vec> chart_log(const Space& m, const ChartPoint& base, const Point& q);
double distance(const Space& m, const Point& p, const Point& q);

struct NormalFrame {
  ChartPoint m;   // M reference chart and coordinates of the point
  Mat tangent;    // n x k, d(kappa_M^{-1} o iota o kappa_N)/dy
  Mat normal;     // n x (n-k), g-orthonormal, g-orthogonal to tangent
};

// Gram-Schmidt over [tangent columns, coordinate directions] in that order.
NormalFrame normal_frame(const Submanifold& n, const ChartPoint& y);

// Normal frame whose ambient images follow `reference` (m_amb x (n-k)): each
// reference column is pulled back by least squares, projected to the normal
// space and orthonormalized in order. Smooth in y and equal to the
// reference frame where the reference is normal.
NormalFrame aligned_normal_frame(const Submanifold& n, const ChartPoint& y, const Mat& reference);

// d(ambient o kappa)/dx of a reference chart of m.
Mat ambient_jacobian(const Space& m, const ChartPoint& p);

struct FlowJacobianReport {
  int base_points = 0;
  double max_coarse = 0.0;  // max |d exp_z / dv| at FD step 1e-4
  double max_fine = 0.0;    // same at FD step 1e-5
  double ratio = 0.0;
  bool pass = false;
};

// Finite-difference Jacobian of v -> exp_z(v) over sampled base points z and
// vectors |v|_g = fraction * r_M.
FlowJacobianReport flow_jacobian_bound(const Space& m, int base_points, double fraction,
                                       std::uint64_t seed);

}  // namespace bgt::flows
