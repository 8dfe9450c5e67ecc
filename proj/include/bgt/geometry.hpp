#pragma once

#include "bgt/core.hpp"

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace bgt::geometry {

using Rng = std::mt19937_64;

enum class DomainShape { box, ball, split_ball };

// Bounded chart domain: an axis-aligned box (center, radii) with a membership
// predicate. `split_ball` is B^{split} x B^{n-split} with common radius per block.
struct Domain {
  Vec center;
  Vec radii;
  DomainShape shape = DomainShape::box;
  int split = 0;

  int dim() const { return static_cast<int>(center.size()); }
  // Membership of x after scaling the domain about its center by `shrink`.
  bool contains(const Vec& x, double shrink = 1.0) const;
  // Smallest relative distance to the boundary, 1 at the center and 0 on the boundary.
  double depth(const Vec& x) const;

  static Domain box(Vec center, Vec radii);
  static Domain ball(Vec center, double radius);
  static Domain split_ball(int split, double radius_first, double radius_second, int n);
};

enum class ChartKind { geodesic, fermi, generic };
const char* to_string(ChartKind kind);

// Rank-3 array Gamma^k_{ij}, stored densely for n <= kMaxDim.
struct Christoffel {
  int n = 0;
  std::array<double, kMaxDim * kMaxDim * kMaxDim> data{};

  explicit Christoffel(int dim = 0) : n(dim) {}
  double& operator()(int k, int i, int j) { return data[(k * kMaxDim + i) * kMaxDim + j]; }
  double operator()(int k, int i, int j) const { return data[(k * kMaxDim + i) * kMaxDim + j]; }
  double max_abs() const;
};

// Coordinate map kappa: V -> M of a chart.
class ChartMap {
 public:
  virtual ~ChartMap() = default;
  virtual Point forward(const Vec& x) const = 0;
  // Coordinates of p. Angular coordinates are unwrapped towards the chart, so
  // the result can lie outside the domain; nullopt when p is unreachable.
  virtual std::optional<Vec> inverse(const Point& p) const = 0;
  virtual Mat metric(const Vec& x) const = 0;
  virtual bool has_christoffel() const { return false; }
  virtual Christoffel christoffel(const Vec& x) const;
};

class Chart {
 public:
  Chart(std::string id, Domain domain, Domain safe, std::shared_ptr<const ChartMap> map,
        ChartKind kind);

  const std::string& id() const { return id_; }
  int dim() const { return domain_.dim(); }
  const Domain& domain() const { return domain_; }
  // Shrunken domain used to decide when a flow should re-anchor.
  const Domain& safe() const { return safe_; }
  ChartKind kind() const { return kind_; }
  const ChartMap& map() const { return *map_; }

  bool contains(const Vec& x) const { return domain_.contains(x); }
  Point forward(const Vec& x) const { return map_->forward(x); }
  std::optional<Vec> inverse(const Point& p) const { return map_->inverse(p); }
  // Inverse restricted to the domain.
  std::optional<Vec> coordinates(const Point& p) const;

 private:
  std::string id_;
  Domain domain_;
  Domain safe_;
  std::shared_ptr<const ChartMap> map_;
  ChartKind kind_;
};

struct ChartPoint {
  int chart = -1;
  Vec x;
};

// mu_{from,to} = kappa_to^{-1} o kappa_from on the overlap.
struct TransitionMap {
  int from = -1;
  int to = -1;
  std::function<std::optional<Vec>(const Vec&)> map;
};

// Riemannian manifold given by closed-form reference charts.
class Space {
 public:
  virtual ~Space() = default;

  virtual std::string name() const = 0;
  int dim() const { return dim_; }
  const std::vector<Chart>& charts() const { return charts_; }
  const Chart& chart(int i) const { return charts_.at(static_cast<size_t>(i)); }
  const std::vector<TransitionMap>& transitions() const { return transitions_; }
  double injectivity_radius() const { return injectivity_radius_; }

  virtual Point canonical(const Point& p) const { return p; }
  // Reference chart whose safe domain contains p most deeply.
  std::optional<ChartPoint> locate(const Point& p) const;
  ChartPoint locate_or_throw(const Point& p) const;

  // Smooth embedding used for frame alignment and chord-distance bounds.
  virtual Vec ambient(const Point& p) const = 0;
  // True when chord length in the ambient space never exceeds geodesic distance.
  virtual bool ambient_chord_bound() const { return false; }

  // Closed-form geodesic data; presets without it fall back to numerical flows.
  virtual std::optional<Point> exact_exp(const ChartPoint& base, const Vec& v) const;
  virtual std::optional<Vec> exact_log(const ChartPoint& base, const Point& q) const;
  virtual std::optional<double> exact_distance(const Point& p, const Point& q) const;
  // Cheap lower bound on the geodesic distance (0 when nothing better is known).
  double distance_lower_bound(const Point& p, const Point& q) const;
  // Length of the straight coordinate segment in the reference chart of p (an
  // upper bound on the distance); infinity when q is not in that chart.
  double distance_upper_bound(const Point& p, const Point& q) const;

  // Region of interest: the whole manifold for compact presets, a bounded
  // window otherwise. `inflate` grows the window by roughly that distance.
  virtual bool compact() const = 0;
  virtual Point from_unit(const Vec& u, double inflate) const = 0;
  virtual bool in_region(const Point& p, double inflate = 0.0) const = 0;
  Point sample(Rng& rng, double inflate = 0.0) const;

  void set_injectivity_radius(double r);
  // Adds a transition for every ordered pair of reference charts whose safe
  // domains share sampled points.
  void build_transitions(int samples = 400, std::uint64_t seed = 7);
  void add_transition(TransitionMap t) { transitions_.push_back(std::move(t)); }

 protected:
  explicit Space(int dim) : dim_(dim) {}
  void add_chart(Chart c) { charts_.push_back(std::move(c)); }

 private:
  int dim_;
  double injectivity_radius_ = 0.0;
  std::vector<Chart> charts_;
  std::vector<TransitionMap> transitions_;
};

// Embedded submanifold N^k of M^n, itself a Space with the induced metric.
class Submanifold : public Space {
 public:
  const Space& ambient_space() const { return *ambient_; }
  std::shared_ptr<const Space> ambient_ptr() const { return ambient_; }
  int codim() const { return ambient_->dim() - dim(); }
  double collar_radius() const { return collar_radius_; }

  // Inclusion of an intrinsic point into M.
  virtual Point include(const Point& q) const = 0;
  // Foot point (intrinsic) of the normal geodesic through p, closed form per preset.
  virtual Point foot(const Point& p) const = 0;
  // Distance from p to N, valid inside the collar.
  virtual double distance_to(const Point& p) const = 0;
  // M-chart coordinates of the inclusion and its tangent columns at an N-chart point.
  struct Tangent {
    ChartPoint m;   // M reference chart and coordinates of the image point
    Mat columns;    // n x k matrix, d(kappa_M^{-1} o iota o kappa_N)/dy
  };
  Tangent tangent(const ChartPoint& y, double step = 1e-5) const;

  void set_collar_radius(double r);

 protected:
  Submanifold(std::shared_ptr<const Space> ambient, int dim)
      : Space(dim), ambient_(std::move(ambient)) {}

 private:
  std::shared_ptr<const Space> ambient_;
  double collar_radius_ = 0.0;
};

// Chart map of N whose metric is the pullback of g along the inclusion.
class InducedChartMap : public ChartMap {
 public:
  InducedChartMap(const Submanifold* sub, std::shared_ptr<const ChartMap> param);
  Point forward(const Vec& x) const override { return param_->forward(x); }
  std::optional<Vec> inverse(const Point& p) const override { return param_->inverse(p); }
  Mat metric(const Vec& x) const override;

 private:
  const Submanifold* sub_;
  std::shared_ptr<const ChartMap> param_;
};

// --- operations -----------------------------------------------------------

// g_ij(x); throws point_outside_domain or singular_metric.
Mat metric_at(const Chart& chart, const Vec& x);

// Gamma^k_ij = 1/2 g^{kl}(d_j g_il + d_i g_jl - d_l g_ij) by central differences
// with step h (analytic symbols when the chart provides them and h <= 0).
Christoffel christoffel(const Chart& chart, const Vec& x, double h = 1e-5);
Christoffel christoffel_fd(const Chart& chart, const Vec& x, double h = 1e-5);

struct TransitionReport {
  int samples = 0;
  double max_residual = 0.0;   // max |g^a - Dmu^T g^b(mu) Dmu| entry
  double max_roundtrip = 0.0;  // max |mu_ba(mu_ab(x)) - x|
  double tolerance = 0.0;
  bool pass = false;
  std::vector<double> per_transition;
};

TransitionReport check_transition_consistency(const Space& m, int samples,
                                              double fd_step = 1e-5, double tol = 1e-6,
                                              std::uint64_t seed = 1);
// Same check over an explicit transition list (used for negative controls).
TransitionReport check_transition_consistency(const Space& m,
                                              const std::vector<TransitionMap>& transitions,
                                              int samples, double fd_step, double tol,
                                              std::uint64_t seed);

struct MeanCurvature {
  ChartPoint m;                 // where the values are expressed
  std::vector<Vec> values;      // l(e_a, e_b), row-major over a, b (g-orthonormal e)
  double norm = 0.0;            // sqrt(sum_ab |l(e_a,e_b)|_g^2)
};

// Second fundamental form l(X,Y) = (nabla^M_X Y)^perp of N at an N-chart point.
MeanCurvature mean_curvature_tensor(const Submanifold& n, const ChartPoint& y);

// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Mat& g);

// Gram-Schmidt of the columns of `candidates` with respect to g, skipping columns
// whose residual falls below `drop` times their length. Returns up to `count` columns.
Mat gram_schmidt(const Mat& g, const Mat& candidates, int count, double drop = 1e-3);

// Jacobian of a map R^n -> R^m by fourth-order central differences.
Mat jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double h);

}  // namespace bgt::geometry
