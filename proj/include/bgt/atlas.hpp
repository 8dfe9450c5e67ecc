#pragma once

#include "bgt/flows.hpp"
#include "bgt/geometry.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace bgt::atlas {

using geometry::Chart;
using geometry::ChartPoint;
using geometry::Space;
using geometry::Submanifold;

// Radial profile: 1 on [0, 1], 0 on [3/2, inf), C^infinity and monotone between.
double bump(double t);

// Halton point i in [0,1)^d (point 0 is the origin), shifted modulo 1 by `shift`.
Vec halton(std::uint64_t i, int d, const Vec& shift);

struct NetOptions {
  int pool = 0;           // candidate pool size, 0 picks a default from the dimension
  double inflate = 0.0;   // grow the region of interest by this distance
  int coverage_samples = 1000;
};

// Greedy pool-maximal set with pairwise distance >= sep. `accept` filters the
// candidate pool (e.g. points far from a submanifold). Throws budget-exhausted
// when a Monte Carlo point of the region is farther than 2 sep from the net.
std::vector<Point> build_separated_net(const Space& space, double sep, std::uint64_t seed,
                                       const NetOptions& opts = {},
                                       const std::function<bool(const Point&)>& accept = {});

// kappa(x) = exp_c(E x) with E a g-orthonormal frame at c.
class GeodesicChartMap : public geometry::ChartMap {
 public:
  GeodesicChartMap(const Space* space, ChartPoint center, Mat frame);
  Point forward(const Vec& x) const override;
  std::optional<Vec> inverse(const Point& p) const override;
  Mat metric(const Vec& x) const override;
  const ChartPoint& center() const { return center_; }
  const Mat& frame() const { return frame_; }

 private:
  const Space* space_;
  ChartPoint center_;
  Mat frame_;
  Mat frame_inv_;
};

// kappa(t, x) = exp^M_q(sum_i t^i nu_i(q)), q = exp^N_c(lambda x). Coordinates are
// ordered (t, x) with t in R^{n-k}.
class FermiChartMap : public geometry::ChartMap {
 public:
  FermiChartMap(const Submanifold* sub, ChartPoint center, Mat tangent_frame);
  Point forward(const Vec& tx) const override;
  std::optional<Vec> inverse(const Point& p) const override;
  Mat metric(const Vec& tx) const override;
  // Normal frame at an N-point, aligned with the frame at the chart center.
  flows::NormalFrame frame_at(const Point& q) const;

 private:
  const Submanifold* sub_;
  ChartPoint center_;
  Mat lambda_;
  Mat lambda_inv_;
  Mat reference_;  // ambient images of the normal frame at the center
};

// Pullback metric J^T g J of a chart built on top of reference charts.
Mat pullback_metric(const Space& space, const std::function<Point(const Vec&)>& forward,
                    const Vec& x, double step = 1e-3);

enum class TrivializationKind { geodesic, fermi, lifted, corrupted };
const char* to_string(TrivializationKind kind);

using CutoffList = std::vector<std::pair<int, double>>;

// Uniformly locally finite cover with charts and a subordinate partition of unity.
class Trivialization {
 public:
  virtual ~Trivialization() = default;

  virtual TrivializationKind kind() const = 0;
  virtual const Space& space() const = 0;
  virtual int size() const = 0;
  virtual const Chart& chart(int alpha) const = 0;
  virtual Point center(int alpha) const = 0;
  // Nonzero cutoffs h_alpha(p), ordered by alpha.
  virtual void cutoffs(const Point& p, CutoffList& out) const = 0;
  // (h_alpha o kappa_alpha)(x), zero outside the chart domain.
  virtual double pulled_cutoff(int alpha, const Vec& x) const;
  // Half-widths of a coordinate box around 0 containing supp(h_alpha o kappa_alpha).
  virtual Vec support_half_width(int alpha) const = 0;
  // Upper bound on the distance from center(alpha) to points of U_alpha.
  virtual double domain_reach(int alpha) const = 0;
  // Rigorous upper bound on the number of chart domains containing a point.
  virtual int multiplicity_bound() const = 0;
  virtual double radius() const = 0;
  // Deterministic description (centers, frames, radii, seed).
  virtual std::string manifest() const = 0;

  double cutoff(int alpha, const Point& p) const;
  // Whether p lies in U_alpha.
  virtual bool in_domain(int alpha, const Point& p) const;
  std::string manifest_id() const;
};

// Geodesic normal charts on B_r(p_alpha) over a sep-net, cutoffs
// chi(|x| / bump_scale) normalized by their sum.
class GeodesicTrivialization : public Trivialization {
 public:
  GeodesicTrivialization(std::shared_ptr<const Space> space, std::vector<Point> centers,
                         double domain_radius, double bump_scale, double sep, std::uint64_t seed);

  TrivializationKind kind() const override { return TrivializationKind::geodesic; }
  const Space& space() const override { return *space_; }
  std::shared_ptr<const Space> space_ptr() const { return space_; }
  int size() const override { return static_cast<int>(charts_.size()); }
  const Chart& chart(int alpha) const override { return charts_.at(static_cast<size_t>(alpha)); }
  Point center(int alpha) const override { return centers_.at(static_cast<size_t>(alpha)); }
  void cutoffs(const Point& p, CutoffList& out) const override;
  double pulled_cutoff(int alpha, const Vec& x) const override;
  Vec support_half_width(int alpha) const override;
  double domain_reach(int) const override { return domain_radius_; }
  bool in_domain(int alpha, const Point& p) const override;
  int multiplicity_bound() const override { return multiplicity_; }
  double radius() const override { return domain_radius_; }
  double bump_scale() const { return bump_scale_; }
  std::string manifest() const override;
  const GeodesicChartMap& chart_map(int alpha) const { return *maps_.at(static_cast<size_t>(alpha)); }

  // Unnormalized bumps chi_alpha(p) > 0.
  void raw_bumps(const Point& p, CutoffList& out) const;

 private:
  std::shared_ptr<const Space> space_;
  std::vector<Point> centers_;
  std::vector<std::shared_ptr<const GeodesicChartMap>> maps_;
  std::vector<Chart> charts_;
  double domain_radius_;
  double bump_scale_;
  double sep_;
  std::uint64_t seed_;
  int multiplicity_ = 0;
};

// Geodesic trivialization with nets of separation r/2, charts on B_r and
// bumps chi(2|x|/r). Throws radius-exceeds-injectivity-radius unless 0 < r < r_M.
std::shared_ptr<GeodesicTrivialization> build_geodesic_trivialization(
    std::shared_ptr<const Space> space, double r, std::uint64_t seed, const NetOptions& opts = {});

// Fermi charts around N plus geodesic charts on the complement of the R-tube.
class FermiTrivialization : public Trivialization {
 public:
  FermiTrivialization(std::shared_ptr<const Submanifold> sub, double radius, std::uint64_t seed,
                      const NetOptions& opts);

  TrivializationKind kind() const override { return TrivializationKind::fermi; }
  const Space& space() const override { return sub_->ambient_space(); }
  const Submanifold& submanifold() const { return *sub_; }
  std::shared_ptr<const Submanifold> submanifold_ptr() const { return sub_; }
  int size() const override { return static_cast<int>(charts_.size()); }
  // Charts 0 .. near_count()-1 are Fermi charts (the index set I_N).
  int near_count() const { return boundary_->size(); }
  const Chart& chart(int alpha) const override { return charts_.at(static_cast<size_t>(alpha)); }
  Point center(int alpha) const override;
  void cutoffs(const Point& p, CutoffList& out) const override;
  double pulled_cutoff(int alpha, const Vec& x) const override;
  Vec support_half_width(int alpha) const override;
  // 4R for Fermi charts (2R along N plus 2R normal), R for the others.
  double domain_reach(int alpha) const override { return alpha < near_count() ? 4 * radius_ : radius_; }
  bool in_domain(int alpha, const Point& p) const override;
  int multiplicity_bound() const override { return multiplicity_; }
  double radius() const override { return radius_; }
  std::string manifest() const override;

  // The trivialization (U'_alpha, kappa'_alpha, h'_alpha) of N.
  const GeodesicTrivialization& boundary() const { return *boundary_; }
  std::shared_ptr<const GeodesicTrivialization> boundary_ptr() const { return boundary_; }
  const FermiChartMap& fermi_map(int alpha) const {
    return *fermi_maps_.at(static_cast<size_t>(alpha));
  }
  // psi(t) = chi(|t| / R).
  double normal_cutoff(const Vec& t) const;
  // Smallest distance from a complement center to N, minus R (>= 0 means the
  // balls B_R(p_beta) stay off N).
  double complement_clearance() const;

 private:
  std::shared_ptr<const Submanifold> sub_;
  double radius_;
  std::uint64_t seed_;
  std::shared_ptr<GeodesicTrivialization> boundary_;
  std::vector<std::shared_ptr<const FermiChartMap>> fermi_maps_;
  std::vector<Point> far_centers_;
  std::vector<std::shared_ptr<const GeodesicChartMap>> far_maps_;
  std::vector<Chart> charts_;
  int multiplicity_ = 0;
};

// R = min(r_N / 2, r_M / 4, r_collar / 2). Throws no-collar-metadata when a radius is missing.
double fermi_radius(const Submanifold& sub);

std::shared_ptr<FermiTrivialization> build_fermi_trivialization(
    std::shared_ptr<const Submanifold> sub, std::uint64_t seed, const NetOptions& opts = {});

// Negative-control fixture: cutoffs of `base` multiplied by 1/2 where the first
// chart coordinate is negative (a jump discontinuity; no longer a partition of unity).
std::shared_ptr<Trivialization> make_corrupted(std::shared_ptr<const Trivialization> base);

// --- diagnostics -----------------------------------------------------------

struct PartitionReport {
  int samples = 0;
  double max_sum_error = 0.0;     // max |sum_alpha h_alpha(p) - 1|
  double min_cutoff = 0.0;
  double max_cutoff = 0.0;
  int support_violations = 0;     // h_alpha(p) != 0 with p outside U_alpha
  int uncovered = 0;              // points where every cutoff vanishes
  int max_multiplicity = 0;       // measured overlap count of chart domains
  bool pass = false;
};

// Monte Carlo check of partition of unity, support and multiplicity on the
// region of interest.
PartitionReport check_partition(const Trivialization& t, int samples, std::uint64_t seed,
                                double tol = 1e-10);

// max |t| of kappa_alpha^{-1}(q) over q in N near each Fermi chart center.
double fermi_slice_residual(const FermiTrivialization& t, int samples_per_chart);

struct OrderEstimate {
  int order = 0;
  double coarse = 0.0;  // max |D^a| at FD step h
  double fine = 0.0;    // same at h / 2
  double ratio = 1.0;   // max / min, values below the noise floor count as equal
  bool finite = true;
  bool stable = true;
};

struct DerivativeReport {
  std::string what;
  int samples = 0;
  double step = 0.0;
  std::vector<OrderEstimate> orders;
  bool pass = false;
};

struct AdmissibilityReport {
  DerivativeReport transitions;  // (B1): D^a mu_{alpha beta}
  DerivativeReport cutoffs;      // (B2): D^a (h_alpha o kappa_alpha)
  bool pass = false;
};

struct DiagnosticOptions {
  double step = 1e-2;       // FD step relative to the smallest support half-width of a chart
  double noise_floor = 1e-4;
  int lattice = 7;          // lattice points per axis in each chart's support box
  int max_pairs = 400;      // cap on sampled (alpha, beta, x) transition probes
  int max_charts = 24;      // charts probed per trivialization
  std::uint64_t seed = 11;
};

AdmissibilityReport admissibility_report(const Trivialization& t, const Trivialization& t_geo,
                                         int k_max, const DiagnosticOptions& opts = {});

struct BoundedGeometryReport {
  DerivativeReport metric;          // D^a g_ij
  DerivativeReport inverse_metric;  // D^a g^ij
  bool pass = false;
};

BoundedGeometryReport bounded_geometry_report(const Trivialization& t, int k_max,
                                              const DiagnosticOptions& opts = {});

}  // namespace bgt::atlas
