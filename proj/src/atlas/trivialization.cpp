#include "bgt/atlas.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace bgt::atlas {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const Vec& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v(i));
  return s + "]";
}

std::string fmt(const Mat& m) {
  std::string s = "[";
  for (Eigen::Index j = 0; j < m.cols(); ++j) s += (j ? "," : "") + fmt(Vec(m.col(j)));
  return s + "]";
}

// True when d(p, q) is certainly >= bound.
bool certainly_far(const Space& s, const Point& p, const Point& q, double bound) {
  return s.distance_lower_bound(p, q) >= bound;
}

Mat orthonormal_frame(const Space& s, const ChartPoint& c) {
  const Mat g = s.chart(c.chart).map().metric(c.x);
  return geometry::gram_schmidt(g, Mat::Identity(s.dim(), s.dim()), s.dim());
}

// Bump value chi(|x| / scale) with |x| the distance from the chart center.
double radial_bump(const Space& s, const GeodesicChartMap& map, const Point& center,
                   const Point& p, double scale) {
  if (certainly_far(s, p, center, 1.5 * scale)) return 0.0;
  if (auto d = s.exact_distance(p, center)) return bump(*d / scale);
  if (s.distance_upper_bound(center, p) <= scale) return 1.0;
  auto x = map.inverse(p);
  if (!x) return 0.0;
  return bump(x->norm() / scale);
}

// Membership in a geodesic ball of radius r < r_M, deciding by distance bounds first.
bool in_ball(const Space& s, const Chart& chart, const Point& center, const Point& p, double r) {
  if (certainly_far(s, p, center, r)) return false;
  if (s.distance_upper_bound(center, p) < r) return true;
  return chart.coordinates(p).has_value();
}

int count_within(const Space& s, const std::vector<Point>& pts, double bound) {
  int best = 0;
  for (const Point& a : pts) {
    int c = 0;
    for (const Point& b : pts)
      if (!certainly_far(s, a, b, bound) && flows::distance(s, a, b) < bound) ++c;
    best = std::max(best, c);
  }
  return best;
}

}  // namespace

const char* to_string(TrivializationKind kind) {
  switch (kind) {
    case TrivializationKind::geodesic: return "geodesic";
    case TrivializationKind::fermi: return "fermi";
    case TrivializationKind::lifted: return "lifted";
    case TrivializationKind::corrupted: return "corrupted";
  }
  return "unknown";
}

Mat pullback_metric(const Space& space, const std::function<Point(const Vec&)>& forward,
                    const Vec& x, double step) {
  const ChartPoint ref = space.locate_or_throw(forward(x));
  const Chart& rc = space.chart(ref.chart);
  const Mat j = geometry::jacobian(
      [&](const Vec& y) -> Vec {
        auto z = rc.inverse(forward(y));
        if (!z) throw Error(ErrorKind::chart_evaluation_failure, "pullback left the reference chart");
        return *z;
      },
      x, step);
  return j.transpose() * rc.map().metric(ref.x) * j;
}

// --- GeodesicChartMap --------------------------------------------------------

GeodesicChartMap::GeodesicChartMap(const Space* space, ChartPoint center, Mat frame)
    : space_(space), center_(std::move(center)), frame_(std::move(frame)) {
  const Mat g = space_->chart(center_.chart).map().metric(center_.x);
  frame_inv_ = frame_.transpose() * g;
}

Point GeodesicChartMap::forward(const Vec& x) const {
  return flows::chart_exp(*space_, center_, frame_ * x);
}

std::optional<Vec> GeodesicChartMap::inverse(const Point& p) const {
  auto v = flows::chart_log(*space_, center_, p);
  if (!v) return std::nullopt;
  return Vec(frame_inv_ * *v);
}

Mat GeodesicChartMap::metric(const Vec& x) const {
  return pullback_metric(*space_, [this](const Vec& y) { return forward(y); }, x);
}

// --- FermiChartMap ------------------------------------------------------------

FermiChartMap::FermiChartMap(const Submanifold* sub, ChartPoint center, Mat tangent_frame)
    : sub_(sub), center_(std::move(center)), lambda_(std::move(tangent_frame)) {
  const Mat gn = sub_->chart(center_.chart).map().metric(center_.x);
  lambda_inv_ = lambda_.transpose() * gn;
  const flows::NormalFrame f = flows::normal_frame(*sub_, center_);
  reference_ = flows::ambient_jacobian(sub_->ambient_space(), f.m) * f.normal;
}

flows::NormalFrame FermiChartMap::frame_at(const Point& q) const {
  return flows::aligned_normal_frame(*sub_, sub_->locate_or_throw(q), reference_);
}

Point FermiChartMap::forward(const Vec& tx) const {
  const int k = sub_->dim();
  const int c = sub_->codim();
  const Point q = flows::chart_exp(*sub_, center_, lambda_ * Vec(tx.tail(k)));
  const flows::NormalFrame f = frame_at(q);
  return flows::chart_exp(sub_->ambient_space(), f.m, f.normal * Vec(tx.head(c)));
}

std::optional<Vec> FermiChartMap::inverse(const Point& p) const {
  const int k = sub_->dim();
  const int c = sub_->codim();
  const Point q = sub_->foot(p);
  auto v = flows::chart_log(*sub_, center_, q);
  if (!v) return std::nullopt;
  const flows::NormalFrame f = frame_at(q);
  const Space& m = sub_->ambient_space();
  auto w = flows::chart_log(m, f.m, p);
  if (!w) return std::nullopt;
  const Mat g = m.chart(f.m.chart).map().metric(f.m.x);
  Vec tx(c + k);
  tx.head(c) = f.normal.transpose() * g * *w;
  tx.tail(k) = lambda_inv_ * *v;
  return tx;
}

Mat FermiChartMap::metric(const Vec& tx) const {
  return pullback_metric(sub_->ambient_space(), [this](const Vec& y) { return forward(y); }, tx);
}

// --- Trivialization -----------------------------------------------------------

double Trivialization::pulled_cutoff(int alpha, const Vec& x) const {
  const Chart& c = chart(alpha);
  if (!c.contains(x)) return 0.0;
  return cutoff(alpha, c.forward(x));
}

double Trivialization::cutoff(int alpha, const Point& p) const {
  CutoffList list;
  cutoffs(p, list);
  for (const auto& [a, h] : list)
    if (a == alpha) return h;
  return 0.0;
}

bool Trivialization::in_domain(int alpha, const Point& p) const {
  return chart(alpha).coordinates(p).has_value();
}

std::string Trivialization::manifest_id() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : manifest()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// --- GeodesicTrivialization -----------------------------------------------------

GeodesicTrivialization::GeodesicTrivialization(std::shared_ptr<const Space> space,
                                               std::vector<Point> centers, double domain_radius,
                                               double bump_scale, double sep, std::uint64_t seed)
    : space_(std::move(space)), centers_(std::move(centers)), domain_radius_(domain_radius),
      bump_scale_(bump_scale), sep_(sep), seed_(seed) {
  if (1.5 * bump_scale_ >= domain_radius_)
    throw Error(ErrorKind::invalid_argument, "bump support must stay inside the chart ball");
  const int n = space_->dim();
  for (size_t a = 0; a < centers_.size(); ++a) {
    const ChartPoint c = space_->locate_or_throw(centers_[a]);
    auto map = std::make_shared<GeodesicChartMap>(space_.get(), c, orthonormal_frame(*space_, c));
    maps_.push_back(map);
    const auto dom = geometry::Domain::ball(Vec::Zero(n), domain_radius_);
    const auto safe = geometry::Domain::ball(Vec::Zero(n), 0.9 * domain_radius_);
    charts_.emplace_back("geo-" + std::to_string(a), dom, safe, map, geometry::ChartKind::geodesic);
  }
  multiplicity_ = count_within(*space_, centers_, 2.0 * domain_radius_);
}

bool GeodesicTrivialization::in_domain(int alpha, const Point& p) const {
  return in_ball(*space_, chart(alpha), center(alpha), p, domain_radius_);
}

void GeodesicTrivialization::raw_bumps(const Point& p, CutoffList& out) const {
  out.clear();
  for (size_t a = 0; a < centers_.size(); ++a) {
    const double b = radial_bump(*space_, *maps_[a], centers_[a], p, bump_scale_);
    if (b > 0.0) out.emplace_back(static_cast<int>(a), b);
  }
}

void GeodesicTrivialization::cutoffs(const Point& p, CutoffList& out) const {
  raw_bumps(p, out);
  double sum = 0.0;
  for (const auto& e : out) sum += e.second;
  if (sum <= 0.0) {
    out.clear();
    return;
  }
  for (auto& e : out) e.second /= sum;
}

double GeodesicTrivialization::pulled_cutoff(int alpha, const Vec& x) const {
  const double r = x.norm();
  if (!(r < 1.5 * bump_scale_) || !charts_[static_cast<size_t>(alpha)].contains(x)) return 0.0;
  const double own = bump(r / bump_scale_);
  CutoffList list;
  raw_bumps(maps_[static_cast<size_t>(alpha)]->forward(x), list);
  double sum = own;
  for (const auto& [a, b] : list)
    if (a != alpha) sum += b;
  return own / sum;
}

Vec GeodesicTrivialization::support_half_width(int) const {
  return Vec::Constant(space_->dim(), 1.5 * bump_scale_);
}

std::string GeodesicTrivialization::manifest() const {
  std::ostringstream os;
  os << "geodesic space=" << space_->name() << " dim=" << space_->dim()
     << " radius=" << fmt(domain_radius_) << " bump=" << fmt(bump_scale_) << " sep=" << fmt(sep_)
     << " seed=" << seed_ << " charts=" << centers_.size() << "\n";
  for (size_t a = 0; a < centers_.size(); ++a)
    os << a << " center=" << fmt(centers_[a]) << " ref=" << maps_[a]->center().chart
       << " frame=" << fmt(maps_[a]->frame()) << "\n";
  return os.str();
}

std::shared_ptr<GeodesicTrivialization> build_geodesic_trivialization(
    std::shared_ptr<const Space> space, double r, std::uint64_t seed, const NetOptions& opts) {
  if (!(r > 0.0 && r < space->injectivity_radius()))
    throw Error(ErrorKind::radius_exceeds_injectivity_radius,
                "r = " + fmt(r) + " must lie in (0, r_M = " + fmt(space->injectivity_radius()) + ")");
  NetOptions o = opts;
  if (!space->compact() && o.inflate == 0.0) o.inflate = r;
  auto centers = build_separated_net(*space, 0.5 * r, seed, o);
  return std::make_shared<GeodesicTrivialization>(std::move(space), std::move(centers), r, 0.5 * r,
                                                  0.5 * r, seed);
}

// --- FermiTrivialization --------------------------------------------------------

double fermi_radius(const Submanifold& sub) {
  const double rn = sub.injectivity_radius();
  const double rm = sub.ambient_space().injectivity_radius();
  const double rc = sub.collar_radius();
  if (!(rn > 0.0 && rm > 0.0 && rc > 0.0))
    throw Error(ErrorKind::no_collar_metadata, sub.name() + ": r_N, r_M and collar radius required");
  return std::min({0.5 * rn, 0.25 * rm, 0.5 * rc});
}

FermiTrivialization::FermiTrivialization(std::shared_ptr<const Submanifold> sub, double radius,
                                         std::uint64_t seed, const NetOptions& opts)
    : sub_(std::move(sub)), radius_(radius), seed_(seed) {
  const double r = radius_;
  const Space& m = sub_->ambient_space();
  const int n = m.dim();
  const int c = sub_->codim();

  NetOptions nb = opts;
  nb.inflate = sub_->compact() ? 0.0 : 2.0 * r + opts.inflate;
  auto n_centers = build_separated_net(*sub_, 0.5 * r, seed, nb);
  boundary_ = std::make_shared<GeodesicTrivialization>(sub_, std::move(n_centers), 2.0 * r,
                                                       0.5 * r, 0.5 * r, seed);
  for (int a = 0; a < boundary_->size(); ++a) {
    const GeodesicChartMap& nm = boundary_->chart_map(a);
    auto fm = std::make_shared<FermiChartMap>(sub_.get(), nm.center(), nm.frame());
    fermi_maps_.push_back(fm);
    const auto dom = geometry::Domain::split_ball(c, 2.0 * r, 2.0 * r, n);
    auto safe = dom;
    safe.radii *= 0.9;
    charts_.emplace_back("fermi-" + std::to_string(a), dom, safe, fm, geometry::ChartKind::fermi);
  }

  NetOptions nf = opts;
  nf.inflate = m.compact() ? 0.0 : r + opts.inflate;
  const Submanifold* s = sub_.get();
  far_centers_ = build_separated_net(m, 0.5 * r, seed + 1, nf,
                                     [s, r](const Point& p) { return s->distance_to(p) >= r; });
  for (size_t b = 0; b < far_centers_.size(); ++b) {
    const ChartPoint cp = m.locate_or_throw(far_centers_[b]);
    auto map = std::make_shared<GeodesicChartMap>(&m, cp, orthonormal_frame(m, cp));
    far_maps_.push_back(map);
    charts_.emplace_back("far-" + std::to_string(b), geometry::Domain::ball(Vec::Zero(n), r),
                         geometry::Domain::ball(Vec::Zero(n), 0.9 * r), map,
                         geometry::ChartKind::geodesic);
  }
  multiplicity_ = boundary_->multiplicity_bound() + count_within(m, far_centers_, 2.0 * r);
}

Point FermiTrivialization::center(int alpha) const {
  if (alpha < near_count()) return sub_->include(boundary_->center(alpha));
  return far_centers_.at(static_cast<size_t>(alpha - near_count()));
}

bool FermiTrivialization::in_domain(int alpha, const Point& p) const {
  if (alpha >= near_count()) return in_ball(space(), chart(alpha), center(alpha), p, radius_);
  // |t| is the distance to N and |x| the N-distance of the foot from the center.
  const double d = sub_->distance_to(p);
  if (!(d < 2.0 * radius_ && d < sub_->collar_radius())) return false;
  return boundary_->in_domain(alpha, sub_->foot(p));
}

double FermiTrivialization::normal_cutoff(const Vec& t) const { return bump(t.norm() / radius_); }

void FermiTrivialization::cutoffs(const Point& p, CutoffList& out) const {
  out.clear();
  const Space& m = sub_->ambient_space();
  const double r = radius_;
  double near_sum = 0.0;
  const double d = sub_->distance_to(p);
  // Inside the collar |t| of the Fermi coordinates is the distance to N.
  if (d < 1.5 * r && d < sub_->collar_radius()) {
    const double psi = bump(d / r);
    if (psi > 0.0) {
      CutoffList nb;
      boundary_->cutoffs(sub_->foot(p), nb);
      for (const auto& [a, h] : nb) {
        out.emplace_back(a, psi * h);
        near_sum += psi * h;
      }
    }
  }
  const double rest = 1.0 - near_sum;
  if (!(rest > 0.0)) return;
  const size_t first = out.size();
  double sum = 0.0;
  for (size_t b = 0; b < far_centers_.size(); ++b) {
    const double v = radial_bump(m, *far_maps_[b], far_centers_[b], p, 0.5 * r);
    if (v > 0.0) {
      out.emplace_back(near_count() + static_cast<int>(b), v);
      sum += v;
    }
  }
  if (sum <= 0.0) {
    out.resize(first);
    return;
  }
  for (size_t i = first; i < out.size(); ++i) out[i].second = rest * out[i].second / sum;
}

double FermiTrivialization::pulled_cutoff(int alpha, const Vec& x) const {
  if (alpha >= near_count()) return Trivialization::pulled_cutoff(alpha, x);
  const Chart& ch = chart(alpha);
  if (!ch.contains(x)) return 0.0;
  const int c = sub_->codim();
  const double psi = normal_cutoff(x.head(c));
  if (psi == 0.0) return 0.0;
  return psi * boundary_->pulled_cutoff(alpha, x.tail(sub_->dim()));
}

Vec FermiTrivialization::support_half_width(int alpha) const {
  const int n = sub_->ambient_space().dim();
  if (alpha >= near_count()) return Vec::Constant(n, 0.75 * radius_);
  Vec w(n);
  w.head(sub_->codim()).setConstant(1.5 * radius_);
  w.tail(sub_->dim()).setConstant(0.75 * radius_);
  return w;
}

double FermiTrivialization::complement_clearance() const {
  double best = std::numeric_limits<double>::infinity();
  for (const Point& p : far_centers_) best = std::min(best, sub_->distance_to(p) - radius_);
  return best;
}

std::string FermiTrivialization::manifest() const {
  std::ostringstream os;
  os << "fermi space=" << sub_->ambient_space().name() << " submanifold=" << sub_->name()
     << " R=" << fmt(radius_) << " seed=" << seed_ << " near=" << near_count()
     << " far=" << far_centers_.size() << "\n";
  os << boundary_->manifest();
  for (size_t b = 0; b < far_centers_.size(); ++b)
    os << "far " << b << " center=" << fmt(far_centers_[b]) << " frame=" << fmt(far_maps_[b]->frame())
       << "\n";
  return os.str();
}

std::shared_ptr<FermiTrivialization> build_fermi_trivialization(
    std::shared_ptr<const Submanifold> sub, std::uint64_t seed, const NetOptions& opts) {
  const double r = fermi_radius(*sub);
  return std::make_shared<FermiTrivialization>(std::move(sub), r, seed, opts);
}

// --- corrupted fixture -------------------------------------------------------------

namespace {

class CorruptedTrivialization : public Trivialization {
 public:
  explicit CorruptedTrivialization(std::shared_ptr<const Trivialization> base)
      : base_(std::move(base)) {}
  TrivializationKind kind() const override { return TrivializationKind::corrupted; }
  const Space& space() const override { return base_->space(); }
  int size() const override { return base_->size(); }
  const Chart& chart(int alpha) const override { return base_->chart(alpha); }
  Point center(int alpha) const override { return base_->center(alpha); }
  void cutoffs(const Point& p, CutoffList& out) const override {
    base_->cutoffs(p, out);
    for (auto& [a, h] : out) {
      auto x = base_->chart(a).inverse(p);
      if (x && (*x)(0) < 0.0) h *= 0.5;
    }
  }
  double pulled_cutoff(int alpha, const Vec& x) const override {
    return base_->pulled_cutoff(alpha, x) * (x(0) < 0.0 ? 0.5 : 1.0);
  }
  Vec support_half_width(int alpha) const override { return base_->support_half_width(alpha); }
  double domain_reach(int alpha) const override { return base_->domain_reach(alpha); }
  int multiplicity_bound() const override { return base_->multiplicity_bound(); }
  double radius() const override { return base_->radius(); }
  std::string manifest() const override { return "corrupted\n" + base_->manifest(); }

 private:
  std::shared_ptr<const Trivialization> base_;
};

}  // namespace

std::shared_ptr<Trivialization> make_corrupted(std::shared_ptr<const Trivialization> base) {
  return std::make_shared<CorruptedTrivialization>(std::move(base));
}

}  // namespace bgt::atlas
