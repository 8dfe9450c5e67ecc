#include "bgt/presets.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace bgt::geometry {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSafeShrink = 0.9;

double wrap(double a, double period) {
  a = std::fmod(a, period);
  if (a > 0.5 * period) a -= period;
  if (a <= -0.5 * period) a += period;
  return a;
}

double residue(double a, double period) {
  double r = std::fmod(a, period);
  if (r < 0) r += period;
  if (r >= period) r -= period;
  return r;
}

Domain shrink(const Domain& d, double f) {
  Domain s = d;
  s.radii *= f;
  return s;
}

double poly(const std::vector<double>& c, double u, int deriv) {
  double acc = 0.0;
  for (size_t i = c.size(); i-- > static_cast<size_t>(deriv);) {
    double coef = c[i];
    for (int d = 0; d < deriv; ++d) coef *= static_cast<double>(i - static_cast<size_t>(d));
    acc = acc * u + coef;
  }
  return acc;
}

// --- euclidean -----------------------------------------------------------

class IdentityMap : public ChartMap {
 public:
  explicit IdentityMap(int n) : n_(n) {}
  Point forward(const Vec& x) const override { return x; }
  std::optional<Vec> inverse(const Point& p) const override { return Vec(p); }
  Mat metric(const Vec&) const override { return Mat::Identity(n_, n_); }
  bool has_christoffel() const override { return true; }
  Christoffel christoffel(const Vec&) const override { return Christoffel(n_); }

 private:
  int n_;
};

class Euclidean : public Space {
 public:
  explicit Euclidean(int n) : Space(n) {
    const Domain d = Domain::box(Vec::Zero(n), Vec::Constant(n, 1e3));
    add_chart(Chart("euclid", d, shrink(d, kSafeShrink), std::make_shared<IdentityMap>(n),
                    ChartKind::generic));
    set_injectivity_radius(4.0);
  }
  std::string name() const override { return "euclidean"; }
  Vec ambient(const Point& p) const override { return p; }
  bool ambient_chord_bound() const override { return true; }
  std::optional<Point> exact_exp(const ChartPoint& b, const Vec& v) const override {
    return Point(b.x + v);
  }
  std::optional<Vec> exact_log(const ChartPoint& b, const Point& q) const override {
    return Vec(q - b.x);
  }
  std::optional<double> exact_distance(const Point& p, const Point& q) const override {
    return (p - q).norm();
  }
  bool compact() const override { return false; }
  Point from_unit(const Vec& u, double inflate) const override {
    const double w = kHalf + inflate;
    return ((2.0 * u.array() - 1.0) * w).matrix();
  }
  bool in_region(const Point& p, double inflate) const override {
    return p.cwiseAbs().maxCoeff() <= kHalf + inflate;
  }

 private:
  static constexpr double kHalf = 2.0;
};

// --- flat torus ----------------------------------------------------------

class TorusMap : public ChartMap {
 public:
  TorusMap(Vec center) : center_(std::move(center)) {}
  Point forward(const Vec& x) const override {
    Point p(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) p(i) = residue(x(i), 1.0);
    return p;
  }
  std::optional<Vec> inverse(const Point& p) const override {
    Vec x(p.size());
    for (Eigen::Index i = 0; i < p.size(); ++i) x(i) = center_(i) + wrap(p(i) - center_(i), 1.0);
    return x;
  }
  Mat metric(const Vec& x) const override { return Mat::Identity(x.size(), x.size()); }
  bool has_christoffel() const override { return true; }
  Christoffel christoffel(const Vec& x) const override {
    return Christoffel(static_cast<int>(x.size()));
  }

 private:
  Vec center_;
};

class FlatTorus : public Space {
 public:
  explicit FlatTorus(int n) : Space(n) {
    const int count = 1 << n;
    for (int m = 0; m < count; ++m) {
      Vec c(n);
      std::string id = "torus";
      for (int i = 0; i < n; ++i) {
        c(i) = (m >> i) & 1 ? 0.5 : 0.0;
        id += (m >> i) & 1 ? "h" : "0";
      }
      const Domain d = Domain::box(c, Vec::Constant(n, 0.375));
      add_chart(Chart(id, d, shrink(d, kSafeShrink), std::make_shared<TorusMap>(c),
                      ChartKind::generic));
    }
    set_injectivity_radius(0.5);
  }
  std::string name() const override { return "flat-torus"; }
  Point canonical(const Point& p) const override {
    Point q(p.size());
    for (Eigen::Index i = 0; i < p.size(); ++i) q(i) = residue(p(i), 1.0);
    return q;
  }
  Vec ambient(const Point& p) const override {
    Vec a(2 * p.size());
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      a(2 * i) = std::cos(2 * kPi * p(i)) / (2 * kPi);
      a(2 * i + 1) = std::sin(2 * kPi * p(i)) / (2 * kPi);
    }
    return a;
  }
  bool ambient_chord_bound() const override { return true; }
  std::optional<Point> exact_exp(const ChartPoint& b, const Vec& v) const override {
    return canonical(b.x + v);
  }
  std::optional<Vec> exact_log(const ChartPoint& b, const Point& q) const override {
    Vec v(q.size());
    for (Eigen::Index i = 0; i < q.size(); ++i) v(i) = wrap(q(i) - b.x(i), 1.0);
    return v;
  }
  std::optional<double> exact_distance(const Point& p, const Point& q) const override {
    double s = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) s += std::pow(wrap(p(i) - q(i), 1.0), 2);
    return std::sqrt(s);
  }
  bool compact() const override { return true; }
  Point from_unit(const Vec& u, double) const override { return canonical(u); }
  bool in_region(const Point&, double) const override { return true; }
};

// --- sphere --------------------------------------------------------------

// Polar chart (theta, phi) about a rotated axis: p = Q (sin t cos f, sin t sin f, cos t).
class PolarMap : public ChartMap {
 public:
  PolarMap(Eigen::Matrix3d q, double phi_center) : q_(std::move(q)), center_(phi_center) {}

  Point forward(const Vec& x) const override {
    const double st = std::sin(x(0)), ct = std::cos(x(0));
    const Eigen::Vector3d s(st * std::cos(x(1)), st * std::sin(x(1)), ct);
    return Point(q_ * s);
  }
  std::optional<Vec> inverse(const Point& p) const override {
    const Eigen::Vector3d s = q_.transpose() * Eigen::Vector3d(p(0), p(1), p(2));
    const double theta = std::atan2(std::hypot(s(0), s(1)), s(2));
    const double phi = center_ + wrap(std::atan2(s(1), s(0)) - center_, 2 * kPi);
    return make_vec({theta, phi});
  }
  Mat metric(const Vec& x) const override {
    Mat g = Mat::Zero(2, 2);
    g(0, 0) = 1.0;
    g(1, 1) = std::pow(std::sin(x(0)), 2);
    return g;
  }
  bool has_christoffel() const override { return true; }
  Christoffel christoffel(const Vec& x) const override {
    Christoffel c(2);
    const double st = std::sin(x(0)), ct = std::cos(x(0));
    c(0, 1, 1) = -st * ct;
    c(1, 0, 1) = ct / st;
    c(1, 1, 0) = ct / st;
    return c;
  }
  // Columns d p / d theta, d p / d phi in R^3.
  Eigen::Matrix<double, 3, 2> tangent(const Vec& x) const {
    const double st = std::sin(x(0)), ct = std::cos(x(0));
    const double sf = std::sin(x(1)), cf = std::cos(x(1));
    Eigen::Matrix<double, 3, 2> j;
    j.col(0) = q_ * Eigen::Vector3d(ct * cf, ct * sf, -st);
    j.col(1) = q_ * Eigen::Vector3d(-st * sf, st * cf, 0.0);
    return j;
  }

 private:
  Eigen::Matrix3d q_;
  double center_;
};

class Sphere2 : public Space {
 public:
  Sphere2() : Space(2) {
    Eigen::Matrix3d about_x;
    about_x << 0, 0, 1, 1, 0, 0, 0, 1, 0;
    const std::array<std::pair<const char*, Eigen::Matrix3d>, 2> axes{
        {{"z", Eigen::Matrix3d::Identity()}, {"x", about_x}}};
    for (const auto& [name, q] : axes) {
      for (double c : {0.0, kPi}) {
        const Domain d = Domain::box(make_vec({kPi / 2, c}), make_vec({kPi / 2 - 0.25, 2.0}));
        auto map = std::make_shared<PolarMap>(q, c);
        maps_.push_back(map);
        add_chart(Chart(std::string("polar-") + name + (c == 0.0 ? "0" : "pi"), d,
                        shrink(d, kSafeShrink), map, ChartKind::generic));
      }
    }
    set_injectivity_radius(kPi);
  }
  std::string name() const override { return "sphere2"; }
  Point canonical(const Point& p) const override { return p / p.norm(); }
  Vec ambient(const Point& p) const override { return p; }
  bool ambient_chord_bound() const override { return true; }

  std::optional<Point> exact_exp(const ChartPoint& b, const Vec& v) const override {
    const auto& map = *maps_.at(static_cast<size_t>(b.chart));
    const Eigen::Vector3d p = as3(map.forward(b.x));
    const Eigen::Vector3d t = map.tangent(b.x) * Eigen::Vector2d(v(0), v(1));
    const double a = t.norm();
    if (a == 0.0) return Point(p);
    const Eigen::Vector3d q = std::cos(a) * p + std::sin(a) * t / a;
    return Point(q.normalized());
  }
  std::optional<Vec> exact_log(const ChartPoint& b, const Point& qq) const override {
    const auto& map = *maps_.at(static_cast<size_t>(b.chart));
    const Eigen::Vector3d p = as3(map.forward(b.x));
    const Eigen::Vector3d q = as3(qq);
    const double c = p.dot(q);
    const Eigen::Vector3d w = q - c * p;
    const double s = w.norm();
    if (s == 0.0) {
      if (c > 0) return Vec::Zero(2);
      return std::nullopt;
    }
    const Eigen::Vector3d t = std::atan2(s, c) * w / s;
    const Eigen::Matrix<double, 3, 2> j = map.tangent(b.x);
    const Eigen::Vector2d v = (j.transpose() * j).ldlt().solve(j.transpose() * t);
    return make_vec({v(0), v(1)});
  }
  std::optional<double> exact_distance(const Point& p, const Point& q) const override {
    const Eigen::Vector3d a = as3(p), b = as3(q);
    return std::atan2(a.cross(b).norm(), a.dot(b));
  }
  bool compact() const override { return true; }
  Point from_unit(const Vec& u, double) const override {
    const double z = 1.0 - 2.0 * u(0);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double f = 2 * kPi * u(1);
    return make_vec({r * std::cos(f), r * std::sin(f), z});
  }
  bool in_region(const Point&, double) const override { return true; }

 private:
  static Eigen::Vector3d as3(const Vec& v) { return Eigen::Vector3d(v(0), v(1), v(2)); }
  std::vector<std::shared_ptr<const PolarMap>> maps_;
};

// --- hyperbolic plane ------------------------------------------------------

class HalfPlaneMap : public ChartMap {
 public:
  Point forward(const Vec& x) const override { return x; }
  std::optional<Vec> inverse(const Point& p) const override { return Vec(p); }
  Mat metric(const Vec& x) const override {
    return Mat::Identity(2, 2) / (x(1) * x(1));
  }
  bool has_christoffel() const override { return true; }
  Christoffel christoffel(const Vec& x) const override {
    Christoffel c(2);
    const double iy = 1.0 / x(1);
    c(0, 0, 1) = -iy;
    c(0, 1, 0) = -iy;
    c(1, 0, 0) = iy;
    c(1, 1, 1) = -iy;
    return c;
  }
};

class Hyperbolic2 : public Space {
 public:
  Hyperbolic2() : Space(2) {
    const Domain d = Domain::box(make_vec({0.0, 20.0025}), make_vec({40.0, 19.9975}));
    const Domain safe = Domain::box(make_vec({0.0, 15.005}), make_vec({30.0, 14.995}));
    add_chart(Chart("half-plane", d, safe, std::make_shared<HalfPlaneMap>(), ChartKind::generic));
    set_injectivity_radius(2.0);
  }
  std::string name() const override { return "hyperbolic2"; }
  // Hyperboloid model in Minkowski space (time coordinate first).
  Vec ambient(const Point& p) const override {
    const double x = p(0), y = p(1), r2 = x * x + y * y;
    return make_vec({(r2 + 1) / (2 * y), x / y, (r2 - 1) / (2 * y)});
  }
  std::optional<Point> exact_exp(const ChartPoint& b, const Vec& v) const override {
    const Eigen::Vector3d x = as3(ambient(b.x));
    const Eigen::Vector3d t = tangent(b.x) * Eigen::Vector2d(v(0), v(1));
    const double a = std::sqrt(std::max(0.0, minkowski(t, t)));
    const Eigen::Vector3d y = a == 0.0 ? x : Eigen::Vector3d(std::cosh(a) * x + std::sinh(a) * t / a);
    return from_hyperboloid(y);
  }
  std::optional<Vec> exact_log(const ChartPoint& b, const Point& q) const override {
    const Eigen::Vector3d x = as3(ambient(b.x));
    const Eigen::Vector3d y = as3(ambient(q));
    const double c = -minkowski(x, y);
    const Eigen::Vector3d w = y - c * x;
    const double s = std::sqrt(std::max(0.0, minkowski(w, w)));
    if (s == 0.0) return Vec::Zero(2);
    const Eigen::Vector3d t = std::asinh(s) * w / s;
    const Eigen::Matrix<double, 3, 2> j = tangent(b.x);
    const Eigen::Vector2d v = (j.transpose() * j).ldlt().solve(j.transpose() * t);
    return make_vec({v(0), v(1)});
  }
  std::optional<double> exact_distance(const Point& p, const Point& q) const override {
    const double num = std::pow(p(0) - q(0), 2) + std::pow(p(1) - q(1), 2);
    return 2.0 * std::asinh(std::sqrt(num / (4.0 * p(1) * q(1))));
  }
  bool compact() const override { return false; }
  Point from_unit(const Vec& u, double inflate) const override {
    const double lo = std::log(0.5) - inflate, hi = std::log(2.0) + inflate;
    const double w = half_width(inflate);
    return make_vec({(2 * u(0) - 1) * w, std::exp(lo + (hi - lo) * u(1))});
  }
  bool in_region(const Point& p, double inflate) const override {
    return std::abs(p(0)) <= half_width(inflate) && p(1) >= 0.5 * std::exp(-inflate) &&
           p(1) <= 2.0 * std::exp(inflate);
  }

 private:
  static double half_width(double inflate) { return 1.0 + 4.0 * std::sinh(inflate) * std::exp(inflate); }
  static Eigen::Vector3d as3(const Vec& v) { return Eigen::Vector3d(v(0), v(1), v(2)); }
  static double minkowski(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
    return -a(0) * b(0) + a(1) * b(1) + a(2) * b(2);
  }
  static Point from_hyperboloid(const Eigen::Vector3d& y) {
    const double h = 1.0 / (y(0) - y(2));
    return make_vec({y(1) * h, h});
  }
  static Eigen::Matrix<double, 3, 2> tangent(const Vec& p) {
    const double x = p(0), y = p(1);
    Eigen::Matrix<double, 3, 2> j;
    j.col(0) << x / y, 1.0 / y, x / y;
    j.col(1) << (y * y - x * x - 1) / (2 * y * y), -x / (y * y), (y * y - x * x + 1) / (2 * y * y);
    return j;
  }
};

// --- surface of revolution -------------------------------------------------

class RevolutionMap : public ChartMap {
 public:
  RevolutionMap(const Profile* profile, double center) : profile_(profile), center_(center) {}
  Point forward(const Vec& x) const override { return make_vec({x(0), residue(x(1), 2 * kPi)}); }
  std::optional<Vec> inverse(const Point& p) const override {
    return make_vec({p(0), center_ + wrap(p(1) - center_, 2 * kPi)});
  }
  Mat metric(const Vec& x) const override {
    const double u = x(0);
    Mat g = Mat::Zero(2, 2);
    g(0, 0) = std::pow(profile_->radius_d(u), 2) + std::pow(profile_->height_d(u), 2);
    g(1, 1) = std::pow(profile_->radius(u), 2);
    return g;
  }
  bool has_christoffel() const override { return true; }
  Christoffel christoffel(const Vec& x) const override {
    const double u = x(0);
    const double r = profile_->radius(u), rd = profile_->radius_d(u);
    const double zd = profile_->height_d(u);
    const double e = rd * rd + zd * zd;
    const double ed = 2 * rd * profile_->radius_dd(u) + 2 * zd * profile_->height_dd(u);
    Christoffel c(2);
    c(0, 0, 0) = ed / (2 * e);
    c(0, 1, 1) = -r * rd / e;
    c(1, 0, 1) = rd / r;
    c(1, 1, 0) = rd / r;
    return c;
  }

 private:
  const Profile* profile_;
  double center_;
};

class Revolution : public Space {
 public:
  explicit Revolution(const Profile& profile) : Space(2), profile_(profile) {
    // Charts extend in u as far as the profile stays a regular curve away from
    // the axis, up to kUMax.
    double u_max = 0.0;
    for (double u = 0.0; u <= kUMax; u += 0.005) {
      if (!(profile_.radius(u) > 0.05 && profile_.radius(-u) > 0.05 && speed2(u) > 1e-6 &&
            speed2(-u) > 1e-6))
        break;
      u_max = u;
    }
    if (u_max < 2.5)
      throw Error(ErrorKind::invalid_argument,
                  "profile must have r > 0 and nonzero speed on [-2.5, 2.5]");
    for (int k = 0; k < 3; ++k) {
      const double c = 2 * kPi * k / 3;
      const Domain d = Domain::box(make_vec({0.0, c}), make_vec({u_max, 2.0}));
      add_chart(Chart("revolution-" + std::to_string(k), d, shrink(d, kSafeShrink),
                      std::make_shared<RevolutionMap>(&profile_, c), ChartKind::generic));
    }
    set_injectivity_radius(kPi * profile_.radius(0.0));
  }
  std::string name() const override { return "surface-of-revolution"; }
  const Profile& profile() const { return profile_; }
  Point canonical(const Point& p) const override {
    return make_vec({p(0), residue(p(1), 2 * kPi)});
  }
  Vec ambient(const Point& p) const override {
    const double r = profile_.radius(p(0));
    return make_vec({r * std::cos(p(1)), r * std::sin(p(1)), poly(profile_.z, p(0), 0)});
  }
  bool ambient_chord_bound() const override { return true; }

  bool compact() const override { return false; }
  Point from_unit(const Vec& u, double inflate) const override {
    return make_vec({(2 * u(0) - 1) * (1.0 + inflate), 2 * kPi * u(1)});
  }
  bool in_region(const Point& p, double inflate) const override {
    return std::abs(p(0)) <= 1.0 + inflate;
  }

  double speed2(double u) const {
    return std::pow(profile_.radius_d(u), 2) + std::pow(profile_.height_d(u), 2);
  }
  // Signed meridian length from u0 to u1.
  double arclength(double u0, double u1) const {
    static const std::array<double, 8> x{-0.9602898564975363, -0.7966664774136267,
                                         -0.5255324099163290, -0.1834346424956498,
                                         0.1834346424956498,  0.5255324099163290,
                                         0.7966664774136267,  0.9602898564975363};
    static const std::array<double, 8> w{0.1012285362903763, 0.2223810344533745,
                                         0.3137066458778873, 0.3626837833783620,
                                         0.3626837833783620, 0.3137066458778873,
                                         0.2223810344533745, 0.1012285362903763};
    const int panels = 1 + static_cast<int>(std::abs(u1 - u0) / 0.25);
    const double h = (u1 - u0) / panels;
    double s = 0.0;
    for (int k = 0; k < panels; ++k) {
      const double mid = u0 + (k + 0.5) * h;
      for (size_t i = 0; i < x.size(); ++i) s += w[i] * std::sqrt(speed2(mid + 0.5 * h * x[i]));
    }
    return 0.5 * h * s;
  }

 private:
  static constexpr double kUMax = 20.0;
  Profile profile_;
};

// --- submanifolds ----------------------------------------------------------

// Intrinsic coordinate chart of a flat submanifold: s -> canonical(s).
class IntervalMap : public ChartMap {
 public:
  IntervalMap(int k, double period, double center) : k_(k), period_(period), center_(center) {}
  Point forward(const Vec& x) const override {
    if (period_ == 0.0) return x;
    Point p(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) p(i) = residue(x(i), period_);
    return p;
  }
  std::optional<Vec> inverse(const Point& p) const override {
    if (period_ == 0.0) return Vec(p);
    Vec x(p.size());
    for (Eigen::Index i = 0; i < p.size(); ++i) x(i) = center_ + wrap(p(i) - center_, period_);
    return x;
  }
  Mat metric(const Vec&) const override { return Mat::Identity(k_, k_); }

 private:
  int k_;
  double period_;
  double center_;
};

struct FlatSubmanifoldSpec {
  std::string name;
  int k = 1;
  double period = 0.0;     // 0 for a line
  double scale = 1.0;      // |d include / ds|_g, constant along N
  double chart_half = 1e3; // chart half-width for lines
  double roi_lo = -2.0, roi_hi = 2.0;
  double r_n = 1.0, collar = 1.0;
  std::function<Point(const Point&)> include;
  std::function<Point(const Point&)> foot;
  std::function<double(const Point&)> distance;
};

// Submanifold whose intrinsic parameter s has constant speed, so its own
// exponential map is s + v / scale.
class FlatSubmanifold : public Submanifold {
 public:
  FlatSubmanifold(std::shared_ptr<const Space> m, FlatSubmanifoldSpec spec)
      : Submanifold(std::move(m), spec.k), spec_(std::move(spec)) {
    const int k = spec_.k;
    if (spec_.period > 0.0) {
      if (k != 1) throw Error(ErrorKind::invalid_argument, "periodic submanifolds are curves");
      for (int c = 0; c < 3; ++c) {
        const double center = spec_.period * c / 3.0;
        const Domain d = Domain::box(make_vec({center}), make_vec({spec_.period / 3.0}));
        add_chart(Chart(spec_.name + "-" + std::to_string(c), d, shrink(d, kSafeShrink),
                        std::make_shared<InducedChartMap>(
                            this, std::make_shared<IntervalMap>(1, spec_.period, center)),
                        ChartKind::generic));
      }
    } else {
      const Domain d = Domain::box(Vec::Zero(k), Vec::Constant(k, spec_.chart_half));
      add_chart(Chart(spec_.name, d, shrink(d, kSafeShrink),
                      std::make_shared<InducedChartMap>(this,
                                                        std::make_shared<IntervalMap>(k, 0.0, 0.0)),
                      ChartKind::generic));
    }
    set_injectivity_radius(spec_.r_n);
    set_collar_radius(spec_.collar);
  }

  std::string name() const override { return spec_.name; }
  Point canonical(const Point& p) const override { return chart(0).map().forward(p); }
  Point include(const Point& q) const override { return spec_.include(q); }
  Point foot(const Point& p) const override { return canonical(spec_.foot(p)); }
  double distance_to(const Point& p) const override { return spec_.distance(p); }
  Vec ambient(const Point& q) const override { return ambient_space().ambient(include(q)); }
  bool ambient_chord_bound() const override { return ambient_space().ambient_chord_bound(); }

  std::optional<Point> exact_exp(const ChartPoint& b, const Vec& v) const override {
    return canonical(b.x + v);
  }
  std::optional<Vec> exact_log(const ChartPoint& b, const Point& q) const override {
    auto x = chart(b.chart).inverse(q);
    if (!x) return std::nullopt;
    Vec v = *x - b.x;
    if (spec_.period > 0.0) v(0) = wrap(v(0), spec_.period);
    return v;
  }
  std::optional<double> exact_distance(const Point& p, const Point& q) const override {
    Vec d = p - q;
    if (spec_.period > 0.0) d(0) = wrap(d(0), spec_.period);
    return spec_.scale * d.norm();
  }
  bool compact() const override { return spec_.period > 0.0; }
  Point from_unit(const Vec& u, double inflate) const override {
    if (spec_.period > 0.0) return canonical(u * spec_.period);
    const double pad = inflate / spec_.scale;
    return ((spec_.roi_lo - pad) + u.array() * (spec_.roi_hi - spec_.roi_lo + 2 * pad)).matrix();
  }
  bool in_region(const Point& q, double inflate) const override {
    if (spec_.period > 0.0) return true;
    const double pad = inflate / spec_.scale;
    return q.minCoeff() >= spec_.roi_lo - pad && q.maxCoeff() <= spec_.roi_hi + pad;
  }

 private:
  FlatSubmanifoldSpec spec_;
};

}  // namespace

double Profile::radius(double u) const { return poly(r, u, 0); }
double Profile::radius_d(double u) const { return poly(r, u, 1); }
double Profile::radius_dd(double u) const { return poly(r, u, 2); }
double Profile::height_d(double u) const { return poly(z, u, 1); }
double Profile::height_dd(double u) const { return poly(z, u, 2); }

std::shared_ptr<const Space> make_euclidean(int n) {
  if (n < 1 || n > 3) throw Error(ErrorKind::invalid_argument, "euclidean dimension must be 1..3");
  auto s = std::make_shared<Euclidean>(n);
  return s;
}

std::shared_ptr<const Space> make_flat_torus(int n) {
  if (n < 1 || n > 2) throw Error(ErrorKind::invalid_argument, "flat torus dimension must be 1 or 2");
  auto s = std::make_shared<FlatTorus>(n);
  s->build_transitions();
  return s;
}

std::shared_ptr<const Space> make_sphere2() {
  auto s = std::make_shared<Sphere2>();
  s->build_transitions();
  return s;
}

std::shared_ptr<const Space> make_hyperbolic2() { return std::make_shared<Hyperbolic2>(); }

std::shared_ptr<const Space> make_surface_of_revolution(const Profile& profile) {
  auto s = std::make_shared<Revolution>(profile);
  s->build_transitions();
  return s;
}

std::shared_ptr<const Submanifold> make_euclidean_subspace(std::shared_ptr<const Space> m, int k) {
  const int n = m->dim();
  if (m->name() != "euclidean" || k < 1 || k >= n)
    throw Error(ErrorKind::invalid_argument, "euclidean subspace needs 1 <= k < n on euclidean");
  FlatSubmanifoldSpec spec;
  spec.name = "euclidean-subspace";
  spec.k = k;
  spec.r_n = 4.0;
  spec.collar = 1.0;
  spec.include = [n, k](const Point& q) {
    Point p = Point::Zero(n);
    p.tail(k) = q;
    return p;
  };
  spec.foot = [k](const Point& p) { return Point(p.tail(k)); };
  spec.distance = [n, k](const Point& p) { return p.head(n - k).norm(); };
  return std::make_shared<FlatSubmanifold>(std::move(m), std::move(spec));
}

std::shared_ptr<const Submanifold> make_torus_circle(std::shared_ptr<const Space> m) {
  if (m->name() != "flat-torus" || m->dim() != 2)
    throw Error(ErrorKind::invalid_argument, "torus circle needs the flat 2-torus");
  FlatSubmanifoldSpec spec;
  spec.name = "torus-circle";
  spec.period = 1.0;
  spec.r_n = 0.5;
  spec.collar = 0.5;
  spec.include = [](const Point& q) { return make_vec({0.0, residue(q(0), 1.0)}); };
  spec.foot = [](const Point& p) { return make_vec({p(1)}); };
  spec.distance = [](const Point& p) { return std::abs(wrap(p(0), 1.0)); };
  return std::make_shared<FlatSubmanifold>(std::move(m), std::move(spec));
}

std::shared_ptr<const Submanifold> make_sphere_latitude(std::shared_ptr<const Space> m,
                                                        double theta0) {
  if (m->name() != "sphere2" || !(theta0 > 0.0 && theta0 < kPi))
    throw Error(ErrorKind::invalid_argument, "latitude needs sphere2 and 0 < theta0 < pi");
  FlatSubmanifoldSpec spec;
  spec.name = std::abs(theta0 - kPi / 2) < 1e-15 ? "equator" : "latitude";
  spec.period = 2 * kPi;
  spec.scale = std::sin(theta0);
  spec.r_n = kPi * std::sin(theta0);
  spec.collar = std::min(theta0, kPi - theta0);
  const double st = std::sin(theta0), ct = std::cos(theta0);
  spec.include = [st, ct](const Point& q) {
    return make_vec({st * std::cos(q(0)), st * std::sin(q(0)), ct});
  };
  spec.foot = [](const Point& p) { return make_vec({std::atan2(p(1), p(0))}); };
  spec.distance = [theta0](const Point& p) {
    return std::abs(std::atan2(std::hypot(p(0), p(1)), p(2)) - theta0);
  };
  return std::make_shared<FlatSubmanifold>(std::move(m), std::move(spec));
}

std::shared_ptr<const Submanifold> make_hyperbolic_geodesic(std::shared_ptr<const Space> m) {
  if (m->name() != "hyperbolic2")
    throw Error(ErrorKind::invalid_argument, "hyperbolic geodesic needs hyperbolic2");
  FlatSubmanifoldSpec spec;
  spec.name = "hyperbolic-geodesic";
  spec.chart_half = 3.5;
  spec.roi_lo = std::log(0.5);
  spec.roi_hi = std::log(2.0);
  spec.r_n = 4.0;
  spec.collar = 2.0;
  spec.include = [](const Point& q) { return make_vec({0.0, std::exp(q(0))}); };
  spec.foot = [](const Point& p) { return make_vec({0.5 * std::log(p(0) * p(0) + p(1) * p(1))}); };
  spec.distance = [](const Point& p) { return std::asinh(std::abs(p(0)) / p(1)); };
  return std::make_shared<FlatSubmanifold>(std::move(m), std::move(spec));
}

std::shared_ptr<const Submanifold> make_parallel(std::shared_ptr<const Space> m, double u0) {
  auto rev = std::dynamic_pointer_cast<const Revolution>(m);
  if (!rev) throw Error(ErrorKind::invalid_argument, "parallel needs a surface of revolution");
  FlatSubmanifoldSpec spec;
  spec.name = "parallel";
  spec.period = 2 * kPi;
  spec.scale = rev->profile().radius(u0);
  spec.r_n = kPi * spec.scale;
  spec.collar = 1.0;
  spec.include = [u0](const Point& q) { return make_vec({u0, residue(q(0), 2 * kPi)}); };
  spec.foot = [](const Point& p) { return make_vec({p(1)}); };
  const Revolution* r = rev.get();
  spec.distance = [r, u0](const Point& p) { return std::abs(r->arclength(u0, p(0))); };
  return std::make_shared<FlatSubmanifold>(std::move(m), std::move(spec));
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"euclidean", "flat-torus", "sphere2", "hyperbolic2",
                                              "surface-of-revolution"};
  return names;
}

std::shared_ptr<const Space> make_preset(const std::string& name, int n, const Profile& profile) {
  if (name == "euclidean") return make_euclidean(n);
  if (name == "flat-torus") return make_flat_torus(n);
  if (name == "sphere2") return make_sphere2();
  if (name == "hyperbolic2") return make_hyperbolic2();
  if (name == "surface-of-revolution") return make_surface_of_revolution(profile);
  throw Error(ErrorKind::invalid_argument, "unknown preset '" + name + "'");
}

std::shared_ptr<const Submanifold> make_default_submanifold(std::shared_ptr<const Space> m,
                                                            const std::string& preset) {
  if (preset == "euclidean") return make_euclidean_subspace(m, m->dim() - 1);
  if (preset == "flat-torus") return make_torus_circle(m);
  if (preset == "sphere2") return make_sphere_latitude(m, kPi / 2);
  if (preset == "hyperbolic2") return make_hyperbolic_geodesic(m);
  if (preset == "surface-of-revolution") return make_parallel(m, 0.5);
  throw Error(ErrorKind::invalid_argument, "unknown preset '" + preset + "'");
}

}  // namespace bgt::geometry
