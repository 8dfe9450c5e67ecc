#include "bgt/symmetry.hpp"

#include "bgt/presets.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace bgt::symmetry {

namespace {

double wrap_half(double a) { return a - std::round(a); }

// Lexicographic walk over the cube [-k, k]^n.
bool next_in_cube(Vec& v, int k) {
  for (Eigen::Index d = v.size() - 1; d >= 0; --d) {
    if (v(d) < k) {
      v(d) += 1;
      return true;
    }
    v(d) = -k;
  }
  return false;
}

double sup_norm(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

class LiftedMap : public geometry::ChartMap {
 public:
  LiftedMap(std::shared_ptr<const geometry::ChartMap> base, Point lifted_center, Vec shift)
      : base_(std::move(base)), c_(std::move(lifted_center)), h_(std::move(shift)) {}

  Point forward(const Vec& x) const override {
    const Point q = base_->forward(x);
    Point p(q.size());
    for (Eigen::Index d = 0; d < q.size(); ++d) p(d) = c_(d) + wrap_half(q(d) - c_(d)) + h_(d);
    return p;
  }
  std::optional<Vec> inverse(const Point& p) const override {
    Point q(p.size());
    for (Eigen::Index d = 0; d < p.size(); ++d) q(d) = p(d) - std::floor(p(d));
    auto x = base_->inverse(q);
    if (!x) return std::nullopt;
    if ((forward(*x) - p).cwiseAbs().maxCoeff() > 1e-9) return std::nullopt;
    return x;
  }
  Mat metric(const Vec& x) const override { return base_->metric(x); }

 private:
  std::shared_ptr<const geometry::ChartMap> base_;
  Point c_;
  Vec h_;
};

// Non-owning view of a base chart map.
std::shared_ptr<const geometry::ChartMap> borrow(const geometry::ChartMap& m) {
  return std::shared_ptr<const geometry::ChartMap>(&m, [](const geometry::ChartMap*) {});
}

double power_tail(int from, double exponent) {
  // sum_{i > from} i^-exponent, explicit up to a cutoff plus the integral remainder.
  const int stop = from + 100000;
  double acc = 0.0;
  for (int i = stop; i > from; --i) acc += std::pow(static_cast<double>(i), -exponent);
  return acc + std::pow(static_cast<double>(stop) + 0.5, 1.0 - exponent) / (exponent - 1.0);
}

}  // namespace

GroupAction::GroupAction(int n) : n_(n) {
  if (n < 1 || n > kMaxDim) throw Error(ErrorKind::invalid_argument, "group rank must lie in [1, 4]");
}

std::uint64_t GroupAction::index(const Vec& h) const {
  const int k = static_cast<int>(sup_norm(h));
  if (k == 0) return 1;
  std::uint64_t before = 1;
  for (int d = 0; d < n_; ++d) before *= static_cast<std::uint64_t>(2 * k - 1);
  std::uint64_t rank = 0;
  Vec v = Vec::Constant(n_, -k);
  do {
    if (static_cast<int>(sup_norm(v)) != k) continue;
    if (v == h) return before + rank + 1;
    ++rank;
  } while (next_in_cube(v, k));
  throw Error(ErrorKind::invalid_argument, "group element is not integral");
}

std::vector<Vec> GroupAction::enumerate(int count) const {
  std::vector<Vec> out;
  for (int k = 0; static_cast<int>(out.size()) < count; ++k) {
    Vec v = Vec::Constant(n_, -k);
    do {
      if (static_cast<int>(sup_norm(v)) == k) out.push_back(v);
      if (static_cast<int>(out.size()) == count) break;
    } while (next_in_cube(v, k));
  }
  return out;
}

Point GroupAction::project(const Point& x) const {
  Point q(x.size());
  for (Eigen::Index d = 0; d < x.size(); ++d) {
    q(d) = x(d) - std::floor(x(d));
    if (q(d) >= 1.0) q(d) -= 1.0;
  }
  return q;
}

LiftedTrivialization::LiftedTrivialization(std::shared_ptr<const Trivialization> base,
                                           GroupAction group, int budget)
    : base_(std::move(base)), cover_(geometry::make_euclidean(group.dim())),
      group_(std::move(group)), budget_(budget) {
  if (budget_ < 1)
    throw Error(ErrorKind::budget_too_small_for_domain, "at least the identity element is needed");
  if (base_->space().dim() != group_.dim())
    throw Error(ErrorKind::invalid_argument, "group rank differs from the quotient dimension");
  elements_ = group_.enumerate(budget_);
  for (int a = 0; a < base_->size(); ++a) centers_.push_back(group_.project(base_->center(a)));
  for (int r = 0; r < budget_; ++r)
    for (int a = 0; a < base_->size(); ++a) {
      const geometry::Chart& bc = base_->chart(a);
      auto map = std::make_shared<LiftedMap>(borrow(bc.map()), centers_[static_cast<size_t>(a)],
                                             elements_[static_cast<size_t>(r)]);
      charts_.emplace_back(bc.id() + "@" + std::to_string(r), bc.domain(), bc.safe(), map, bc.kind());
    }
}

Vec LiftedTrivialization::copy_of(int alpha, const Point& p) const {
  const Point& c = centers_.at(static_cast<size_t>(alpha));
  Vec h(p.size());
  for (Eigen::Index d = 0; d < p.size(); ++d) h(d) = std::round(p(d) - c(d));
  return h;
}

Point LiftedTrivialization::center(int i) const {
  const int a = i % base_size();
  return centers_.at(static_cast<size_t>(a)) + elements_.at(static_cast<size_t>(i / base_size()));
}

void LiftedTrivialization::cutoffs(const Point& p, atlas::CutoffList& out) const {
  atlas::CutoffList base;
  base_->cutoffs(group_.project(p), base);
  out.clear();
  for (const auto& [a, v] : base) {
    const std::uint64_t rank = group_.index(copy_of(a, p)) - 1;
    if (rank >= static_cast<std::uint64_t>(budget_)) continue;
    out.emplace_back(static_cast<int>(rank) * base_size() + a, v);
  }
  std::sort(out.begin(), out.end());
}

double LiftedTrivialization::pulled_cutoff(int i, const Vec& x) const {
  return base_->pulled_cutoff(i % base_size(), x);
}

Vec LiftedTrivialization::support_half_width(int i) const {
  return base_->support_half_width(i % base_size());
}

std::string LiftedTrivialization::manifest() const {
  std::ostringstream os;
  os << "lifted group=Z^" << group_.dim() << " budget=" << budget_ << "\n" << base_->manifest();
  return os.str();
}

std::shared_ptr<LiftedTrivialization> lift_trivialization(std::shared_ptr<const Trivialization> quot,
                                                          const GroupAction& group, int budget) {
  return std::make_shared<LiftedTrivialization>(std::move(quot), group, budget);
}

AdaptedWeight::AdaptedWeight(std::shared_ptr<const LiftedTrivialization> lifted)
    : lifted_(std::move(lifted)) {}

double AdaptedWeight::operator()(const Point& p) const {
  atlas::CutoffList base;
  lifted_->base().cutoffs(lifted_->group().project(p), base);
  double acc = 0.0;
  for (const auto& [a, v] : base) {
    const double i = static_cast<double>(lifted_->group().index(lifted_->copy_of(a, p)));
    acc += v / (i * i);
  }
  return acc;
}

AdaptedWeight build_weight(std::shared_ptr<const LiftedTrivialization> lifted) {
  return AdaptedWeight(std::move(lifted));
}

void check_invariance(const ManifoldFunction& f, const GroupAction& g, int samples, double tol,
                      std::uint64_t seed) {
  geometry::Rng rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int s = 0; s < samples; ++s) {
    Point x(g.dim());
    for (int d = 0; d < g.dim(); ++d) x(d) = u(rng);
    const Complex v = f(x);
    for (int d = 0; d < g.dim(); ++d) {
      const Complex w = f(g.act(Vec::Unit(g.dim(), d), x));
      if (std::abs(w - v) > tol * std::max(1.0, std::abs(v)))
        throw Error(ErrorKind::not_group_invariant,
                    f.id + " changes by " + std::to_string(std::abs(w - v)) + " under a unit translation");
    }
  }
}

WeightedNormReport weighted_periodic_norm(const ManifoldFunction& f, const AdaptedWeight& w,
                                          const std::vector<double>& s, double p, int res,
                                          double tail_tolerance) {
  const LiftedTrivialization& lifted = w.lifted();
  check_invariance(f, lifted.group());
  const ManifoldFunction g{"rho*" + f.id, [&w, f](const Point& x) { return w(x) * f(x); }, f.family};
  spaces::NormRequest req;
  req.kind = spaces::NormKind::H;
  req.s = s;
  req.p = p;
  req.res = res;
  std::vector<std::vector<std::vector<double>>> parts;
  const auto values = spaces::localized_norms({g}, lifted, req, &parts);

  WeightedNormReport r;
  r.budget = lifted.budget();
  const double sum_tail = power_tail(lifted.budget(), 2.0 * p);
  for (size_t i = 0; i < s.size(); ++i) {
    const double value = values[0][i];
    // Contributions scale like iota(h)^-2; the largest normalized one bounds the rest.
    double c = 0.0;
    const auto& contrib = parts[0][i];
    for (size_t k = 0; k < contrib.size(); ++k) {
      const double idx = static_cast<double>(lifted.group().index(lifted.element(static_cast<int>(k) / lifted.base_size())));
      c = std::max(c, contrib[k] * idx * idx);
    }
    const double tail_p = lifted.base_size() * std::pow(c, p) * sum_tail;
    const double rel = value > 0.0 ? std::pow(1.0 + tail_p / std::pow(value, p), 1.0 / p) - 1.0 : 0.0;
    if (rel > tail_tolerance)
      throw Error(ErrorKind::truncation_tail_too_large,
                  "estimated relative tail " + std::to_string(rel) + " at budget " + std::to_string(r.budget));
    r.values.push_back(value);
    r.tail_bounds.push_back(rel);
  }
  return r;
}

}  // namespace bgt::symmetry
