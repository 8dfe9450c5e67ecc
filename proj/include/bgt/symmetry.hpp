#pragma once

#include "bgt/atlas.hpp"
#include "bgt/spaces.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace bgt::symmetry {

using atlas::Trivialization;
using spaces::Complex;
using spaces::ManifoldFunction;

// Z^n acting on R^n by integer translations, with quotient the flat torus.
class GroupAction {
 public:
  explicit GroupAction(int n);

  int dim() const { return n_; }
  // iota: Z^n -> {1, 2, ...}, increasing sup-norm shells with lexicographic ties, iota(0) = 1.
  std::uint64_t index(const Vec& h) const;
  // The first `count` group elements in iota order.
  std::vector<Vec> enumerate(int count) const;
  // pi: R^n -> T^n = [0,1)^n.
  Point project(const Point& x) const;
  Point act(const Vec& h, const Point& x) const { return x + h; }

 private:
  int n_;
};

// Charts (alpha, h) with kappa_{alpha,h} = h + unwrapped kappa_alpha and cutoffs
// h_{alpha,h} = h_alpha o pi on h . U_alpha. Index = rank(h) * |base| + alpha.
class LiftedTrivialization : public Trivialization {
 public:
  LiftedTrivialization(std::shared_ptr<const Trivialization> base, GroupAction group, int budget);

  atlas::TrivializationKind kind() const override { return atlas::TrivializationKind::lifted; }
  const geometry::Space& space() const override { return *cover_; }
  int size() const override { return static_cast<int>(charts_.size()); }
  const geometry::Chart& chart(int alpha) const override {
    return charts_.at(static_cast<size_t>(alpha));
  }
  Point center(int alpha) const override;
  void cutoffs(const Point& p, atlas::CutoffList& out) const override;
  double pulled_cutoff(int alpha, const Vec& x) const override;
  Vec support_half_width(int alpha) const override;
  double domain_reach(int alpha) const override { return base_->domain_reach(alpha % base_size()); }
  int multiplicity_bound() const override { return base_->multiplicity_bound(); }
  double radius() const override { return base_->radius(); }
  std::string manifest() const override;

  const Trivialization& base() const { return *base_; }
  const GroupAction& group() const { return group_; }
  int budget() const { return budget_; }
  int base_size() const { return base_->size(); }
  const Vec& element(int rank) const { return elements_.at(static_cast<size_t>(rank)); }
  // Lift of the center of base chart alpha near the fundamental domain.
  const Point& lifted_center(int alpha) const { return centers_.at(static_cast<size_t>(alpha)); }
  // Group element h with p in h . U_alpha (nearest translate), unchecked.
  Vec copy_of(int alpha, const Point& p) const;

 private:
  std::shared_ptr<const Trivialization> base_;
  std::shared_ptr<const geometry::Space> cover_;
  GroupAction group_;
  int budget_;
  std::vector<Vec> elements_;
  std::vector<Point> centers_;
  std::vector<geometry::Chart> charts_;
};

// Throws budget-too-small-for-domain when budget < 1.
std::shared_ptr<LiftedTrivialization> lift_trivialization(std::shared_ptr<const Trivialization> quot,
                                                          const GroupAction& group, int budget);

// rho(p) = sum_{(alpha, h)} iota(h)^{-2} h_{alpha,h}(p), over all of Z^n (not only the budget).
class AdaptedWeight {
 public:
  explicit AdaptedWeight(std::shared_ptr<const LiftedTrivialization> lifted);
  double operator()(const Point& p) const;
  const LiftedTrivialization& lifted() const { return *lifted_; }

 private:
  std::shared_ptr<const LiftedTrivialization> lifted_;
};

AdaptedWeight build_weight(std::shared_ptr<const LiftedTrivialization> lifted);

struct WeightedNormReport {
  std::vector<double> values;       // per s
  std::vector<double> tail_bounds;  // estimated relative truncation error per s
  int budget = 0;
};

// (sum over (alpha, h) with iota(h) <= budget of ||(h_{alpha,h} rho f) o kappa_{alpha,h}||^p)^{1/p}.
// Throws not-G-invariant when f(x + e_i) != f(x) at sampled points and
// truncation-tail-too-large when the estimated tail exceeds tail_tolerance.
WeightedNormReport weighted_periodic_norm(const ManifoldFunction& f, const AdaptedWeight& w,
                                          const std::vector<double>& s, double p, int res,
                                          double tail_tolerance = 1e-2);

// Sampled check of f o h = f for the unit translations; throws not-G-invariant.
void check_invariance(const ManifoldFunction& f, const GroupAction& g, int samples = 64,
                      double tol = 1e-10, std::uint64_t seed = 3);

}  // namespace bgt::symmetry
