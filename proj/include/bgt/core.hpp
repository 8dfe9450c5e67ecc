#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace bgt {

// Every manifold, chart and ambient space in the toolkit lives in dimension <= 4,
// so vectors and matrices use inline storage and never touch the heap.
inline constexpr int kMaxDim = 4;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

// A point of a manifold in the preset's canonical global representation
// (unit vector for the sphere, residues in [0,1)^n for the torus, ...).
using Point = Vec;

enum class ErrorKind {
  point_outside_domain,
  point_too_close_to_boundary,
  singular_metric,
  left_atlas,
  step_too_large,
  vector_exceeds_injectivity_radius,
  degenerate_tangent_space,
  budget_exhausted,
  radius_exceeds_injectivity_radius,
  no_collar_metadata,
  coverage_gap,
  insufficient_overlap_samples,
  aliasing_suspected,
  slice_not_on_grid,
  box_too_small,
  decay_violation,
  chart_evaluation_failure,
  point_not_on_submanifold,
  tube_escape,
  fd_step_underflow,
  not_group_invariant,
  truncation_tail_too_large,
  budget_too_small_for_domain,
  invalid_argument,
};

const char* to_string(ErrorKind kind);

// Numerical guard failure raised by any module.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline Vec make_vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace bgt
