#pragma once

#include "bgt/atlas.hpp"
#include "bgt/presets.hpp"
#include "bgt/spaces.hpp"
#include "bgt/symmetry.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

// Band and error experiments shared by the CLI and the acceptance runner.
namespace bgt::experiments {

using spaces::Band;
using spaces::ManifoldFunction;

struct TraceResult {
  int points = 0;
  double sup_error = 0.0;             // max |Tr f(q) - f(q)| over functions and points
  std::vector<double> per_function;
};

// Compares Tr f with the restriction f|_N at `points` sampled points of N.
TraceResult trace_restriction(const std::vector<ManifoldFunction>& family,
                              std::shared_ptr<const atlas::FermiTrivialization> t, int points,
                              std::uint64_t seed);

struct RightInverseResult {
  int points = 0;
  double max_relative_l2 = 0.0;      // max over f' of ||Tr Ex f' - f'|| / ||f'|| on N
  double sup_error = 0.0;
  std::vector<double> per_function;  // relative L2 errors
};

// Tr(Ex f') against f' on `points` equispaced parameter values of a closed curve N
// of the given period.
RightInverseResult right_inverse(const std::vector<ManifoldFunction>& family,
                                 std::shared_ptr<const atlas::FermiTrivialization> t, double period,
                                 int points, const spaces::ExtensionOptions& opts = {});

// covariant_norm(f, 2, 2) / localized H^2_2 norm over the family.
Band coincidence_band(const std::vector<ManifoldFunction>& family, const atlas::Trivialization& t,
                      int res);

// ||Tr f||_{B^{s - codim/p}_{p,p}(N)} / ||f||_{H^s_p(M)}, both localized (N through the
// boundary trivialization of t).
Band trace_norm_band(const std::vector<ManifoldFunction>& family,
                     std::shared_ptr<const atlas::FermiTrivialization> t, double s, double p,
                     int res);

struct SymmetryResult {
  std::vector<Band> bands;                 // per s: torus norm / weighted periodic norm
  std::vector<double> budget_change;       // per s: max relative change when the budget doubles
  std::vector<double> tail_bounds;         // per s: max estimated relative tail
  int budget = 0;
};

// Compares localized norms on the torus (through `base`) with weighted periodic
// norms on the cover at `budget` and 2 * budget group elements.
SymmetryResult symmetry_band(const std::vector<ManifoldFunction>& family,
                             std::shared_ptr<const atlas::Trivialization> base,
                             const std::vector<double>& s, double p, int res, int budget);

// Equispaced points of a closed curve of the given period, as intrinsic points.
std::vector<Point> curve_points(double period, int count);

}  // namespace bgt::experiments
