#pragma once

#include "bgt/geometry.hpp"

#include <memory>
#include <string>
#include <vector>

namespace bgt::geometry {

// Profile curve gamma(u) = (r(u), z(u)) of a surface of revolution, both
// polynomials in u (coefficients in increasing degree).
struct Profile {
  std::vector<double> r{1.0, 0.0, 0.2};
  std::vector<double> z{0.0, 1.0};

  double radius(double u) const;
  double radius_d(double u) const;
  double radius_dd(double u) const;
  double height_d(double u) const;
  double height_dd(double u) const;
};

std::shared_ptr<const Space> make_euclidean(int n);
std::shared_ptr<const Space> make_flat_torus(int n);
std::shared_ptr<const Space> make_sphere2();
std::shared_ptr<const Space> make_hyperbolic2();
std::shared_ptr<const Space> make_surface_of_revolution(const Profile& profile = {});

// {0}^{n-k} x R^k in R^n.
std::shared_ptr<const Submanifold> make_euclidean_subspace(std::shared_ptr<const Space> m, int k);
// The circle {x_1 = 0} in the flat torus T^2.
std::shared_ptr<const Submanifold> make_torus_circle(std::shared_ptr<const Space> m);
// Latitude circle theta = theta0 on the unit sphere (theta0 = pi/2 is the equator).
std::shared_ptr<const Submanifold> make_sphere_latitude(std::shared_ptr<const Space> m,
                                                        double theta0);
// The geodesic {x = 0} of the upper half-plane.
std::shared_ptr<const Submanifold> make_hyperbolic_geodesic(std::shared_ptr<const Space> m);
// The parallel u = u0 of a surface of revolution.
std::shared_ptr<const Submanifold> make_parallel(std::shared_ptr<const Space> m, double u0);

// Name-based construction used by the CLI: euclidean, flat-torus, sphere2,
// hyperbolic2, surface-of-revolution.
std::shared_ptr<const Space> make_preset(const std::string& name, int n = 2,
                                         const Profile& profile = {});
// The default submanifold of each preset (equator for sphere2, etc.).
std::shared_ptr<const Submanifold> make_default_submanifold(std::shared_ptr<const Space> m,
                                                            const std::string& preset);

const std::vector<std::string>& preset_names();

}  // namespace bgt::geometry
