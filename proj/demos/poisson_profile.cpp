// Poisson transform of a zonal harmonic along a geodesic ray, with the
// mean-value Laplacian next to lambda (n - lambda) P f.

#include <cstdio>

#include "hyperlie/poisson.hpp"
#include "hyperlie/sections.hpp"

int main() {
  using namespace hyperlie;
  const int n = 2;
  const Complex lambda(0.7, 0.0);
  const BoundarySection f = section_by_name(n, 0, "spherical-harmonic:1,0");
  const PoissonTransform p(lambda, f, sphere_quadrature(n, 24));
  const std::function<Complex(const HyperbolicPoint&)> u = [&](const HyperbolicPoint& x) { return p(x); };

  Vector dir = Vector::Zero(n + 1);
  dir(n) = 1.0;
  std::printf("%6s %14s %14s %14s\n", "r", "Re P f", "Re Lap P f", "Re l(n-l) P f");
  for (double r = 0.0; r <= 2.0001; r += 0.25) {
    const HyperbolicPoint x = HyperbolicPoint::at(dir, r);
    const Complex value = u(x);
    const Complex lap = mean_value_laplacian(u, x, 0.02);
    std::printf("%6.2f %14.8f %14.8f %14.8f\n", r, value.real(), lap.real(),
                (lambda * (static_cast<double>(n) - lambda) * value).real());
  }
}
