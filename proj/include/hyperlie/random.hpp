#pragma once

// Seeded generators for test inputs. Each consumer derives its own stream
// from (seed, name) so results never depend on evaluation order.

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "hyperlie/lie_core.hpp"

namespace hyperlie {

using Rng = std::mt19937_64;

inline std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

inline Rng make_stream(std::uint64_t seed, std::string_view name) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(fnv1a(name)),
                    static_cast<std::uint32_t>(fnv1a(name) >> 32)};
  return Rng(seq);
}

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Vector random_gaussian(Rng& rng, int size, double sigma = 1.0) {
  std::normal_distribution<double> normal(0.0, sigma);
  Vector v(size);
  for (int i = 0; i < size; ++i) v(i) = normal(rng);
  return v;
}

inline Vector random_unit_vector(Rng& rng, int size) {
  Vector v = random_gaussian(rng, size);
  while (v.norm() < 1e-6) v = random_gaussian(rng, size);
  return v / v.norm();
}

inline Matrix random_skew(Rng& rng, int size, double sigma = 1.0) {
  Matrix m(size, size);
  std::normal_distribution<double> normal(0.0, sigma);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) m(i, j) = normal(rng);
  return 0.5 * (m - m.transpose());
}

inline AlgebraElement random_algebra_element(Rng& rng, int n, double sigma = 1.0) {
  return embed_k(random_skew(rng, n + 1, sigma)) + embed_p(random_gaussian(rng, n + 1, sigma));
}

/// Random rotation in K via exp of a random k-element.
inline GroupElement random_rotation(Rng& rng, int n) {
  return group_exp(embed_k(random_skew(rng, n + 1, 1.5)));
}

inline GroupElement random_m_element(Rng& rng, int n) {
  return group_exp(embed_m(random_skew(rng, n, 1.5)));
}

/// Generic group element of moderate size: exp of a random algebra element.
inline GroupElement random_group_element(Rng& rng, int n, double sigma = 0.5) {
  return group_exp(random_algebra_element(rng, n, sigma));
}

/// Orthonormal vectors spanning part of the tangent space at b.
inline std::vector<Vector> random_tangent_frame(Rng& rng, const Vector& b, int count) {
  std::vector<Vector> frame;
  while (static_cast<int>(frame.size()) < count) {
    Vector w = random_gaussian(rng, static_cast<int>(b.size()));
    w -= w.dot(b) * b;
    for (const Vector& f : frame) w -= w.dot(f) * f;
    if (w.norm() < 1e-6) continue;
    frame.push_back(w / w.norm());
  }
  return frame;
}

}  // namespace hyperlie
