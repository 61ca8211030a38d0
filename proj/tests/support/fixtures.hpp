#pragma once

// Shared generators and independent oracles for the test binaries.

#include <cmath>
#include <random>
#include <vector>

#include "meixner/apc.hpp"
#include "meixner/vectors2d.hpp"

namespace fixtures {

using meixner::Index;

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Mixed-preservation parameters with (c, d) _|_ (s', v), (j, k) _|_ (p, r)
/// and strictly positive beta_T, beta_Z.
inline meixner::MixedPreservationSpec random_mixed(std::mt19937_64& rng, Index truncation = 12) {
  for (;;) {
    meixner::MixedPreservationSpec s;
    s.p = uniform(rng, -1.5, 1.5);
    s.r = uniform(rng, -1.5, 1.5);
    s.s_prime = uniform(rng, -1.5, 1.5);
    s.v = uniform(rng, -1.5, 1.5);
    const double det = s.p * s.v - s.r * s.s_prime;
    if (std::abs(det) < 0.2) continue;
    const double lambda = uniform(rng, 0.2, 1.0) * (det < 0 ? 1.0 : -1.0);
    const double mu = uniform(rng, 0.2, 1.0) * (det > 0 ? 1.0 : -1.0);
    s.c = -lambda * s.v;
    s.d = lambda * s.s_prime;
    s.j = -mu * s.r;
    s.k = mu * s.p;
    s.truncation = truncation;
    return s;
  }
}

/// Commuting special case r = s' = 0: two independent classic Meixner variables.
inline meixner::MixedPreservationSpec random_commuting(std::mt19937_64& rng,
                                                       Index truncation = 12) {
  meixner::MixedPreservationSpec s;
  do {
    s.p = uniform(rng, -1.5, 1.5);
    s.v = uniform(rng, -1.5, 1.5);
  } while (std::abs(s.p) < 0.2 || std::abs(s.v) < 0.2);
  // beta_T = c p / 2 and beta_Z = k v / 2.
  s.c = uniform(rng, 0.0, 1.0) * (s.p > 0 ? 1.0 : -1.0);
  s.k = uniform(rng, 0.0, 1.0) * (s.v > 0 ? 1.0 : -1.0);
  s.truncation = truncation;
  return s;
}

/// Random invertible matrix with condition number <= max_cond.
inline Eigen::Matrix2d random_invertible(std::mt19937_64& rng, double max_cond = 50.0) {
  for (;;) {
    Eigen::Matrix2d m;
    m << uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2);
    const auto sv = Eigen::JacobiSVD<Eigen::Matrix2d>(m).singularValues();
    if (sv(1) > 0 && sv(0) / sv(1) <= max_cond) return m;
  }
}

inline Eigen::Matrix2d rotation(double angle) {
  Eigen::Matrix2d m;
  m << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return m;
}

/// E[Z^n] for a standard normal.
inline double gaussian_moment(Index n) {
  if (n % 2) return 0.0;
  double m = 1.0;
  for (Index k = n - 1; k > 1; k -= 2) m *= static_cast<double>(k);
  return m;
}

/// Recurrence coefficients (alpha_n, omega_n), n < count, of the measure with
/// the given moments, by the Stieltjes procedure on monic polynomials.
struct Recurrence {
  std::vector<long double> alpha;
  std::vector<long double> omega;  // omega[n] pairs p_n with p_{n-1}; omega[0] unused
};

inline Recurrence stieltjes(const std::vector<long double>& moments, std::size_t count) {
  using Poly = std::vector<long double>;
  auto pair = [&](const Poly& a, const Poly& b, int shift) {
    long double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) s += a[i] * b[j] * moments[i + j + shift];
    return s;
  };
  Recurrence rec;
  Poly prev, cur{1.0L};
  long double prev_norm = 1.0L;
  for (std::size_t n = 0; n < count; ++n) {
    const long double norm = pair(cur, cur, 0);
    const long double a = pair(cur, cur, 1) / norm;
    rec.alpha.push_back(a);
    rec.omega.push_back(n == 0 ? 0.0L : norm / prev_norm);
    Poly next(cur.size() + 1, 0.0L);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      next[i + 1] += cur[i];
      next[i] -= a * cur[i];
    }
    if (n > 0) {
      for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= rec.omega[n] * prev[i];
    }
    prev = cur;
    cur = next;
    prev_norm = norm;
  }
  return rec;
}

}  // namespace fixtures
