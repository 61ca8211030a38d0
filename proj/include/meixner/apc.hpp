#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "meixner/vectors2d.hpp"

namespace meixner {

/// A word over {x, y}, read as an operator product: "xy" is X Y.
using Word = std::string;

void validate_word(const Word& w);
Word reversed(const Word& w);

/// All words of length <= max_length, ordered by length and then
/// lexicographically with x < y.
std::vector<Word> words_up_to(Index max_length);

/// Expectation values E[w] of words of bounded length.
///
/// Non-commutative functionals store one value per word. Commutative ones
/// store one value per exponent pair (a, b) and answer any word with a
/// letters x and b letters y.
class MomentFunctional {
 public:
  static MomentFunctional noncommutative(Index degree_cap);
  static MomentFunctional commutative(Index degree_cap);

  /// Builds a functional from a callable defined on every word (or exponent
  /// pair, for commutative functionals) up to the cap.
  static MomentFunctional from_words(Index degree_cap, const std::function<double(const Word&)>& f);
  static MomentFunctional from_exponents(Index degree_cap,
                                         const std::function<double(Index, Index)>& f);

  Index degree_cap() const { return degree_cap_; }
  bool is_commutative() const { return commutative_; }

  void set(const Word& w, double value);
  void set(Index a, Index b, double value);

  /// nullopt when the word exceeds the cap or its value was never set.
  std::optional<double> find(const Word& w) const;
  /// Throws ValidationError("insufficient moments") when undefined.
  double operator()(const Word& w) const;

  bool defined(const Word& w) const { return find(w).has_value(); }

 private:
  MomentFunctional(Index cap, bool commutative);
  std::size_t slot(const Word& w) const;

  Index degree_cap_ = 0;
  bool commutative_ = false;
  std::vector<double> values_;
  std::vector<char> set_;
};

/// E[w] = <w phi, phi>. Requires |w| <= N so no mass leaves the truncation.
double moment(const ApcSystem& sys, const Word& w);

/// Every word up to `degree` (<= N), as a non-commutative functional.
MomentFunctional moments_of(const ApcSystem& sys, Index degree);

struct MomentComparison {
  bool equal = false;
  Word worst_word;
  double worst_diff = 0.0;
  double max_moment = 0.0;
  Index degree = 0;
};

/// Compares all words up to `degree`; equal iff max|diff| <= tol (1 + max|moment|).
MomentComparison moment_equal(const ApcSystem& a, const ApcSystem& b, Index degree, double tol);

struct DecompositionResult {
  ApcSystem system;
  std::vector<Index> grade_dims;
  double rank_tolerance_used = 0.0;
  /// Largest component of X_i e leaking outside grades n-1..n+1.
  double grade_leakage = 0.0;
};

inline constexpr double kRankTolerance = 1e-9;

/// Minimal joint APC decomposition from moments, by graded Gram-Schmidt on
/// words (length, then lexicographic order). Requires degree_cap >= 2N; with
/// degree_cap = 2N the preservation block of the top grade is left at zero.
DecompositionResult decompose(const MomentFunctional& mf, Index truncation);

}  // namespace meixner
