#include "meixner/apc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace meixner {

namespace {

constexpr Index kMaxDegreeCap = 24;

std::size_t word_slot(const Word& w) {
  std::size_t bits = 0;
  for (char ch : w) bits = (bits << 1) | (ch == 'y' ? 1u : 0u);
  return ((std::size_t{1} << w.size()) - 1) + bits;
}

}  // namespace

void validate_word(const Word& w) {
  for (char ch : w) {
    if (ch != 'x' && ch != 'y') {
      throw ValidationError("word '" + w + "': letters must be x or y");
    }
  }
}

Word reversed(const Word& w) { return Word(w.rbegin(), w.rend()); }

std::vector<Word> words_up_to(Index max_length) {
  std::vector<Word> out{""};
  std::size_t level_begin = 0;
  for (Index len = 1; len <= max_length; ++len) {
    const std::size_t level_end = out.size();
    for (std::size_t i = level_begin; i < level_end; ++i) {
      out.push_back(out[i] + 'x');
      out.push_back(out[i] + 'y');
    }
    level_begin = level_end;
  }
  return out;
}

MomentFunctional::MomentFunctional(Index cap, bool commutative)
    : degree_cap_(cap), commutative_(commutative) {
  if (cap < 0 || cap > kMaxDegreeCap) {
    throw ValidationError("moment functional: degree_cap must lie in [0, " +
                          std::to_string(kMaxDegreeCap) + "]");
  }
  const std::size_t n = commutative
                            ? static_cast<std::size_t>((cap + 1) * (cap + 1))
                            : (std::size_t{1} << (cap + 1)) - 1;
  values_.assign(n, 0.0);
  set_.assign(n, 0);
  set("", 1.0);
}

MomentFunctional MomentFunctional::noncommutative(Index degree_cap) {
  return MomentFunctional(degree_cap, false);
}

MomentFunctional MomentFunctional::commutative(Index degree_cap) {
  return MomentFunctional(degree_cap, true);
}

MomentFunctional MomentFunctional::from_words(Index degree_cap,
                                              const std::function<double(const Word&)>& f) {
  MomentFunctional mf = noncommutative(degree_cap);
  for (const Word& w : words_up_to(degree_cap)) mf.set(w, f(w));
  return mf;
}

MomentFunctional MomentFunctional::from_exponents(Index degree_cap,
                                                  const std::function<double(Index, Index)>& f) {
  MomentFunctional mf = commutative(degree_cap);
  for (Index a = 0; a <= degree_cap; ++a) {
    for (Index b = 0; a + b <= degree_cap; ++b) mf.set(a, b, f(a, b));
  }
  return mf;
}

std::size_t MomentFunctional::slot(const Word& w) const {
  if (commutative_) {
    const auto a = static_cast<Index>(std::count(w.begin(), w.end(), 'x'));
    const auto b = static_cast<Index>(w.size()) - a;
    return static_cast<std::size_t>(a * (degree_cap_ + 1) + b);
  }
  return word_slot(w);
}

void MomentFunctional::set(const Word& w, double value) {
  validate_word(w);
  if (static_cast<Index>(w.size()) > degree_cap_) {
    throw ValidationError("moment functional: word '" + w + "' exceeds degree_cap");
  }
  if (w.empty() && value != 1.0) {
    throw ValidationError("moment functional: the empty word must have value 1");
  }
  const std::size_t s = slot(w);
  values_[s] = value;
  set_[s] = 1;
}

void MomentFunctional::set(Index a, Index b, double value) {
  if (!commutative_) throw ValidationError("moment functional: exponent keys need commutative");
  if (a < 0 || b < 0 || a + b > degree_cap_) {
    throw ValidationError("moment functional: exponent pair exceeds degree_cap");
  }
  set(Word(static_cast<std::size_t>(a), 'x') + Word(static_cast<std::size_t>(b), 'y'), value);
}

std::optional<double> MomentFunctional::find(const Word& w) const {
  if (static_cast<Index>(w.size()) > degree_cap_) return std::nullopt;
  const std::size_t s = slot(w);
  if (!set_[s]) return std::nullopt;
  return values_[s];
}

double MomentFunctional::operator()(const Word& w) const {
  auto v = find(w);
  if (!v) throw ValidationError("insufficient moments: E[" + w + "] is undefined");
  return *v;
}

double moment(const ApcSystem& sys, const Word& w) {
  validate_word(w);
  if (static_cast<Index>(w.size()) > sys.truncation()) {
    throw ValidationError("moment: word '" + w + "' is longer than the truncation level");
  }
  Vectord v = sys.vacuum();
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    const ApcTriple& t = sys.variable(*it);
    Vectord next = apply(t.minus, v);
    next.coeffs() += apply(t.zero, v).coeffs();
    const Vectord up = apply(t.plus, v);
    next.coeffs() += up.coeffs();
    next.set_truncated(next.truncated() || up.truncated());
    v = std::move(next);
  }
  if (v.truncated()) throw ValidationError("moment: truncated mass leaked");
  return v.coeffs()(0);
}

MomentFunctional moments_of(const ApcSystem& sys, Index degree) {
  if (degree > sys.truncation()) {
    throw ValidationError("moments_of: degree exceeds the truncation level");
  }
  const Eigen::MatrixXd mx = sys.x.dense();
  const Eigen::MatrixXd my = sys.y.dense();
  MomentFunctional mf = MomentFunctional::noncommutative(degree);

  // Depth-first over words, prepending letters: (l w) phi = L (w phi).
  std::vector<Eigen::VectorXd> stack_vec(static_cast<std::size_t>(degree + 1));
  stack_vec[0] = sys.vacuum().coeffs();
  Word w;
  auto visit = [&](auto&& self, Index depth) -> void {
    const Eigen::VectorXd& v = stack_vec[static_cast<std::size_t>(depth)];
    if (depth > 0) mf.set(w, v(0));
    if (depth == degree) return;
    for (char letter : {'x', 'y'}) {
      stack_vec[static_cast<std::size_t>(depth + 1)].noalias() = (letter == 'x' ? mx : my) * v;
      w.insert(w.begin(), letter);
      self(self, depth + 1);
      w.erase(w.begin());
    }
  };
  visit(visit, 0);
  return mf;
}

MomentComparison moment_equal(const ApcSystem& a, const ApcSystem& b, Index degree, double tol) {
  if (degree > std::min(a.truncation(), b.truncation())) {
    throw ValidationError("moment_equal: degree exceeds a truncation level");
  }
  const MomentFunctional ma = moments_of(a, degree);
  const MomentFunctional mb = moments_of(b, degree);
  MomentComparison out;
  out.degree = degree;
  for (const Word& w : words_up_to(degree)) {
    const double va = ma(w);
    const double vb = mb(w);
    out.max_moment = std::max({out.max_moment, std::abs(va), std::abs(vb)});
    const double diff = std::abs(va - vb);
    if (diff > out.worst_diff || (out.worst_word.empty() && w.empty())) {
      out.worst_diff = diff;
      out.worst_word = w;
    }
  }
  out.equal = out.worst_diff <= tol * (1.0 + out.max_moment);
  return out;
}

DecompositionResult decompose(const MomentFunctional& mf, Index truncation) {
  if (truncation < 2) throw ValidationError("decompose: truncation must be >= 2");
  if (mf.degree_cap() < 2 * truncation) {
    throw ValidationError("decompose: degree_cap must be at least 2N = " +
                          std::to_string(2 * truncation));
  }
  const std::vector<Word> words = words_up_to(truncation);
  const auto nw = static_cast<Index>(words.size());
  const bool top_preservation = mf.degree_cap() >= 2 * truncation + 1;

  // <v phi, w phi> = E[reverse(v) w];  <l v phi, w phi> = E[reverse(v) l w].
  Eigen::MatrixXd gram(nw, nw);
  Eigen::MatrixXd shifted[2] = {Eigen::MatrixXd::Zero(nw, nw), Eigen::MatrixXd::Zero(nw, nw)};
  for (Index i = 0; i < nw; ++i) {
    const Word rv = reversed(words[static_cast<std::size_t>(i)]);
    for (Index j = 0; j < nw; ++j) {
      const Word& wj = words[static_cast<std::size_t>(j)];
      gram(i, j) = mf(rv + wj);
      if (static_cast<Index>(rv.size() + wj.size()) + 1 <= mf.degree_cap()) {
        shifted[0](i, j) = mf(rv + 'x' + wj);
        shifted[1](i, j) = mf(rv + 'y' + wj);
      }
    }
  }

  const double gram_scale = gram.cwiseAbs().maxCoeff();
  if ((gram - gram.transpose()).cwiseAbs().maxCoeff() > 1e-12 * gram_scale) {
    throw ValidationError("decompose: moment functional is not symmetric under word reversal");
  }
  {
    const Eigen::VectorXd d = gram.diagonal().cwiseMax(0.0).unaryExpr(
        [](double x) { return x > 0.0 ? 1.0 / std::sqrt(x) : 1.0; });
    const Eigen::MatrixXd scaled = d.asDiagonal() * gram * d.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scaled, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kRankTolerance) {
      throw ValidationError("decompose: moment Gram matrix is not positive semidefinite");
    }
  }

  // Graded Gram-Schmidt in word coordinates: basis vectors are columns of
  // coefficients over `words`; gram_basis caches G * b for each of them.
  std::vector<Eigen::VectorXd> basis;
  std::vector<Eigen::VectorXd> gram_basis;
  std::vector<Index> dims;
  Index first_of_length = 0;
  for (Index len = 0; len <= truncation; ++len) {
    const Index count = Index{1} << len;
    double grade_max = 0.0;
    for (Index i = first_of_length; i < first_of_length + count; ++i) {
      grade_max = std::max(grade_max, gram(i, i));
    }
    Index dim = 0;
    for (Index i = first_of_length; i < first_of_length + count; ++i) {
      Eigen::VectorXd c = Eigen::VectorXd::Unit(nw, i);
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t b = 0; b < basis.size(); ++b) {
          c -= c.dot(gram_basis[b]) * basis[b];
        }
      }
      const Eigen::VectorXd gc = gram * c;
      const double norm2 = c.dot(gc);
      if (norm2 < -kRankTolerance * std::max(gram(i, i), grade_max)) {
        throw ValidationError("decompose: negative squared norm for word '" +
                              words[static_cast<std::size_t>(i)] +
                              "' (Gram matrix is not positive semidefinite)");
      }
      if (norm2 <= kRankTolerance * gram(i, i) || norm2 <= 1e-14 * grade_max) continue;
      const double inv = 1.0 / std::sqrt(norm2);
      basis.push_back(c * inv);
      gram_basis.push_back(gc * inv);
      ++dim;
    }
    dims.push_back(dim);
    first_of_length += count;
  }

  Grading grading = [&] {
    try {
      return Grading(dims);
    } catch (const ValidationError&) {
      throw ValidationError("decompose: chaos dimensions do not terminate consistently");
    }
  }();

  const auto total = static_cast<Index>(basis.size());
  Eigen::MatrixXd coeffs(nw, total);
  for (Index b = 0; b < total; ++b) coeffs.col(b) = basis[static_cast<std::size_t>(b)];

  DecompositionResult out{ApcSystem{grading, {Operatord(grading, -1), Operatord(grading, 0),
                                              Operatord(grading, 1)},
                                    {Operatord(grading, -1), Operatord(grading, 0),
                                     Operatord(grading, 1)}},
                          dims, kRankTolerance, 0.0};
  const Index top = grading.truncation();
  for (int letter = 0; letter < 2; ++letter) {
    Eigen::MatrixXd m = coeffs.transpose() * shifted[letter] * coeffs;
    m = 0.5 * (m + m.transpose()).eval();
    ApcTriple& t = letter == 0 ? out.system.x : out.system.y;
    for (Index n = 0; n <= top; ++n) {
      for (Index k = 0; k <= top; ++k) {
        auto blk = m.block(grading.offset(k), grading.offset(n), grading.dim(k), grading.dim(n));
        if (blk.size() == 0) continue;
        const Index gap = k - n;
        if (gap == -1) t.minus.block(n) = blk;
        else if (gap == 0) t.zero.block(n) = (n == top && !top_preservation) ? Eigen::MatrixXd::Zero(blk.rows(), blk.cols()) : Eigen::MatrixXd(blk);
        else if (gap == 1) t.plus.block(n) = blk;
        else out.grade_leakage = std::max(out.grade_leakage, blk.cwiseAbs().maxCoeff());
      }
    }
  }
  return out;
}

}  // namespace meixner
