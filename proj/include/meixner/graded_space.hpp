#pragma once

// Finite model of a graded chaos space G_0 + G_1 + ... + G_N with an
// orthonormal basis in every grade, and block operators that move a fixed
// number of grades.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "meixner/errors.hpp"

namespace meixner {

using Index = Eigen::Index;

/// Dimensions of the grades 0..N of a truncated chaos space.
class Grading {
 public:
  Grading() : Grading(std::vector<Index>{1, 0, 0}) {}

  explicit Grading(std::vector<Index> dims) : dims_(std::move(dims)) {
    if (dims_.size() < 3) {
      throw ValidationError("grading: truncation level must be at least 2");
    }
    if (dims_[0] != 1) {
      throw ValidationError("grading: the vacuum grade must be one-dimensional");
    }
    bool ended = false;
    for (Index d : dims_) {
      if (d < 0) throw ValidationError("grading: negative grade dimension");
      if (ended && d != 0) {
        throw ValidationError("grading: a grade follows an empty grade");
      }
      ended = ended || d == 0;
    }
    offsets_.resize(dims_.size() + 1, 0);
    std::partial_sum(dims_.begin(), dims_.end(), offsets_.begin() + 1);
  }

  /// One basis vector per grade, as for a single variable with infinite support.
  static Grading chain(Index truncation, Index length) {
    std::vector<Index> dims(static_cast<std::size_t>(truncation + 1), 0);
    for (Index n = 0; n <= truncation && n < length; ++n) dims[n] = 1;
    return Grading(std::move(dims));
  }

  Index truncation() const { return static_cast<Index>(dims_.size()) - 1; }
  Index dim(Index n) const {
    return (n < 0 || n > truncation()) ? 0 : dims_[static_cast<std::size_t>(n)];
  }
  Index offset(Index n) const { return offsets_[static_cast<std::size_t>(n)]; }
  Index total_dim() const { return offsets_.back(); }
  bool contains(Index n) const { return n >= 0 && n <= truncation(); }
  const std::vector<Index>& dims() const { return dims_; }

  /// Highest grade with a nonzero dimension.
  Index top() const {
    Index n = truncation();
    while (n > 0 && dims_[static_cast<std::size_t>(n)] == 0) --n;
    return n;
  }

  bool operator==(const Grading& other) const { return dims_ == other.dims_; }
  bool operator!=(const Grading& other) const { return !(*this == other); }

 private:
  std::vector<Index> dims_;
  std::vector<Index> offsets_;
};

inline void require_same_grading(const Grading& a, const Grading& b,
                                 const char* where) {
  if (a != b) throw ValidationError(std::string(where) + ": grading mismatch");
}

template <typename Scalar>
class GradedVector {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  explicit GradedVector(Grading grading)
      : grading_(std::move(grading)), coeffs_(Vector::Zero(grading_.total_dim())) {}

  GradedVector(Grading grading, Vector coeffs)
      : grading_(std::move(grading)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != grading_.total_dim()) {
      throw ValidationError("graded vector: coefficient count does not match grading");
    }
  }

  /// The vacuum vector phi: block 0 equal to [1], everything else zero.
  static GradedVector vacuum(const Grading& grading) {
    GradedVector v(grading);
    v.coeffs_(0) = Scalar(1);
    return v;
  }

  static GradedVector basis(const Grading& grading, Index grade, Index i) {
    if (i < 0 || i >= grading.dim(grade)) {
      throw ValidationError("graded vector: basis index out of range");
    }
    GradedVector v(grading);
    v.coeffs_(grading.offset(grade) + i) = Scalar(1);
    return v;
  }

  const Grading& grading() const { return grading_; }
  const Vector& coeffs() const { return coeffs_; }
  Vector& coeffs() { return coeffs_; }

  auto block(Index n) const { return coeffs_.segment(grading_.offset(n), grading_.dim(n)); }
  auto block(Index n) { return coeffs_.segment(grading_.offset(n), grading_.dim(n)); }

  /// Set when an operator pushed nonzero mass past the truncation level.
  bool truncated() const { return truncated_; }
  void set_truncated(bool t) { truncated_ = t; }

 private:
  Grading grading_;
  Vector coeffs_;
  bool truncated_ = false;
};

/// A linear map sending grade n into grade n + shift.
///
/// Block n is the dense matrix of shape dim(n + shift) x dim(n). When the
/// target grade lies above the truncation level the block has zero rows and
/// the corresponding image is unknown (dropped). Blocks with source grade
/// above valid_upto() are boundary-invalid: they were produced by products
/// whose intermediate grades left the truncated space.
template <typename Scalar>
class GradedOperator {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  GradedOperator(Grading grading, int shift)
      : grading_(std::move(grading)), shift_(shift), valid_upto_(grading_.truncation()) {
    const Index n_max = grading_.truncation();
    blocks_.reserve(static_cast<std::size_t>(n_max + 1));
    for (Index n = 0; n <= n_max; ++n) {
      blocks_.push_back(Matrix::Zero(grading_.dim(n + shift_), grading_.dim(n)));
    }
  }

  const Grading& grading() const { return grading_; }
  int shift() const { return shift_; }
  Index truncation() const { return grading_.truncation(); }

  const Matrix& block(Index source) const { return blocks_[static_cast<std::size_t>(source)]; }
  Matrix& block(Index source) { return blocks_[static_cast<std::size_t>(source)]; }

  /// True when the image of the given source grade lies above the truncation.
  bool drops(Index source) const { return source + shift_ > truncation(); }

  Index valid_upto() const { return valid_upto_; }
  void set_valid_upto(Index n) { valid_upto_ = std::min(n, truncation()); }

  Matrix to_dense() const {
    Matrix dense = Matrix::Zero(grading_.total_dim(), grading_.total_dim());
    for (Index n = 0; n <= truncation(); ++n) {
      const Index m = n + shift_;
      if (!grading_.contains(m)) continue;
      dense.block(grading_.offset(m), grading_.offset(n), grading_.dim(m), grading_.dim(n)) =
          block(n);
    }
    return dense;
  }

  /// Frobenius norm over source grades 0..upto.
  Scalar norm(Index upto) const {
    Scalar s(0);
    for (Index n = 0; n <= std::min(upto, truncation()); ++n) s += block(n).squaredNorm();
    return std::sqrt(s);
  }
  Scalar norm() const { return norm(truncation()); }

  GradedOperator& operator+=(const GradedOperator& other) {
    require_compatible(other, "operator+=");
    for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] += other.blocks_[i];
    valid_upto_ = std::min(valid_upto_, other.valid_upto_);
    return *this;
  }
  GradedOperator& operator-=(const GradedOperator& other) {
    require_compatible(other, "operator-=");
    for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] -= other.blocks_[i];
    valid_upto_ = std::min(valid_upto_, other.valid_upto_);
    return *this;
  }
  GradedOperator& operator*=(Scalar c) {
    for (auto& b : blocks_) b *= c;
    return *this;
  }

 private:
  void require_compatible(const GradedOperator& other, const char* where) const {
    require_same_grading(grading_, other.grading_, where);
    if (shift_ != other.shift_) {
      throw ValidationError(std::string(where) + ": operators have different shifts");
    }
  }

  Grading grading_;
  int shift_;
  Index valid_upto_;
  std::vector<Matrix> blocks_;
};

template <typename Scalar>
GradedOperator<Scalar> operator+(GradedOperator<Scalar> a, const GradedOperator<Scalar>& b) {
  a += b;
  return a;
}
template <typename Scalar>
GradedOperator<Scalar> operator-(GradedOperator<Scalar> a, const GradedOperator<Scalar>& b) {
  a -= b;
  return a;
}
template <typename Scalar>
GradedOperator<Scalar> operator*(Scalar c, GradedOperator<Scalar> a) {
  a *= c;
  return a;
}
template <typename Scalar>
GradedOperator<Scalar> operator-(GradedOperator<Scalar> a) {
  a *= Scalar(-1);
  return a;
}

template <typename Scalar>
GradedOperator<Scalar> identity(const Grading& grading) {
  GradedOperator<Scalar> op(grading, 0);
  for (Index n = 0; n <= grading.truncation(); ++n) op.block(n).setIdentity();
  return op;
}

/// The number operator: n times the identity on grade n.
template <typename Scalar>
GradedOperator<Scalar> number_operator(const Grading& grading) {
  GradedOperator<Scalar> op(grading, 0);
  for (Index n = 0; n <= grading.truncation(); ++n) {
    op.block(n).setIdentity();
    op.block(n) *= Scalar(n);
  }
  return op;
}

template <typename Scalar>
GradedVector<Scalar> apply(const GradedOperator<Scalar>& op, const GradedVector<Scalar>& v) {
  require_same_grading(op.grading(), v.grading(), "apply");
  const Grading& g = op.grading();
  GradedVector<Scalar> out(g);
  bool truncated = v.truncated();
  for (Index n = 0; n <= g.truncation(); ++n) {
    if (g.dim(n) == 0) continue;
    const Index m = n + op.shift();
    if (m < 0) continue;
    if (m > g.truncation()) {
      truncated = truncated || !v.block(n).isZero(0);
      continue;
    }
    out.block(m).noalias() += op.block(n) * v.block(n);
  }
  out.set_truncated(truncated);
  return out;
}

/// The transpose operator: <op u, v> = <u, adjoint(op) v>.
template <typename Scalar>
GradedOperator<Scalar> adjoint(const GradedOperator<Scalar>& op) {
  const Grading& g = op.grading();
  GradedOperator<Scalar> out(g, -op.shift());
  for (Index n = 0; n <= g.truncation(); ++n) {
    const Index m = n + op.shift();
    if (!g.contains(m)) continue;
    out.block(m) = op.block(n).transpose();
  }
  // A source grade m of the adjoint corresponds to source m - shift of op.
  out.set_valid_upto(op.valid_upto() + op.shift());
  return out;
}

/// The product a * b (b applied first).
template <typename Scalar>
GradedOperator<Scalar> compose(const GradedOperator<Scalar>& a, const GradedOperator<Scalar>& b) {
  require_same_grading(a.grading(), b.grading(), "compose");
  const Grading& g = a.grading();
  const Index top = g.truncation();
  GradedOperator<Scalar> out(g, a.shift() + b.shift());
  for (Index n = 0; n <= top; ++n) {
    const Index mid = n + b.shift();
    const Index target = mid + a.shift();
    if (!g.contains(mid) || !g.contains(target)) continue;
    out.block(n).noalias() = a.block(mid) * b.block(n);
  }
  const Index lost_above = top - std::max(b.shift(), 0);
  out.set_valid_upto(std::min({b.valid_upto(), a.valid_upto() - b.shift(), lost_above}));
  return out;
}

template <typename Scalar>
Scalar inner(const GradedVector<Scalar>& u, const GradedVector<Scalar>& v) {
  require_same_grading(u.grading(), v.grading(), "inner");
  return u.coeffs().dot(v.coeffs());
}

/// Formal linear combination of graded operators (elements of the span W).
/// Terms may carry different shifts; component() collects one shift.
template <typename Scalar>
class OperatorSum {
 public:
  struct Term {
    Scalar coefficient;
    GradedOperator<Scalar> op;
  };

  explicit OperatorSum(Grading grading) : grading_(std::move(grading)) {}
  OperatorSum(const GradedOperator<Scalar>& op)  // NOLINT(google-explicit-constructor)
      : grading_(op.grading()) {
    terms_.push_back({Scalar(1), op});
  }

  const Grading& grading() const { return grading_; }
  const std::vector<Term>& terms() const { return terms_; }

  OperatorSum& add(Scalar c, const GradedOperator<Scalar>& op) {
    require_same_grading(grading_, op.grading(), "operator sum");
    terms_.push_back({c, op});
    return *this;
  }

  std::vector<int> shifts() const {
    std::vector<int> s;
    for (const auto& t : terms_) s.push_back(t.op.shift());
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
  }

  /// Sum of all terms with the given shift (zero operator if there are none).
  GradedOperator<Scalar> component(int shift) const {
    GradedOperator<Scalar> out(grading_, shift);
    Index valid = grading_.truncation();
    for (const auto& t : terms_) {
      if (t.op.shift() != shift) continue;
      out += t.coefficient * t.op;
      valid = std::min(valid, t.op.valid_upto());
    }
    out.set_valid_upto(valid);
    return out;
  }

  /// The single component; throws when terms carry several shifts.
  GradedOperator<Scalar> collapse() const {
    const auto s = shifts();
    if (s.size() > 1) throw ValidationError("operator sum: mixed shifts cannot be collapsed");
    return component(s.empty() ? 0 : s.front());
  }

  Index valid_upto() const {
    Index valid = grading_.truncation();
    for (const auto& t : terms_) valid = std::min(valid, t.op.valid_upto());
    return valid;
  }

 private:
  Grading grading_;
  std::vector<Term> terms_;
};

/// [a, b] = ab - ba expanded bilinearly over the terms of both sums.
///
/// Source grades above N - 2 are marked boundary-invalid on every resulting
/// term: a creation operator leaving the truncated space corrupts them.
template <typename Scalar>
OperatorSum<Scalar> commutator(const OperatorSum<Scalar>& a, const OperatorSum<Scalar>& b) {
  require_same_grading(a.grading(), b.grading(), "commutator");
  OperatorSum<Scalar> out(a.grading());
  const Index boundary = a.grading().truncation() - 2;
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      GradedOperator<Scalar> term = compose(ta.op, tb.op) - compose(tb.op, ta.op);
      term.set_valid_upto(std::min(term.valid_upto(), boundary));
      out.add(ta.coefficient * tb.coefficient, term);
    }
  }
  return out;
}

template <typename Scalar>
OperatorSum<Scalar> commutator(const GradedOperator<Scalar>& a, const GradedOperator<Scalar>& b) {
  return commutator(OperatorSum<Scalar>(a), OperatorSum<Scalar>(b));
}

/// Largest entrywise difference over source grades 0..upto.
template <typename Scalar>
Scalar max_abs_diff(const GradedOperator<Scalar>& a, const GradedOperator<Scalar>& b,
                    Index upto) {
  require_same_grading(a.grading(), b.grading(), "max_abs_diff");
  if (a.shift() != b.shift()) {
    throw ValidationError("max_abs_diff: operators have different shifts");
  }
  Scalar worst(0);
  for (Index n = 0; n <= std::min(upto, a.truncation()); ++n) {
    if (a.block(n).size() == 0) continue;
    worst = std::max(worst, (a.block(n) - b.block(n)).cwiseAbs().maxCoeff());
  }
  return worst;
}

using Vectord = GradedVector<double>;
using Operatord = GradedOperator<double>;
using OperatorSumd = OperatorSum<double>;

}  // namespace meixner
