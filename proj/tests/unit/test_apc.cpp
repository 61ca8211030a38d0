#include <doctest.h>

#include "../support/fixtures.hpp"
#include "meixner/apc.hpp"
#include "meixner/lie.hpp"

using namespace meixner;

namespace {

const JacobiSpec kGauss{0.0, 0.0, 0.0, 1.0, std::nullopt};

MomentFunctional gaussian_pair(Index cap) {
  return MomentFunctional::from_exponents(cap, [](Index a, Index b) {
    return fixtures::gaussian_moment(a) * fixtures::gaussian_moment(b);
  });
}

}  // namespace

TEST_CASE("word utilities") {
  const auto words = words_up_to(2);
  CHECK(words == std::vector<Word>{"", "x", "y", "xx", "xy", "yx", "yy"});
  CHECK(reversed("xxy") == "yxx");
  CHECK_THROWS_AS(validate_word("xz"), ValidationError);
}

TEST_CASE("moment functional storage") {
  MomentFunctional mf = MomentFunctional::noncommutative(3);
  CHECK(mf("") == 1.0);
  CHECK_FALSE(mf.defined("xy"));
  CHECK_THROWS_WITH_AS(mf("xy"), doctest::Contains("insufficient moments"), ValidationError);
  mf.set("xy", 0.5);
  CHECK(mf("xy") == 0.5);
  CHECK_FALSE(mf.defined("yx"));
  CHECK_THROWS_AS(mf.set("xxxx", 1.0), ValidationError);
  CHECK_THROWS_AS(mf.set("", 2.0), ValidationError);

  MomentFunctional c = MomentFunctional::commutative(4);
  c.set(1, 2, 3.0);
  CHECK(c("yxy") == 3.0);
  CHECK(c("xyy") == 3.0);
}

TEST_CASE("moments of a product of Gaussians") {
  const ApcSystem sys = build_product(kGauss, kGauss, 10);
  CHECK(moment(sys, "") == 1.0);
  CHECK(moment(sys, "xx") == doctest::Approx(1.0));
  const MomentFunctional mf = moments_of(sys, 8);
  for (const Word& w : words_up_to(8)) {
    const auto a = static_cast<Index>(std::count(w.begin(), w.end(), 'x'));
    const auto b = static_cast<Index>(w.size()) - a;
    CHECK(mf(w) == doctest::Approx(fixtures::gaussian_moment(a) * fixtures::gaussian_moment(b)));
  }
  CHECK_THROWS_AS(moment(sys, "xxxxxxxxxxx"), ValidationError);
}

TEST_CASE("moment_equal") {
  const ApcSystem sys = build_product(kGauss, kGauss, 10);
  const MomentComparison self = moment_equal(sys, sys, 8, 1e-12);
  CHECK(self.equal);
  CHECK(self.worst_diff == 0.0);

  SUBCASE("the standard Gaussian pair is rotation invariant") {
    const ApcSystem rotated = mix_linear(sys, fixtures::rotation(0.7));
    CHECK(moment_equal(sys, rotated, 8, 1e-10).equal);
    // Brute-force oracle: expand each word as a polynomial in commuting X, Y
    // (coefficient of X^i Y^(deg-i)) and integrate against E[X^i] E[Y^j].
    const double c = std::cos(0.7), s = std::sin(0.7);
    for (const Word& w : {Word("xxyy"), Word("xyxyxy"), Word("yyyy"), Word("xxxxxy")}) {
      std::vector<double> poly{1.0};
      for (char ch : w) {
        const double fx = ch == 'x' ? c : s;
        const double fy = ch == 'x' ? -s : c;
        std::vector<double> next(poly.size() + 1, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
          next[i + 1] += fx * poly[i];
          next[i] += fy * poly[i];
        }
        poly = next;
      }
      double oracle = 0.0;
      const Index deg = Index(w.size());
      for (Index i = 0; i <= deg; ++i) {
        oracle += poly[std::size_t(i)] * fixtures::gaussian_moment(i) *
                  fixtures::gaussian_moment(deg - i);
      }
      CHECK(moment(rotated, w) == doctest::Approx(oracle));
    }
  }
  SUBCASE("mixed system with r = s' = 0 equals the product") {
    const MixedPreservationSpec spec{0.5, 0.0, 0.0, 2.0, 1.0, 0.0, 0.0, 1.0, 10};
    const JacobiSpec t{1.0, 0.0, 0.25, 1.0, std::nullopt};
    const JacobiSpec z{1.0, 0.0, 1.0, 1.0, std::nullopt};
    CHECK(moment_equal(build_mixed(spec), build_product(t, z, 10), 8, 1e-10).equal);
  }
  SUBCASE("different systems differ") {
    const ApcSystem other = build_product(kGauss, {1.0, 0.0, 0.0, 1.0, std::nullopt}, 10);
    const MomentComparison cmp = moment_equal(sys, other, 8, 1e-8);
    CHECK_FALSE(cmp.equal);
    CHECK(cmp.worst_word.size() >= 3);
  }
}

TEST_CASE("moments agree across truncation levels") {
  const MixedPreservationSpec spec{1.0, 0.5, -0.5, 1.0, 1.0, 0.5, -0.5, 1.0, 8};
  MixedPreservationSpec wider = spec;
  wider.truncation = 10;
  CHECK(moment_equal(build_mixed(spec), build_mixed(wider), 8, 1e-13).worst_diff < 1e-10);
}

TEST_CASE("decompose: Gaussian pair") {
  const DecompositionResult res = decompose(gaussian_pair(12), 6);
  CHECK(res.grade_dims == std::vector<Index>{1, 2, 3, 4, 5, 6, 7});
  const ApcSystem& sys = res.system;
  CHECK(sys.x.zero.norm(5) < 1e-10);
  CHECK(sys.y.zero.norm(5) < 1e-10);
  const Operatord c = commutator(sys.x.minus, sys.x.plus).collapse();
  CHECK(max_abs_diff(c, identity<double>(sys.grading), 4) < 1e-10);
  CHECK(commutator(sys.x.minus, sys.y.plus).collapse().norm(4) < 1e-10);
  CHECK(res.grade_leakage < 1e-10);
}

TEST_CASE("decompose: two-point marginals terminate the chain") {
  // X, Y independent, each uniform on {-1, 1}.
  const MomentFunctional mf = MomentFunctional::from_exponents(
      8, [](Index a, Index b) { return (a % 2 == 0 && b % 2 == 0) ? 1.0 : 0.0; });
  const DecompositionResult res = decompose(mf, 4);
  CHECK(res.grade_dims == std::vector<Index>{1, 2, 1, 0, 0});

  // Rank oracle: the moment matrix over monomials x^a y^b has rank 4.
  Eigen::MatrixXd hankel(15, 15);
  std::vector<std::pair<Index, Index>> mono;
  for (Index n = 0; n <= 4; ++n)
    for (Index a = n; a >= 0; --a) mono.emplace_back(a, n - a);
  for (std::size_t i = 0; i < mono.size(); ++i)
    for (std::size_t j = 0; j < mono.size(); ++j)
      hankel(Index(i), Index(j)) = ((mono[i].first + mono[j].first) % 2 == 0 &&
                                    (mono[i].second + mono[j].second) % 2 == 0)
                                       ? 1.0
                                       : 0.0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(hankel);
  CHECK(lu.rank() == 4);
}

TEST_CASE("decompose: round trip through moments") {
  std::mt19937_64 rng(11);
  const MixedPreservationSpec spec = fixtures::random_mixed(rng, 14);
  const ApcSystem sys = mix_linear(build_mixed(spec), fixtures::random_invertible(rng, 10.0));
  const DecompositionResult res = decompose(moments_of(sys, 13), 6);
  CHECK(res.grade_dims == std::vector<Index>{1, 2, 3, 4, 5, 6, 7});
  for (const Word& w : words_up_to(6)) CHECK(moment(res.system, w) == doctest::Approx(moment(sys, w)));

  const StructureCoefficients a = extract_coefficients(sys);
  const StructureCoefficients b = extract_coefficients(res.system);
  CHECK(std::abs(a.b - b.b) < 1e-8);
  CHECK(std::abs(a.q - b.q) < 1e-8);
  CHECK(std::abs(a.r_prime - b.r_prime) < 1e-8);
  CHECK(std::abs(a.e - b.e) < 1e-8);
}

TEST_CASE("decompose: commutative input gives r' = r") {
  const JacobiSpec p{1.0, 0.0, 0.5, 1.0, std::nullopt};
  const ApcSystem sys = mix_linear(build_product(p, kGauss, 14), fixtures::rotation(0.4));
  const DecompositionResult res = decompose(moments_of(sys, 13), 6);
  const Operatord a = commutator(res.system.x.minus, res.system.y.zero).collapse();
  const Operatord b = commutator(res.system.y.minus, res.system.x.zero).collapse();
  CHECK(max_abs_diff(a, b, 4) < 1e-8);
}

TEST_CASE("decompose: chaos spaces are mutually orthogonal") {
  // <w phi, w' phi> for creation words of different lengths vanishes.
  const ApcSystem sys = build_mixed({1.0, 0.5, -0.5, 1.0, 1.0, 0.5, -0.5, 1.0, 8});
  const Vectord phi = sys.vacuum();
  std::vector<Vectord> images;
  std::vector<Index> lengths;
  for (const Word& w : words_up_to(3)) {
    Vectord v = phi;
    for (auto it = w.rbegin(); it != w.rend(); ++it) v = apply(sys.variable(*it).plus, v);
    images.push_back(v);
    lengths.push_back(Index(w.size()));
  }
  for (std::size_t i = 0; i < images.size(); ++i)
    for (std::size_t j = 0; j < images.size(); ++j)
      if (lengths[i] != lengths[j]) CHECK(std::abs(inner(images[i], images[j])) < 1e-10);
}

TEST_CASE("decompose: invalid functionals") {
  CHECK_THROWS_AS(decompose(gaussian_pair(9), 5), ValidationError);

  MomentFunctional bad = gaussian_pair(8);
  bad.set(4, 0, 3.0 - 2.5);  // E[X^4] < E[X^2]^2 breaks positivity
  CHECK_THROWS_AS(decompose(bad, 4), ValidationError);

  MomentFunctional partial = MomentFunctional::noncommutative(8);
  partial.set("x", 0.0);
  CHECK_THROWS_WITH_AS(decompose(partial, 4), doctest::Contains("insufficient moments"),
                       ValidationError);
}
