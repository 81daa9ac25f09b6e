#include "doctest.h"
#include "support.hpp"

#include "qpc/error.hpp"
#include "qpc/matrix.hpp"

#include <algorithm>
#include <cmath>

using namespace qpc;
using qpc::test::random_complex;
using qpc::test::random_real;

namespace {

std::vector<double> sv(const Matrix& a) { return singular_values(a).values; }

// All products of k distinct entries of s, sorted descending.
std::vector<double> k_products(const std::vector<double>& s, int k) {
  std::vector<double> out;
  for (const auto& idx : k_subsets(static_cast<int>(s.size()), k)) {
    double p = 1.0;
    for (int i : idx) p *= s[static_cast<std::size_t>(i)];
    out.push_back(p);
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

}  // namespace

TEST_CASE("singular values of simple matrices") {
  auto s = sv(identity(3));
  CHECK(s == std::vector<double>{1, 1, 1});
  s = sv(diagonal({2.0, 0.5}));
  CHECK(s[0] == doctest::Approx(2.0));
  CHECK(s[1] == doctest::Approx(0.5));
  Matrix rot(2, 2);
  rot << 0, -1, 1, 0;
  s = sv(rot);
  CHECK(s[0] == doctest::Approx(1.0));
  CHECK(s[1] == doctest::Approx(1.0));

  Matrix bad = identity(2);
  bad(0, 1) = std::nan("");
  CHECK_THROWS_AS(singular_values(bad), Error);
}

TEST_CASE("singular values are sorted and nonnegative") {
  for (int t = 0; t < 50; ++t) {
    const auto s = sv(random_complex(1 + t % 5, 1 + (t / 5) % 5));
    CHECK(std::is_sorted(s.rbegin(), s.rend()));
    CHECK(s.back() >= 0.0);
  }
}

TEST_CASE("min_expansion") {
  CHECK(min_expansion(identity(4)) == doctest::Approx(1.0));
  CHECK(min_expansion(diagonal({3.0, 2.0})) == doctest::Approx(2.0));
  CHECK_THROWS_AS(min_expansion(Matrix::Ones(2, 3)), Error);

  // planted SVD
  const Matrix d = diagonal({5.0, 2.0, 0.7, 0.03});
  const Matrix a = test::random_orthogonal(4) * d * test::random_orthogonal(4);
  CHECK(min_expansion(a) == doctest::Approx(0.03).epsilon(1e-10));
  CHECK(min_expansion(a) == doctest::Approx(1.0 / operator_norm(a.inverse())).epsilon(1e-10));

  Matrix sing = random_real(3, 3);
  sing.col(2) = sing.col(0) + sing.col(1);
  CHECK(min_expansion(sing) < 1e-12);
}

TEST_CASE("min_expansion properties on random matrices") {
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + t % 5;
    const Matrix a = random_complex(n, n), b = random_complex(n, n);
    CHECK(min_expansion(a) <= operator_norm(a) * (1 + 1e-12));
    CHECK(min_expansion(a * b) >= min_expansion(a) * min_expansion(b) * (1 - 1e-9));

    Matrix p = random_complex(n, n);
    const double delta = test::uniform(0.05, 0.95);
    p *= delta / operator_norm(p);
    CHECK(min_expansion(Matrix::Identity(n, n) + p) >= 1.0 - delta - 1e-12);

    const double prod = [&] {
      double x = 1.0;
      for (double s : sv(a)) x *= s;
      return x;
    }();
    CHECK(std::abs(std::abs(determinant(a)) - prod) <= 1e-9 * prod);
  }
}

TEST_CASE("k_subsets are lexicographic") {
  const auto s = k_subsets(4, 2);
  const std::vector<std::vector<int>> want{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  CHECK(s == want);
  CHECK(binomial(20, 10) == 184756u);
  CHECK(k_subsets(3, 0).size() == 1);
}

TEST_CASE("exterior_power basics") {
  const Matrix a = random_complex(4, 4);
  CHECK((exterior_power(a, 1) - a).norm() == 0.0);

  const Matrix d = diagonal({2.0, 3.0, 5.0});
  const Matrix e = exterior_power(d, 2);
  CHECK((e - diagonal({6.0, 10.0, 15.0})).norm() < 1e-14);

  CHECK_THROWS_AS(exterior_power(a, 0), Error);
  CHECK_THROWS_AS(exterior_power(a, 5), Error);

  // k = n is the determinant
  const Matrix top = exterior_power(a, 4);
  CHECK(std::abs(top(0, 0) - determinant(a)) < 1e-10 * std::abs(determinant(a)));

  try {
    exterior_power(Matrix::Identity(20, 20), 10);
    FAIL("expected compound overflow");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::compound_overflow);
  }
}

TEST_CASE("exterior_power multiplicativity and singular value law") {
  for (int n : {4, 5}) {
    for (int t = 0; t < 20; ++t) {
      const Matrix a = random_complex(n, n), b = random_complex(n, n);
      const auto s = sv(a);
      for (int k = 1; k <= n; ++k) {
        const Matrix lhs = exterior_power(a * b, k);
        const Matrix rhs = exterior_power(a, k) * exterior_power(b, k);
        CHECK((lhs - rhs).norm() <= 1e-9 * rhs.norm());

        const auto got = sv(exterior_power(a, k));
        const auto want = k_products(s, k);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) <= 1e-9 * want[0]);
      }
      // norm of the second compound is sigma_1 sigma_2
      CHECK(test::rel_err(operator_norm(exterior_power(a, 2)), s[0] * s[1]) < 1e-9);
    }
  }
}

TEST_CASE("adjugate") {
  CHECK((adjugate(identity(3)) - identity(3)).norm() == 0.0);
  Matrix two(2, 2);
  two << 1.0, 2.0, 3.0, 4.0;
  Matrix want(2, 2);
  want << 4.0, -2.0, -3.0, 1.0;
  CHECK((adjugate(two) - want).norm() < 1e-14);

  for (int t = 0; t < 50; ++t) {
    const int d = 1 + t % 5;
    const Matrix a = random_complex(d, d);
    const Complex det = determinant(a);
    const Matrix adj = adjugate(a);
    CHECK((adj * a / det - Matrix::Identity(d, d)).norm() < 1e-10);
    CHECK((a * adj - det * Matrix::Identity(d, d)).norm() < 1e-10 * std::max(1.0, std::abs(det)) * d);
    const Complex want_det = std::pow(det, d - 1);
    CHECK(std::abs(determinant(adj) - want_det) < 1e-9 * std::max(1.0, std::abs(want_det)));
  }
  CHECK_THROWS_AS(adjugate(Matrix::Ones(2, 3)), Error);
}

TEST_CASE("realify") {
  Matrix i1(1, 1);
  i1(0, 0) = Complex(0, 1);
  const Matrix r = realify(i1);
  Matrix want(2, 2);
  want << 0, -1, 1, 0;
  CHECK((r - want).norm() == 0.0);
  CHECK(std::abs(determinant(r) - 1.0) < 1e-15);
  CHECK(is_real(r));

  for (int t = 0; t < 30; ++t) {
    const int n = 1 + t % 4;
    const Matrix a = random_complex(n, n), b = random_complex(n, n);
    const Matrix h = a + a.adjoint();
    const Matrix rh = realify(h);
    CHECK((rh - rh.transpose()).norm() < 1e-14);

    CHECK((realify(a * b) - realify(a) * realify(b)).norm() < 1e-10 * (a.norm() * b.norm()));
    CHECK((realify(a.adjoint()) - realify(a).transpose()).norm() == 0.0);

    const Complex det = determinant(a);
    CHECK(std::abs(determinant(realify(a)).real() - std::norm(det)) < 1e-9 * std::max(1.0, std::norm(det)));

    const auto sa = sv(a), sr = sv(realify(a));
    REQUIRE(sr.size() == 2 * sa.size());
    for (std::size_t i = 0; i < sa.size(); ++i) {
      CHECK(std::abs(sr[2 * i] - sa[i]) < 1e-10 * sa[0]);
      CHECK(std::abs(sr[2 * i + 1] - sa[i]) < 1e-10 * sa[0]);
    }
  }
}

TEST_CASE("min_expansion_from_det") {
  CHECK(min_expansion_from_det(1.0, 1.0, 3) == doctest::Approx(1.0));
  CHECK(min_expansion_from_det(0.5, 2.0, 2) == doctest::Approx(0.25));
  CHECK_THROWS_AS(min_expansion_from_det(0.0, 1.0, 2), Error);
  CHECK_THROWS_AS(min_expansion_from_det(1.0, -1.0, 2), Error);
  CHECK_THROWS_AS(min_expansion_from_det(9.0, 2.0, 2), Error);

  for (int t = 0; t < 200; ++t) {
    const int d = 1 + t % 5;
    const Matrix p = random_complex(d, d);
    const double B = operator_norm(p) * test::uniform(1.0, 1.5);
    const double eps = std::abs(determinant(p));
    CHECK(min_expansion(p) >= min_expansion_from_det(eps, B, d) * (1 - 1e-9));
  }
}
