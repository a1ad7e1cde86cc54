#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "symcanon/eig_canon.hpp"

using namespace symcanon;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

}  // namespace

TEST_CASE("sign_canon_first_nonzero") {
  auto r = sign_canon_first_nonzero(vec({0, -2, 1}));
  CHECK(r.kind == CanonKind::Single);
  CHECK(max_abs_diff(r.canonical(), vec({0, 2, -1})) == 0.0);
  CHECK(r.witness == std::vector<int>{1});

  CHECK(max_abs_diff(sign_canon_first_nonzero(vec({3, -1})).canonical(), vec({3, -1})) == 0.0);
  CHECK(max_abs_diff(sign_canon_first_nonzero(vec({1, -1})).canonical(), vec({1, -1})) == 0.0);
  CHECK(max_abs_diff(sign_canon_first_nonzero(vec({-1, 1})).canonical(), vec({1, -1})) == 0.0);

  // entries at or below eps_zero do not decide the sign
  CHECK(sign_canon_first_nonzero(vec({-1e-9, -1})).canonical()(1) == 1.0);
  CHECK_THROWS_AS(sign_canon_first_nonzero(vec({0, 0})), Error);
}

TEST_CASE("oap_eig small cases") {
  auto r = oap_eig(Matrix::Identity(2, 2));
  CHECK(max_abs_diff(r.canonical(), Matrix::Identity(2, 2)) < 1e-15);
  CHECK(r.witness == std::vector<int>{0, 1});

  const double h = 1 / std::sqrt(2.0);
  r = oap_eig(vec({h, h}));
  CHECK(max_abs_diff(r.canonical(), vec({h, h})) < 1e-15);
  CHECK(r.witness == std::vector<int>{0});

  // P e_1 = 0 for the first index: it is skipped
  Matrix u(3, 1);
  u << 0, -0.6, 0.8;
  r = oap_eig(u);
  CHECK(r.witness == std::vector<int>{1});
  CHECK(max_abs_diff(r.canonical(), -u) < 1e-15);

  Matrix bad(2, 1);
  bad << 1, 1;
  CHECK_THROWS_AS(oap_eig(bad), Error);
}

TEST_CASE("oap_eig follows the greedy axis-projection simulation") {
  // Oracle: accept P e_i when it raises the numerical rank of the accepted set.
  for (std::uint64_t s = 0; s < 40; ++s) {
    const Matrix u = random_orthonormal(8, 3, s);
    const Matrix p = u * u.transpose();
    Matrix chosen(8, 0);
    for (int i = 0; i < 8 && chosen.cols() < 3; ++i) {
      Matrix trial(8, chosen.cols() + 1);
      trial << chosen, p.col(i);
      Eigen::JacobiSVD<Matrix> svd(trial);
      if (svd.singularValues().minCoeff() > 1e-6) chosen = trial;
    }
    const Matrix expected = oracle::gram_schmidt(chosen);
    CHECK(max_abs_diff(oap_eig(u).canonical(), expected) < 1e-10);
  }
}

TEST_CASE("oap_eig is basis invariant and total") {
  for (std::uint64_t s = 0; s < 300; ++s) {
    const int n = 2 + static_cast<int>(s % 11);
    const int d = 1 + static_cast<int>(s % n);
    const Matrix u = random_orthonormal(n, d, s);
    const Matrix q = random_orthogonal(d, s + 1000);
    const auto a = oap_eig(u);
    const auto b = oap_eig(u * q);
    REQUIRE(a.ok());
    CHECK(max_abs_diff(a.canonical(), b.canonical()) < 1e-8);
    CHECK(is_orthonormal(a.canonical(), 1e-10));
    CHECK(max_abs_diff(a.canonical() * a.canonical().transpose(), u * u.transpose()) < 1e-8);
  }
}

TEST_CASE("oap_eig is not permutation equivariant") {
  int mismatches = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Matrix u = random_orthonormal(6, 2, s);
    const auto p = random_permutation(6, s + 7);
    const Matrix a = permute_rows(oap_eig(u).canonical(), p);
    const Matrix b = oap_eig(permute_rows(u, p)).canonical();
    if (max_abs_diff(a, b) > 1e-6) ++mismatches;
  }
  CHECK(mismatches > 0);
}

TEST_CASE("is_sign_uncanonicalizable") {
  CHECK(is_sign_uncanonicalizable(vec({-1, 1})));
  CHECK_FALSE(is_sign_uncanonicalizable(vec({2, 1, 0})));
  CHECK(is_sign_uncanonicalizable(vec({1, -1, 2, -2, 0})));
}

TEST_CASE("is_sign_uncanonicalizable agrees with permutation search") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> entry(-2, 2);
  for (int t = 0; t < 300; ++t) {
    const int n = 2 + t % 5;
    Vector u(n);
    for (int i = 0; i < n; ++i) u(i) = entry(rng);
    if (u.norm() == 0) continue;
    CHECK(is_sign_uncanonicalizable(u) == oracle::negation_by_permutation(u));
  }
}

TEST_CASE("map_full") {
  auto r = map_full(vec({-1, 1}));
  REQUIRE(r.kind == CanonKind::Fallback);
  REQUIRE(r.forms.size() == 2);
  CHECK(max_abs_diff(r.forms[0], vec({-1, 1})) == 0.0);
  CHECK(max_abs_diff(r.forms[1], vec({1, -1})) == 0.0);

  r = map_full(vec({1, 1, -1, -1}));
  CHECK(r.kind == CanonKind::Fallback);
  CHECK(r.forms.size() == 2);

  const Vector u = vec({2, 1});
  const auto a = map_full(u);
  const auto b = map_full(-u);
  REQUIRE(a.kind == CanonKind::Single);
  CHECK(max_abs_diff(a.canonical(), b.canonical()) == 0.0);
  CHECK(std::abs(std::abs(a.canonical()(0)) - 2.0) == 0.0);

  const Permutation swap{1, 0};
  CHECK(max_abs_diff(map_full(permute_rows(u, swap)).canonical(), permute_rows(a.canonical(), swap)) == 0.0);

  CHECK_THROWS_AS(map_full(vec({0, 0})), Error);
}

TEST_CASE("map_full is sign invariant and permutation equivariant") {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const int n = 2 + static_cast<int>(s % 9);
    const Vector u = random_orthonormal(n, 1, s).col(0);
    const auto p = random_permutation(n, s + 3);
    const auto a = map_full(u);
    if (a.kind != CanonKind::Single) continue;
    CHECK(max_abs_diff(map_full(-u).canonical(), a.canonical()) < 1e-12);
    CHECK(max_abs_diff(map_full(permute_rows(u, p)).canonical(), permute_rows(a.canonical(), p)) < 1e-12);
  }
}
