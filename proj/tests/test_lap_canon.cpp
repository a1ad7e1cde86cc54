#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "symcanon/graph_canon.hpp"
#include "symcanon/graph_gen.hpp"
#include "symcanon/lap_canon.hpp"

using namespace symcanon;

TEST_CASE("quantize") {
  CHECK(quantize(0.5e-6, 1e-6) == 1);
  CHECK(quantize(-2.4e-6, 1e-6) == -2);
  CHECK(quantize(1.0, 0.25) == 4);
}

TEST_CASE("refinement keys distinguish rows the weaker keys merge") {
  Matrix p(2, 2);
  p << 1, 0, 1, 0;
  auto map = refinement_keys(p, KeyVariant::MapNorm);
  auto oap = refinement_keys(p, KeyVariant::Oap);
  CHECK(map[0] == map[1]);
  CHECK(oap[0] != oap[1]);

  p << 1, 1, 2, 1;
  auto fa = refinement_keys(p, KeyVariant::FaDiag);
  oap = refinement_keys(p, KeyVariant::Oap);
  CHECK(fa[0] == fa[1]);
  CHECK(oap[0] != oap[1]);

  const Matrix flat = Matrix::Constant(4, 4, 0.25);
  for (auto v : {KeyVariant::Oap, KeyVariant::MapNorm, KeyVariant::FaDiag}) {
    const auto keys = refinement_keys(flat, v);
    for (const auto& k : keys) CHECK(k == keys[0]);
  }
}

TEST_CASE("OAP keys refine MAP and FA keys and are permutation equivariant") {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const int n = 3 + static_cast<int>(s % 6);
    const Matrix u = random_orthonormal(n, 2, s);
    const Matrix p = u * u.transpose();
    const auto oap = refinement_keys(p, KeyVariant::Oap);
    const auto map = refinement_keys(p, KeyVariant::MapNorm);
    const auto fa = refinement_keys(p, KeyVariant::FaDiag);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (oap[i] == oap[j]) {
          CHECK(map[i] == map[j]);
          CHECK(fa[i] == fa[j]);
        }
    const auto perm = random_permutation(n, s + 1);
    const auto moved = refinement_keys(permute_symmetric(p, perm), KeyVariant::Oap);
    for (int i = 0; i < n; ++i) CHECK(moved[perm[i]] == oap[i]);
  }
}

TEST_CASE("summary_groups") {
  auto keys_of = [](std::vector<std::int64_t> v) {
    std::vector<RefinementKey> keys;
    for (auto x : v) keys.push_back({KeyVariant::FaDiag, {x}});
    return keys;
  };
  auto g = summary_groups(keys_of({3, 1, 2}), 0.0);
  REQUIRE(g.size() == 3);
  CHECK(g[0].members == std::vector<int>{0});
  CHECK(g[1].members == std::vector<int>{2});
  CHECK(g[2].members == std::vector<int>{1});
  CHECK(max_abs_diff(g[1].summary, Vector::Unit(3, 2)) == 0.0);

  g = summary_groups(keys_of({5, 5, 5}), 0.0);
  REQUIRE(g.size() == 1);
  CHECK(max_abs_diff(g[0].summary, Vector::Ones(3)) == 0.0);

  g = summary_groups(keys_of({7, 7, 2}), 0.5);
  REQUIRE(g.size() == 2);
  CHECK(g[0].members == std::vector<int>{0, 1});
  CHECK(g[1].members == std::vector<int>{2});
  Vector x1(3), x2(3);
  x1 << 1.5, 1.5, 0.5;
  x2 << 0.5, 0.5, 1.5;
  CHECK(max_abs_diff(g[0].summary, x1) == 0.0);
  CHECK(max_abs_diff(g[1].summary, x2) == 0.0);
  CHECK(g[1].rank_position == 1);
}

TEST_CASE("oap_lap on single vectors") {
  Matrix u(2, 1);
  u << 2 / std::sqrt(5.0), 1 / std::sqrt(5.0);
  const auto a = oap_lap(u);
  REQUIRE(a.kind == CanonKind::Single);
  oracle::for_each_permutation(2, [&](const Permutation& p) {
    CHECK(max_abs_diff(oap_lap(permute_rows(u, p)).canonical(), permute_rows(a.canonical(), p)) < 1e-14);
  });

  u << -1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  const auto b = oap_lap(u, LapCanonConfig{KeyVariant::Oap, 0.0, {}});
  CHECK(b.kind == CanonKind::Failed);
  CHECK(b.forms.empty());
  CHECK_THROWS_AS(b.canonical(), Error);

  Matrix bad(2, 1);
  bad << 1, 1;
  CHECK_THROWS_AS(oap_lap(bad), Error);
}

TEST_CASE("oap_lap relates permuted and rotated inputs by the permutation") {
  int failed = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const Matrix u = random_orthonormal(10, 2, s);
    const auto p = random_permutation(10, s + 1);
    const Matrix q = random_orthogonal(2, s + 2);
    const auto base = oap_lap(u);
    if (!base.ok()) {
      ++failed;
      continue;
    }
    const auto moved = oap_lap(permute_rows(u * q, p));
    REQUIRE(moved.ok());
    CHECK(max_abs_diff(moved.canonical(), permute_rows(base.canonical(), p)) < 1e-6);
  }
  CHECK(failed == 0);
}

TEST_CASE("MAP restriction fails where the greedy scan succeeds") {
  // Zero eigenspace of a fan plus a long cycle: the center and the joined
  // spoke pair project onto the same direction.
  const Graph g = gen::disjoint_union(gen::fan(8), gen::cycle(20));
  const auto spaces = sym_eig(normalized_laplacian(g));
  REQUIRE(spaces[0].multiplicity() == 2);
  CHECK(oap_lap(spaces[0].basis, {KeyVariant::Oap}).kind == CanonKind::Single);
  CHECK(oap_lap(spaces[0].basis, {KeyVariant::FaDiag}).kind == CanonKind::Single);
  CHECK(oap_lap(spaces[0].basis, {KeyVariant::MapNorm}).kind == CanonKind::Failed);
}

TEST_CASE("augmented_keys") {
  const Matrix u = random_orthonormal(5, 2, 3);
  const Matrix p = u * u.transpose();
  const auto plain = refinement_keys(p, KeyVariant::Oap);
  const auto aug = augmented_keys(p, std::nullopt, {});
  for (int i = 0; i < 5; ++i) CHECK(aug[i].parts == plain[i].parts);

  const Matrix flat = Matrix::Constant(3, 3, 1.0 / 3);
  Matrix features(3, 1);
  features << 0, 1, 0;
  const auto with_features = augmented_keys(flat, features, {});
  CHECK(with_features[0] == with_features[2]);
  CHECK(with_features[0] != with_features[1]);

  CHECK_THROWS_AS(augmented_keys(flat, Matrix::Zero(2, 1), {}), Error);
  CHECK_THROWS_AS(augmented_keys(flat, std::nullopt, {Matrix::Zero(2, 2)}), Error);
}

TEST_CASE("node features rescue a failed eigenspace") {
  // Small cycles and paths with node 0 marked: the reflection that defeats
  // plain OAP no longer preserves the features.
  bool found = false;
  for (int n = 3; n <= 8 && !found; ++n) {
    for (const Graph& g : {gen::cycle(n), gen::path(n)}) {
      const auto spaces = sym_eig(normalized_laplacian(g));
      for (const auto& sp : spaces) {
        const Matrix p = sp.basis * sp.basis.transpose();
        if (oap_lap(sp.basis).kind != CanonKind::Failed) continue;
        Matrix features = Matrix::Zero(n, 1);
        features(0, 0) = 1;
        const auto keys = augmented_keys(p, features, {});
        const auto r = oap_lap_with_keys(sp.basis, keys, false, {}, "augmented");
        if (r.kind == CanonKind::Single) {
          found = true;
          // marking node 0 and relabeling should move the output with the labels
          const auto perm = random_permutation(n, 9);
          Matrix moved_features = permute_rows(features, perm);
          const Matrix moved_basis = permute_rows(sp.basis, perm);
          const Matrix mp = moved_basis * moved_basis.transpose();
          const auto r2 = oap_lap_with_keys(moved_basis, augmented_keys(mp, moved_features, {}), false,
                                            {}, "augmented");
          REQUIRE(r2.kind == CanonKind::Single);
          CHECK(max_abs_diff(r2.canonical(), permute_rows(r.canonical(), perm)) < 1e-8);
          break;
        }
      }
      if (found) break;
    }
  }
  CHECK(found);
}

TEST_CASE("canonicalize_pe on small graphs") {
  const PePolicy oap{};
  auto r = canonicalize_pe(normalized_laplacian(gen::path(3)), 2, oap);
  CHECK(r.pe.rows() == 3);
  CHECK(r.pe.cols() == 2);
  CHECK_FALSE(r.padded);
  REQUIRE(r.spaces.size() == 2);
  for (const auto& sp : r.spaces) CHECK(sp.multiplicity == 1);
  CHECK(r.spaces[0].kind == CanonKind::Single);
  // [1, 0, -1]/sqrt(2) is mapped to its negative by the end-swap.
  CHECK(r.spaces[1].kind == CanonKind::Fallback);

  PePolicy sign{PeMethod::SignFirst};
  r = canonicalize_pe(normalized_laplacian(gen::path(3)), 4, sign);
  CHECK(r.padded);
  CHECK(r.single == 3);
  CHECK(r.pe.col(3).isZero());

  const Matrix c4 = normalized_laplacian(gen::cycle(4));
  for (auto m : {PeMethod::OapLap, PeMethod::Map, PeMethod::FaLap}) {
    const auto res = canonicalize_pe(c4, 4, PePolicy{m});
    REQUIRE(res.spaces.size() == 3);
    CHECK(res.spaces[1].multiplicity == 2);
    CHECK(res.spaces[1].kind == CanonKind::Failed);
    // Failed spaces pass through as raw eigenvectors
    CHECK(is_orthonormal(res.pe, 1e-9));
  }

  const Matrix star = normalized_laplacian(gen::star(5));
  const auto so = canonicalize_pe(star, 6, PePolicy{PeMethod::OapLap});
  const auto sm = canonicalize_pe(star, 6, PePolicy{PeMethod::Map});
  const auto sf = canonicalize_pe(star, 6, PePolicy{PeMethod::FaLap});
  CHECK(so.single + so.fallback >= sm.single + sm.fallback);
  CHECK(so.single + so.fallback >= sf.single + sf.fallback);

  const auto full = canonicalize_pe(c4, 4, PePolicy{PeMethod::MapFull});
  CHECK(full.failed == 1);
  CHECK_THROWS_AS(canonicalize_pe(c4, -1, oap), Error);
}

TEST_CASE("PE methods parse by name") {
  CHECK(parse_pe_method("oap") == PeMethod::OapLap);
  CHECK(parse_pe_method("fa") == PeMethod::FaLap);
  CHECK(parse_pe_method("map-full") == PeMethod::MapFull);
  CHECK(to_string(PeMethod::SignFirst) == "sign-first");
  CHECK_THROWS_AS(parse_pe_method("nope"), Error);
  CHECK(parse_key_variant("map") == KeyVariant::MapNorm);
  CHECK_THROWS_AS(parse_key_variant("x"), Error);
}
