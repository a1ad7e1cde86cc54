#include "symcanon/eig_canon.hpp"

#include <algorithm>
#include <cmath>

#include "symcanon/lap_canon.hpp"

namespace symcanon {

CanonOutcome sign_canon_first_nonzero(const Vector& u, double eps_zero) {
  require_finite(u, "sign_canon_first_nonzero");
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (std::abs(u(i)) > eps_zero) {
      Matrix form = u;
      if (u(i) < 0) form = -form;
      return CanonOutcome::single(std::move(form), "sign-first", {static_cast<int>(i)});
    }
  }
  throw Error("sign_canon_first_nonzero: vector has no entry above eps_zero");
}

CanonOutcome oap_eig(const Matrix& u, const Tolerances& tol) {
  tol.validate();
  require_finite(u, "oap_eig");
  if (!is_orthonormal(u, 1e-9)) throw Error("oap_eig: input columns are not orthonormal");
  const auto n = u.rows();
  const auto d = u.cols();
  if (d == 0) throw Error("oap_eig: empty eigenspace");

  const Matrix p = u * u.transpose();
  Matrix span(n, d);   // orthonormalized accepted vectors, for the rank test
  Matrix picked(n, d); // normalized projections P e_i, in scan order
  std::vector<int> witness;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < n && rank < d; ++i) {
    const Vector proj = p.col(i);
    const double norm = proj.norm();
    if (norm < tol.eps_rank) continue;
    const Vector unit = proj / norm;
    auto test = residual_accept(unit, span.leftCols(rank), tol.eps_rank);
    if (!test.accepted) continue;
    span.col(rank) = test.residual.normalized();
    picked.col(rank) = unit;
    witness.push_back(static_cast<int>(i));
    ++rank;
  }
  if (rank < d) {
    // Unreachable for orthonormal input: the axis projections span the space.
    throw Error("oap_eig: found only " + std::to_string(rank) + " of " + std::to_string(d) +
                " independent axis projections");
  }
  return CanonOutcome::single(gram_schmidt(picked, tol.eps_rank / 2), "oap-eig",
                              std::move(witness));
}

bool is_sign_uncanonicalizable(const Vector& u, double tau_quant) {
  std::vector<std::int64_t> pos(u.size());
  std::vector<std::int64_t> neg(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    pos[i] = quantize(u(i), tau_quant);
    neg[i] = -pos[i];
  }
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());
  return pos == neg;
}

CanonOutcome map_full(const Vector& u, KeyVariant keys, double c, const Tolerances& tol) {
  tol.validate();
  require_finite(u, "map_full");
  const double norm = u.norm();
  if (norm <= tol.eps_zero) throw Error("map_full: zero vector");

  const Matrix unit = u / norm;
  LapCanonConfig config{keys, c, tol};
  const auto outcome = oap_lap_with_keys(
      unit, refinement_keys(unit * unit.transpose(), keys, tol.tau_quant),
      keys == KeyVariant::MapNorm, config, "map-full");
  if (outcome.kind == CanonKind::Single) {
    const double s = outcome.canonical().col(0).dot(u) >= 0 ? 1.0 : -1.0;
    return CanonOutcome::single(Matrix(s * u), "map-full", outcome.witness);
  }
  return CanonOutcome::fallback({Matrix(u), Matrix(-u)}, "map-full",
                                "sign-uncanonicalizable: " + outcome.diagnostic);
}

}  // namespace symcanon
