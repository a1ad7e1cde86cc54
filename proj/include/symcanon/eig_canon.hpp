#pragma once

#include "symcanon/canon_types.hpp"
#include "symcanon/linalg.hpp"

namespace symcanon {

// Canonicalization of eigenvectors when no permutation equivariance is
// required, plus the sign-canonicalizability test and the MAP-full fallback.

/// Flips u so that its first entry with |u_i| > eps_zero is positive.
CanonOutcome sign_canon_first_nonzero(const Vector& u, double eps_zero = 1e-8);

/// Orthogonalized axis projection: scans P e_1, ..., P e_n in index order,
/// greedily keeps projections that raise the rank until d are found, and
/// returns their Gram-Schmidt orthonormalization. Basis invariant; the
/// witness holds the selected indices. Never fails on orthonormal input.
CanonOutcome oap_eig(const Matrix& u, const Tolerances& tol = {});

/// True iff the quantized multiset of entries of u equals that of -u, i.e.
/// some permutation maps u to -u.
bool is_sign_uncanonicalizable(const Vector& u, double tau_quant = 1e-6);

/// Permutation-equivariant sign canonicalization of a single eigenvector.
/// Single when the d = 1 axis-projection pipeline succeeds, otherwise the
/// two-element fallback {u, -u}.
CanonOutcome map_full(const Vector& u, KeyVariant keys = KeyVariant::Oap,
                      double c = 0.3183098861837907, const Tolerances& tol = {});

}  // namespace symcanon
