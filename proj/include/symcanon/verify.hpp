#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "symcanon/canon_types.hpp"
#include "symcanon/graph_gen.hpp"
#include "symcanon/lap_canon.hpp"
#include "symcanon/linalg.hpp"

namespace symcanon {

using CanonFn = std::function<CanonOutcome(const Matrix&)>;
using ModelFn = std::function<Matrix(const Matrix&)>;

// Replay information for one failing trial.
struct TrialExemplar {
  int trial = 0;
  std::uint64_t trial_seed = 0;
  int n = 0;
  int d = 0;
  std::string check;
  double error = 0.0;
  std::string note;
};

struct TrialReport {
  std::string harness;
  int total = 0;
  int failed_canon = 0;  // trials whose base canonicalization returned Failed
  std::vector<std::pair<std::string, int>> checks;  // name -> success count
  double eps = 0.0;
  std::uint64_t seed = 0;
  std::vector<TrialExemplar> exemplars;  // at most kMaxExemplars

  static constexpr std::size_t kMaxExemplars = 5;

  int count(const std::string& check) const;
  /// Trials in which the checks were evaluated.
  int evaluated() const { return total - failed_canon; }
  bool all_passed() const;
};

// Trial dimensions: n in [min_n, max_n], d in [1, min(max_d, n - 1)].
struct TrialShape {
  int min_n = 2;
  int max_n = 12;
  int max_d = 4;
};

/// Basis invariance: canon(U) == canon(U Q) for random orthonormal U and
/// random orthogonal Q. A Failed or throwing canon_fn counts as a failure.
TrialReport verify_basis_invariance(const CanonFn& canon, int trials, double eps,
                                    std::uint64_t seed, TrialShape shape = {});

/// Checks p: P canon(U) == canon(P U), q: canon(U) == canon(U Q),
/// pq: P canon(U) == canon(P U Q). Trials where canon(U) is Failed are
/// counted in failed_canon and skipped.
TrialReport verify_perm_equivariance(const CanonFn& canon, int trials, double eps,
                                     std::uint64_t seed, TrialShape shape = {});

/// model(X) Q == model(X Q) for random X (n x k, k <= 4) and orthogonal Q.
TrialReport verify_orthogonal_equivariance(const ModelFn& model, int trials, double eps,
                                           std::uint64_t seed);

/// PCA-frame model with a seeded MLP backbone per input shape.
ModelFn pca_frame_model(std::uint64_t seed, const Tolerances& tol = {});
/// The bare backbone, for contrast.
ModelFn plain_backbone_model(std::uint64_t seed);

// -- sign-invariant network counterexample -------------------------------------

struct CounterexampleReport {
  int zeros_first = 0;   // zero entries of L1 = u11 u11^T + 2 u12 u12^T
  int zeros_second = 0;  // same for L2
  double max_column_dot = 0.0;  // normalized columns
  bool all_uncanonicalizable = false;
  bool abs_values_match = false;
  Permutation abs_matching;  // row i of |U1| equals row abs_matching[i] of |U2|
  int n_functions = 0;
  int agreeing = 0;
  double max_gap = 0.0;
  double tolerance = 1e-6;

  bool passed() const;
};

/// Builds the two 10 x 2 eigenvector matrices whose Laplacians are
/// non-isomorphic (24 vs 16 zeros) but which every two-branch
/// sign-invariant network maps to the same output. Throws if any of the
/// pinned properties fails; the random-function agreement is reported.
CounterexampleReport signnet_counterexample(std::uint64_t seed, int n_functions,
                                            double tolerance = 1e-6);

/// Integer columns of the two eigenvector matrices (10 x 2 each).
const std::vector<std::vector<int>>& counterexample_u1();
const std::vector<std::vector<int>>& counterexample_u2();

// -- corpus-level superiority -----------------------------------------------

struct VariantTally {
  KeyVariant variant = KeyVariant::Oap;
  int instances = 0;
  int single = 0;
  int failed = 0;
  double failed_ratio() const { return instances ? static_cast<double>(failed) / instances : 0.0; }
};

struct SuperiorityReport {
  std::vector<VariantTally> tallies;  // one per requested variant
  int instances = 0;                  // multiplicity >= 2 eigenspaces
  bool dominance = true;              // Oap succeeds wherever another variant does
  int dominance_violations = 0;
  std::vector<std::string> strict_witnesses;  // "graph:space" where Oap wins, MapNorm fails
  std::vector<std::string> fa_witnesses;      // same against FaDiag

  const VariantTally& tally(KeyVariant v) const;
};

SuperiorityReport superiority_report(const std::vector<gen::NamedGraph>& corpus,
                                     const std::vector<KeyVariant>& variants,
                                     double c = kDefaultSummaryOffset, const Tolerances& tol = {});

// key=value rendering used by the CLI and the acceptance suite.
void write_kv(std::ostream& out, const TrialReport& r);
void write_kv(std::ostream& out, const CounterexampleReport& r);
void write_kv(std::ostream& out, const SuperiorityReport& r);

}  // namespace symcanon
