#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "symcanon/graph_canon.hpp"
#include "symcanon/linalg.hpp"

namespace symcanon {

// How a group element acts on a matrix:
//   NodeFeatures  X -> P X Q   (Q omitted = identity)
//   Adjacency     X -> P X P^T
enum class InputKind { NodeFeatures, Adjacency };

struct GroupElement {
  Permutation perm;  // empty = identity
  Matrix orth;       // empty = identity

  GroupElement inverse() const;
};

Matrix act(const GroupElement& g, const Matrix& x, InputKind kind);

enum class OutputAction { Invariant, SameAsInput };

struct Backbone {
  std::function<Matrix(const Matrix&)> evaluate;
  OutputAction output_action = OutputAction::Invariant;
  InputKind output_kind = InputKind::NodeFeatures;  // used when SameAsInput
  Eigen::Index out_rows = 0;
  Eigen::Index out_cols = 0;

  Matrix operator()(const Matrix& x) const;
};

/// Seeded two-layer perceptron on the flattened input: tanh(W1 vec(X) + b1)
/// followed by an affine read-out reshaped to out_rows x out_cols. Not
/// invariant or equivariant under any nontrivial action.
Backbone make_mlp_backbone(Eigen::Index in_rows, Eigen::Index in_cols, Eigen::Index out_rows,
                           Eigen::Index out_cols, std::uint64_t seed, int hidden = 16,
                           OutputAction action = OutputAction::Invariant,
                           InputKind output_kind = InputKind::NodeFeatures);

enum class SamplingMode { WithoutReplacement, WithReplacement };

struct AveragingOptions {
  std::uint64_t budget = 1u << 20;  // exact when the set fits
  std::uint64_t seed = 0;
  SamplingMode mode = SamplingMode::WithoutReplacement;
};

// (1/|F|) sum_{g in F} rho2(g) phi(rho1(g)^{-1} X). rho2 is the identity
// for invariant backbones.
Matrix frame_average(const Matrix& x, const std::vector<GroupElement>& frame, InputKind kind,
                     const Backbone& phi, const AveragingOptions& opts = {});

/// A sorting-permutation frame: each sigma relabels X into a canonical
/// order, so the matching group element is sigma^{-1}.
Matrix frame_average(const Matrix& x, const PermutationFrame& frame, InputKind kind,
                     const Backbone& phi, const AveragingOptions& opts = {});

struct CanonizedInput {
  Matrix form;
  GroupElement action;  // form = act(action, original)
};

/// (1/|C|) sum_{X0 in C} phi(X0), with equivariant outputs transported back
/// through the inverse canonizing action.
Matrix canonical_average(const std::vector<CanonizedInput>& canon, const Backbone& phi,
                         const AveragingOptions& opts = {});

/// Distinct forms act(g^{-1}, X) over a frame (deduplicated on a 1e-9 grid).
std::vector<CanonizedInput> induced_canonicalization(const Matrix& x,
                                                     const std::vector<GroupElement>& frame,
                                                     InputKind kind);

/// Canonical graphs as canonized adjacency inputs.
std::vector<CanonizedInput> canonized_inputs(const CanonicalSet& set);

/// Frame elements sigma^{-1} for every sigma of a permutation frame.
std::vector<GroupElement> frame_elements(const PermutationFrame& frame);

// -- PCA frame ----------------------------------------------------------------

enum class PcaCanon {
  SignThenOap,  // first-nonzero sign for d = 1, oap_eig for d > 1
  OapOnly,      // oap_eig for every eigenspace
};

/// Canonical principal axes R_X (k x k orthogonal) of a point cloud. Each
/// covariance eigenspace V is canonicalized through its data-space image
/// X_c V (orthonormalized), which moves only by a d x d rotation when X is
/// rotated, so R_{XQ} = Q^T R_X.
Matrix pca_frame(const Matrix& x, PcaCanon method = PcaCanon::SignThenOap,
                 const Tolerances& tol = {});

/// f(X) = h(X R_X) R_X^T.
Matrix pca_frame_apply(const Matrix& x, const Backbone& h,
                       PcaCanon method = PcaCanon::SignThenOap, const Tolerances& tol = {});

}  // namespace symcanon
