#pragma once

#include <compare>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "symcanon/canon_types.hpp"
#include "symcanon/linalg.hpp"

namespace symcanon {

inline constexpr double kDefaultSummaryOffset = std::numbers::inv_pi;

// A per-index key, flattened to a tuple of quantized integers. Keys produced
// by one call share a layout, so lexicographic order on the flat tuple is
// the tuple order.
struct RefinementKey {
  KeyVariant variant = KeyVariant::Oap;
  std::vector<std::int64_t> parts;

  friend bool operator==(const RefinementKey& a, const RefinementKey& b) {
    return a.parts == b.parts;
  }
  friend std::strong_ordering operator<=>(const RefinementKey& a, const RefinementKey& b) {
    return a.parts <=> b.parts;
  }
};

std::int64_t quantize(double x, double tau);

/// One key per row of p. Augmented behaves like Oap here; use
/// augmented_keys to add features.
std::vector<RefinementKey> refinement_keys(const Matrix& p, KeyVariant variant,
                                           double tau_quant = 1e-6);

struct SummaryGroup {
  std::vector<int> members;  // ascending
  Vector summary;            // sum of e_j over members, plus c * 1
  int rank_position = 0;     // 0 = largest key
};

/// Groups indices with equal keys, in descending key order.
std::vector<SummaryGroup> summary_groups(const std::vector<RefinementKey>& keys, double c);

struct LapCanonConfig {
  KeyVariant variant = KeyVariant::Oap;
  double c = kDefaultSummaryOffset;
  Tolerances tol;
};

/// Permutation-equivariant, basis-invariant canonicalization of an
/// eigenspace basis. Failed is returned as a value when fewer than d
/// independent summary projections exist.
CanonOutcome oap_lap(const Matrix& u, const LapCanonConfig& config = {});

/// Same pipeline with caller-supplied keys (one per row of u).
/// restrict_to_first_d reproduces MAP's i_j = j index rule.
CanonOutcome oap_lap_with_keys(const Matrix& u, const std::vector<RefinementKey>& keys,
                               bool restrict_to_first_d, const LapCanonConfig& config,
                               std::string method);

/// Oap keys refined by quantized node-feature rows and by the per-index
/// keys of sibling eigenspaces (target key first, then the sorted multiset
/// of sibling keys).
std::vector<RefinementKey> augmented_keys(const Matrix& p,
                                          const std::optional<Matrix>& node_features,
                                          const std::vector<Matrix>& sibling_projections,
                                          double tau_quant = 1e-6);

// -- positional-encoding pipeline ------------------------------------------

enum class PeMethod { SignFirst, OapEig, OapLap, Map, FaLap, MapFull };

std::string_view to_string(PeMethod method);
PeMethod parse_pe_method(std::string_view name);

struct PePolicy {
  PeMethod method = PeMethod::OapLap;
  // Key variant used by OapLap / MapFull; Map and FaLap fix their own.
  KeyVariant variant = KeyVariant::Oap;
  double c = kDefaultSummaryOffset;
};

struct SpaceStatus {
  double eigenvalue = 0.0;
  int multiplicity = 0;
  CanonKind kind = CanonKind::Single;
  std::string method;
  std::vector<int> witness;
  int columns_used = 0;  // columns contributed to the PE matrix
};

struct PeResult {
  Matrix pe;
  std::vector<SpaceStatus> spaces;
  bool padded = false;  // k_vectors > n, trailing columns are zero
  int single = 0;
  int fallback = 0;
  int failed = 0;
};

/// Eigendecomposes l, canonicalizes each eigenspace per policy, and
/// concatenates the first k_vectors canonical eigenvectors in ascending
/// eigenvalue order.
PeResult canonicalize_pe(const Matrix& l, int k_vectors, const PePolicy& policy,
                         const Tolerances& tol = {});

/// Canonicalizes one eigenspace basis per policy (d = 1 uses the sign
/// method, d > 1 the basis method). MapFull has no basis method, so its
/// d > 1 spaces come back Failed and are passed through raw by
/// canonicalize_pe.
CanonOutcome canonicalize_space(const Matrix& basis, const PePolicy& policy,
                                const Tolerances& tol = {});

}  // namespace symcanon
