#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "symcanon/linalg.hpp"

namespace symcanon {

enum class CanonKind { Single, Fallback, Failed };

std::string_view to_string(CanonKind kind);

// Which per-index refinement key ranks the axis projections.
//   Oap       (P_ii, multiset {P_ij : j != i})
//   MapNorm   ||P_i||, with the first-d index restriction
//   FaDiag    P_ii
//   Augmented Oap key extended with node features / sibling eigenspaces
enum class KeyVariant { Oap, MapNorm, FaDiag, Augmented };

std::string_view to_string(KeyVariant variant);
KeyVariant parse_key_variant(std::string_view name);

struct CanonOutcome {
  CanonKind kind = CanonKind::Failed;
  std::vector<Matrix> forms;  // empty iff kind == Failed
  std::string method;
  std::vector<int> witness;   // indices (or group positions) used, 0-based
  std::string diagnostic;

  bool ok() const { return kind != CanonKind::Failed; }
  /// First form; throws on Failed.
  const Matrix& canonical() const;

  static CanonOutcome single(Matrix form, std::string method, std::vector<int> witness = {});
  static CanonOutcome fallback(std::vector<Matrix> forms, std::string method,
                               std::string diagnostic = {});
  static CanonOutcome failed(std::string method, std::string diagnostic);
};

}  // namespace symcanon
