#include "symcanon/canon_types.hpp"

namespace symcanon {

std::string_view to_string(CanonKind kind) {
  switch (kind) {
    case CanonKind::Single: return "Single";
    case CanonKind::Fallback: return "Fallback";
    case CanonKind::Failed: return "Failed";
  }
  return "?";
}

std::string_view to_string(KeyVariant variant) {
  switch (variant) {
    case KeyVariant::Oap: return "oap";
    case KeyVariant::MapNorm: return "map";
    case KeyVariant::FaDiag: return "fa";
    case KeyVariant::Augmented: return "augmented";
  }
  return "?";
}

KeyVariant parse_key_variant(std::string_view name) {
  if (name == "oap") return KeyVariant::Oap;
  if (name == "map") return KeyVariant::MapNorm;
  if (name == "fa") return KeyVariant::FaDiag;
  if (name == "augmented") return KeyVariant::Augmented;
  throw Error("unknown key variant '" + std::string(name) + "'");
}

const Matrix& CanonOutcome::canonical() const {
  if (forms.empty()) throw Error("canonicalization failed (" + method + "): " + diagnostic);
  return forms.front();
}

CanonOutcome CanonOutcome::single(Matrix form, std::string method, std::vector<int> witness) {
  CanonOutcome out;
  out.kind = CanonKind::Single;
  out.forms.push_back(std::move(form));
  out.method = std::move(method);
  out.witness = std::move(witness);
  return out;
}

CanonOutcome CanonOutcome::fallback(std::vector<Matrix> forms, std::string method,
                                    std::string diagnostic) {
  if (forms.size() < 2) throw Error("fallback outcome needs at least two forms");
  CanonOutcome out;
  out.kind = CanonKind::Fallback;
  out.forms = std::move(forms);
  out.method = std::move(method);
  out.diagnostic = std::move(diagnostic);
  return out;
}

CanonOutcome CanonOutcome::failed(std::string method, std::string diagnostic) {
  CanonOutcome out;
  out.kind = CanonKind::Failed;
  out.method = std::move(method);
  out.diagnostic = std::move(diagnostic);
  return out;
}

}  // namespace symcanon
