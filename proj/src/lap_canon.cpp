#include "symcanon/lap_canon.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "symcanon/eig_canon.hpp"

namespace symcanon {

std::int64_t quantize(double x, double tau) {
  return static_cast<std::int64_t>(std::llround(x / tau));
}

namespace {

std::vector<std::int64_t> oap_parts(const Matrix& p, Eigen::Index i, double tau) {
  const auto n = p.rows();
  std::vector<std::int64_t> parts;
  parts.reserve(n);
  parts.push_back(quantize(p(i, i), tau));
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j != i) parts.push_back(quantize(p(i, j), tau));
  }
  std::sort(parts.begin() + 1, parts.end(), std::greater<>());
  return parts;
}

}  // namespace

std::vector<RefinementKey> refinement_keys(const Matrix& p, KeyVariant variant,
                                           double tau_quant) {
  require_finite(p, "refinement_keys");
  if (p.rows() != p.cols()) throw Error("refinement_keys: matrix is not square");
  std::vector<RefinementKey> keys(p.rows());
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    auto& key = keys[i];
    key.variant = variant;
    switch (variant) {
      case KeyVariant::Oap:
      case KeyVariant::Augmented:
        key.parts = oap_parts(p, i, tau_quant);
        break;
      case KeyVariant::MapNorm:
        key.parts = {quantize(p.row(i).norm(), tau_quant)};
        break;
      case KeyVariant::FaDiag:
        key.parts = {quantize(p(i, i), tau_quant)};
        break;
    }
  }
  return keys;
}

std::vector<SummaryGroup> summary_groups(const std::vector<RefinementKey>& keys, double c) {
  const int n = static_cast<int>(keys.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return keys[b] < keys[a]; });

  std::vector<SummaryGroup> groups;
  for (int pos = 0; pos < n;) {
    int end = pos + 1;
    while (end < n && keys[order[end]] == keys[order[pos]]) ++end;
    SummaryGroup g;
    g.members.assign(order.begin() + pos, order.begin() + end);
    std::sort(g.members.begin(), g.members.end());
    g.summary = Vector::Constant(n, c);
    for (int m : g.members) g.summary(m) += 1.0;
    g.rank_position = static_cast<int>(groups.size());
    groups.push_back(std::move(g));
    pos = end;
  }
  return groups;
}

CanonOutcome oap_lap_with_keys(const Matrix& u, const std::vector<RefinementKey>& keys,
                               bool restrict_to_first_d, const LapCanonConfig& config,
                               std::string method) {
  const auto& tol = config.tol;
  tol.validate();
  require_finite(u, "oap_lap");
  if (!is_orthonormal(u, 1e-9)) throw Error("oap_lap: input columns are not orthonormal");
  const auto n = u.rows();
  const auto d = u.cols();
  if (d == 0) throw Error("oap_lap: empty eigenspace");
  if (static_cast<Eigen::Index>(keys.size()) != n) throw Error("oap_lap: one key per row required");

  const Matrix p = u * u.transpose();
  const auto groups = summary_groups(keys, config.c);
  const auto k = static_cast<Eigen::Index>(groups.size());
  if (k < d) {
    return CanonOutcome::failed(method, "only " + std::to_string(k) +
                                            " distinct keys for dimension " + std::to_string(d));
  }

  const Eigen::Index scan = restrict_to_first_d ? d : k;
  Matrix span(n, d);
  Matrix picked(n, d);
  std::vector<int> witness;
  Eigen::Index rank = 0;
  for (Eigen::Index g = 0; g < scan && rank < d; ++g) {
    const Vector proj = p * groups[g].summary;
    const double norm = proj.norm();
    bool accepted = false;
    if (norm >= tol.eps_rank) {
      const Vector unit = proj / norm;
      auto test = residual_accept(unit, span.leftCols(rank), tol.eps_rank);
      if (test.accepted) {
        span.col(rank) = test.residual.normalized();
        picked.col(rank) = unit;
        witness.push_back(static_cast<int>(g));
        ++rank;
        accepted = true;
      }
    }
    if (!accepted && restrict_to_first_d) {
      return CanonOutcome::failed(method, "summary group " + std::to_string(g) +
                                              " adds no new direction");
    }
  }
  if (rank < d) {
    return CanonOutcome::failed(method, "summary projections reach rank " +
                                            std::to_string(rank) + " of " + std::to_string(d));
  }
  return CanonOutcome::single(gram_schmidt(picked, tol.eps_rank / 2), std::move(method),
                              std::move(witness));
}

CanonOutcome oap_lap(const Matrix& u, const LapCanonConfig& config) {
  require_finite(u, "oap_lap");
  const Matrix p = u * u.transpose();
  return oap_lap_with_keys(u, refinement_keys(p, config.variant, config.tol.tau_quant),
                           config.variant == KeyVariant::MapNorm, config,
                           "oap-lap/" + std::string(to_string(config.variant)));
}

std::vector<RefinementKey> augmented_keys(const Matrix& p,
                                          const std::optional<Matrix>& node_features,
                                          const std::vector<Matrix>& sibling_projections,
                                          double tau_quant) {
  const auto n = p.rows();
  if (node_features && node_features->rows() != n) {
    throw Error("augmented_keys: feature rows " + std::to_string(node_features->rows()) +
                " do not match n = " + std::to_string(n));
  }
  std::vector<std::vector<RefinementKey>> sibling_keys;
  for (const auto& s : sibling_projections) {
    if (s.rows() != n || s.cols() != n) {
      throw Error("augmented_keys: sibling projection is not " + std::to_string(n) + "x" +
                  std::to_string(n));
    }
    sibling_keys.push_back(refinement_keys(s, KeyVariant::Oap, tau_quant));
  }

  auto keys = refinement_keys(p, KeyVariant::Oap, tau_quant);
  for (Eigen::Index i = 0; i < n; ++i) {
    auto& parts = keys[i].parts;
    keys[i].variant = KeyVariant::Augmented;
    if (node_features) {
      for (Eigen::Index f = 0; f < node_features->cols(); ++f) {
        parts.push_back(quantize((*node_features)(i, f), tau_quant));
      }
    }
    if (!sibling_keys.empty()) {
      std::vector<std::vector<std::int64_t>> others;
      for (const auto& sk : sibling_keys) others.push_back(sk[i].parts);
      std::sort(others.begin(), others.end());
      for (const auto& o : others) parts.insert(parts.end(), o.begin(), o.end());
    }
  }
  return keys;
}

std::string_view to_string(PeMethod method) {
  switch (method) {
    case PeMethod::SignFirst: return "sign-first";
    case PeMethod::OapEig: return "oap-eig";
    case PeMethod::OapLap: return "oap-lap";
    case PeMethod::Map: return "map";
    case PeMethod::FaLap: return "fa-lap";
    case PeMethod::MapFull: return "map-full";
  }
  return "?";
}

PeMethod parse_pe_method(std::string_view name) {
  if (name == "sign-first") return PeMethod::SignFirst;
  if (name == "oap-eig") return PeMethod::OapEig;
  if (name == "oap-lap" || name == "oap") return PeMethod::OapLap;
  if (name == "map") return PeMethod::Map;
  if (name == "fa-lap" || name == "fa") return PeMethod::FaLap;
  if (name == "map-full") return PeMethod::MapFull;
  throw Error("unknown method '" + std::string(name) + "'");
}

CanonOutcome canonicalize_space(const Matrix& basis, const PePolicy& policy,
                                const Tolerances& tol) {
  const bool sign_only = basis.cols() == 1;
  auto lap = [&](KeyVariant v) {
    if (sign_only) return map_full(basis.col(0), v, policy.c, tol);
    return oap_lap(basis, LapCanonConfig{v, policy.c, tol});
  };
  switch (policy.method) {
    case PeMethod::SignFirst:
      return sign_only ? sign_canon_first_nonzero(basis.col(0), tol.eps_zero) : oap_eig(basis, tol);
    case PeMethod::OapEig:
      return oap_eig(basis, tol);
    case PeMethod::OapLap:
      return lap(policy.variant);
    case PeMethod::Map:
      return lap(KeyVariant::MapNorm);
    case PeMethod::FaLap:
      return lap(KeyVariant::FaDiag);
    case PeMethod::MapFull:
      if (sign_only) return map_full(basis.col(0), policy.variant, policy.c, tol);
      return CanonOutcome::failed("map-full", "no basis canonicalization for d > 1");
  }
  throw Error("canonicalize_space: unhandled method");
}

PeResult canonicalize_pe(const Matrix& l, int k_vectors, const PePolicy& policy,
                         const Tolerances& tol) {
  if (k_vectors < 0) throw Error("canonicalize_pe: k must be non-negative");
  const auto spaces = sym_eig(l, tol);
  const auto n = l.rows();

  PeResult result;
  result.pe = Matrix::Zero(n, k_vectors);
  result.padded = k_vectors > n;
  Eigen::Index col = 0;
  for (const auto& space : spaces) {
    if (col >= k_vectors) break;
    const auto outcome = canonicalize_space(space.basis, policy, tol);
    const Matrix& chosen = outcome.ok() ? outcome.forms.front() : space.basis;
    const auto take = std::min<Eigen::Index>(chosen.cols(), k_vectors - col);
    result.pe.middleCols(col, take) = chosen.leftCols(take);
    col += take;

    SpaceStatus status;
    status.eigenvalue = space.eigenvalue;
    status.multiplicity = space.multiplicity();
    status.kind = outcome.kind;
    status.method = outcome.method;
    status.witness = outcome.witness;
    status.columns_used = static_cast<int>(take);
    switch (outcome.kind) {
      case CanonKind::Single: ++result.single; break;
      case CanonKind::Fallback: ++result.fallback; break;
      case CanonKind::Failed: ++result.failed; break;
    }
    result.spaces.push_back(std::move(status));
  }
  return result;
}

}  // namespace symcanon
