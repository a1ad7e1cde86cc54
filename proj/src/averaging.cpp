#include "symcanon/averaging.hpp"

#include <cmath>
#include <map>
#include <random>

#include "symcanon/eig_canon.hpp"
#include "symcanon/lap_canon.hpp"

namespace symcanon {

GroupElement GroupElement::inverse() const {
  GroupElement out;
  if (!perm.empty()) out.perm = symcanon::inverse(perm);
  if (orth.size() > 0) out.orth = orth.transpose();
  return out;
}

Matrix act(const GroupElement& g, const Matrix& x, InputKind kind) {
  Matrix out = x;
  if (kind == InputKind::Adjacency) {
    if (g.orth.size() > 0) throw Error("act: orthogonal action on an adjacency input");
    if (!g.perm.empty()) out = permute_symmetric(out, g.perm);
    return out;
  }
  if (!g.perm.empty()) out = permute_rows(out, g.perm);
  if (g.orth.size() > 0) {
    if (g.orth.rows() != out.cols()) throw Error("act: orthogonal factor has the wrong size");
    out = out * g.orth;
  }
  return out;
}

Matrix Backbone::operator()(const Matrix& x) const {
  Matrix y = evaluate(x);
  if ((out_rows && y.rows() != out_rows) || (out_cols && y.cols() != out_cols)) {
    throw Error("backbone returned a matrix of unexpected shape");
  }
  return y;
}

Backbone make_mlp_backbone(Eigen::Index in_rows, Eigen::Index in_cols, Eigen::Index out_rows,
                           Eigen::Index out_cols, std::uint64_t seed, int hidden,
                           OutputAction action, InputKind output_kind) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Eigen::Index in = in_rows * in_cols;
  const Eigen::Index out = out_rows * out_cols;
  auto fill = [&](Eigen::Index r, Eigen::Index c, double scale) {
    Matrix m(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
      for (Eigen::Index i = 0; i < r; ++i) m(i, j) = scale * normal(rng);
    return m;
  };
  const Matrix w1 = fill(hidden, in, 1.0 / std::sqrt(static_cast<double>(in)));
  const Vector b1 = fill(hidden, 1, 0.5);
  const Matrix w2 = fill(out, hidden, 1.0 / std::sqrt(static_cast<double>(hidden)));
  const Vector b2 = fill(out, 1, 0.5);

  Backbone bb;
  bb.output_action = action;
  bb.output_kind = output_kind;
  bb.out_rows = out_rows;
  bb.out_cols = out_cols;
  bb.evaluate = [=](const Matrix& x) -> Matrix {
    if (x.rows() != in_rows || x.cols() != in_cols) throw Error("backbone: unexpected input shape");
    const Vector flat = Eigen::Map<const Vector>(x.data(), x.size());
    const Vector h = (w1 * flat + b1).array().tanh().matrix();
    const Vector y = w2 * h + b2;
    return Eigen::Map<const Matrix>(y.data(), out_rows, out_cols);
  };
  return bb;
}

namespace {

// Ordered sum over the selected terms; the summation order is fixed by the
// index sequence so results are reproducible.
template <typename Term>
Matrix average_terms(std::size_t total, const AveragingOptions& opts, Term term) {
  if (total == 0) throw Error("averaging over an empty set");
  std::vector<std::size_t> picks;
  if (total <= opts.budget) {
    picks.resize(total);
    for (std::size_t i = 0; i < total; ++i) picks[i] = i;
  } else if (opts.mode == SamplingMode::WithoutReplacement) {
    picks = sample_without_replacement(total, opts.budget, opts.seed);
  } else {
    std::mt19937_64 rng(opts.seed);
    std::uniform_int_distribution<std::size_t> pick(0, total - 1);
    for (std::uint64_t i = 0; i < opts.budget; ++i) picks.push_back(pick(rng));
  }
  Matrix sum = term(picks.front());
  for (std::size_t i = 1; i < picks.size(); ++i) sum += term(picks[i]);
  return sum / static_cast<double>(picks.size());
}

Matrix transport(const Backbone& phi, const GroupElement& g, Matrix y) {
  if (phi.output_action == OutputAction::Invariant) return y;
  return act(g, y, phi.output_kind);
}

}  // namespace

Matrix frame_average(const Matrix& x, const std::vector<GroupElement>& frame, InputKind kind,
                     const Backbone& phi, const AveragingOptions& opts) {
  require_finite(x, "frame_average");
  if (frame.empty()) throw Error("frame_average: empty frame");
  return average_terms(frame.size(), opts, [&](std::size_t i) {
    const auto& g = frame[i];
    return transport(phi, g, phi(act(g.inverse(), x, kind)));
  });
}

Matrix frame_average(const Matrix& x, const PermutationFrame& frame, InputKind kind,
                     const Backbone& phi, const AveragingOptions& opts) {
  require_finite(x, "frame_average");
  if (frame.n() == 0) throw Error("frame_average: empty frame");
  std::vector<GroupElement> elements;
  if (frame.size() <= opts.budget) {
    elements = frame_elements(frame);
  } else {
    // Large frames: draw distinct elements directly instead of materializing.
    for (auto& sigma : frame.sample_distinct(opts.budget, opts.seed)) {
      elements.push_back(GroupElement{inverse(sigma), {}});
    }
  }
  AveragingOptions all = opts;
  all.budget = elements.size();
  return frame_average(x, elements, kind, phi, all);
}

Matrix canonical_average(const std::vector<CanonizedInput>& canon, const Backbone& phi,
                         const AveragingOptions& opts) {
  if (canon.empty()) throw Error("canonical_average: empty canonicalization");
  return average_terms(canon.size(), opts, [&](std::size_t i) {
    const auto& c = canon[i];
    return transport(phi, c.action.inverse(), phi(c.form));
  });
}

std::vector<CanonizedInput> induced_canonicalization(const Matrix& x,
                                                     const std::vector<GroupElement>& frame,
                                                     InputKind kind) {
  std::map<std::vector<std::int64_t>, CanonizedInput> forms;
  for (const auto& g : frame) {
    CanonizedInput c{act(g.inverse(), x, kind), g.inverse()};
    std::vector<std::int64_t> key;
    key.reserve(c.form.size() + 2);
    key.push_back(c.form.rows());
    key.push_back(c.form.cols());
    for (Eigen::Index i = 0; i < c.form.size(); ++i) key.push_back(quantize(c.form(i), 1e-9));
    forms.try_emplace(std::move(key), std::move(c));
  }
  std::vector<CanonizedInput> out;
  for (auto& [k, c] : forms) out.push_back(std::move(c));
  return out;
}

std::vector<CanonizedInput> canonized_inputs(const CanonicalSet& set) {
  std::vector<CanonizedInput> out;
  for (const auto& cg : set.graphs) out.push_back({cg.form.adjacency, GroupElement{cg.action, {}}});
  return out;
}

std::vector<GroupElement> frame_elements(const PermutationFrame& frame) {
  std::vector<GroupElement> out;
  auto c = frame.cursor();
  do {
    out.push_back(GroupElement{inverse(c.current()), {}});
  } while (c.next());
  return out;
}

Matrix pca_frame(const Matrix& x, PcaCanon method, const Tolerances& tol) {
  require_finite(x, "pca_frame");
  const Matrix centered = x.rowwise() - x.colwise().mean();
  const Matrix cov = centered.transpose() * centered;
  const auto spaces = sym_eig(cov, tol);
  const double scale = std::max(1.0, spaces.back().eigenvalue);

  const auto k = x.cols();
  Matrix r(k, k);
  Eigen::Index col = 0;
  for (const auto& space : spaces) {
    const auto d = space.basis.cols();
    if (space.eigenvalue <= tol.eps_eig * scale) {
      throw Error("pca_frame: covariance has a null eigenspace of dimension " +
                  std::to_string(d) + "; its orientation is not determined by the data");
    }
    const Matrix w = centered * space.basis;
    Eigen::SelfAdjointEigenSolver<Matrix> gram(w.transpose() * w);
    const Matrix inv_sqrt = gram.eigenvectors() *
                            gram.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                            gram.eigenvectors().transpose();
    const Matrix w_unit = w * inv_sqrt;

    const auto outcome = (d == 1 && method == PcaCanon::SignThenOap)
                             ? sign_canon_first_nonzero(w_unit.col(0), tol.eps_zero)
                             : oap_eig(w_unit, tol);
    const Matrix rotation = w_unit.transpose() * outcome.canonical();
    r.middleCols(col, d) = space.basis * rotation;
    col += d;
  }
  return r;
}

Matrix pca_frame_apply(const Matrix& x, const Backbone& h, PcaCanon method,
                       const Tolerances& tol) {
  const Matrix r = pca_frame(x, method, tol);
  return h(x * r) * r.transpose();
}

}  // namespace symcanon
