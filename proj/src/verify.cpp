#include "symcanon/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>

#include "symcanon/averaging.hpp"
#include "symcanon/eig_canon.hpp"
#include "symcanon/graph_canon.hpp"

namespace symcanon {

int TrialReport::count(const std::string& check) const {
  for (const auto& [name, n] : checks)
    if (name == check) return n;
  throw Error("no check named '" + check + "' in report " + harness);
}

bool TrialReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [&](const auto& c) { return c.second == evaluated(); });
}

namespace {

struct TrialDims {
  int n;
  int d;
};

TrialDims draw_dims(std::mt19937_64& rng, const TrialShape& shape) {
  std::uniform_int_distribution<int> pick_n(shape.min_n, shape.max_n);
  const int n = pick_n(rng);
  std::uniform_int_distribution<int> pick_d(1, std::max(1, std::min(shape.max_d, n - 1)));
  return {n, pick_d(rng)};
}

class Recorder {
 public:
  Recorder(TrialReport& report, std::vector<std::string> names) : report_(report) {
    for (auto& n : names) report_.checks.emplace_back(std::move(n), 0);
  }

  void pass(std::size_t check) { ++report_.checks[check].second; }

  void fail(std::size_t check, const TrialExemplar& base, double error, std::string note = {}) {
    if (report_.exemplars.size() >= TrialReport::kMaxExemplars) return;
    TrialExemplar ex = base;
    ex.check = report_.checks[check].first;
    ex.error = error;
    ex.note = std::move(note);
    report_.exemplars.push_back(std::move(ex));
  }

  void check(std::size_t idx, const TrialExemplar& base, const CanonOutcome& got,
             const Matrix& expected, double eps) {
    if (!got.ok()) {
      fail(idx, base, std::numeric_limits<double>::infinity(), "canonicalization failed");
      return;
    }
    const double err = max_abs_diff(got.canonical(), expected);
    if (err < eps) {
      pass(idx);
    } else {
      fail(idx, base, err);
    }
  }

 private:
  TrialReport& report_;
};

TrialReport start(std::string name, double eps, std::uint64_t seed, int trials) {
  if (trials < 1) throw Error(name + ": trials must be >= 1");
  if (!(eps > 0)) throw Error(name + ": eps must be positive");
  TrialReport r;
  r.harness = std::move(name);
  r.eps = eps;
  r.seed = seed;
  return r;
}

}  // namespace

TrialReport verify_basis_invariance(const CanonFn& canon, int trials, double eps,
                                    std::uint64_t seed, TrialShape shape) {
  auto report = start("basis_invariance", eps, seed, trials);
  Recorder rec(report, {"correct"});
  for (int t = 0; t < trials; ++t) {
    ++report.total;
    const std::uint64_t ts = mix_seed(seed, static_cast<std::uint64_t>(t));
    std::mt19937_64 rng(ts);
    const auto [n, d] = draw_dims(rng, shape);
    const TrialExemplar base{t, ts, n, d, {}, 0.0, {}};
    try {
      const Matrix u = random_orthonormal(n, d, mix_seed(ts, 1));
      const Matrix q = random_orthogonal(d, mix_seed(ts, 2));
      const auto c0 = canon(u);
      if (!c0.ok()) {
        rec.fail(0, base, std::numeric_limits<double>::infinity(), "canonicalization failed");
        continue;
      }
      rec.check(0, base, canon(u * q), c0.canonical(), eps);
    } catch (const std::exception& e) {
      rec.fail(0, base, std::numeric_limits<double>::infinity(), e.what());
    }
  }
  return report;
}

TrialReport verify_perm_equivariance(const CanonFn& canon, int trials, double eps,
                                     std::uint64_t seed, TrialShape shape) {
  auto report = start("perm_equivariance", eps, seed, trials);
  Recorder rec(report, {"p_correct", "q_correct", "pq_correct"});
  for (int t = 0; t < trials; ++t) {
    ++report.total;
    const std::uint64_t ts = mix_seed(seed, static_cast<std::uint64_t>(t));
    std::mt19937_64 rng(ts);
    const auto [n, d] = draw_dims(rng, shape);
    const TrialExemplar base{t, ts, n, d, {}, 0.0, {}};
    try {
      const Matrix u = random_orthonormal(n, d, mix_seed(ts, 1));
      const Permutation p = random_permutation(n, mix_seed(ts, 2));
      const Matrix q = random_orthogonal(d, mix_seed(ts, 3));
      const auto c0 = canon(u);
      if (!c0.ok()) {
        ++report.failed_canon;
        continue;
      }
      const Matrix expected_p = permute_rows(c0.canonical(), p);
      rec.check(0, base, canon(permute_rows(u, p)), expected_p, eps);
      rec.check(1, base, canon(u * q), c0.canonical(), eps);
      rec.check(2, base, canon(permute_rows(u * q, p)), expected_p, eps);
    } catch (const std::exception& e) {
      for (std::size_t c = 0; c < 3; ++c) {
        rec.fail(c, base, std::numeric_limits<double>::infinity(), e.what());
      }
    }
  }
  return report;
}

TrialReport verify_orthogonal_equivariance(const ModelFn& model, int trials, double eps,
                                           std::uint64_t seed) {
  auto report = start("orthogonal_equivariance", eps, seed, trials);
  Recorder rec(report, {"correct"});
  for (int t = 0; t < trials; ++t) {
    ++report.total;
    const std::uint64_t ts = mix_seed(seed, static_cast<std::uint64_t>(t));
    std::mt19937_64 rng(ts);
    std::uniform_int_distribution<int> pick_k(1, 4);
    const int k = pick_k(rng);
    std::uniform_int_distribution<int> pick_n(k + 2, 12);
    const int n = pick_n(rng);
    const TrialExemplar base{t, ts, n, k, {}, 0.0, {}};
    try {
      std::normal_distribution<double> normal(0.0, 1.0);
      Matrix x(n, k);
      for (int j = 0; j < k; ++j)
        for (int i = 0; i < n; ++i) x(i, j) = normal(rng);
      const Matrix q = random_orthogonal(k, mix_seed(ts, 1));
      const double err = max_abs_diff(model(x) * q, model(x * q));
      if (err < eps) {
        rec.pass(0);
      } else {
        rec.fail(0, base, err);
      }
    } catch (const std::exception& e) {
      rec.fail(0, base, std::numeric_limits<double>::infinity(), e.what());
    }
  }
  return report;
}

ModelFn pca_frame_model(std::uint64_t seed, const Tolerances& tol) {
  return [seed, tol](const Matrix& x) {
    const auto shape_seed = mix_seed(seed, static_cast<std::uint64_t>(x.rows() * 64 + x.cols()));
    const auto h = make_mlp_backbone(x.rows(), x.cols(), x.rows(), x.cols(), shape_seed, 16,
                                     OutputAction::SameAsInput);
    return pca_frame_apply(x, h, PcaCanon::SignThenOap, tol);
  };
}

ModelFn plain_backbone_model(std::uint64_t seed) {
  return [seed](const Matrix& x) {
    const auto shape_seed = mix_seed(seed, static_cast<std::uint64_t>(x.rows() * 64 + x.cols()));
    return make_mlp_backbone(x.rows(), x.cols(), x.rows(), x.cols(), shape_seed, 16,
                             OutputAction::SameAsInput)(x);
  };
}

// -- counterexample ---------------------------------------------------------

const std::vector<std::vector<int>>& counterexample_u1() {
  static const std::vector<std::vector<int>> cols = {
      {-1, 1, -1, 1, 2, 2, -2, -2, 0, 0},
      {1, -1, 1, -1, 1, 1, 0, 0, -1, -1},
  };
  return cols;
}

const std::vector<std::vector<int>>& counterexample_u2() {
  static const std::vector<std::vector<int>> cols = {
      {1, 1, -1, -1, 2, 2, -2, -2, 0, 0},
      {1, -1, -1, 1, 1, -1, 0, 0, -1, 1},
  };
  return cols;
}

bool CounterexampleReport::passed() const {
  return zeros_first == 24 && zeros_second == 16 && max_column_dot <= 1e-12 &&
         all_uncanonicalizable && abs_values_match && agreeing == n_functions;
}

namespace {

// Exact integer Laplacian 1 * u1 u1^T + 2 * u2 u2^T; returns its zero count.
int laplacian_zero_count(const std::vector<std::vector<int>>& cols) {
  const auto n = cols[0].size();
  int zeros = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const long long v = 1LL * cols[0][i] * cols[0][j] + 2LL * cols[1][i] * cols[1][j];
      if (v == 0) ++zeros;
    }
  return zeros;
}

Matrix normalized_columns(const std::vector<std::vector<int>>& cols) {
  Matrix u(cols[0].size(), cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (std::size_t i = 0; i < cols[c].size(); ++i) u(i, c) = cols[c][i];
    u.col(c).normalize();
  }
  return u;
}

Matrix softplus(const Matrix& m) {
  return m.unaryExpr([](double v) { return v > 30 ? v : std::log1p(std::exp(v)); });
}

// f(U) = rho([phi(u_l) + phi(-u_l)]_l), phi a permutation-equivariant
// DeepSets layer shared across columns, rho applied row-wise.
class TwoBranchNet {
 public:
  explicit TwoBranchNet(std::uint64_t seed, int hidden = 8, int pooled = 4, int out = 3) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto draw = [&](int r, int c) {
      Matrix m(r, c);
      for (int j = 0; j < c; ++j)
        for (int i = 0; i < r; ++i) m(i, j) = normal(rng);
      return m;
    };
    pool_scale_ = draw(pooled, 1);
    pool_bias_ = draw(pooled, 1);
    in_scale_ = draw(hidden, 1);
    in_bias_ = draw(hidden, 1);
    pool_mix_ = draw(hidden, pooled);
    phi_out_ = draw(hidden, hidden) / std::sqrt(static_cast<double>(hidden));
    rho_in_ = draw(out, 2 * hidden) / std::sqrt(2.0 * hidden);
    rho_bias_ = draw(out, 1);
  }

  Matrix operator()(const Matrix& u) const {
    const auto n = u.rows();
    const auto h = in_scale_.rows();
    Matrix features(n, h * u.cols());
    for (Eigen::Index l = 0; l < u.cols(); ++l) {
      const Vector col = u.col(l);
      features.middleCols(l * h, h) = phi(col) + phi(-col);
    }
    Matrix out(n, rho_in_.rows());
    const Matrix act = softplus(features);
    for (Eigen::Index i = 0; i < n; ++i) {
      out.row(i) = (rho_in_ * act.row(i).transpose() + rho_bias_).transpose();
    }
    return out;
  }

 private:
  Matrix phi(const Vector& u) const {
    const auto n = u.size();
    Vector pooled = Vector::Zero(pool_scale_.rows());
    for (Eigen::Index j = 0; j < n; ++j) {
      pooled += (pool_scale_.col(0) * u(j) + pool_bias_.col(0)).array().tanh().matrix();
    }
    pooled /= static_cast<double>(n);
    const Vector context = pool_mix_ * pooled;
    Matrix out(n, in_scale_.rows());
    for (Eigen::Index i = 0; i < n; ++i) {
      const Vector pre = in_scale_.col(0) * u(i) + in_bias_.col(0) + context;
      out.row(i) = (phi_out_ * softplus(pre)).transpose();
    }
    return out;
  }

  Matrix pool_scale_, pool_bias_, in_scale_, in_bias_, pool_mix_, phi_out_, rho_in_, rho_bias_;
};

}  // namespace

CounterexampleReport signnet_counterexample(std::uint64_t seed, int n_functions,
                                            double tolerance) {
  if (n_functions < 0) throw Error("signnet_counterexample: negative function count");
  const auto& c1 = counterexample_u1();
  const auto& c2 = counterexample_u2();
  CounterexampleReport r;
  r.tolerance = tolerance;
  r.n_functions = n_functions;

  r.zeros_first = laplacian_zero_count(c1);
  r.zeros_second = laplacian_zero_count(c2);
  if (r.zeros_first != 24 || r.zeros_second != 16) {
    throw Error("counterexample: Laplacian zero counts are " + std::to_string(r.zeros_first) +
                "/" + std::to_string(r.zeros_second) + ", expected 24/16");
  }

  const Matrix u1 = normalized_columns(c1);
  const Matrix u2 = normalized_columns(c2);
  r.max_column_dot = std::max(std::abs(u1.col(0).dot(u1.col(1))), std::abs(u2.col(0).dot(u2.col(1))));
  if (r.max_column_dot > 1e-12) throw Error("counterexample: columns are not orthogonal");

  r.all_uncanonicalizable = true;
  for (const Matrix* u : {&u1, &u2})
    for (Eigen::Index c = 0; c < 2; ++c)
      r.all_uncanonicalizable = r.all_uncanonicalizable && is_sign_uncanonicalizable(u->col(c));
  if (!r.all_uncanonicalizable) throw Error("counterexample: a column is sign-canonicalizable");

  // Match rows of |U1| to rows of |U2|.
  const auto n = static_cast<int>(c1[0].size());
  r.abs_matching.assign(n, -1);
  std::vector<char> used(n, 0);
  r.abs_values_match = true;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n && r.abs_matching[i] < 0; ++j) {
      if (!used[j] && std::abs(c1[0][i]) == std::abs(c2[0][j]) &&
          std::abs(c1[1][i]) == std::abs(c2[1][j])) {
        r.abs_matching[i] = j;
        used[j] = 1;
      }
    }
    r.abs_values_match = r.abs_values_match && r.abs_matching[i] >= 0;
  }
  for (std::size_t c = 0; c < 2; ++c)
    for (int i = 0; i < n; ++i)
      r.abs_values_match = r.abs_values_match && std::abs(c1[c][i]) == std::abs(c2[c][i]);
  if (!r.abs_values_match) throw Error("counterexample: absolute values differ");

  for (int f = 0; f < n_functions; ++f) {
    const TwoBranchNet net(mix_seed(seed, static_cast<std::uint64_t>(f)));
    const Matrix y1 = net(u1);
    const Matrix y2 = net(u2);
    double gap = 0.0;
    for (int i = 0; i < n; ++i) {
      gap = std::max(gap, (y1.row(i) - y2.row(r.abs_matching[i])).cwiseAbs().maxCoeff());
    }
    r.max_gap = std::max(r.max_gap, gap);
    if (gap <= tolerance) ++r.agreeing;
  }
  return r;
}

// -- superiority ------------------------------------------------------------

const VariantTally& SuperiorityReport::tally(KeyVariant v) const {
  for (const auto& t : tallies)
    if (t.variant == v) return t;
  throw Error("no tally for variant " + std::string(to_string(v)));
}

SuperiorityReport superiority_report(const std::vector<gen::NamedGraph>& corpus,
                                     const std::vector<KeyVariant>& variants, double c,
                                     const Tolerances& tol) {
  if (corpus.empty()) throw Error("superiority_report: empty corpus");
  SuperiorityReport report;
  for (auto v : variants) report.tallies.push_back({v, 0, 0, 0});

  for (const auto& [name, graph] : corpus) {
    const auto spaces = sym_eig(normalized_laplacian(graph), tol);
    for (std::size_t s = 0; s < spaces.size(); ++s) {
      if (spaces[s].multiplicity() < 2) continue;
      ++report.instances;
      auto run = [&](KeyVariant v) {
        return oap_lap(spaces[s].basis, LapCanonConfig{v, c, tol}).kind == CanonKind::Single;
      };
      const bool oap = run(KeyVariant::Oap);
      const bool map = run(KeyVariant::MapNorm);
      const bool fa = run(KeyVariant::FaDiag);
      for (auto& t : report.tallies) {
        const bool ok = t.variant == KeyVariant::Oap       ? oap
                        : t.variant == KeyVariant::MapNorm ? map
                        : t.variant == KeyVariant::FaDiag  ? fa
                                                           : run(t.variant);
        ++t.instances;
        if (ok) {
          ++t.single;
        } else {
          ++t.failed;
        }
      }
      const std::string where = name + ":" + std::to_string(s);
      if ((map || fa) && !oap) {
        report.dominance = false;
        ++report.dominance_violations;
      }
      if (oap && !map) report.strict_witnesses.push_back(where);
      if (oap && !fa) report.fa_witnesses.push_back(where);
    }
  }
  return report;
}

// -- rendering ----------------------------------------------------------------

void write_kv(std::ostream& out, const TrialReport& r) {
  out << "harness=" << r.harness << '\n'
      << "seed=" << r.seed << '\n'
      << "eps=" << r.eps << '\n'
      << "total=" << r.total << '\n'
      << "failed_canon=" << r.failed_canon << '\n';
  for (const auto& [name, n] : r.checks) out << name << '=' << n << '\n';
  out << "passed=" << (r.all_passed() ? "true" : "false") << '\n';
  for (std::size_t i = 0; i < r.exemplars.size(); ++i) {
    const auto& e = r.exemplars[i];
    out << "exemplar." << i << "=trial:" << e.trial << " trial_seed:" << e.trial_seed
        << " n:" << e.n << " d:" << e.d << " check:" << e.check << " error:" << e.error;
    if (!e.note.empty()) out << " note:" << e.note;
    out << '\n';
  }
}

void write_kv(std::ostream& out, const CounterexampleReport& r) {
  out << "zeros_L1=" << r.zeros_first << '\n'
      << "zeros_L2=" << r.zeros_second << '\n'
      << "max_column_dot=" << r.max_column_dot << '\n'
      << "all_uncanonicalizable=" << (r.all_uncanonicalizable ? "true" : "false") << '\n'
      << "abs_values_match=" << (r.abs_values_match ? "true" : "false") << '\n'
      << "functions=" << r.n_functions << '\n'
      << "agreeing=" << r.agreeing << '\n'
      << "max_gap=" << r.max_gap << '\n'
      << "tolerance=" << r.tolerance << '\n'
      << "passed=" << (r.passed() ? "true" : "false") << '\n';
}

void write_kv(std::ostream& out, const SuperiorityReport& r) {
  out << "instances=" << r.instances << '\n';
  for (const auto& t : r.tallies) {
    const auto v = std::string(to_string(t.variant));
    out << v << ".single=" << t.single << '\n'
        << v << ".failed=" << t.failed << '\n'
        << v << ".failed_ratio=" << std::setprecision(6) << t.failed_ratio() << '\n';
  }
  out << "dominance=" << (r.dominance ? "true" : "false") << '\n'
      << "dominance_violations=" << r.dominance_violations << '\n'
      << "strict_witnesses_vs_map=" << r.strict_witnesses.size() << '\n'
      << "strict_witnesses_vs_fa=" << r.fa_witnesses.size() << '\n';
  if (!r.strict_witnesses.empty()) out << "first_witness_vs_map=" << r.strict_witnesses.front() << '\n';
}

}  // namespace symcanon
