#include "symcanon/graph_canon.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include "symcanon/lap_canon.hpp"

namespace symcanon {

Matrix normalized_laplacian(const Graph& g) {
  g.validate();
  const int n = g.n();
  const Vector degree = g.adjacency.rowwise().sum();
  Vector dinv(n);
  for (int i = 0; i < n; ++i) {
    if (degree(i) < 0) throw Error("normalized_laplacian: negative degree at node " + std::to_string(i));
    dinv(i) = degree(i) > 0 ? 1.0 / std::sqrt(degree(i)) : 0.0;
  }
  Matrix l = Matrix::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) l(i, j) -= dinv(i) * g.adjacency(i, j) * dinv(j);
  return l;
}

std::string_view to_string(GraphVariant v) { return v == GraphVariant::Fa ? "fa" : "oap"; }

GraphVariant parse_graph_variant(std::string_view name) {
  if (name == "fa") return GraphVariant::Fa;
  if (name == "oap") return GraphVariant::Oap;
  throw Error("unknown graph variant '" + std::string(name) + "'");
}

Matrix score_matrix(const Graph& g, GraphVariant variant, const Tolerances& tol) {
  const auto spaces = sym_eig(normalized_laplacian(g), tol);
  const int n = g.n();
  const int offset = g.colored() ? 1 : 0;
  Matrix s(n, static_cast<Eigen::Index>(spaces.size()) + offset);

  if (g.colored()) {
    std::vector<std::string> labels = g.colors;
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    for (int i = 0; i < n; ++i) {
      s(i, 0) = static_cast<double>(std::lower_bound(labels.begin(), labels.end(), g.colors[i]) -
                                    labels.begin());
    }
  }

  for (std::size_t l = 0; l < spaces.size(); ++l) {
    const Matrix p = spaces[l].basis * spaces[l].basis.transpose();
    const auto col = static_cast<Eigen::Index>(l) + offset;
    if (variant == GraphVariant::Fa) {
      s.col(col) = p.diagonal();
      continue;
    }
    const auto keys = refinement_keys(p, KeyVariant::Oap, tol.tau_quant);
    auto distinct = keys;
    std::sort(distinct.begin(), distinct.end(), std::greater<>());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (int i = 0; i < n; ++i) {
      const auto it = std::lower_bound(distinct.begin(), distinct.end(), keys[i], std::greater<>());
      s(i, col) = static_cast<double>(it - distinct.begin());
    }
  }
  return s;
}

// -- PermutationFrame ---------------------------------------------------------

PermutationFrame::PermutationFrame(std::vector<std::vector<int>> groups)
    : groups_(std::move(groups)) {
  std::vector<int> all;
  for (auto& g : groups_) {
    std::sort(g.begin(), g.end());
    offsets_.push_back(n_);
    n_ += static_cast<int>(g.size());
    all.insert(all.end(), g.begin(), g.end());
  }
  std::sort(all.begin(), all.end());
  for (int i = 0; i < n_; ++i) {
    if (all[i] != i) throw Error("PermutationFrame: groups do not partition the nodes");
  }
}

BigInt PermutationFrame::size() const {
  BigInt s = 1;
  for (const auto& g : groups_) s *= factorial(static_cast<int>(g.size()));
  return s;
}

PermutationFrame::Cursor::Cursor(const PermutationFrame& frame) : frame_(&frame) {
  for (const auto& g : frame.groups_) {
    std::vector<int> a(g.size());
    std::iota(a.begin(), a.end(), 0);
    arrangement_.push_back(std::move(a));
  }
  perm_.assign(frame.n_, 0);
  rebuild();
}

void PermutationFrame::Cursor::rebuild() {
  for (std::size_t g = 0; g < arrangement_.size(); ++g) {
    const auto& members = frame_->groups_[g];
    for (std::size_t j = 0; j < members.size(); ++j) {
      perm_[members[j]] = frame_->offsets_[g] + arrangement_[g][j];
    }
  }
}

bool PermutationFrame::Cursor::next() {
  for (auto g = arrangement_.size(); g-- > 0;) {
    if (std::next_permutation(arrangement_[g].begin(), arrangement_[g].end())) {
      rebuild();
      return true;
    }
  }
  return false;
}

Permutation PermutationFrame::sample(std::mt19937_64& rng) const {
  Permutation p(n_);
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    const auto& members = groups_[g];
    std::vector<int> slots(members.size());
    std::iota(slots.begin(), slots.end(), offsets_[g]);
    for (auto i = slots.size(); i-- > 1;) {
      std::uniform_int_distribution<std::size_t> pick(0, i);
      std::swap(slots[i], slots[pick(rng)]);
    }
    for (std::size_t j = 0; j < members.size(); ++j) p[members[j]] = slots[j];
  }
  return p;
}

std::vector<Permutation> PermutationFrame::sample_distinct(std::size_t count,
                                                           std::uint64_t seed) const {
  std::vector<Permutation> out;
  if (size() <= count) {
    auto c = cursor();
    do {
      out.push_back(c.current());
    } while (c.next());
    return out;
  }
  std::mt19937_64 rng(seed);
  std::set<Permutation> seen;
  while (out.size() < count) {
    auto p = sample(rng);
    if (seen.insert(p).second) out.push_back(std::move(p));
  }
  return out;
}

bool PermutationFrame::contains(const Permutation& p) const {
  if (static_cast<int>(p.size()) != n_ || !is_permutation(p)) return false;
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    const int lo = offsets_[g];
    const int hi = lo + static_cast<int>(groups_[g].size());
    for (int m : groups_[g]) {
      if (p[m] < lo || p[m] >= hi) return false;
    }
  }
  return true;
}

// -- frames ---------------------------------------------------------------

GraphFrame frame_of_graph(const Graph& g, GraphVariant variant, const Tolerances& tol) {
  GraphFrame out;
  out.scores = score_matrix(g, variant, tol);
  const int n = g.n();
  std::vector<std::vector<std::int64_t>> rows(n);
  for (int i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < out.scores.cols(); ++j) {
      rows[i].push_back(quantize(out.scores(i, j), tol.tau_quant));
    }
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return rows[a] < rows[b]; });

  std::vector<int> sizes;
  for (int pos = 0; pos < n;) {
    int end = pos + 1;
    while (end < n && rows[order[end]] == rows[order[pos]]) ++end;
    std::vector<int> members(order.begin() + pos, order.begin() + end);
    std::sort(members.begin(), members.end());
    sizes.push_back(end - pos);
    out.summary.tie_groups.push_back(std::move(members));
    pos = end;
  }
  out.summary.frame_size = factorial_product(sizes);
  out.frame = PermutationFrame(out.summary.tie_groups);
  return out;
}

namespace {

class AutomorphismSearch {
 public:
  AutomorphismSearch(const Graph& g, const std::vector<std::vector<int>>& groups,
                     std::uint64_t limit)
      : g_(g), limit_(limit), group_of_(g.n()), image_(g.n(), -1), used_(g.n(), 0) {
    for (std::size_t k = 0; k < groups.size(); ++k)
      for (int m : groups[k]) group_of_[m] = static_cast<int>(k);
    groups_ = groups;
    order_ = search_order();
  }

  std::optional<BigInt> run() {
    if (!extend(0)) return std::nullopt;
    return count_;
  }

 private:
  // Most-constrained-first: prefer nodes adjacent to already ordered nodes,
  // then nodes in small tie groups.
  std::vector<int> search_order() const {
    const int n = g_.n();
    std::vector<int> order;
    std::vector<char> placed(n, 0);
    std::vector<int> links(n, 0);
    for (int step = 0; step < n; ++step) {
      int best = -1;
      for (int v = 0; v < n; ++v) {
        if (placed[v]) continue;
        if (best < 0 || links[v] > links[best] ||
            (links[v] == links[best] &&
             groups_[group_of_[v]].size() < groups_[group_of_[best]].size())) {
          best = v;
        }
      }
      placed[best] = 1;
      order.push_back(best);
      for (int v = 0; v < n; ++v)
        if (g_.adjacency(best, v) != 0) ++links[v];
    }
    return order;
  }

  bool consistent(int v, int target) const {
    if (g_.colored() && g_.colors[v] != g_.colors[target]) return false;
    for (int u = 0; u < g_.n(); ++u) {
      const int iu = image_[u];
      if (iu < 0) continue;
      if (g_.adjacency(v, u) != g_.adjacency(target, iu)) return false;
    }
    return true;
  }

  // Returns false when the node budget is exhausted.
  bool extend(std::size_t depth) {
    if (++visited_ > limit_) return false;
    if (depth == order_.size()) {
      count_ += 1;
      return true;
    }
    const int v = order_[depth];
    for (int target : groups_[group_of_[v]]) {
      if (used_[target] || !consistent(v, target)) continue;
      image_[v] = target;
      used_[target] = 1;
      const bool ok = extend(depth + 1);
      image_[v] = -1;
      used_[target] = 0;
      if (!ok) return false;
    }
    return true;
  }

  const Graph& g_;
  std::uint64_t limit_;
  std::uint64_t visited_ = 0;
  BigInt count_ = 0;
  std::vector<std::vector<int>> groups_;
  std::vector<int> group_of_;
  std::vector<int> order_;
  std::vector<int> image_;
  std::vector<char> used_;
};

using FormKey = std::pair<std::vector<std::int64_t>, std::vector<std::string>>;

FormKey form_key(const Graph& form) {
  FormKey key;
  key.first.reserve(form.adjacency.size());
  for (Eigen::Index i = 0; i < form.adjacency.rows(); ++i)
    for (Eigen::Index j = 0; j < form.adjacency.cols(); ++j)
      key.first.push_back(quantize(form.adjacency(i, j), 1e-9));
  key.second = form.colors;
  return key;
}

}  // namespace

std::optional<BigInt> automorphism_count(const Graph& g, const FrameSummary& frame,
                                         std::uint64_t node_limit) {
  g.validate();
  return AutomorphismSearch(g, frame.tie_groups, node_limit).run();
}

void attach_automorphisms(const Graph& g, FrameSummary& summary, std::uint64_t node_limit) {
  summary.aut_count = automorphism_count(g, summary, node_limit);
  summary.canon_size.reset();
  if (summary.aut_count) {
    if (summary.frame_size % *summary.aut_count != 0) {
      throw Error("automorphism count does not divide the frame size");
    }
    summary.canon_size = summary.frame_size / *summary.aut_count;
  }
}

CanonicalSet canonical_set(const Graph& g, const PermutationFrame& frame, std::uint64_t budget,
                           std::uint64_t seed) {
  g.validate();
  if (frame.n() != g.n()) throw Error("canonical_set: frame does not match graph size");
  CanonicalSet out;
  out.frame_size = frame.size();
  out.exhaustive = out.frame_size <= budget;

  std::map<FormKey, CanonicalGraph> forms;
  auto visit = [&](const Permutation& p) {
    Graph form = g.relabeled(p);
    auto [it, inserted] = forms.try_emplace(form_key(form));
    if (inserted) {
      it->second.form = std::move(form);
      it->second.action = p;
    }
    ++it->second.hits;
    ++out.evaluated;
  };

  if (out.exhaustive) {
    auto c = frame.cursor();
    do {
      visit(c.current());
    } while (c.next());
  } else {
    for (const auto& p : frame.sample_distinct(budget, seed)) visit(p);
  }
  for (auto& [key, cg] : forms) out.graphs.push_back(std::move(cg));
  return out;
}

std::vector<std::size_t> sample_without_replacement(std::size_t population, std::size_t n,
                                                    std::uint64_t seed) {
  if (n > population) throw Error("sample_without_replacement: n exceeds population");
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates over a virtual identity array; only swapped slots are stored.
  std::unordered_map<std::size_t, std::size_t> swapped;
  auto at = [&](std::size_t i) {
    auto it = swapped.find(i);
    return it == swapped.end() ? i : it->second;
  };
  std::vector<std::size_t> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, population - 1);
    const std::size_t j = pick(rng);
    const std::size_t vi = at(i);
    const std::size_t vj = at(j);
    swapped[i] = vj;
    swapped[j] = vi;
    out.push_back(vj);
  }
  return out;
}

double concentration_bound(std::size_t n, std::size_t population, double a, double b,
                           double eps) {
  if (n < 1 || n >= population) throw Error("concentration_bound: need 1 <= n < N");
  if (!(a < b)) throw Error("concentration_bound: need a < b");
  if (!(eps > 0)) throw Error("concentration_bound: need eps > 0");
  const double nn = static_cast<double>(n);
  const double fpc = 1.0 - nn / static_cast<double>(population);
  const double width = b - a;
  return std::exp(-2.0 * nn * eps * eps / (fpc * (1.0 + 1.0 / nn) * width * width));
}

}  // namespace symcanon
