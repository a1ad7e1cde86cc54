#include "symcanon/graph_gen.hpp"

#include <random>

namespace symcanon::gen {

namespace {

void link(Graph& g, int u, int v) { g.adjacency(u, v) = g.adjacency(v, u) = 1.0; }

bool connected(const Graph& g) {
  std::vector<char> seen(g.n(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v = 0; v < g.n(); ++v) {
      if (g.adjacency(u, v) != 0 && !seen[v]) {
        seen[v] = 1;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == g.n();
}

}  // namespace

Graph empty(int n) {
  Graph g;
  g.adjacency = Matrix::Zero(n, n);
  return g;
}

Graph path(int n) {
  Graph g = empty(n);
  for (int i = 0; i + 1 < n; ++i) link(g, i, i + 1);
  return g;
}

Graph cycle(int n) {
  Graph g = path(n);
  if (n > 2) link(g, 0, n - 1);
  return g;
}

Graph star(int leaves) {
  Graph g = empty(leaves + 1);
  for (int i = 1; i <= leaves; ++i) link(g, 0, i);
  return g;
}

Graph complete(int n) {
  Graph g = empty(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) link(g, i, j);
  return g;
}

Graph complete_bipartite(int a, int b) {
  Graph g = empty(a + b);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) link(g, i, a + j);
  return g;
}

Graph grid(int rows, int cols) {
  Graph g = empty(rows * cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int v = r * cols + c;
      if (c + 1 < cols) link(g, v, v + 1);
      if (r + 1 < rows) link(g, v, v + cols);
    }
  }
  return g;
}

Graph hypercube(int dim) {
  const int n = 1 << dim;
  Graph g = empty(n);
  for (int v = 0; v < n; ++v)
    for (int b = 0; b < dim; ++b)
      if (v < (v ^ (1 << b))) link(g, v, v ^ (1 << b));
  return g;
}

Graph wheel(int rim) {
  Graph g = empty(rim + 1);
  for (int i = 0; i < rim; ++i) {
    link(g, 0, 1 + i);
    link(g, 1 + i, 1 + (i + 1) % rim);
  }
  return g;
}

Graph prism(int n) {
  Graph g = empty(2 * n);
  for (int i = 0; i < n; ++i) {
    link(g, i, (i + 1) % n);
    link(g, n + i, n + (i + 1) % n);
    link(g, i, n + i);
  }
  return g;
}

Graph petersen() {
  Graph g = empty(10);
  for (int i = 0; i < 5; ++i) {
    link(g, i, (i + 1) % 5);
    link(g, i, 5 + i);
    link(g, 5 + i, 5 + (i + 2) % 5);
  }
  return g;
}

Graph gnp(int n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Graph g = empty(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (u(rng) < p) link(g, i, j);
  return g;
}

Graph with_twins(int n, double p, int twins, std::uint64_t seed) {
  const Graph base = gnp(n, p, seed);
  Graph g = empty(n + twins);
  g.adjacency.topLeftCorner(n, n) = base.adjacency;
  std::mt19937_64 rng(seed ^ 0x5bd1e995ULL);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int t = 0; t < twins; ++t) {
    const int src = pick(rng);
    const int twin = n + t;
    for (int v = 0; v < n + t; ++v)
      if (g.adjacency(src, v) != 0) link(g, twin, v);
  }
  return g;
}

Graph connected_gnp(int n, double p, std::uint64_t seed) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    Graph g = gnp(n, p, seed + attempt * 0x9e3779b97f4a7c15ULL);
    if (connected(g)) return g;
  }
}

Graph fan(int spokes) {
  Graph g = star(spokes);
  link(g, 1, 2);
  return g;
}

Graph disjoint_union(const Graph& a, const Graph& b) {
  Graph g = empty(a.n() + b.n());
  g.adjacency.topLeftCorner(a.n(), a.n()) = a.adjacency;
  g.adjacency.bottomRightCorner(b.n(), b.n()) = b.adjacency;
  return g;
}

std::vector<NamedGraph> symmetric_corpus(std::uint64_t seed) {
  std::vector<NamedGraph> out;
  auto add = [&](std::string name, Graph g) { out.push_back({std::move(name), std::move(g)}); };
  for (int n = 4; n <= 16; ++n) add("cycle" + std::to_string(n), cycle(n));
  for (int n = 4; n <= 9; ++n) add("complete" + std::to_string(n), complete(n));
  for (int k = 3; k <= 9; ++k) add("star" + std::to_string(k), star(k));
  for (int r = 2; r <= 5; ++r)
    for (int c = r; c <= 6; ++c) add("grid" + std::to_string(r) + "x" + std::to_string(c), grid(r, c));
  for (int d = 2; d <= 4; ++d) add("hypercube" + std::to_string(d), hypercube(d));
  for (int a = 2; a <= 4; ++a)
    for (int b = a; b <= 5; ++b)
      add("K" + std::to_string(a) + "," + std::to_string(b), complete_bipartite(a, b));
  for (int r = 4; r <= 9; ++r) add("wheel" + std::to_string(r), wheel(r));
  for (int n = 3; n <= 8; ++n) add("prism" + std::to_string(n), prism(n));
  add("petersen", petersen());
  add("C4+C4", disjoint_union(cycle(4), cycle(4)));
  add("P3+P3", disjoint_union(path(3), path(3)));
  add("K3+star3", disjoint_union(complete(3), star(3)));
  // Repeated eigenvalues without a symmetry behind them: one zero
  // eigenvalue per component.
  for (int i = 0; i < 40; ++i) {
    const std::uint64_t s = seed * 2000 + static_cast<std::uint64_t>(i);
    Graph g = disjoint_union(connected_gnp(5 + i % 4, 0.5, s), connected_gnp(6 + i % 3, 0.45, s + 500));
    if (i % 4 == 0) g = disjoint_union(g, connected_gnp(7, 0.4, s + 1000));
    add("union" + std::to_string(i), std::move(g));
  }
  // Center of degree 8 and the joined spoke pair project equally on the
  // zero eigenspace.
  for (int n = 20; n <= 25; ++n) add("fan8+cycle" + std::to_string(n), disjoint_union(fan(8), cycle(n)));
  // An eigenspace where diagonal keys tie but OAP keys do not.
  add("gnp10-116880", gnp(10, 0.45, 116880));
  for (int i = 0; i < 60; ++i) {
    const std::uint64_t s = seed * 1000 + static_cast<std::uint64_t>(i);
    add("twins" + std::to_string(i), with_twins(8 + i % 5, 0.35, 2 + i % 3, s));
  }
  return out;
}

}  // namespace symcanon::gen
