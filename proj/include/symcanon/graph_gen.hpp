#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "symcanon/graph.hpp"

namespace symcanon::gen {

Graph path(int n);
Graph cycle(int n);
Graph star(int leaves);  // K_{1,leaves}
Graph complete(int n);
Graph empty(int n);
Graph complete_bipartite(int a, int b);
Graph grid(int rows, int cols);
Graph hypercube(int dim);
Graph wheel(int rim);
Graph prism(int n);  // C_n x K_2
Graph petersen();
Graph gnp(int n, double p, std::uint64_t seed);
/// Random graph where some nodes get a duplicate with the same neighborhood.
Graph with_twins(int n, double p, int twins, std::uint64_t seed);
/// G(n, p) resampled until connected.
Graph connected_gnp(int n, double p, std::uint64_t seed);
/// Star with `spokes` leaves plus one edge between the first two leaves.
Graph fan(int spokes);
Graph disjoint_union(const Graph& a, const Graph& b);

struct NamedGraph {
  std::string name;
  Graph graph;
};

/// Structured and random graphs with repeated Laplacian eigenvalues.
std::vector<NamedGraph> symmetric_corpus(std::uint64_t seed = 7);

}  // namespace symcanon::gen
