#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "symcanon/graph.hpp"
#include "symcanon/linalg.hpp"

namespace symcanon {

/// L = I - D^{-1/2} A D^{-1/2}, with D^{-1/2} = 0 on isolated nodes.
Matrix normalized_laplacian(const Graph& g);

// FA-graph scores a node by the diagonals of the eigenspace projectors;
// OAP-graph by the rank of its OAP refinement key in each eigenspace.
enum class GraphVariant { Fa, Oap };

std::string_view to_string(GraphVariant v);
GraphVariant parse_graph_variant(std::string_view name);

/// n x k score matrix, one column per eigenspace of the normalized Laplacian
/// in ascending eigenvalue order. Colored graphs get a leading column with
/// each node's color rank.
Matrix score_matrix(const Graph& g, GraphVariant variant, const Tolerances& tol = {});

// The set of permutations that sort the rows of a score matrix. Nodes in
// one tie group (equal quantized rows) share a contiguous block of target
// positions and may be arranged in any order within it.
class PermutationFrame {
 public:
  PermutationFrame() = default;
  /// groups must partition {0..n-1}; they occupy positions in the given order.
  explicit PermutationFrame(std::vector<std::vector<int>> groups);

  int n() const { return n_; }
  const std::vector<std::vector<int>>& groups() const { return groups_; }
  BigInt size() const;

  /// Lazy enumeration: within each group, arrangements in lexicographic
  /// order, the last group varying fastest.
  class Cursor {
   public:
    explicit Cursor(const PermutationFrame& frame);
    const Permutation& current() const { return perm_; }
    bool next();  // false once exhausted

   private:
    void rebuild();
    const PermutationFrame* frame_;
    std::vector<std::vector<int>> arrangement_;
    Permutation perm_;
  };
  Cursor cursor() const { return Cursor(*this); }

  /// Uniform element of the frame.
  Permutation sample(std::mt19937_64& rng) const;
  /// Up to count distinct elements drawn uniformly without replacement.
  std::vector<Permutation> sample_distinct(std::size_t count, std::uint64_t seed) const;

  bool contains(const Permutation& p) const;

 private:
  std::vector<std::vector<int>> groups_;
  std::vector<int> offsets_;
  int n_ = 0;
};

struct FrameSummary {
  std::vector<std::vector<int>> tie_groups;  // in sorted-row order, members ascending
  BigInt frame_size = 1;
  std::optional<BigInt> aut_count;   // nullopt = Unknown (search limit exceeded)
  std::optional<BigInt> canon_size;  // frame_size / aut_count when known
};

struct GraphFrame {
  Matrix scores;
  FrameSummary summary;
  PermutationFrame frame;
};

/// Tie groups of the score matrix, exact frame size, and the lazy frame.
/// aut_count / canon_size are left Unknown; see automorphism_count.
GraphFrame frame_of_graph(const Graph& g, GraphVariant variant, const Tolerances& tol = {});

inline constexpr std::uint64_t kDefaultNodeLimit = 10'000'000;

/// |Aut(g)| by backtracking over permutations that respect the tie groups.
/// nullopt if more than node_limit search nodes would be visited.
std::optional<BigInt> automorphism_count(const Graph& g, const FrameSummary& frame,
                                         std::uint64_t node_limit = kDefaultNodeLimit);

/// Runs automorphism_count and fills aut_count and canon_size.
void attach_automorphisms(const Graph& g, FrameSummary& summary,
                          std::uint64_t node_limit = kDefaultNodeLimit);

struct CanonicalGraph {
  Graph form;
  Permutation action;        // form = g.relabeled(action)
  std::uint64_t hits = 0;    // frame elements (or draws) producing this form
};

struct CanonicalSet {
  std::vector<CanonicalGraph> graphs;  // sorted by form, deterministic
  bool exhaustive = true;
  BigInt frame_size = 1;
  std::uint64_t evaluated = 0;  // frame elements visited
};

/// Distinct relabelings of g over the frame. Enumerates the whole frame when
/// its size is at most budget, otherwise draws budget distinct frame
/// elements uniformly and flags the result as sampled.
CanonicalSet canonical_set(const Graph& g, const PermutationFrame& frame, std::uint64_t budget,
                           std::uint64_t seed = 0);

/// Uniform n-subset of {0..population-1}, in draw order. n == population
/// returns a shuffle of the whole population.
std::vector<std::size_t> sample_without_replacement(std::size_t population, std::size_t n,
                                                    std::uint64_t seed);

/// Tail bound for the mean of n draws without replacement from a
/// population of N points in [a, b]:
///   exp(-2 n eps^2 / ((1 - n/N) (1 + 1/n) (b - a)^2)).
double concentration_bound(std::size_t n, std::size_t population, double a, double b,
                           double eps);

}  // namespace symcanon
