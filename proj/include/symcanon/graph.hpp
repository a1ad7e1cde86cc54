#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "symcanon/linalg.hpp"

namespace symcanon {

// Undirected graph with optional edge weights and optional node colors.
struct Graph {
  Matrix adjacency;                 // n x n, symmetric, zero diagonal
  std::vector<std::string> colors;  // empty, or one label per node

  int n() const { return static_cast<int>(adjacency.rows()); }
  bool colored() const { return !colors.empty(); }

  static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges);
  /// Throws unless the adjacency is square, finite, symmetric with zero
  /// diagonal, and colors (if any) cover every node.
  void validate() const;
  /// Relabels node i as p[i].
  Graph relabeled(const Permutation& p) const;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Edge-list format, one record per line:
//   u v [w]          0-indexed undirected edge with optional weight
//   # color i c      node i gets color label c
//   # nodes N        declare N nodes (for trailing isolated nodes)
//   # anything else  comment
Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);

/// Dense CSV matrix, one row per line.
Matrix read_dense_csv(std::istream& in);
Matrix read_dense_csv_file(const std::string& path);

void write_csv(std::ostream& out, const Matrix& m, int precision = 12);
/// Adjacency rows as comma-separated integers (weights printed as numbers).
void write_adjacency_block(std::ostream& out, const Matrix& adjacency);

}  // namespace symcanon
