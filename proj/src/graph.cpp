#include "symcanon/graph.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace symcanon {

Graph Graph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  Graph g;
  g.adjacency = Matrix::Zero(n, n);
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) throw Error("edge endpoint out of range");
    if (u == v) throw Error("self-loops are not allowed");
    g.adjacency(u, v) = g.adjacency(v, u) = 1.0;
  }
  return g;
}

void Graph::validate() const {
  require_finite(adjacency, "graph");
  if (adjacency.rows() != adjacency.cols()) throw Error("graph: adjacency is not square");
  if (adjacency.size() > 0) {
    if ((adjacency - adjacency.transpose()).cwiseAbs().maxCoeff() > 0) {
      throw Error("graph: adjacency is not symmetric");
    }
    if (adjacency.diagonal().cwiseAbs().maxCoeff() > 0) {
      throw Error("graph: self-loops are not allowed");
    }
  }
  if (colored() && static_cast<int>(colors.size()) != n()) {
    throw Error("graph: color list does not cover every node");
  }
}

Graph Graph::relabeled(const Permutation& p) const {
  Graph out;
  out.adjacency = permute_symmetric(adjacency, p);
  if (colored()) {
    out.colors.resize(colors.size());
    for (std::size_t i = 0; i < colors.size(); ++i) out.colors[p[i]] = colors[i];
  }
  return out;
}

namespace {

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string t; ss >> t;) out.push_back(t);
  return out;
}

int parse_index(const std::string& tok, int line) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || value < 0) {
    throw ParseError(line, "expected a non-negative node index, got '" + tok + "'");
  }
  return value;
}

double parse_real(const std::string& tok, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size() || !std::isfinite(v)) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "expected a number, got '" + tok + "'");
  }
}

}  // namespace

Graph read_edge_list(std::istream& in) {
  struct Edge {
    int u, v;
    double w;
  };
  std::vector<Edge> edges;
  std::map<int, std::string> colors;
  int declared = -1;
  int max_index = -1;

  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const auto tok = tokens(line);
    if (tok.empty()) continue;
    if (tok[0].starts_with('#')) {
      // "#color" and "# color" are both accepted.
      std::vector<std::string> rest = tok;
      if (rest[0] == "#") {
        rest.erase(rest.begin());
      } else {
        rest[0] = rest[0].substr(1);
      }
      if (rest.empty()) continue;
      if (rest[0] == "color") {
        if (rest.size() != 3) throw ParseError(lineno, "expected '# color <node> <label>'");
        const int i = parse_index(rest[1], lineno);
        colors[i] = rest[2];
        max_index = std::max(max_index, i);
      } else if (rest[0] == "nodes") {
        if (rest.size() != 2) throw ParseError(lineno, "expected '# nodes <count>'");
        declared = parse_index(rest[1], lineno);
      }
      continue;
    }
    if (tok.size() != 2 && tok.size() != 3) {
      throw ParseError(lineno, "expected 'u v' or 'u v w'");
    }
    Edge e{parse_index(tok[0], lineno), parse_index(tok[1], lineno), 1.0};
    if (tok.size() == 3) e.w = parse_real(tok[2], lineno);
    if (e.u == e.v) throw ParseError(lineno, "self-loop on node " + tok[0]);
    max_index = std::max({max_index, e.u, e.v});
    edges.push_back(e);
  }

  const int n = std::max(declared, max_index + 1);
  if (n <= 0) throw ParseError(1, "no nodes in input");
  if (declared >= 0 && max_index >= declared) {
    throw ParseError(1, "node index " + std::to_string(max_index) + " exceeds declared count");
  }
  Graph g;
  g.adjacency = Matrix::Zero(n, n);
  for (const auto& e : edges) g.adjacency(e.u, e.v) = g.adjacency(e.v, e.u) = e.w;
  if (!colors.empty()) {
    if (static_cast<int>(colors.size()) != n) {
      throw ParseError(1, "colors given for " + std::to_string(colors.size()) + " of " +
                              std::to_string(n) + " nodes");
    }
    for (auto& [i, c] : colors) g.colors.push_back(c);
  }
  return g;
}

Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_edge_list(in);
}

Matrix read_dense_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (line.find_first_not_of(" \t\r") == std::string::npos || line.starts_with('#')) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) {
      const auto t = tokens(cell);
      if (t.size() != 1) throw ParseError(lineno, "malformed cell '" + cell + "'");
      row.push_back(parse_real(t[0], lineno));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError(lineno, "row has " + std::to_string(row.size()) + " entries, expected " +
                                   std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(1, "empty matrix");
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

Matrix read_dense_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_dense_csv(in);
}

void write_csv(std::ostream& out, const Matrix& m, int precision) {
  std::ostringstream buf;
  buf << std::setprecision(precision);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) buf << ',';
      // Avoid printing "-0".
      buf << (m(i, j) == 0.0 ? 0.0 : m(i, j));
    }
    buf << '\n';
  }
  out << buf.str();
}

void write_adjacency_block(std::ostream& out, const Matrix& adjacency) {
  for (Eigen::Index i = 0; i < adjacency.rows(); ++i) {
    for (Eigen::Index j = 0; j < adjacency.cols(); ++j) {
      if (j) out << ',';
      const double w = adjacency(i, j);
      if (w == std::round(w)) {
        out << static_cast<long long>(w);
      } else {
        out << w;
      }
    }
    out << '\n';
  }
}

}  // namespace symcanon
