#include "symcanon/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace symcanon {

void Tolerances::validate() const {
  if (!(eps_eig > 0) || !(eps_rank > 0) || !(eps_zero > 0) || !(tau_quant > 0)) {
    throw Error("tolerances must be strictly positive");
  }
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw Error(std::string(what) + ": matrix contains NaN or Inf");
  }
}

bool is_orthonormal(const Matrix& m, double tol) {
  if (m.cols() == 0) return true;
  const Matrix gram = m.transpose() * m;
  return (gram - Matrix::Identity(m.cols(), m.cols())).cwiseAbs().maxCoeff() <= tol;
}

Matrix gram_schmidt(const Matrix& v, double eps_rank) {
  require_finite(v, "gram_schmidt");
  const auto n = v.rows();
  const auto d = v.cols();
  if (d > n) {
    throw Error("gram_schmidt: more columns than rows, column " + std::to_string(n) +
                " cannot be independent");
  }
  if (d == 0) return Matrix(n, 0);

  Eigen::HouseholderQR<Matrix> qr(v);
  const Matrix r = qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    if (std::abs(r(j, j)) <= eps_rank) {
      throw Error("gram_schmidt: column " + std::to_string(j) +
                  " is linearly dependent on the preceding columns");
    }
  }
  Matrix q = qr.householderQ() * Matrix::Identity(n, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  return q;
}

Matrix projection_of(const Matrix& u) {
  require_finite(u, "projection_of");
  if (!is_orthonormal(u, 1e-9)) {
    throw Error("projection_of: input columns are not orthonormal");
  }
  return u * u.transpose();
}

std::vector<EigSpace> sym_eig(const Matrix& s, const Tolerances& tol) {
  tol.validate();
  require_finite(s, "sym_eig");
  if (s.rows() != s.cols()) throw Error("sym_eig: matrix is not square");
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
    throw Error("sym_eig: matrix is not symmetric");
  }
  const auto n = s.rows();
  std::vector<EigSpace> spaces;
  if (n == 0) return spaces;

  Eigen::SelfAdjointEigenSolver<Matrix> solver(s);
  if (solver.info() != Eigen::Success) throw Error("sym_eig: eigensolver did not converge");
  const Vector& values = solver.eigenvalues();
  const Matrix& vectors = solver.eigenvectors();

  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && values(end) - values(end - 1) <= tol.eps_eig) ++end;
    EigSpace space;
    space.eigenvalue = values.segment(start, end - start).mean();
    space.basis = vectors.middleCols(start, end - start);
    spaces.push_back(std::move(space));
    start = end;
  }
  return spaces;
}

ResidualTest residual_accept(const Vector& v, const Matrix& b, double eps_rank) {
  ResidualTest out;
  out.residual = v;
  if (b.cols() > 0) out.residual -= b * (b.transpose() * v);
  out.accepted = out.residual.norm() > eps_rank;
  return out;
}

namespace {

Matrix gaussian(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  // Fill column by column so the stream layout does not depend on storage order.
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) g(i, j) = normal(rng);
  return g;
}

}  // namespace

Matrix random_orthogonal(int k, std::uint64_t seed) {
  if (k < 1) throw Error("random_orthogonal: k must be >= 1");
  const Matrix g = gaussian(k, k, seed);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(k, k);
  const Matrix& r = qr.matrixQR();
  // Positive-diagonal correction makes the distribution exactly Haar.
  for (int j = 0; j < k; ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  return q;
}

Matrix random_orthonormal(int n, int d, std::uint64_t seed) {
  if (d < 0 || d > n) throw Error("random_orthonormal: need 0 <= d <= n");
  return random_orthogonal(n, seed).leftCols(d);
}

Permutation random_permutation(int n, std::uint64_t seed) {
  if (n < 1) throw Error("random_permutation: n must be >= 1");
  Permutation p = identity_permutation(n);
  std::mt19937_64 rng(seed);
  // Explicit Fisher-Yates: std::shuffle's algorithm is unspecified.
  for (int i = n - 1; i > 0; --i) {
    std::uniform_int_distribution<int> pick(0, i);
    std::swap(p[i], p[pick(rng)]);
  }
  return p;
}

Permutation identity_permutation(int n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

Permutation inverse(const Permutation& p) {
  Permutation inv(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) inv[p[i]] = static_cast<int>(i);
  return inv;
}

Permutation compose(const Permutation& outer, const Permutation& inner) {
  Permutation out(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) out[i] = outer[inner[i]];
  return out;
}

bool is_permutation(std::span<const int> p) {
  std::vector<char> seen(p.size(), 0);
  for (int v : p) {
    if (v < 0 || static_cast<std::size_t>(v) >= p.size() || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

Matrix permutation_matrix(const Permutation& p) {
  const auto n = static_cast<Eigen::Index>(p.size());
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(p[i], i) = 1.0;
  return m;
}

Matrix permute_rows(const Matrix& m, const Permutation& p) {
  if (static_cast<Eigen::Index>(p.size()) != m.rows()) {
    throw Error("permute_rows: permutation size does not match row count");
  }
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.row(p[i]) = m.row(i);
  return out;
}

Matrix permute_symmetric(const Matrix& m, const Permutation& p) {
  if (m.rows() != m.cols() || static_cast<Eigen::Index>(p.size()) != m.rows()) {
    throw Error("permute_symmetric: shape mismatch");
  }
  const auto n = m.rows();
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out(p[i], p[j]) = m(i, j);
  return out;
}

BigInt factorial(int k) {
  if (k < 0) throw Error("factorial: negative argument");
  BigInt f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

BigInt factorial_product(std::span<const int> counts) {
  BigInt out = 1;
  for (int c : counts) {
    if (c < 1) throw Error("factorial_product: counts must be >= 1");
    out *= factorial(c);
  }
  return out;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    return std::numeric_limits<double>::infinity();
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace symcanon
