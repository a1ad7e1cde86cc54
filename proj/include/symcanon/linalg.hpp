#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

namespace symcanon {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using BigInt = boost::multiprecision::cpp_int;

// Permutation of {0..n-1}: perm[i] is the image of i. Acting on a matrix, it
// moves row i to row perm[i] (i.e. P * e_i = e_{perm[i]}).
using Permutation = std::vector<int>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double eps_eig = 1e-6;    // eigenvalue grouping
  double eps_rank = 1e-6;   // incremental rank test residual
  double eps_zero = 1e-8;   // "nonzero entry" threshold
  double tau_quant = 1e-6;  // key quantization grid

  void validate() const;
};

struct EigSpace {
  double eigenvalue = 0.0;
  Matrix basis;  // n x d, orthonormal columns

  int multiplicity() const { return static_cast<int>(basis.cols()); }
  int dim() const { return static_cast<int>(basis.rows()); }
};

/// Throws if any entry is NaN or infinite.
void require_finite(const Matrix& m, const char* what);

/// True when m^T m is the identity within tol.
bool is_orthonormal(const Matrix& m, double tol = 1e-9);

/// Orthonormalizes the columns of v in order. Realized as a Householder QR
/// with the signs of R's diagonal forced positive, which is exactly the
/// classical Gram-Schmidt sequence. Throws naming the first column whose
/// residual against the previous columns is <= eps_rank.
Matrix gram_schmidt(const Matrix& v, double eps_rank = 1e-6);

/// P = U U^T for orthonormal U.
Matrix projection_of(const Matrix& u);

/// Symmetric eigendecomposition with eigenvalues closer than eps_eig merged
/// into one space. Spaces are returned in ascending eigenvalue order.
std::vector<EigSpace> sym_eig(const Matrix& s, const Tolerances& tol = {});

struct ResidualTest {
  bool accepted = false;
  Vector residual;
};

/// Incremental rank test: residual = v - B B^T v, accepted iff its norm
/// exceeds eps_rank. B may have zero columns.
ResidualTest residual_accept(const Vector& v, const Matrix& b, double eps_rank);

// Seeded generators. All are pure functions of their arguments.
Matrix random_orthogonal(int k, std::uint64_t seed);
Matrix random_orthonormal(int n, int d, std::uint64_t seed);
Permutation random_permutation(int n, std::uint64_t seed);

// Permutation helpers.
Permutation identity_permutation(int n);
Permutation inverse(const Permutation& p);
Permutation compose(const Permutation& outer, const Permutation& inner);
bool is_permutation(std::span<const int> p);
Matrix permutation_matrix(const Permutation& p);
/// Row action: result.row(p[i]) = m.row(i).
Matrix permute_rows(const Matrix& m, const Permutation& p);
/// Two-sided action on a square matrix: P M P^T.
Matrix permute_symmetric(const Matrix& m, const Permutation& p);

/// Exact product of factorials of the given counts.
BigInt factorial_product(std::span<const int> counts);
BigInt factorial(int k);

/// Largest absolute entrywise difference; infinity on shape mismatch.
double max_abs_diff(const Matrix& a, const Matrix& b);

/// Deterministic seed mixing (splitmix64).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace symcanon
