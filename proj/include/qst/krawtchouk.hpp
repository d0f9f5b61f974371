#pragma once

#include <Eigen/Dense>

namespace qst {

/// Parameters of a single XY chain with mirror-symmetric couplings
/// J_j = sqrt((j+1)(M-1-j)), the profile that transfers an excitation
/// end-to-end in time pi/2.
struct ChainSpec {
  int sites = 2;        ///< number of qubits M, at least 2
  double omega0 = 1.0;  ///< qubit transition frequency (units of gamma0)
  double p = 0.5;       ///< Krawtchouk parameter, 0 < p < 1

  /// Throws ValidationError if any field is out of range.
  void validate() const;
};

/// The analytic eigensystem of the chain in the single-excitation sector.
///
/// U(j,l) is the orthonormal Krawtchouk function sqrt(w(j)/d_l) K_l(j);
/// columns are eigenvectors ordered by degree l with energies
/// E_l = M-1-2l.  At p = 1/2 the columns diagonalize hamiltonian().
struct SpectralBasis {
  Eigen::MatrixXd U;          ///< M x M orthogonal, U(j,l) = K~_l(j)
  Eigen::VectorXd energies;   ///< E_l = M-1-2l, length M
  Eigen::VectorXd couplings;  ///< J_j = sqrt((j+1)(M-1-j)), length M-1
};

/// Krawtchouk polynomial K_l(x) of degree l at integer node x, defined by
/// the terminating hypergeometric series 2F1(-x,-l;-(M-1);1/p).  Evaluated
/// by the three-term recurrence in the degree, which stays accurate where
/// direct summation of the series cancels catastrophically.
double krawtchouk_poly(int degree, int x, int sites, double p);

/// Binomial weight w(x) = C(M-1,x) p^x (1-p)^(M-1-x); sums to 1 over x.
double weight(int x, int sites, double p);

/// Squared-norm factor d_l = ((1-p)/p)^l / C(M-1,l), so that
/// sqrt(w(x)) K_l(x) / sqrt(d_l) is orthonormal.
double norm_d(int degree, int sites, double p);

/// Builds the full orthonormal basis, energies and couplings for a chain.
SpectralBasis orthonormal_basis(const ChainSpec& spec);

/// Single-excitation Hamiltonian: tridiagonal with omega0 on the diagonal
/// and the chain couplings on the first off-diagonals.
Eigen::MatrixXd hamiltonian(const ChainSpec& spec);

namespace detail {

/// log C(n,k) via lgamma; exact enough for n up to a few hundred.
double log_binomial(int n, int k);

/// Raw K_l(x) for l = 0..lmax by the degree recurrence.
std::vector<double> krawtchouk_row(int lmax, int x, int sites, double p);

double log_weight(int x, int sites, double p);
double log_norm_d(int degree, int sites, double p);

}  // namespace detail

}  // namespace qst
