#include "qst/krawtchouk.hpp"

#include <cmath>
#include <vector>

#include "qst/errors.hpp"

namespace qst {

namespace {

// The degree recurrence is run in extended precision: rounding noise excites
// the growing complementary solution of the three-term recurrence, and for
// M = 64 that can eat ~9 digits of the small trailing components.  Quad
// arithmetic keeps the parasite below 1e-18 absolute.
using quad = __float128;

void check_node(int x, int sites, const char* name) {
  if (x < 0 || x > sites - 1) {
    throw ValidationError(std::string(name) + " out of range [0, M-1]");
  }
}

void check_p(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ValidationError("p must lie in (0, 1)");
  }
}

}  // namespace

void ChainSpec::validate() const {
  if (sites < 2) throw ValidationError("M must be >= 2");
  if (!std::isfinite(omega0)) throw ValidationError("omega0 must be finite");
  check_p(p);
}

namespace detail {

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double log_weight(int x, int sites, double p) {
  const int n = sites - 1;
  return log_binomial(n, x) + x * std::log(p) + (n - x) * std::log1p(-p);
}

double log_norm_d(int degree, int sites, double p) {
  const int n = sites - 1;
  return degree * (std::log1p(-p) - std::log(p)) - log_binomial(n, degree);
}

std::vector<double> krawtchouk_row(int lmax, int x, int sites, double p) {
  const int n = sites - 1;
  std::vector<double> row(lmax + 1);
  // 1-p must be formed in quad: a double rounding here would be amplified
  // by the growing complementary solution through the decaying tail.
  const quad qp = quad(p);
  const quad qq = quad(1) - qp;
  quad prev = 0;
  quad cur = 1;  // K_0 == 1
  row[0] = 1.0;
  for (int l = 0; l < lmax; ++l) {
    const quad b = qp * (n - l) + qq * l;
    const quad next = ((b - x) * cur - qq * quad(l) * prev) / (qp * (n - l));
    prev = cur;
    cur = next;
    row[l + 1] = static_cast<double>(next);
  }
  return row;
}

}  // namespace detail

double krawtchouk_poly(int degree, int x, int sites, double p) {
  if (sites < 2) throw ValidationError("M must be >= 2");
  check_node(degree, sites, "degree l");
  check_node(x, sites, "node j");
  check_p(p);
  return detail::krawtchouk_row(degree, x, sites, p)[degree];
}

double weight(int x, int sites, double p) {
  if (sites < 2) throw ValidationError("M must be >= 2");
  check_node(x, sites, "node j");
  check_p(p);
  return std::exp(detail::log_weight(x, sites, p));
}

double norm_d(int degree, int sites, double p) {
  if (sites < 2) throw ValidationError("M must be >= 2");
  check_node(degree, sites, "degree l");
  check_p(p);
  return std::exp(detail::log_norm_d(degree, sites, p));
}

SpectralBasis orthonormal_basis(const ChainSpec& spec) {
  spec.validate();
  const int m = spec.sites;
  const int n = m - 1;
  const double p = spec.p;

  SpectralBasis basis;
  basis.U.resize(m, m);
  basis.energies.resize(m);
  basis.couplings.resize(n);

  // Row j is sqrt(w(j)/d_l) K_l(j).  The raw K_l run by the degree
  // recurrence with quad-exact coefficients keeps the error absolute-small
  // even where the normalized entries decay to ~1e-17; the scale factors
  // only touch each entry's relative accuracy.  This also fixes U(0,l) > 0.
  std::vector<double> half_log_d(m);
  for (int l = 0; l < m; ++l) {
    half_log_d[l] = 0.5 * detail::log_norm_d(l, m, p);
  }
  const quad qp = quad(p);
  const quad qq = quad(1) - qp;
  for (int j = 0; j < m; ++j) {
    const double half_log_w = 0.5 * detail::log_weight(j, m, p);
    quad prev = 0;
    quad cur = 1;
    basis.U(j, 0) = std::exp(half_log_w - half_log_d[0]);
    for (int l = 0; l < n; ++l) {
      const quad b = qp * (n - l) + qq * l;
      const quad next = ((b - j) * cur - qq * quad(l) * prev) / (qp * (n - l));
      prev = cur;
      cur = next;
      basis.U(j, l + 1) = static_cast<double>(
          quad(std::exp(half_log_w - half_log_d[l + 1])) * next);
    }
  }

  for (int l = 0; l < m; ++l) basis.energies(l) = double(n - 2 * l);
  for (int j = 0; j < n; ++j) basis.couplings(j) = std::sqrt((j + 1.0) * (n - j));
  return basis;
}

Eigen::MatrixXd hamiltonian(const ChainSpec& spec) {
  spec.validate();
  const int m = spec.sites;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, m);
  for (int j = 0; j < m; ++j) h(j, j) = spec.omega0;
  for (int j = 0; j + 1 < m; ++j) {
    const double coupling = std::sqrt((j + 1.0) * (m - 1.0 - j));
    h(j, j + 1) = coupling;
    h(j + 1, j) = coupling;
  }
  return h;
}

}  // namespace qst
