#include "qcorr/measures.hpp"

#include <cmath>
#include <numeric>

#include "qcorr/errors.hpp"

namespace qcorr {

double shannon_entropy(std::span<const double> p) {
  double sum = 0.0;
  for (double x : p) {
    if (x < -1e-12) throw DomainError("probability entry below zero");
    sum += std::max(x, 0.0);
  }
  if (std::abs(sum - 1.0) > 1e-9) throw DomainError("probabilities do not sum to 1");
  double h = 0.0;
  for (double x : p) {
    const double q = std::max(x, 0.0) / sum;
    if (q > 0.0) h -= q * std::log2(q);
  }
  return h;
}

double von_neumann_entropy(const ComplexMatrix& rho, double clip) {
  const auto es = hermitian_eig(rho);
  double h = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues.size(); ++i) {
    const double lam = es.eigenvalues(i);
    if (lam > clip) h -= lam * std::log2(lam);
  }
  return std::max(h, 0.0);
}

double von_neumann_entropy(const MultipartiteState& s) { return von_neumann_entropy(s.rho()); }

EntropyValue relative_entropy(const ComplexMatrix& rho, const ComplexMatrix& sigma, double clip) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw DimensionError("relative_entropy: operators have different shapes");
  const auto sig = hermitian_eig(sigma);
  // Diagonal of rho in sigma's eigenbasis.
  const RealVector w = (sig.eigenvectors.adjoint() * rho * sig.eigenvectors).diagonal().real();
  double kernel_weight = 0.0, cross = 0.0;
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    const double mu = sig.eigenvalues(j);
    if (mu > clip)
      cross -= w(j) * std::log2(mu);
    else
      kernel_weight += w(j);
  }
  if (kernel_weight >= kSupportTolerance) return {std::numeric_limits<double>::infinity(), true};
  return {cross - von_neumann_entropy(rho, clip), false};
}

EntropyValue relative_entropy(const MultipartiteState& rho, const MultipartiteState& sigma) {
  if (rho.dims() != sigma.dims()) throw DimensionError("relative_entropy: dims differ");
  return relative_entropy(rho.rho(), sigma.rho());
}

double total_mutual_information(const MultipartiteState& s, const Partition& part) {
  if (part.max_party() >= s.parties())
    throw DimensionError("partition refers to a party the state lacks");
  double t = 0.0;
  for (const auto& block : part.blocks())
    t += von_neumann_entropy(partial_trace(s.rho(), s.dims(), block));
  const auto all = part.parties();
  const bool covers = static_cast<int>(all.size()) == s.parties();
  t -= von_neumann_entropy(covers ? s.rho() : partial_trace(s.rho(), s.dims(), all));
  return t;
}

std::vector<double> basis_diagonal(const ComplexMatrix& rho, const ComplexMatrix& basis) {
  const ComplexMatrix rb = rho * basis;
  std::vector<double> p(basis.cols());
  for (Eigen::Index k = 0; k < basis.cols(); ++k) p[k] = basis.col(k).dot(rb.col(k)).real();
  return p;
}

double lambda_functional(const ComplexMatrix& grouped_rho, const ComplexMatrix& basis_unitary) {
  const auto p = basis_diagonal(grouped_rho, basis_unitary);
  double h = 0.0;
  for (double x : p)
    if (x > 0.0) h -= x * std::log2(x);
  return h;
}

double lambda_functional(const MultipartiteState& s, const Partition& part,
                         const ProductBasisPoint& basis) {
  const auto g = group_blocks(s, part);
  if (basis.block_dims() != g.dims())
    throw BasisError("basis blocks do not match the partition blocks");
  if (basis.gram_deviation() > 1e-8) throw BasisError("basis is not orthonormal");
  return shannon_entropy(basis_diagonal(g.rho(), basis.unitary()));
}

ComplexMatrix dephase(const ComplexMatrix& rho, const ComplexMatrix& basis) {
  const auto p = basis_diagonal(rho, basis);
  RealVector d(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) d(k) = std::max(p[k], 0.0);
  d /= d.sum();
  return basis * d.cast<Complex>().asDiagonal() * basis.adjoint();
}

bool is_classical(const MultipartiteState& s, double tol) {
  const int n = s.parties();
  if (n < 2) return true;
  for (int b = 0; b < n; ++b) {
    // Move party b to the front: rho = sum_ij O_ij (x) |i><j| over the rest.
    std::vector<int> order{b};
    for (int q = 0; q < n; ++q)
      if (q != b) order.push_back(q);
    const ComplexMatrix m = permute_subsystems(s.rho(), s.dims(), order);
    const int db = s.dims()[b];
    const int dr = s.dim() / db;
    std::vector<ComplexMatrix> ops;
    for (int i = 0; i < dr; ++i)
      for (int j = 0; j < dr; ++j) {
        ComplexMatrix o(db, db);
        for (int a = 0; a < db; ++a)
          for (int c = 0; c < db; ++c) o(a, c) = m(a * dr + i, c * dr + j);
        if (max_abs(o) > tol) ops.push_back(std::move(o));
      }
    for (std::size_t x = 0; x < ops.size(); ++x) {
      if (max_abs(ops[x] * ops[x].adjoint() - ops[x].adjoint() * ops[x]) > tol) return false;
      for (std::size_t y = x + 1; y < ops.size(); ++y)
        if (max_abs(ops[x] * ops[y] - ops[y] * ops[x]) > tol) return false;
    }
  }
  return true;
}

double classical_correlation(const MultipartiteState& s, const Partition& part,
                             const MultipartiteState& chi) {
  const auto g = group_blocks(s, part);
  if (chi.dims() != g.dims())
    throw StateValidationError("chi does not live on the partition's blocks");
  if (!is_classical(chi)) throw StateValidationError("chi is not a classically correlated state");
  return total_mutual_information(chi, Partition::singletons(chi.parties()));
}

}  // namespace qcorr
