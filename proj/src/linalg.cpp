#include "qcorr/linalg.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "qcorr/errors.hpp"

namespace qcorr {

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

ComplexMatrix kron_all(std::span<const ComplexMatrix> factors) {
  if (factors.empty()) return ComplexMatrix::Identity(1, 1);
  ComplexMatrix out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = kron(out, factors[i]);
  return out;
}

int product(std::span<const int> dims) {
  return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<>());
}

namespace {

void check_dims(const ComplexMatrix& m, std::span<const int> dims) {
  for (int d : dims)
    if (d < 1) throw DimensionError("local dimensions must be positive");
  const int total = product(dims);
  if (m.rows() != total || m.cols() != total)
    throw DimensionError("matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                         " but local dimensions multiply to " + std::to_string(total));
}

// Row-major strides: party 0 is the most significant digit.
std::vector<int> strides_of(std::span<const int> dims) {
  std::vector<int> s(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i) s[i] = s[i + 1] * dims[i + 1];
  return s;
}

}  // namespace

ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const int> dims,
                            std::span<const int> keep) {
  check_dims(m, dims);
  const int n = static_cast<int>(dims.size());
  if (keep.empty()) throw DimensionError("partial_trace: keep set is empty");
  std::vector<bool> kept(n, false);
  for (int k : keep) {
    if (k < 0 || k >= n) throw DimensionError("partial_trace: party index out of range");
    if (kept[k]) throw DimensionError("partial_trace: duplicate party index");
    kept[k] = true;
  }
  std::vector<int> kept_parties, traced_parties;
  for (int i = 0; i < n; ++i) (kept[i] ? kept_parties : traced_parties).push_back(i);

  const auto strides = strides_of(dims);
  // Offsets into the full index for every kept / traced multi-index.
  auto offsets = [&](const std::vector<int>& parties) {
    std::vector<int> out{0};
    for (int p : parties) {
      std::vector<int> next;
      next.reserve(out.size() * dims[p]);
      for (int base : out)
        for (int v = 0; v < dims[p]; ++v) next.push_back(base + v * strides[p]);
      out = std::move(next);
    }
    return out;
  };
  const auto kept_off = offsets(kept_parties);
  const auto traced_off = offsets(traced_parties);

  const auto dk = static_cast<Eigen::Index>(kept_off.size());
  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (Eigen::Index i = 0; i < dk; ++i)
    for (Eigen::Index j = 0; j < dk; ++j) {
      Complex acc = 0.0;
      for (int t : traced_off) acc += m(kept_off[i] + t, kept_off[j] + t);
      out(i, j) = acc;
    }
  return out;
}

ComplexMatrix permute_subsystems(const ComplexMatrix& m, std::span<const int> dims,
                                 std::span<const int> order) {
  check_dims(m, dims);
  const int n = static_cast<int>(dims.size());
  if (static_cast<int>(order.size()) != n) throw DimensionError("permutation size mismatch");
  std::vector<bool> seen(n, false);
  for (int o : order) {
    if (o < 0 || o >= n || seen[o]) throw DimensionError("invalid subsystem permutation");
    seen[o] = true;
  }
  std::vector<int> new_dims(n);
  for (int q = 0; q < n; ++q) new_dims[q] = dims[order[q]];
  const auto old_strides = strides_of(dims);
  const auto new_strides = strides_of(new_dims);

  const int total = static_cast<int>(m.rows());
  // map[new index] = old index
  std::vector<int> map(total);
  for (int idx = 0; idx < total; ++idx) {
    int rem = idx, old = 0;
    for (int q = 0; q < n; ++q) {
      const int digit = rem / new_strides[q];
      rem %= new_strides[q];
      old += digit * old_strides[order[q]];
    }
    map[idx] = old;
  }
  ComplexMatrix out(total, total);
  for (int i = 0; i < total; ++i)
    for (int j = 0; j < total; ++j) out(i, j) = m(map[i], map[j]);
  return out;
}

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i)
    if (!std::isfinite(m.data()[i].real()) || !std::isfinite(m.data()[i].imag())) return false;
  return true;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol;
}

HermitianEigenSystem hermitian_eig(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("hermitian_eig: matrix is not square");
  if (!all_finite(m)) throw DomainError("hermitian_eig: non-finite entries");
  if (!is_hermitian(m, 1e-9)) throw DomainError("hermitian_eig: matrix is not Hermitian");
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) throw NumericalError("hermitian_eig: solver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix apply_spectral(const ComplexMatrix& m, const std::function<double(double)>& f,
                             double clip_eps) {
  const auto es = hermitian_eig(m);
  RealVector fl(es.eigenvalues.size());
  for (Eigen::Index i = 0; i < fl.size(); ++i) {
    const double lam = es.eigenvalues(i) < clip_eps ? 0.0 : es.eigenvalues(i);
    fl(i) = f(lam);
    if (!std::isfinite(fl(i)))
      throw DomainError("apply_spectral: function undefined on clipped spectrum");
  }
  return es.eigenvectors * fl.cast<Complex>().asDiagonal() * es.eigenvectors.adjoint();
}

ComplexMatrix haar_unitary(int dim, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  ComplexMatrix z(dim, dim);
  for (Eigen::Index i = 0; i < z.size(); ++i) z.data()[i] = Complex(normal(gen), normal(gen));
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity of QR so the distribution is exactly Haar.
  for (int j = 0; j < dim; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0.0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

}  // namespace qcorr
