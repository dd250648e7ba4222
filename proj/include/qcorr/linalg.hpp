#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qcorr {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Eigenvalues below this are treated as exact zeros.
inline constexpr double kDefaultClip = 1e-12;

struct HermitianEigenSystem {
  RealVector eigenvalues;      // ascending
  ComplexMatrix eigenvectors;  // columns
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron_all(std::span<const ComplexMatrix> factors);
ComplexVector kron(const ComplexVector& a, const ComplexVector& b);

int product(std::span<const int> dims);

/// Reduced operator on the parties listed in `keep` (ascending party order
/// is preserved regardless of the order in `keep`).
ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const int> dims,
                            std::span<const int> keep);

/// Reorders tensor factors: factor q of the result is factor order[q] of `m`.
ComplexMatrix permute_subsystems(const ComplexMatrix& m, std::span<const int> dims,
                                 std::span<const int> order);

/// Symmetrizes as (m + m^dagger)/2 before solving. Throws DomainError when the
/// input is not Hermitian within 1e-9 and NumericalError if the solver fails.
HermitianEigenSystem hermitian_eig(const ComplexMatrix& m);

/// V f(clip(lambda)) V^dagger. Eigenvalues below `clip_eps` are mapped to 0
/// before `f` is applied; a non-finite f value throws DomainError.
ComplexMatrix apply_spectral(const ComplexMatrix& m, const std::function<double(double)>& f,
                             double clip_eps = kDefaultClip);

double max_abs(const ComplexMatrix& m);
bool all_finite(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol);

/// Columns are an orthonormal frame drawn from the Haar measure.
ComplexMatrix haar_unitary(int dim, std::uint64_t seed);

}  // namespace qcorr
