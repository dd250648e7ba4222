#pragma once

#include <span>

#include "qcorr/basis.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

/// Relative entropy value in bits. When the support of rho is not contained
/// in the support of sigma the value is +infinity; that case is carried by
/// the flag and `value` is not meant for arithmetic.
struct EntropyValue {
  double value = 0.0;
  bool support_violation = false;

  bool is_infinite() const { return support_violation; }
};

/// Weight of rho on the kernel of sigma above which S(rho||sigma) is +inf.
inline constexpr double kSupportTolerance = 1e-8;

/// -sum p log2 p with 0 log 0 = 0. Entries down to -1e-12 are clipped to 0 and
/// the vector renormalized; a sum off by more than 1e-9 throws DomainError.
double shannon_entropy(std::span<const double> p);

/// -Tr rho log2 rho over eigenvalues clipped at `clip`.
double von_neumann_entropy(const ComplexMatrix& rho, double clip = kDefaultClip);
double von_neumann_entropy(const MultipartiteState& s);

EntropyValue relative_entropy(const ComplexMatrix& rho, const ComplexMatrix& sigma,
                              double clip = kDefaultClip);
EntropyValue relative_entropy(const MultipartiteState& rho, const MultipartiteState& sigma);

/// Sum of block entropies minus the joint entropy of the blocks' union.
/// For two blocks this is the quantum mutual information.
double total_mutual_information(const MultipartiteState& s, const Partition& part);

/// Diagonal of rho in a product basis, as a probability vector.
std::vector<double> basis_diagonal(const ComplexMatrix& rho, const ComplexMatrix& basis);

/// Shannon entropy of the diagonal of rho in the product basis. The basis
/// blocks follow the partition's blocks (see group_blocks). Throws BasisError
/// if the basis is not orthonormal within 1e-8 or does not match the blocks.
double lambda_functional(const MultipartiteState& s, const Partition& part,
                         const ProductBasisPoint& basis);
/// Same functional on an already grouped density matrix.
double lambda_functional(const ComplexMatrix& grouped_rho, const ComplexMatrix& basis_unitary);

/// sum_k <k|rho|k> |k><k| for the columns |k> of `basis`.
ComplexMatrix dephase(const ComplexMatrix& rho, const ComplexMatrix& basis);

/// True if rho is diagonal in some product basis of its parties, checked via
/// commutativity and normality of the operators Tr_rest[rho (I (x) E_ij)].
bool is_classical(const MultipartiteState& s, double tol = 1e-8);

/// Classical correlation of a state given its closest classical state `chi`
/// on the grouped blocks of `part`: the total mutual information of chi,
/// since the closest product state is the product of the marginals.
/// Throws StateValidationError if chi is not classical or has the wrong shape.
double classical_correlation(const MultipartiteState& s, const Partition& part,
                             const MultipartiteState& chi);

}  // namespace qcorr
