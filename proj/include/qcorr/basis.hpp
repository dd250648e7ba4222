#pragma once

#include <span>
#include <vector>

#include "qcorr/linalg.hpp"

namespace qcorr {

/// Orthonormal basis of one block: frame * R(coords), basis vectors are the
/// columns. For a qubit R has two coordinates (u, phi):
///   |0'> = cos u |0> + e^{-i phi} sin u |1>,  |1'> = sin u |0> - e^{-i phi} cos u |1>
/// which is the (t, phi) chart with t = |sin u|, extended smoothly past the
/// boundaries of t in [0, 1]. A d-dimensional block uses a chain of d(d-1)/2
/// two-level rotations (angle, phase), i.e. d(d-1) coordinates.
struct BlockBasis {
  int dim = 2;
  ComplexMatrix frame;          // unitary, identity by default
  std::vector<double> coords;   // size coordinate_count(dim)
};

/// One orthonormal basis per partition block; the search variable of the
/// discord optimizer.
class ProductBasisPoint {
 public:
  ProductBasisPoint() = default;
  explicit ProductBasisPoint(std::vector<BlockBasis> blocks);

  static int coordinate_count(int dim) { return dim * (dim - 1); }

  /// Computational basis for each block.
  static ProductBasisPoint computational(std::span<const int> block_dims);
  /// Bases given explicitly by the columns of each frame; coordinates zero.
  static ProductBasisPoint from_frames(std::vector<ComplexMatrix> frames);

  const std::vector<BlockBasis>& blocks() const { return blocks_; }
  std::vector<int> block_dims() const;
  int coordinate_count() const;

  std::vector<double> coordinates() const;
  ProductBasisPoint with_coordinates(std::span<const double> x) const;

  ComplexMatrix block_unitary(int b) const;
  /// Kronecker product of the block unitaries; column k is the basis vector |k>.
  ComplexMatrix unitary() const;

  /// Qubit block in the (t, phi) chart, t in [0,1], phi in [0,2pi), computed
  /// from the resulting basis (global phases removed).
  std::pair<double, double> qubit_chart(int b) const;

  /// max |U^dagger U - I| over all blocks.
  double gram_deviation() const;

 private:
  std::vector<BlockBasis> blocks_;
};

/// Rotation part of a block basis for the given coordinates.
ComplexMatrix block_rotation(int dim, std::span<const double> coords);

}  // namespace qcorr
