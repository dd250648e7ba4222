#include "qcorr/basis.hpp"

#include <cmath>
#include <numbers>

#include "qcorr/errors.hpp"

namespace qcorr {

ComplexMatrix block_rotation(int dim, std::span<const double> coords) {
  if (static_cast<int>(coords.size()) != ProductBasisPoint::coordinate_count(dim))
    throw BasisError("wrong number of basis coordinates for a block of dimension " +
                     std::to_string(dim));
  if (dim == 1) return ComplexMatrix::Identity(1, 1);
  if (dim == 2) {
    const double c = std::cos(coords[0]), s = std::sin(coords[0]);
    const Complex ph = std::polar(1.0, -coords[1]);
    ComplexMatrix r(2, 2);
    r << c, s, s * ph, -c * ph;
    return r;
  }
  ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
  std::size_t k = 0;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      const double c = std::cos(coords[k]), s = std::sin(coords[k]);
      const Complex ph = std::polar(1.0, coords[k + 1]);
      k += 2;
      // u <- u * G_ij; only columns i and j change.
      const ComplexVector ci = u.col(i), cj = u.col(j);
      u.col(i) = c * ci + std::conj(ph) * s * cj;
      u.col(j) = -ph * s * ci + c * cj;
    }
  return u;
}

ProductBasisPoint::ProductBasisPoint(std::vector<BlockBasis> blocks) : blocks_(std::move(blocks)) {
  for (auto& b : blocks_) {
    if (b.dim < 1) throw BasisError("block dimension must be positive");
    if (b.frame.size() == 0) b.frame = ComplexMatrix::Identity(b.dim, b.dim);
    if (b.frame.rows() != b.dim || b.frame.cols() != b.dim)
      throw BasisError("block frame has the wrong shape");
    if (b.coords.empty()) b.coords.assign(coordinate_count(b.dim), 0.0);
    if (static_cast<int>(b.coords.size()) != coordinate_count(b.dim))
      throw BasisError("wrong number of basis coordinates");
  }
}

ProductBasisPoint ProductBasisPoint::computational(std::span<const int> block_dims) {
  std::vector<BlockBasis> blocks;
  for (int d : block_dims) {
    // R(0) is the identity for d > 2 and diag(1, -1) for qubits.
    blocks.push_back({d, ComplexMatrix::Identity(d, d), {}});
  }
  return ProductBasisPoint(std::move(blocks));
}

ProductBasisPoint ProductBasisPoint::from_frames(std::vector<ComplexMatrix> frames) {
  std::vector<BlockBasis> blocks;
  for (auto& f : frames) {
    const int d = static_cast<int>(f.rows());
    ComplexMatrix frame = std::move(f);
    if (d == 2) {
      // Undo the sign flip of R(0) on the second vector.
      frame.col(1) *= -1.0;
    }
    blocks.push_back({d, std::move(frame), {}});
  }
  return ProductBasisPoint(std::move(blocks));
}

std::vector<int> ProductBasisPoint::block_dims() const {
  std::vector<int> out;
  for (const auto& b : blocks_) out.push_back(b.dim);
  return out;
}

int ProductBasisPoint::coordinate_count() const {
  int n = 0;
  for (const auto& b : blocks_) n += coordinate_count(b.dim);
  return n;
}

std::vector<double> ProductBasisPoint::coordinates() const {
  std::vector<double> out;
  for (const auto& b : blocks_) out.insert(out.end(), b.coords.begin(), b.coords.end());
  return out;
}

ProductBasisPoint ProductBasisPoint::with_coordinates(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != coordinate_count())
    throw BasisError("coordinate vector has the wrong length");
  ProductBasisPoint out = *this;
  std::size_t k = 0;
  for (auto& b : out.blocks_)
    for (auto& c : b.coords) c = x[k++];
  return out;
}

ComplexMatrix ProductBasisPoint::block_unitary(int b) const {
  const auto& blk = blocks_.at(b);
  return blk.frame * block_rotation(blk.dim, blk.coords);
}

ComplexMatrix ProductBasisPoint::unitary() const {
  std::vector<ComplexMatrix> us;
  for (int b = 0; b < static_cast<int>(blocks_.size()); ++b) us.push_back(block_unitary(b));
  return kron_all(us);
}

std::pair<double, double> ProductBasisPoint::qubit_chart(int b) const {
  if (blocks_.at(b).dim != 2) throw BasisError("qubit_chart needs a two-dimensional block");
  ComplexVector v = block_unitary(b).col(0);
  const double a = std::abs(v(0));
  if (a > 0.0) v *= std::conj(v(0)) / a;
  const double t = std::min(1.0, std::abs(v(1)));
  double phi = t > 0.0 ? -std::arg(v(1)) : 0.0;
  phi = std::fmod(phi + 2.0 * std::numbers::pi, 2.0 * std::numbers::pi);
  return {t, phi};
}

double ProductBasisPoint::gram_deviation() const {
  double dev = 0.0;
  for (int b = 0; b < static_cast<int>(blocks_.size()); ++b) {
    const ComplexMatrix u = block_unitary(b);
    dev = std::max(dev, max_abs(u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols())));
  }
  return dev;
}

}  // namespace qcorr
