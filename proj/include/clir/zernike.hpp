#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "clir/voxel.hpp"

namespace clir {

using Complex = std::complex<double>;

inline constexpr int kMaxZernikeOrder = 20;
inline constexpr int kDefaultZernikeOrder = 8;
inline constexpr int kDefaultVoxelResolution = 64;

struct ZernikeIndex {
  int n, l, m;
};

struct Monomial {
  int r, s, t;
  Complex coeff;
};

// 3D Zernike functions Z_nl^m on the unit ball, expanded into monomials
// x^r y^s z^t. Normalised so (3 / 4pi) * integral over the ball of
// Z conj(Z') is the Kronecker delta.
class ZernikeBasis {
 public:
  int max_order() const { return max_order_; }
  const std::vector<ZernikeIndex>& indices() const { return indices_; }
  /// Monomial expansion of the basis function at position `i` of indices().
  const std::vector<Monomial>& chi(std::size_t i) const { return chi_[i]; }
  std::size_t position(int n, int l, int m) const;

  /// Radial coefficient q_kl^nu, with 2k = n - l.
  double q(int k, int l, int nu) const;

  Complex evaluate(std::size_t i, const Vec3& x) const;

  friend ZernikeBasis build_zernike_basis(int max_order);

 private:
  int max_order_ = 0;
  std::vector<ZernikeIndex> indices_;
  std::vector<std::vector<Monomial>> chi_;
  std::vector<std::vector<std::vector<double>>> q_;  // q_[k][l][nu]
};

/// Throws OrderTooLarge above kMaxZernikeOrder.
ZernikeBasis build_zernike_basis(int max_order);

/// Omega_nl^m per basis index, in the order of basis.indices().
std::vector<Complex> zernike_moments(const MomentTable& moments, const ZernikeBasis& basis);
std::vector<Complex> zernike_moments(const VoxelGrid& grid, const ZernikeBasis& basis);

struct ZernikeDescriptor {
  std::vector<std::pair<int, int>> nl;  // (n, l), n ascending then l ascending
  std::vector<double> f_nl;             // norm of the 2l+1 moments for that (n, l)
};

ZernikeDescriptor zernike_descriptor(const std::vector<Complex>& moments, const ZernikeBasis& basis);
ZernikeDescriptor zernike_descriptor(const VoxelGrid& grid, int max_order);

}  // namespace clir
