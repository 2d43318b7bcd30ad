#pragma once

#include <memory>
#include <string>
#include <vector>

#include "clir/mesh.hpp"

namespace clir {

inline constexpr int kSurfaceMomentOrder = 4;

/// Surface moments M_klm (k + l + m <= 4) with unit density.
struct SurfaceMomentSet {
  double values[kSurfaceMomentOrder + 1][kSurfaceMomentOrder + 1][kSurfaceMomentOrder + 1] = {};
  bool centered = false;
  bool scale_normalized = false;
  Vec3 centroid = Vec3::Zero();
  Vec3 origin = Vec3::Zero();  // raw moments are taken about this point

  double at(int k, int l, int m) const { return values[k][l][m]; }
};

/// Per-triangle moments by the exact degree-5 triangle rule, summed over the
/// mesh. The zeroth moment of each triangle is its area.
SurfaceMomentSet surface_moments(const TriangleMesh& mesh, int max_total_order = kSurfaceMomentOrder,
                                 const Vec3& origin = Vec3::Zero());
/// Raw moments about the surface centroid. Shifting these to central moments
/// avoids the cancellation a far-away origin causes.
SurfaceMomentSet centred_surface_moments(const TriangleMesh& mesh);

/// Central moments about the surface centroid, then divided by
/// M_000^(1 + (k+l+m)/2). Throws ZeroMass.
SurfaceMomentSet normalize_surface_moments(const SurfaceMomentSet& raw);

/// A polynomial in the normalized moments, written like
/// "m200 + m020 + m002" or "(m300 + m120)^2 - 3*m111*m000".
/// Moment names are 'm' followed by three exponent digits with sum <= 4.
class InvariantExpression {
 public:
  /// Throws ConfigError on malformed input.
  static InvariantExpression parse(const std::string& text);

  double evaluate(const SurfaceMomentSet& moments) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

/// Rotation-invariant tensor contractions of the normalized moments: three
/// fourth-order, two third-order and one mixed second/fourth-order term.
const std::vector<std::string>& default_surface_invariants();

std::vector<double> surface_descriptor(const TriangleMesh& mesh, const std::vector<InvariantExpression>& invariants);
std::vector<InvariantExpression> parse_invariants(const std::vector<std::string>& texts);

}  // namespace clir
