#pragma once

namespace polynormal {

/// Numerical thresholds. Distances are relative to the polytope's diameter,
/// so a polytope and its scaled copy behave identically.
struct Tolerance {
  /// Incidence, coplanarity, dedup of planes and points.
  double geometry = 1e-9;
  /// Minimum distance of a query point from any sheet of the bifurcation
  /// set (and from the boundary). Closer points raise OnBifurcationSet.
  double relint = 1e-8;
  /// Adjacent hull triangles whose normals differ by less than this angle
  /// (radians) are merged into one facet.
  double merge_angle = 1e-7;

  /// Every threshold divided by `factor`; used for high-precision recounts.
  Tolerance tightened(double factor) const {
    return {geometry / factor, relint / factor, merge_angle / factor};
  }
};

}  // namespace polynormal
