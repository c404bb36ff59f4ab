#pragma once

#include <Eigen/Dense>

#include "hdgdd/basis.hpp"
#include "hdgdd/mesh.hpp"

namespace hdgdd {

/// M_ij = integral over K of phi_i phi_j. `exactness` defaults to 2k.
[[nodiscard]] Eigen::MatrixXd local_mass_matrix(const TriangleBasis& basis, const ElementGeometry& geometry,
                                                int exactness = -1);

/// Face mass between two segment bases on a face of the given length.
[[nodiscard]] Eigen::MatrixXd local_face_mass(const SegmentBasis& trial, const SegmentBasis& test, double length);

/// Rectangular pairing of a triangle basis restricted to local face f against
/// a segment basis: entry (i, a) = integral over the face of phi_i psi_a.
/// `reversed` evaluates the segment basis at the flipped parameter.
[[nodiscard]] Eigen::MatrixXd local_face_mass(const TriangleBasis& trial, int local_face, const SegmentBasis& test,
                                              const ElementGeometry& geometry, bool reversed = false);

} // namespace hdgdd
