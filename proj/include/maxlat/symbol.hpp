#pragma once

// Pointwise symbol matrices on the torus and a numeric spectral oracle.

#include <vector>

#include <Eigen/Dense>

#include "maxlat/media.hpp"

namespace maxlat {

using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

/// y = sin x and z = sin^2 x, componentwise.
Vec3 sin_of(const Vec3& x);
Vec3 z_of(const Vec3& x);

/// M~(y) v = y x v.
Mat3 mtilde(const Vec3& y);

/// H0 = [[0, M~(y)], [-M~(y), 0]]; real symmetric.
Mat6 h0_from_y(const Vec3& y);
Mat6 h0_symbol(const Vec3& x);

/// D H0 with D = diag(eps, mu).
Mat6 hd_from_y(const Media& media, const Vec3& y);
Mat6 hd_symbol(const Media& media, const Vec3& x);

/// B = -mu M~(y) eps M~(y): lower-right block of (H^D)^2.
Mat3 b_from_y(const Media& media, const Vec3& y);
Mat3 b_matrix(const Media& media, const Vec3& x);

/// Adjugate by cofactors; m * adjugate(m) = det(m) * I.
Eigen::MatrixXd adjugate(const Eigen::MatrixXd& m);
Mat3 adjugate3(const Mat3& m);

struct SpectralCluster {
  double value = 0.0;
  int multiplicity = 0;
  Eigen::MatrixXcd projector;
};

struct EigenDecomp {
  std::vector<double> eigenvalues;  // ascending, with multiplicity
  std::vector<SpectralCluster> clusters;  // ascending by value
  double max_imag = 0.0;         // largest |Im| among computed eigenvalues
  double max_residual = 0.0;     // max_k |M P_k - v_k P_k| / max(1, |M|)
  bool residual_flagged = false; // max_residual > 1e-8

  /// Projector of the cluster closest to `value`.
  const SpectralCluster& nearest(double value) const;
};

/// General-purpose eigensolve (balanced, right and left eigenvectors) with
/// clustering of eigenvalues closer than rel_tol * spectral radius.
EigenDecomp eigen_decomp(const Eigen::MatrixXd& m, double rel_tol = 1e-8);

/// h^D(y) spectrum through the symmetric similar matrix D^{1/2} H0 D^{1/2};
/// projectors are mapped back to h^D.
EigenDecomp hd_eigen_decomp(const Media& media, const Vec3& y, double rel_tol = 1e-8);

}  // namespace maxlat
