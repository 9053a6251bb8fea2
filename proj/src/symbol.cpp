#include "maxlat/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "maxlat/errors.hpp"

namespace maxlat {

Vec3 sin_of(const Vec3& x) { return {std::sin(x[0]), std::sin(x[1]), std::sin(x[2])}; }

Vec3 z_of(const Vec3& x) {
  const Vec3 y = sin_of(x);
  return {y[0] * y[0], y[1] * y[1], y[2] * y[2]};
}

Mat3 mtilde(const Vec3& y) {
  Mat3 m;
  m << 0.0, -y[2], y[1],
       y[2], 0.0, -y[0],
       -y[1], y[0], 0.0;
  return m;
}

Mat6 h0_from_y(const Vec3& y) {
  Mat6 h = Mat6::Zero();
  const Mat3 m = mtilde(y);
  h.topRightCorner<3, 3>() = m;
  h.bottomLeftCorner<3, 3>() = -m;
  return h;
}

Mat6 h0_symbol(const Vec3& x) { return h0_from_y(sin_of(x)); }

Mat6 hd_from_y(const Media& media, const Vec3& y) {
  Eigen::Matrix<double, 6, 1> d;
  d << media.eps[0], media.eps[1], media.eps[2], media.mu[0], media.mu[1], media.mu[2];
  return d.asDiagonal() * h0_from_y(y);
}

Mat6 hd_symbol(const Media& media, const Vec3& x) { return hd_from_y(media, sin_of(x)); }

Mat3 b_from_y(const Media& media, const Vec3& y) {
  const Mat3 m = mtilde(y);
  const Eigen::Vector3d e(media.eps[0], media.eps[1], media.eps[2]);
  const Eigen::Vector3d u(media.mu[0], media.mu[1], media.mu[2]);
  return -(u.asDiagonal() * m * e.asDiagonal() * m);
}

Mat3 b_matrix(const Media& media, const Vec3& x) { return b_from_y(media, sin_of(x)); }

Eigen::MatrixXd adjugate(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw ShapeError("adjugate of a non-square matrix");
  const Eigen::Index n = m.rows();
  Eigen::MatrixXd adj(n, n);
  if (n == 1) {
    adj(0, 0) = 1.0;
    return adj;
  }
  Eigen::MatrixXd minor(n - 1, n - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index r = 0, rr = 0; r < n; ++r) {
        if (r == i) continue;
        for (Eigen::Index c = 0, cc = 0; c < n; ++c) {
          if (c == j) continue;
          minor(rr, cc++) = m(r, c);
        }
        ++rr;
      }
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      adj(j, i) = sign * minor.determinant();
    }
  }
  return adj;
}

Mat3 adjugate3(const Mat3& m) {
  Mat3 a;
  a(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  a(0, 1) = m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2);
  a(0, 2) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
  a(1, 0) = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
  a(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
  a(1, 2) = m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2);
  a(2, 0) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
  a(2, 1) = m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1);
  a(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return a;
}

const SpectralCluster& EigenDecomp::nearest(double value) const {
  if (clusters.empty()) throw InternalError("empty spectral decomposition");
  return *std::min_element(clusters.begin(), clusters.end(), [value](const auto& a, const auto& b) {
    return std::abs(a.value - value) < std::abs(b.value - value);
  });
}

namespace {

// Groups sorted eigenvalues into clusters and builds P_k = R_k L_k from right
// eigenvectors R and the rows L = R^{-1}.
EigenDecomp assemble(const Eigen::MatrixXd& m, const Eigen::VectorXcd& values,
                     const Eigen::MatrixXcd& right, const Eigen::MatrixXcd& left,
                     double rel_tol) {
  const Eigen::Index n = values.size();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](auto a, auto b) { return values[a].real() < values[b].real(); });

  EigenDecomp out;
  double radius = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    radius = std::max(radius, std::abs(values[k]));
    out.max_imag = std::max(out.max_imag, std::abs(values[k].imag()));
  }
  const double tol = rel_tol * std::max(radius, 1e-300);

  std::vector<std::vector<Eigen::Index>> groups;
  for (Eigen::Index k : order) {
    out.eigenvalues.push_back(values[k].real());
    if (!groups.empty() &&
        std::abs(values[k].real() - values[groups.back().back()].real()) <= tol) {
      groups.back().push_back(k);
    } else {
      groups.push_back({k});
    }
  }

  const double scale = std::max(1.0, m.norm());
  const Eigen::MatrixXcd mc = m.cast<std::complex<double>>();
  for (const auto& g : groups) {
    SpectralCluster c;
    c.multiplicity = static_cast<int>(g.size());
    double sum = 0.0;
    c.projector = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index k : g) {
      sum += values[k].real();
      c.projector += right.col(k) * left.row(k);
    }
    c.value = sum / static_cast<double>(g.size());
    const double res = (mc * c.projector - c.value * c.projector).norm() / scale;
    out.max_residual = std::max(out.max_residual, res);
    out.clusters.push_back(std::move(c));
  }
  out.residual_flagged = out.max_residual > 1e-8;
  return out;
}

}  // namespace

EigenDecomp eigen_decomp(const Eigen::MatrixXd& m, double rel_tol) {
  if (m.rows() != m.cols()) throw ShapeError("eigen_decomp of a non-square matrix");
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, true);
  if (solver.info() != Eigen::Success) throw InternalError("eigensolver did not converge");
  const Eigen::MatrixXcd right = solver.eigenvectors();
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(right);
  if (!lu.isInvertible()) {
    throw InternalError("matrix is not diagonalizable to working precision");
  }
  return assemble(m, solver.eigenvalues(), right, lu.inverse(), rel_tol);
}

EigenDecomp hd_eigen_decomp(const Media& media, const Vec3& y, double rel_tol) {
  Eigen::Matrix<double, 6, 1> sq;
  for (int i = 0; i < 3; ++i) {
    sq[i] = std::sqrt(media.eps[i]);
    sq[i + 3] = std::sqrt(media.mu[i]);
  }
  const Mat6 sym = sq.asDiagonal() * h0_from_y(y) * sq.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Mat6> solver(sym);
  if (solver.info() != Eigen::Success) throw InternalError("eigensolver did not converge");
  const Mat6 w = solver.eigenvectors();
  const Eigen::MatrixXcd right = (sq.asDiagonal() * w).cast<std::complex<double>>();
  const Eigen::MatrixXcd left =
      (w.transpose() * sq.cwiseInverse().asDiagonal()).cast<std::complex<double>>();
  return assemble(hd_from_y(media, y), solver.eigenvalues().cast<std::complex<double>>(), right,
                  left, rel_tol);
}

}  // namespace maxlat
