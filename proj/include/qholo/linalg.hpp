#pragma once

// Small dense helpers on top of Eigen used across the numeric modules:
// Kronecker products, the tensor flip, partial traces and transposes on
// bipartite operators, and SVD-based nullspaces.

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace qholo {

using Cx = std::complex<double>;
using MatX = Eigen::Matrix<Cx, Eigen::Dynamic, Eigen::Dynamic>;
using VecX = Eigen::Matrix<Cx, Eigen::Dynamic, 1>;

inline MatX kron(const MatX& a, const MatX& b) {
  MatX r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

// flip V (x) W -> W (x) V; P * (a (x) b) * P^-1 = b (x) a when dims match
inline MatX flip_op(Eigen::Index dv, Eigen::Index dw) {
  MatX p = MatX::Zero(dv * dw, dv * dw);
  for (Eigen::Index i = 0; i < dv; ++i)
    for (Eigen::Index j = 0; j < dw; ++j) p(j * dv + i, i * dw + j) = 1.0;
  return p;
}

// partial transpose on the first factor of End(V (x) W)
inline MatX ptranspose1(const MatX& x, Eigen::Index dv, Eigen::Index dw) {
  MatX r(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < dv; ++i)
    for (Eigen::Index j = 0; j < dv; ++j)
      for (Eigen::Index k = 0; k < dw; ++k)
        for (Eigen::Index l = 0; l < dw; ++l)
          r(i * dw + k, j * dw + l) = x(j * dw + k, i * dw + l);
  return r;
}

// partial transpose on the second factor
inline MatX ptranspose2(const MatX& x, Eigen::Index dv, Eigen::Index dw) {
  MatX r(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < dv; ++i)
    for (Eigen::Index j = 0; j < dv; ++j)
      for (Eigen::Index k = 0; k < dw; ++k)
        for (Eigen::Index l = 0; l < dw; ++l)
          r(i * dw + l, j * dw + k) = x(i * dw + k, j * dw + l);
  return r;
}

// (tr (x) id): End(V (x) W) -> End(W)
inline MatX ptrace1(const MatX& x, Eigen::Index dv, Eigen::Index dw) {
  MatX r = MatX::Zero(dw, dw);
  for (Eigen::Index k = 0; k < dw; ++k)
    for (Eigen::Index l = 0; l < dw; ++l)
      for (Eigen::Index i = 0; i < dv; ++i) r(k, l) += x(i * dw + k, i * dw + l);
  return r;
}

// (id (x) tr): End(V (x) W) -> End(V)
inline MatX ptrace2(const MatX& x, Eigen::Index dv, Eigen::Index dw) {
  MatX r = MatX::Zero(dv, dv);
  for (Eigen::Index i = 0; i < dv; ++i)
    for (Eigen::Index j = 0; j < dv; ++j)
      for (Eigen::Index k = 0; k < dw; ++k) r(i, j) += x(i * dw + k, j * dw + k);
  return r;
}

// right nullspace basis of a (possibly tall) matrix, relative threshold
inline std::vector<VecX> nullspace(const MatX& m, double rel_tol = 1e-9) {
  Eigen::JacobiSVD<MatX> svd(m, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double top = sv.size() ? sv(0) : 0.0;
  std::vector<VecX> basis;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) <= rel_tol * std::max(top, 1e-300)) basis.push_back(svd.matrixV().col(i));
  return basis;
}

inline double rel_diff(const MatX& a, const MatX& b) {
  double scale = std::max(a.norm(), b.norm());
  if (scale == 0.0) return 0.0;
  return (a - b).norm() / scale;
}

// scale so the entry of largest modulus equals 1; returns the applied factor
inline Cx normalize_largest(MatX& m) {
  Eigen::Index r = 0, c = 0;
  m.cwiseAbs().maxCoeff(&r, &c);
  Cx g = m(r, c);
  m /= g;
  return g;
}

}  // namespace qholo
