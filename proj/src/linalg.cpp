#include "mrc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "mrc/errors.hpp"

namespace mrc::linalg {

// Reflectors are H = I - 2 v v^H with unit v, so H is Hermitian and
// unitary and Q^H = H_{s-1} ... H_0.
PivotedQR::PivotedQR(const CMatrix& a) : qr_(a) {
  const Eigen::Index m = qr_.rows();
  const Eigen::Index n = qr_.cols();
  const Eigen::Index s = std::min(m, n);
  perm_.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) perm_[j] = j;
  refl_.reserve(s);
  diag_.reserve(s);

  for (Eigen::Index k = 0; k < s; ++k) {
    // Pivot on the largest trailing column norm, recomputed exactly.
    Eigen::Index best = k;
    double best_norm = -1.0;
    for (Eigen::Index j = k; j < n; ++j) {
      const double nj = qr_.col(j).tail(m - k).squaredNorm();
      if (nj > best_norm) {
        best_norm = nj;
        best = j;
      }
    }
    if (best != k) {
      qr_.col(k).swap(qr_.col(best));
      std::swap(perm_[k], perm_[best]);
    }

    CVector v = qr_.col(k).tail(m - k);
    const double xnorm = v.norm();
    if (xnorm == 0.0) {
      refl_.emplace_back(CVector::Zero(m - k));
      diag_.emplace_back(0.0);
      continue;
    }
    const cplx x0 = v(0);
    const cplx phase = (std::abs(x0) == 0.0) ? cplx(1.0) : x0 / std::abs(x0);
    const cplx alpha = -phase * xnorm;
    v(0) -= alpha;
    v /= v.norm();

    auto block = qr_.bottomRightCorner(m - k, n - k);
    const Eigen::Matrix<cplx, 1, Eigen::Dynamic> w = v.adjoint() * block;
    block.noalias() -= 2.0 * v * w;
    qr_(k, k) = alpha;
    qr_.col(k).tail(m - k - 1).setZero();

    refl_.push_back(std::move(v));
    diag_.push_back(alpha);
  }
}

CMatrix PivotedQR::r() const {
  const Eigen::Index s = steps();
  CMatrix out = qr_.topRows(s).triangularView<Eigen::Upper>();
  return out;
}

CMatrix PivotedQR::thin_q() const {
  const Eigen::Index m = rows();
  const Eigen::Index s = steps();
  CMatrix q = CMatrix::Identity(m, s);
  for (Eigen::Index k = s - 1; k >= 0; --k) {
    const CVector& v = refl_[k];
    auto block = q.bottomRows(m - k);
    const Eigen::Matrix<cplx, 1, Eigen::Dynamic> w = v.adjoint() * block;
    block.noalias() -= 2.0 * v * w;
  }
  return q;
}

CVector PivotedQR::apply_qh(const CVector& b) const {
  if (b.size() != rows()) {
    throw DimensionError("apply_qh: vector length " + std::to_string(b.size()) +
                         " does not match row count " + std::to_string(rows()));
  }
  CVector y = b;
  const Eigen::Index m = rows();
  for (Eigen::Index k = 0; k < steps(); ++k) {
    const CVector& v = refl_[k];
    auto seg = y.tail(m - k);
    const cplx d = v.dot(seg);  // v^H seg
    seg -= 2.0 * d * v;
  }
  return y;
}

std::vector<double> PivotedQR::diagonal_ratios() const {
  std::vector<double> out(diag_.size(), 0.0);
  if (diag_.empty()) return out;
  const double r0 = std::abs(diag_[0]);
  if (r0 == 0.0) return out;
  for (std::size_t i = 0; i < diag_.size(); ++i) out[i] = std::abs(diag_[i]) / r0;
  return out;
}

int PivotedQR::rank(double rtol) const {
  if (diag_.empty()) return 0;
  const double r0 = std::abs(diag_[0]);
  if (r0 == 0.0) return 0;
  int r = 0;
  for (const cplx& d : diag_) {
    if (std::abs(d) >= rtol * r0) {
      ++r;
    } else {
      break;
    }
  }
  return r;
}

CVector PivotedQR::solve(const CVector& b, int rank) const {
  if (rank < 0 || rank > steps()) throw std::invalid_argument("solve: rank out of range");
  const CVector y = apply_qh(b);
  CVector z = CVector::Zero(cols());
  if (rank > 0) {
    z.head(rank) = qr_.topLeftCorner(rank, rank)
                       .triangularView<Eigen::Upper>()
                       .solve(y.head(rank));
  }
  CVector c = CVector::Zero(cols());
  for (Eigen::Index i = 0; i < cols(); ++i) c(perm_[i]) = z(i);
  return c;
}

double auto_rank_rtol(Eigen::Index rows, Eigen::Index cols) {
  return static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon();
}

LeastSquaresResult qr_least_squares(const CMatrix& a, const CVector& b,
                                    std::optional<double> rank_rtol) {
  if (a.rows() < 1 || a.cols() < 1) throw DimensionError("qr_least_squares: empty matrix");
  if (b.size() != a.rows()) {
    throw DimensionError("qr_least_squares: b has length " + std::to_string(b.size()) +
                         ", A has " + std::to_string(a.rows()) + " rows");
  }
  const double rtol = rank_rtol.value_or(auto_rank_rtol(a.rows(), a.cols()));
  if (!(rtol > 0.0 && rtol < 1.0)) {
    throw std::invalid_argument("rank_rtol must lie in (0, 1)");
  }

  const PivotedQR qr(a);
  LeastSquaresResult res;
  res.numerical_rank = qr.rank(rtol);
  res.diagonal_ratios = qr.diagonal_ratios();
  res.coefficients = qr.solve(b, res.numerical_rank);
  res.residual_norm_sq = (a * res.coefficients - b).squaredNorm();
  return res;
}

}  // namespace mrc::linalg
