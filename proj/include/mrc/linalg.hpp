#pragma once

// Dense complex least squares by Householder QR with column pivoting.

#include <Eigen/Core>
#include <complex>
#include <optional>
#include <vector>

namespace mrc::linalg {

using cplx = std::complex<double>;
using CMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;
using CVector = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;

struct LeastSquaresResult {
  CVector coefficients;
  double residual_norm_sq = 0.0;
  int numerical_rank = 0;
  std::vector<double> diagonal_ratios;  // |R_ii| / |R_00|
};

/// A P = Q R. Q is kept as a product of Householder reflectors.
class PivotedQR {
 public:
  explicit PivotedQR(const CMatrix& a);

  [[nodiscard]] Eigen::Index rows() const { return qr_.rows(); }
  [[nodiscard]] Eigen::Index cols() const { return qr_.cols(); }
  [[nodiscard]] Eigen::Index steps() const { return static_cast<Eigen::Index>(refl_.size()); }

  /// Upper-triangular factor, min(M,N) x N.
  [[nodiscard]] CMatrix r() const;
  /// Thin Q, M x min(M,N).
  [[nodiscard]] CMatrix thin_q() const;
  /// Column permutation: column i of A P is column perm()[i] of A.
  [[nodiscard]] const std::vector<Eigen::Index>& perm() const { return perm_; }
  /// Q^H b.
  [[nodiscard]] CVector apply_qh(const CVector& b) const;

  [[nodiscard]] std::vector<double> diagonal_ratios() const;
  /// Number of leading |R_ii| >= rtol |R_00|.
  [[nodiscard]] int rank(double rtol) const;

  /// Minimizer within the span of the leading `rank` pivoted columns;
  /// truncated coefficients are exactly zero.
  [[nodiscard]] CVector solve(const CVector& b, int rank) const;

 private:
  CMatrix qr_;                 // R on and above the diagonal
  std::vector<CVector> refl_;  // unit Householder vectors
  std::vector<cplx> diag_;     // R_ii
  std::vector<Eigen::Index> perm_;
};

/// max(M, N) * machine epsilon, the usual default for rank decisions.
double auto_rank_rtol(Eigen::Index rows, Eigen::Index cols);

/// Throws DimensionError on size mismatch or empty A, std::invalid_argument
/// unless rank_rtol is in (0, 1). Without rank_rtol, auto_rank_rtol is used.
LeastSquaresResult qr_least_squares(const CMatrix& a, const CVector& b,
                                    std::optional<double> rank_rtol = std::nullopt);

}  // namespace mrc::linalg
