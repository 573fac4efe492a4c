#pragma once

#include <vector>

#include <Eigen/Dense>

#include "temcodec/signal.hpp"

namespace temcodec {

/// The known I x J mixing matrix A (I >= J, full column rank), with its
/// orthogonal column-space projector and least-squares solver precomputed.
///
/// Construction goes through validate(), which checks numerical rank J at
/// relative tolerance 1e-10 and, when enabled, nonsingularity of every J-row
/// submatrix.
class MixingMatrix {
public:
	enum class SubsetCheck {
		Auto,  ///< on when C(I,J) <= 10000, off (with a warning) otherwise
		On,
		Off,
	};

	static MixingMatrix validate(const Eigen::MatrixXd& entries,
	                             SubsetCheck check = SubsetCheck::Auto);

	int rows() const { return static_cast<int>(entries_.rows()); }
	int cols() const { return static_cast<int>(entries_.cols()); }
	const Eigen::MatrixXd& entries() const { return entries_; }

	/// I x I orthogonal projector onto range(A), built from a thin QR factor
	/// (A^T A is never inverted explicitly).
	const Eigen::MatrixXd& projector() const { return projector_; }

	/// Least-squares solve A x = rhs column by column, via Householder QR.
	Eigen::MatrixXd solve_least_squares(const Eigen::MatrixXd& rhs) const;

private:
	explicit MixingMatrix(Eigen::MatrixXd entries);

	Eigen::MatrixXd entries_;
	Eigen::MatrixXd projector_;
	Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_;
};

/// Row-major nested vectors (e.g. from a JSON config) to an Eigen matrix.
Eigen::MatrixXd matrix_from_rows(const std::vector<std::vector<double>>& rows);

/// y = A x on the coefficient stack (mixing commutes with sinc synthesis).
VectorSignal mix(const MixingMatrix& A, const VectorSignal& x);

/// Orthogonal projection of the row stack onto range(A), acting pointwise
/// in t. For hybrid rows the projector mixes channels, so every output
/// channel carries rescaled copies of all channels' rectangles; rectangles
/// over the identical interval are merged.
VectorSignal project_colspace(const MixingMatrix& A, const VectorSignal& y);
std::vector<HybridSignal> project_colspace(const MixingMatrix& A,
                                           const std::vector<HybridSignal>& y);

/// Least-squares unmix x = (A^T A)^-1 A^T y on the coefficient stack.
VectorSignal unmix(const MixingMatrix& A, const VectorSignal& y);

}  // namespace temcodec
