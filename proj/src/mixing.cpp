#include "temcodec/mixing.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <string>
#include <utility>

namespace temcodec {

namespace {

constexpr double kRankTol = 1e-10;

double binomial(int n, int k)
{
	double v = 1.0;
	for (int i = 1; i <= k; ++i) {
		v *= static_cast<double>(n - k + i) / i;
	}
	return v;
}

Eigen::MatrixXd coeff_matrix(const VectorSignal& v)
{
	Eigen::MatrixXd m(v.rows(), v.grid().count);
	for (int i = 0; i < v.rows(); ++i) {
		for (int k = 0; k < v.grid().count; ++k) {
			m(i, k) = v.coeffs(i)[k];
		}
	}
	return m;
}

VectorSignal from_coeff_matrix(const SincGrid& grid, const Eigen::MatrixXd& m)
{
	std::vector<std::vector<double>> rows(m.rows(), std::vector<double>(m.cols()));
	for (int i = 0; i < m.rows(); ++i) {
		for (int k = 0; k < m.cols(); ++k) {
			rows[i][k] = m(i, k);
		}
	}
	return VectorSignal(grid, std::move(rows));
}

}  // namespace

SubsetDegenerate::SubsetDegenerate(std::vector<int> degenerate_rows)
    : Error([&] {
	      std::string msg = "mixing matrix has a singular row subset {";
	      for (std::size_t i = 0; i < degenerate_rows.size(); ++i) {
		      msg += (i ? "," : "") + std::to_string(degenerate_rows[i]);
	      }
	      return msg + "}";
      }()),
      rows(std::move(degenerate_rows))
{
}

MixingMatrix::MixingMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)), qr_(entries_)
{
	const int i_rows = static_cast<int>(entries_.rows());
	const int j_cols = static_cast<int>(entries_.cols());
	Eigen::HouseholderQR<Eigen::MatrixXd> hqr(entries_);
	const Eigen::MatrixXd q_thin =
	    hqr.householderQ() * Eigen::MatrixXd::Identity(i_rows, j_cols);
	projector_ = q_thin * q_thin.transpose();
}

MixingMatrix MixingMatrix::validate(const Eigen::MatrixXd& entries, SubsetCheck check)
{
	const int i_rows = static_cast<int>(entries.rows());
	const int j_cols = static_cast<int>(entries.cols());
	if (j_cols < 1 || i_rows < j_cols) {
		throw DimensionMismatch("mixing matrix must have I >= J >= 1");
	}

	const Eigen::JacobiSVD<Eigen::MatrixXd> svd(entries);
	const auto& sigma = svd.singularValues();
	if (!(sigma(j_cols - 1) > kRankTol * sigma(0))) {
		throw RankDeficient("mixing matrix is not numerically rank J");
	}

	bool run_subsets = false;
	switch (check) {
		case SubsetCheck::On:
			run_subsets = true;
			break;
		case SubsetCheck::Off:
			break;
		case SubsetCheck::Auto:
			run_subsets = binomial(i_rows, j_cols) <= 10000.0;
			if (!run_subsets) {
				std::fprintf(stderr,
				             "temcodec: skipping row-subset check, C(%d,%d) > 10000\n",
				             i_rows, j_cols);
			}
			break;
	}
	if (run_subsets) {
		std::vector<int> idx(j_cols);
		for (int i = 0; i < j_cols; ++i) {
			idx[i] = i;
		}
		while (true) {
			Eigen::MatrixXd sub(j_cols, j_cols);
			for (int r = 0; r < j_cols; ++r) {
				sub.row(r) = entries.row(idx[r]);
			}
			const Eigen::JacobiSVD<Eigen::MatrixXd> ssvd(sub);
			const auto& s = ssvd.singularValues();
			if (!(s(j_cols - 1) > kRankTol * s(0))) {
				throw SubsetDegenerate(idx);
			}
			// next combination in lexicographic order
			int pos = j_cols - 1;
			while (pos >= 0 && idx[pos] == i_rows - j_cols + pos) {
				--pos;
			}
			if (pos < 0) {
				break;
			}
			++idx[pos];
			for (int r = pos + 1; r < j_cols; ++r) {
				idx[r] = idx[r - 1] + 1;
			}
		}
	}
	return MixingMatrix(entries);
}

Eigen::MatrixXd matrix_from_rows(const std::vector<std::vector<double>>& rows)
{
	if (rows.empty() || rows.front().empty()) {
		throw DimensionMismatch("matrix needs at least one row and one column");
	}
	Eigen::MatrixXd m(rows.size(), rows.front().size());
	for (std::size_t i = 0; i < rows.size(); ++i) {
		if (rows[i].size() != rows.front().size()) {
			throw DimensionMismatch("matrix rows have unequal lengths");
		}
		for (std::size_t j = 0; j < rows[i].size(); ++j) {
			m(i, j) = rows[i][j];
		}
	}
	return m;
}

Eigen::MatrixXd MixingMatrix::solve_least_squares(const Eigen::MatrixXd& rhs) const
{
	return qr_.solve(rhs);
}

VectorSignal mix(const MixingMatrix& A, const VectorSignal& x)
{
	if (x.rows() != A.cols()) {
		throw DimensionMismatch("mix: signal rows must equal matrix columns");
	}
	return from_coeff_matrix(x.grid(), A.entries() * coeff_matrix(x));
}

VectorSignal project_colspace(const MixingMatrix& A, const VectorSignal& y)
{
	if (y.rows() != A.rows()) {
		throw DimensionMismatch("project_colspace: signal rows must equal matrix rows");
	}
	return from_coeff_matrix(y.grid(), A.projector() * coeff_matrix(y));
}

std::vector<HybridSignal> project_colspace(const MixingMatrix& A,
                                           const std::vector<HybridSignal>& y)
{
	const int i_rows = A.rows();
	if (static_cast<int>(y.size()) != i_rows) {
		throw DimensionMismatch("project_colspace: channel count must equal matrix rows");
	}
	const SincGrid grid = y.front().base.grid;
	for (const auto& h : y) {
		if (!(h.base.grid == grid)) {
			throw DimensionMismatch("project_colspace: channels must share one grid");
		}
	}

	// Canonical union of rectangle intervals across channels; the projector
	// acts pointwise in t, so each output channel receives every interval.
	std::map<std::pair<double, double>, int> interval_index;
	for (const auto& h : y) {
		for (const auto& r : h.rects) {
			interval_index.emplace(std::make_pair(r.start, r.end), 0);
		}
	}
	int n_intervals = 0;
	for (auto& [span, id] : interval_index) {
		id = n_intervals++;
	}

	Eigen::MatrixXd coeffs(i_rows, grid.count);
	Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(i_rows, std::max(n_intervals, 1));
	for (int i = 0; i < i_rows; ++i) {
		for (int k = 0; k < grid.count; ++k) {
			coeffs(i, k) = y[i].base.coeffs[k];
		}
		for (const auto& r : y[i].rects) {
			weights(i, interval_index.at({r.start, r.end})) += r.weight;
		}
	}
	coeffs = A.projector() * coeffs;
	weights = A.projector() * weights;

	std::vector<HybridSignal> out;
	out.reserve(i_rows);
	for (int i = 0; i < i_rows; ++i) {
		std::vector<double> c(grid.count);
		for (int k = 0; k < grid.count; ++k) {
			c[k] = coeffs(i, k);
		}
		std::vector<Rectangle> rects;
		rects.reserve(n_intervals);
		for (const auto& [span, id] : interval_index) {
			rects.emplace_back(span.first, span.second, weights(i, id));
		}
		out.push_back(HybridSignal{SincSignal(grid, std::move(c)), std::move(rects)});
	}
	return out;
}

VectorSignal unmix(const MixingMatrix& A, const VectorSignal& y)
{
	if (y.rows() != A.rows()) {
		throw DimensionMismatch("unmix: signal rows must equal matrix rows");
	}
	return from_coeff_matrix(y.grid(), A.solve_least_squares(coeff_matrix(y)));
}

}  // namespace temcodec
