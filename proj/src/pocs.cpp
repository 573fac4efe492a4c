#include "temcodec/pocs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "temcodec/math.hpp"

namespace temcodec {

namespace {

constexpr double kPi = std::numbers::pi;

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

// Known time boundaries of one train: t_start followed by the spikes.
std::vector<double> interval_boundaries(const SpikeTrain& train)
{
	std::vector<double> b;
	b.reserve(train.times.size() + 1);
	b.push_back(train.params.t_start);
	b.insert(b.end(), train.times.begin(), train.times.end());
	return b;
}

void add_or_merge(std::vector<Rectangle>& rects, double start, double end, double weight)
{
	for (auto& r : rects) {
		if (r.start == start && r.end == end) {
			r.weight += weight;
			return;
		}
	}
	rects.emplace_back(start, end, weight);
}

}  // namespace

std::vector<HybridSignal> project_spikes(const std::vector<HybridSignal>& y_hat,
                                         const std::vector<SpikeTrain>& trains)
{
	if (y_hat.size() != trains.size()) {
		throw DimensionMismatch("project_spikes: channel count must equal train count");
	}
	std::vector<HybridSignal> out = y_hat;
	for (std::size_t i = 0; i < out.size(); ++i) {
		const auto bounds = interval_boundaries(trains[i]);
		const TemParams& p = trains[i].params;
		for (std::size_t l = 0; l + 1 < bounds.size(); ++l) {
			const double a = bounds[l], b = bounds[l + 1];
			// int y over the interval, recovered from the spike constraint
			const double known = p.charge() - p.bias * (b - a);
			const double defect = known - integrate(out[i], a, b);
			add_or_merge(out[i].rects, a, b, defect);
		}
	}
	return out;
}

std::vector<HybridSignal> project_spikes(const VectorSignal& y_hat,
                                         const std::vector<SpikeTrain>& trains)
{
	std::vector<HybridSignal> rows;
	rows.reserve(y_hat.rows());
	for (int i = 0; i < y_hat.rows(); ++i) {
		rows.push_back(HybridSignal{y_hat.row(i), {}});
	}
	return project_spikes(rows, trains);
}

DecoderState step(const DecoderState& state, const DecoderInput& input,
                  const VectorSignal* y_truth)
{
	const auto spiked = project_spikes(state.iterate, input.trains);
	const auto ranged = project_colspace(input.A, spiked);
	std::vector<SincSignal> rows;
	rows.reserve(ranged.size());
	for (const auto& h : ranged) {
		rows.push_back(bandlimit_sample(h));
	}
	VectorSignal next(std::move(rows));

	IterationDiagnostics diag;
	double defect_sq = 0.0;
	for (std::size_t i = 0; i < input.trains.size(); ++i) {
		const auto bounds = interval_boundaries(input.trains[i]);
		const TemParams& p = input.trains[i].params;
		const SincSignal row = next.row(static_cast<int>(i));
		for (std::size_t l = 0; l + 1 < bounds.size(); ++l) {
			const double a = bounds[l], b = bounds[l + 1];
			const double known = p.charge() - p.bias * (b - a);
			const double d = integrate(row, a, b) - known;
			defect_sq += d * d;
		}
	}
	diag.spike_residual = std::sqrt(defect_sq);
	const Eigen::MatrixXd c_next = coeff_matrix(next);
	const Eigen::MatrixXd c_prev = coeff_matrix(state.iterate);
	diag.range_residual = (c_next - input.A.projector() * c_next).norm();
	diag.step_norm = (c_next - c_prev).norm();
	if (y_truth != nullptr) {
		diag.truth_distance = (c_next - coeff_matrix(*y_truth)).norm();
	}

	DecoderState out{std::move(next), state.iteration + 1, state.history};
	out.history.push_back(diag);
	return out;
}

bool reconstructible(const std::vector<long>& spike_counts, int K, int J)
{
	long capped = 0;
	for (long n : spike_counts) {
		capped += std::min<long>(n, K);
	}
	return capped > static_cast<long>(J) * K;
}

Decoder::Decoder(DecoderInput input) : input_(std::move(input))
{
	if (static_cast<int>(input_.trains.size()) != input_.A.rows()) {
		throw DimensionMismatch("Decoder: train count must equal matrix rows");
	}
	const SincGrid& g = input_.grid;
	for (const auto& train : input_.trains) {
		const auto bounds = interval_boundaries(train);
		for (std::size_t l = 0; l + 1 < bounds.size(); ++l) {
			if (!(bounds[l + 1] > bounds[l])) {
				throw Error("Decoder: spike times must be strictly increasing "
				            "and later than t_start");
			}
		}
		const int m = static_cast<int>(bounds.size()) - 1;
		Eigen::MatrixXd r(std::max(m, 0), g.count);
		Eigen::VectorXd len(std::max(m, 0)), target(std::max(m, 0));
		for (int l = 0; l < m; ++l) {
			const double a = bounds[l], b = bounds[l + 1];
			len(l) = b - a;
			target(l) = train.params.charge() - train.params.bias * len(l);
			for (int k = 0; k < g.count; ++k) {
				r(l, k) = sinc_atom_integral(g.omega, g.point(k), a, b);
			}
		}
		total_constraints_ += m;
		atom_integrals_.push_back(std::move(r));
		lengths_.push_back(std::move(len));
		targets_.push_back(std::move(target));
	}
}

void Decoder::set_truth(const VectorSignal& x_true)
{
	truth_coeffs_ = coeff_matrix(mix(input_.A, x_true));
}

Decoder::Workspace Decoder::make_workspace() const
{
	const int i_rows = static_cast<int>(atom_integrals_.size());
	Workspace ws;
	ws.rect_samples = Eigen::MatrixXd::Zero(i_rows, input_.grid.count);
	ws.next = Eigen::MatrixXd::Zero(i_rows, input_.grid.count);
	ws.tmp = Eigen::MatrixXd::Zero(i_rows, input_.grid.count);
	ws.col = Eigen::VectorXd::Zero(input_.grid.count);
	for (const auto& r : atom_integrals_) {
		ws.defect.emplace_back(Eigen::VectorXd::Zero(r.rows()));
	}
	return ws;
}

// One cycle P_{Omega,L} . P_A . P_spikes, in place. All buffers come from the
// workspace so the hot loop performs no allocation.
void Decoder::cycle(Eigen::MatrixXd& coeffs, Workspace& ws, IterationDiagnostics& diag) const
{
	const double scale = kPi / input_.grid.omega;
	const int i_rows = static_cast<int>(atom_integrals_.size());

	// P_spikes: rectangle heights that restore every interval constraint.
	// A rectangle's low-passed sample at atom k is its height times the same
	// atom integral, so the precomputed matrix serves both directions.
	for (int i = 0; i < i_rows; ++i) {
		if (atom_integrals_[i].rows() == 0) {
			ws.rect_samples.row(i).setZero();
			continue;
		}
		ws.col = coeffs.row(i);
		ws.defect[i] = targets_[i];
		ws.defect[i].noalias() -= atom_integrals_[i] * ws.col;
		ws.defect[i].array() /= lengths_[i].array();  // defects -> heights
		ws.col.noalias() = atom_integrals_[i].transpose() * ws.defect[i];
		ws.rect_samples.row(i) = ws.col.transpose();
	}

	// P_A then P_{Omega,L}: the projector acts pointwise in t, and sampling
	// plus rescaling by pi/omega turns sample values into atom coefficients.
	ws.tmp = coeffs;
	ws.tmp += scale * ws.rect_samples;
	ws.next.noalias() = input_.A.projector() * ws.tmp;

	// diagnostics, evaluated at the produced iterate
	double defect_sq = 0.0;
	for (int i = 0; i < i_rows; ++i) {
		if (atom_integrals_[i].rows() == 0) {
			continue;
		}
		ws.col = ws.next.row(i);
		ws.defect[i] = targets_[i];
		ws.defect[i].noalias() -= atom_integrals_[i] * ws.col;
		defect_sq += ws.defect[i].squaredNorm();
	}
	diag.spike_residual = std::sqrt(defect_sq);
	ws.tmp.noalias() = input_.A.projector() * ws.next;
	diag.range_residual = (ws.next - ws.tmp).norm();
	diag.step_norm = (ws.next - coeffs).norm();
	if (truth_coeffs_) {
		diag.truth_distance = (ws.next - *truth_coeffs_).norm();
	}
	coeffs.swap(ws.next);
}

DecodeResult Decoder::run(const StopRule& stop, const IterationCallback& callback,
                          bool record_history) const
{
	const SincGrid& g = input_.grid;
	const int i_rows = static_cast<int>(atom_integrals_.size());
	Eigen::MatrixXd coeffs = Eigen::MatrixXd::Zero(i_rows, g.count);
	Workspace ws = make_workspace();

	StopReason reason = StopReason::MaxIterations;
	bool converged = false;
	std::vector<IterationDiagnostics> history;
	if (record_history) {
		history.reserve(std::min(stop.max_iterations, 1 << 12));
	}

	int m = 0;
	while (m < stop.max_iterations) {
		IterationDiagnostics diag;
		cycle(coeffs, ws, diag);
		++m;
		if (record_history) {
			history.push_back(diag);
		}
		if (callback) {
			callback(m, diag);
		}
		if (total_constraints_ > 0 &&
		    diag.spike_residual + diag.range_residual < stop.residual_tol) {
			reason = StopReason::ResidualMet;
			converged = true;
			break;
		}
		if (diag.step_norm <= stop.rel_change_tol * coeffs.norm()) {
			reason = StopReason::IterateStalled;
			break;
		}
	}

	VectorSignal y_final = from_coeff_matrix(g, coeffs);
	return DecodeResult{unmix(input_.A, y_final),
	                    DecoderState{std::move(y_final), m, std::move(history)}, reason,
	                    converged};
}

DecodeResult decode(const DecoderInput& input, const StopRule& stop,
                    const VectorSignal* x_truth, const IterationCallback& callback,
                    bool record_history)
{
	Decoder dec(input);
	if (x_truth != nullptr) {
		dec.set_truth(*x_truth);
	}
	return dec.run(stop, callback, record_history);
}

}  // namespace temcodec
