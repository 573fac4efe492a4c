#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "temcodec/mixing.hpp"
#include "temcodec/signal.hpp"
#include "temcodec/tem.hpp"

namespace temcodec {

/// Everything the decoder is given: the spike trains (with machine
/// parameters), the known mixing matrix and the known atom grid.
struct DecoderInput {
	std::vector<SpikeTrain> trains;
	MixingMatrix A;
	SincGrid grid;
};

/// Per-cycle diagnostics, evaluated at the iterate the cycle produced.
struct IterationDiagnostics {
	double spike_residual = 0.0;  ///< l2 norm of all interval-constraint defects
	double range_residual = 0.0;  ///< norm of the component orthogonal to range(A)
	double step_norm = 0.0;       ///< Frobenius norm of the iterate change
	std::optional<double> truth_distance;  ///< distance to supplied ground truth
};

/// The running iterate y_m plus the diagnostics history.
struct DecoderState {
	VectorSignal iterate;
	int iteration = 0;
	std::vector<IterationDiagnostics> history;
};

struct StopRule {
	int max_iterations = 20000;
	double rel_change_tol = 1e-12;
	double residual_tol = 1e-10;
};

enum class StopReason {
	ResidualMet,    ///< combined constraint residuals below residual_tol
	IterateStalled, ///< relative iterate change below rel_change_tol
	MaxIterations,  ///< budget exhausted without meeting either tolerance
};

struct DecodeResult {
	VectorSignal x_hat;
	DecoderState state;
	StopReason reason = StopReason::MaxIterations;
	bool converged = false;
};

using IterationCallback = std::function<void(int, const IterationDiagnostics&)>;

/// Projection onto the spike-constraint set: for every consecutive pair of
/// known times (the machine start time followed by the spikes), a rectangle
/// is added over the interval so that the output's integral there equals
/// 2*kappa*delta - bias*length exactly. Channels with no spikes pass through
/// unchanged; a single spike still yields the interval from t_start to it.
std::vector<HybridSignal> project_spikes(const std::vector<HybridSignal>& y_hat,
                                         const std::vector<SpikeTrain>& trains);
std::vector<HybridSignal> project_spikes(const VectorSignal& y_hat,
                                         const std::vector<SpikeTrain>& trains);

/// One full cycle y -> bandlimit_sample(project_colspace(project_spikes(y))),
/// composed from the public operators. Appends diagnostics of the produced
/// iterate (optionally against a known y-space truth).
DecoderState step(const DecoderState& state, const DecoderInput& input,
                  const VectorSignal* y_truth = nullptr);

/// Reconstructibility predicate: sum_i min(n_i, K) > J*K.
bool reconstructible(const std::vector<long>& spike_counts, int K, int J);

/// Alternating-projection decoder. Precomputes the closed-form atom
/// integrals for every spike interval once, so each cycle is a few small
/// dense products; the cycle is numerically identical to the operator
/// composition in step().
class Decoder {
public:
	explicit Decoder(DecoderInput input);

	/// Supply ground truth (x-space) for the truth_distance diagnostic.
	void set_truth(const VectorSignal& x_true);

	/// Run from y_0 = 0 until a stop condition fires, then unmix. Pass
	/// record_history = false to keep long runs allocation-light (diagnostics
	/// are still computed each cycle for the stop rule and the callback).
	DecodeResult run(const StopRule& stop, const IterationCallback& callback = {},
	                 bool record_history = true) const;

	const DecoderInput& input() const { return input_; }

private:
	struct Workspace {
		Eigen::MatrixXd rect_samples, next, tmp;
		Eigen::VectorXd col;
		std::vector<Eigen::VectorXd> defect;
	};

	Workspace make_workspace() const;
	void cycle(Eigen::MatrixXd& coeffs, Workspace& ws, IterationDiagnostics& diag) const;

	DecoderInput input_;
	std::vector<Eigen::MatrixXd> atom_integrals_;  // per channel: intervals x K
	std::vector<Eigen::VectorXd> lengths_;
	std::vector<Eigen::VectorXd> targets_;  // 2*kappa*delta - bias*length
	long total_constraints_ = 0;
	std::optional<Eigen::MatrixXd> truth_coeffs_;  // y-space
};

/// Convenience wrapper: build a Decoder and run it.
DecodeResult decode(const DecoderInput& input, const StopRule& stop,
                    const VectorSignal* x_truth = nullptr,
                    const IterationCallback& callback = {}, bool record_history = true);

}  // namespace temcodec
