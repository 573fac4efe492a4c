#pragma once

#include <vector>

#include "temcodec/signal.hpp"

namespace temcodec {

/// Integrate-and-fire machine parameters. The integrator adds bias to the
/// input, integrates scaled by 1/kappa, spikes when it reaches delta and
/// resets to -delta; equivalently each inter-spike interval satisfies
/// int (input + bias) du = 2*kappa*delta. Sampling starts at t_start with
/// the integrator at its reset value.
struct TemParams {
	double kappa = 1.0;   ///< integrator constant, > 0
	double delta = 1.0;   ///< threshold, > 0
	double bias = 0.0;    ///< added bias, any sign
	double t_start = 0.0; ///< sampling start time

	/// Charge accumulated between consecutive spikes: 2*kappa*delta.
	double charge() const { return 2.0 * kappa * delta; }
};

/// Spike times emitted by one machine over (t_start, horizon].
struct SpikeTrain {
	TemParams params;
	std::vector<double> times;  ///< strictly increasing
	double horizon = 0.0;
};

/// Simulate the machine on a closed-form input and return all spikes in
/// (params.t_start, horizon]. Spike times are located by bracketing the
/// closed-form cumulative integral with a step below the signal's fastest
/// feature, then bisecting to 1e-12 absolute. A machine that never reaches
/// threshold returns an empty train.
SpikeTrain encode(const SincSignal& input, const TemParams& params, double horizon);

/// Per-interval defects int (input + bias) du - 2*kappa*delta, one entry per
/// spike, with the interval from t_start to the first spike included (the
/// integrator state at t_start is known). All within ~1e-11 for the output
/// of encode on the same input.
std::vector<double> spike_residuals(const SincSignal& input, const SpikeTrain& train);

}  // namespace temcodec
