#include "temcodec/tem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace temcodec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSpikeTimeTol = 1e-12;

double coeff_l1(const SincSignal& s)
{
	double sum = 0.0;
	for (double c : s.coeffs) {
		sum += std::abs(c);
	}
	return sum;
}

}  // namespace

SpikeTrain encode(const SincSignal& input, const TemParams& params, double horizon)
{
	if (!(params.kappa > 0.0) || !(params.delta > 0.0)) {
		throw Error("encode: kappa and delta must be positive");
	}
	if (!(horizon > params.t_start)) {
		throw Error("encode: horizon must exceed t_start");
	}

	const double charge = params.charge();
	// Probe step below both the fastest signal feature and the time in which
	// the integral can move by charge/8, so a crossing cannot be stepped over.
	const double amp_bound = input.grid.omega / kPi * coeff_l1(input) + std::abs(params.bias);
	double step = kPi / (8.0 * input.grid.omega);
	if (amp_bound > 0.0) {
		step = std::min(step, charge / (8.0 * amp_bound));
	}

	// Accumulated charge since the last reset, in closed form (no drift).
	const auto accumulated = [&](double reset_time, double t) {
		return integrate(input, reset_time, t) + params.bias * (t - reset_time);
	};

	std::vector<double> times;
	double reset_time = params.t_start;
	double t = params.t_start;
	while (t < horizon) {
		const double t_next = std::min(t + step, horizon);
		if (accumulated(reset_time, t_next) >= charge) {
			double lo = t, hi = t_next;
			while (hi - lo > kSpikeTimeTol) {
				const double mid = 0.5 * (lo + hi);
				if (accumulated(reset_time, mid) >= charge) {
					hi = mid;
				}
				else {
					lo = mid;
				}
			}
			times.push_back(hi);
			reset_time = hi;
			t = hi;
		}
		else {
			t = t_next;
		}
	}
	return SpikeTrain{params, std::move(times), horizon};
}

std::vector<double> spike_residuals(const SincSignal& input, const SpikeTrain& train)
{
	std::vector<double> res;
	res.reserve(train.times.size());
	double prev = train.params.t_start;
	for (double t : train.times) {
		const double integral = integrate(input, prev, t) + train.params.bias * (t - prev);
		res.push_back(integral - train.params.charge());
		prev = t;
	}
	return res;
}

}  // namespace temcodec
