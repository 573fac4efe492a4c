#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "temcodec/pocs.hpp"

namespace temcodec {

struct CoeffDistribution {
	enum class Kind { Uniform, Gaussian };
	Kind kind = Kind::Uniform;
	double a = -1.0;  ///< low (uniform) or mean (gaussian)
	double b = 1.0;   ///< high (uniform) or sd (gaussian)
};

/// One machine: base parameters plus an optional fixed spike count realized
/// per trial by bias bisection.
struct MachineSpec {
	TemParams params;
	std::optional<int> spike_target;
	bool has_bias = false;  ///< whether the config supplied an explicit bias
};

/// The swept machine is driven either directly through its bias or through a
/// target spike count (bias calibrated per trial to hit it exactly).
struct SweepSpec {
	enum class Mode { Bias, Count };
	int machine_index = 0;
	Mode mode = Mode::Count;
	double from = 0.0;
	double to = 0.0;
	double step = 1.0;
};

struct OutputSpec {
	std::string results_csv = "sweep.csv";
	std::string plot_svg = "sweep.svg";
};

struct ExperimentConfig {
	double omega = 0.0;
	double t0 = 0.0;
	int K = 0;
	int J = 0;
	int I = 0;
	std::vector<std::vector<double>> A;
	std::vector<MachineSpec> machines;
	std::optional<SweepSpec> sweep;
	int trials = 1;
	CoeffDistribution dist;
	std::uint64_t seed = 0;
	std::optional<double> horizon;
	StopRule stop;
	OutputSpec output;

	SincGrid grid() const { return SincGrid(omega, t0, K); }
	double horizon_or_default() const;
};

/// Parse and validate a config document; unknown keys are rejected.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

/// Deterministic draw of the J x K coefficient matrix for one trial.
VectorSignal generate_signals(const ExperimentConfig& config, std::uint64_t trial_index);

/// ||C_hat - C||_F^2 / ||C||_F^2 on the coefficient stacks (proportional to
/// relative L2 error by grid-atom orthogonality). Throws ZeroSignal when the
/// reference is identically zero.
double relative_mse(const VectorSignal& x_hat, const VectorSignal& x_true);

/// Find, by bisection, a bias for which the machine emits exactly `target`
/// spikes within the horizon (the count is non-decreasing in bias).
double calibrate_bias(const SincSignal& input, const TemParams& params, double horizon,
                      int target);

/// Encode every channel of y with the configured machines, calibrating any
/// machine that carries a fixed spike count. Machines need a bias or a
/// spike_target here; the sweep drives its swept machine separately.
std::vector<SpikeTrain> encode_channels(const ExperimentConfig& config, const VectorSignal& y);

struct SweepRow {
	double bias = 0.0;  ///< swept machine's bias (trial mean when calibrated)
	std::vector<double> mean_spikes;
	double capped_total = 0.0;  ///< sum_i min(mean_spikes_i, K)
	double reconstructible_frac = 0.0;
	double mse_mean = 0.0;
	double mse_median = 0.0;
	double mse_max = 0.0;
};

struct SweepResult {
	std::vector<SweepRow> rows;
	int channels = 0;
	long critical_count = 0;  ///< J*K
};

using SweepProgress = std::function<void(int row, int trial)>;

/// The spike-rate sweep: for every swept value and trial, generate signals,
/// mix, encode all machines (calibrating fixed-count ones), decode and score.
SweepResult run_sweep(const ExperimentConfig& config, const SweepProgress& progress = {});

/// `bias,mean_spikes_0..I-1,capped_total,reconstructible_frac,mse_mean,
/// mse_median,mse_max` with shortest round-trip decimals.
void emit_csv(const SweepResult& result, const std::string& path);

/// Self-contained SVG: log-scale mean MSE against capped total spike count,
/// with a single dashed vertical marker at the critical count.
void emit_svg(const SweepResult& result, const std::string& path);

}  // namespace temcodec
