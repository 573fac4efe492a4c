#include "temcodec/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <future>
#include <numbers>
#include <thread>
#include <utility>

#include <json.hpp>

#include "temcodec/rng.hpp"
#include "temcodec/serialization.hpp"

namespace temcodec {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const char* ctx)
{
	for (const auto& [key, value] : obj.items()) {
		if (std::find_if(allowed.begin(), allowed.end(),
		                 [&](const char* k) { return key == k; }) == allowed.end()) {
			throw ConfigError(std::string("unknown key '") + key + "' in " + ctx);
		}
	}
}

double require_number(const json& obj, const char* key, const char* ctx)
{
	if (!obj.contains(key) || !obj.at(key).is_number()) {
		throw ConfigError(std::string(ctx) + " requires numeric '" + key + "'");
	}
	return obj.at(key).get<double>();
}

double coeff_l1(const std::vector<double>& coeffs)
{
	double sum = 0.0;
	for (double c : coeffs) {
		sum += std::abs(c);
	}
	return sum;
}

long spike_count(const SincSignal& input, const TemParams& params, double horizon)
{
	return static_cast<long>(encode(input, params, horizon).times.size());
}

struct TrialOutcome {
	double mse = 0.0;
	double swept_bias = 0.0;
	bool predicate = false;
	std::vector<long> counts;
};

}  // namespace

double ExperimentConfig::horizon_or_default() const
{
	return horizon ? *horizon : t0 + (K + 1) * kPi / omega;
}

ExperimentConfig parse_config(const std::string& json_text)
{
	json j;
	try {
		j = json::parse(json_text);
	}
	catch (const json::parse_error& e) {
		throw ConfigError(std::string("config is not valid JSON: ") + e.what());
	}
	if (!j.is_object()) {
		throw ConfigError("config root must be a JSON object");
	}
	check_keys(j,
	           {"omega", "t0", "K", "J", "I", "A", "machines", "sweep", "trials",
	            "coeff_distribution", "seed", "horizon", "stop", "output"},
	           "config");

	ExperimentConfig cfg;
	cfg.omega = require_number(j, "omega", "config");
	cfg.t0 = require_number(j, "t0", "config");
	cfg.K = static_cast<int>(require_number(j, "K", "config"));
	cfg.J = static_cast<int>(require_number(j, "J", "config"));
	cfg.I = static_cast<int>(require_number(j, "I", "config"));
	if (!(cfg.omega > 0.0)) {
		throw ConfigError("omega must be positive");
	}
	if (cfg.K < 1 || cfg.J < 1 || cfg.I < cfg.J) {
		throw ConfigError("need K >= 1 and I >= J >= 1");
	}

	if (!j.contains("A") || !j.at("A").is_array() ||
	    j.at("A").size() != static_cast<std::size_t>(cfg.I)) {
		throw ConfigError("A must be an array of I rows");
	}
	for (const auto& row : j.at("A")) {
		if (!row.is_array() || row.size() != static_cast<std::size_t>(cfg.J)) {
			throw ConfigError("each row of A must have J entries");
		}
		cfg.A.push_back(row.get<std::vector<double>>());
	}

	if (!j.contains("machines") || !j.at("machines").is_array() ||
	    j.at("machines").size() != static_cast<std::size_t>(cfg.I)) {
		throw ConfigError("machines must be an array of I entries");
	}
	for (const auto& m : j.at("machines")) {
		check_keys(m, {"kappa", "delta", "bias", "t_start", "spike_target"}, "machines[]");
		MachineSpec spec;
		spec.params.kappa = require_number(m, "kappa", "machine");
		spec.params.delta = require_number(m, "delta", "machine");
		if (!(spec.params.kappa > 0.0) || !(spec.params.delta > 0.0)) {
			throw ConfigError("kappa and delta must be positive");
		}
		spec.params.t_start = m.contains("t_start") ? m.at("t_start").get<double>() : cfg.t0;
		if (m.contains("bias")) {
			spec.params.bias = m.at("bias").get<double>();
			spec.has_bias = true;
		}
		if (m.contains("spike_target")) {
			const int target = m.at("spike_target").get<int>();
			if (target < 0) {
				throw ConfigError("spike_target must be non-negative");
			}
			spec.spike_target = target;
		}
		cfg.machines.push_back(std::move(spec));
	}

	if (j.contains("sweep")) {
		const auto& s = j.at("sweep");
		check_keys(s, {"machine_index", "bias", "count"}, "sweep");
		SweepSpec sweep;
		sweep.machine_index = static_cast<int>(require_number(s, "machine_index", "sweep"));
		if (sweep.machine_index < 0 || sweep.machine_index >= cfg.I) {
			throw ConfigError("sweep.machine_index out of range");
		}
		if (s.contains("bias") == s.contains("count")) {
			throw ConfigError("sweep needs exactly one of 'bias' or 'count'");
		}
		const char* key = s.contains("bias") ? "bias" : "count";
		sweep.mode = s.contains("bias") ? SweepSpec::Mode::Bias : SweepSpec::Mode::Count;
		const auto& range = s.at(key);
		check_keys(range, {"from", "to", "step"}, "sweep range");
		sweep.from = require_number(range, "from", "sweep range");
		sweep.to = require_number(range, "to", "sweep range");
		sweep.step = require_number(range, "step", "sweep range");
		if (!(sweep.step > 0.0) || sweep.to < sweep.from) {
			throw ConfigError("sweep range must be nonempty with positive step");
		}
		if (sweep.mode == SweepSpec::Mode::Count && sweep.from < 0.0) {
			throw ConfigError("sweep counts must be non-negative");
		}
		cfg.sweep = sweep;
	}

	cfg.trials = j.contains("trials") ? j.at("trials").get<int>() : 1;
	if (cfg.trials < 1) {
		throw ConfigError("trials must be at least 1");
	}

	if (j.contains("coeff_distribution")) {
		const auto& d = j.at("coeff_distribution");
		const std::string type = d.contains("type") ? d.at("type").get<std::string>() : "";
		if (type == "uniform") {
			check_keys(d, {"type", "low", "high"}, "coeff_distribution");
			cfg.dist.kind = CoeffDistribution::Kind::Uniform;
			cfg.dist.a = require_number(d, "low", "coeff_distribution");
			cfg.dist.b = require_number(d, "high", "coeff_distribution");
			if (!(cfg.dist.a < cfg.dist.b)) {
				throw ConfigError("uniform distribution needs low < high");
			}
		}
		else if (type == "gaussian") {
			check_keys(d, {"type", "mean", "sd"}, "coeff_distribution");
			cfg.dist.kind = CoeffDistribution::Kind::Gaussian;
			cfg.dist.a = require_number(d, "mean", "coeff_distribution");
			cfg.dist.b = require_number(d, "sd", "coeff_distribution");
			if (!(cfg.dist.b > 0.0)) {
				throw ConfigError("gaussian distribution needs sd > 0");
			}
		}
		else {
			throw ConfigError("coeff_distribution.type must be 'uniform' or 'gaussian'");
		}
	}

	cfg.seed = j.contains("seed") ? j.at("seed").get<std::uint64_t>() : 0;
	if (j.contains("horizon")) {
		cfg.horizon = j.at("horizon").get<double>();
		if (!(*cfg.horizon > cfg.t0)) {
			throw ConfigError("horizon must exceed t0");
		}
	}
	if (j.contains("stop")) {
		const auto& s = j.at("stop");
		check_keys(s, {"max_iterations", "rel_change_tol", "residual_tol"}, "stop");
		if (s.contains("max_iterations")) {
			cfg.stop.max_iterations = s.at("max_iterations").get<int>();
		}
		if (s.contains("rel_change_tol")) {
			cfg.stop.rel_change_tol = s.at("rel_change_tol").get<double>();
		}
		if (s.contains("residual_tol")) {
			cfg.stop.residual_tol = s.at("residual_tol").get<double>();
		}
		if (cfg.stop.max_iterations < 1 || !(cfg.stop.rel_change_tol > 0.0) ||
		    !(cfg.stop.residual_tol > 0.0)) {
			throw ConfigError("stop rule fields must be positive");
		}
	}
	if (j.contains("output")) {
		const auto& o = j.at("output");
		check_keys(o, {"results_csv", "plot_svg"}, "output");
		if (o.contains("results_csv")) {
			cfg.output.results_csv = o.at("results_csv").get<std::string>();
		}
		if (o.contains("plot_svg")) {
			cfg.output.plot_svg = o.at("plot_svg").get<std::string>();
		}
	}
	return cfg;
}

ExperimentConfig load_config(const std::string& path)
{
	return parse_config(read_file(path));
}

VectorSignal generate_signals(const ExperimentConfig& config, std::uint64_t trial_index)
{
	Rng rng = Rng::for_stream(config.seed, trial_index);
	std::vector<std::vector<double>> rows(config.J, std::vector<double>(config.K));
	for (auto& row : rows) {
		for (auto& c : row) {
			c = config.dist.kind == CoeffDistribution::Kind::Uniform
			        ? rng.uniform(config.dist.a, config.dist.b)
			        : rng.gaussian(config.dist.a, config.dist.b);
		}
	}
	return VectorSignal(config.grid(), std::move(rows));
}

double relative_mse(const VectorSignal& x_hat, const VectorSignal& x_true)
{
	if (x_hat.rows() != x_true.rows() || !(x_hat.grid() == x_true.grid())) {
		throw DimensionMismatch("relative_mse: signals must share shape and grid");
	}
	double num = 0.0, den = 0.0;
	for (int i = 0; i < x_true.rows(); ++i) {
		for (int k = 0; k < x_true.grid().count; ++k) {
			const double d = x_hat.coeffs(i)[k] - x_true.coeffs(i)[k];
			num += d * d;
			den += x_true.coeffs(i)[k] * x_true.coeffs(i)[k];
		}
	}
	if (den == 0.0) {
		throw ZeroSignal("relative_mse: reference signal is identically zero");
	}
	return num / den;
}

double calibrate_bias(const SincSignal& input, const TemParams& params, double horizon,
                      int target)
{
	if (target < 0) {
		throw CalibrationError("spike target must be non-negative");
	}
	const auto count = [&](double b) {
		TemParams p = params;
		p.bias = b;
		return spike_count(input, p, horizon);
	};
	// Below -max|input| the integrator only decays, so the count is zero.
	const double amp_bound = input.grid.omega / kPi * coeff_l1(input.coeffs);
	const double lo_floor = -(amp_bound + 1.0);
	if (target == 0) {
		return lo_floor;
	}
	double lo = lo_floor;
	double hi = std::max(1.0, amp_bound + 1.0);
	for (int guard = 0; count(hi) < target; ++guard) {
		if (guard > 60) {
			throw CalibrationError("spike target unreachable within horizon");
		}
		hi *= 2.0;
	}
	for (int it = 0; it < 200; ++it) {
		const double mid = 0.5 * (lo + hi);
		const long n = count(mid);
		if (n == target) {
			return mid;
		}
		(n < target ? lo : hi) = mid;
		if (hi - lo < 1e-13 * std::max(1.0, std::abs(hi))) {
			break;
		}
	}
	throw CalibrationError("bias bisection failed to hit the spike target");
}

std::vector<SpikeTrain> encode_channels(const ExperimentConfig& config, const VectorSignal& y)
{
	if (y.rows() != config.I) {
		throw DimensionMismatch("encode_channels: signal rows must equal I");
	}
	const double horizon = config.horizon_or_default();
	std::vector<SpikeTrain> trains;
	trains.reserve(config.I);
	for (int i = 0; i < config.I; ++i) {
		TemParams p = config.machines[i].params;
		const SincSignal row = y.row(i);
		if (config.machines[i].spike_target) {
			p.bias = calibrate_bias(row, p, horizon, *config.machines[i].spike_target);
		}
		else if (!config.machines[i].has_bias) {
			throw ConfigError("machine " + std::to_string(i) +
			                  " needs a bias or a spike_target");
		}
		trains.push_back(encode(row, p, horizon));
	}
	return trains;
}

SweepResult run_sweep(const ExperimentConfig& config, const SweepProgress& progress)
{
	if (!config.sweep) {
		throw ConfigError("config has no sweep section");
	}
	const SweepSpec& sweep = *config.sweep;
	const MixingMatrix A = MixingMatrix::validate(matrix_from_rows(config.A));
	const SincGrid grid = config.grid();
	const double horizon = config.horizon_or_default();

	for (int i = 0; i < config.I; ++i) {
		if (i == sweep.machine_index) {
			continue;
		}
		if (!config.machines[i].spike_target && !config.machines[i].has_bias) {
			throw ConfigError("machine " + std::to_string(i) +
			                  " needs a bias or a spike_target");
		}
	}

	std::vector<double> values;
	for (double v = sweep.from; v <= sweep.to + 1e-9 * sweep.step; v += sweep.step) {
		values.push_back(v);
	}

	SweepResult result;
	result.channels = config.I;
	result.critical_count = static_cast<long>(config.J) * config.K;

	const auto run_trial = [&](double v, int trial) {
		const VectorSignal x = generate_signals(config, trial);
		const VectorSignal y = mix(A, x);

		std::vector<SpikeTrain> trains;
		trains.reserve(config.I);
		TrialOutcome out;
		for (int i = 0; i < config.I; ++i) {
			TemParams p = config.machines[i].params;
			const SincSignal row = y.row(i);
			if (i == sweep.machine_index) {
				p.bias = sweep.mode == SweepSpec::Mode::Bias
				             ? v
				             : calibrate_bias(row, p, horizon,
				                              static_cast<int>(std::lround(v)));
				out.swept_bias = p.bias;
			}
			else if (config.machines[i].spike_target) {
				p.bias = calibrate_bias(row, p, horizon,
				                        *config.machines[i].spike_target);
			}
			trains.push_back(encode(row, p, horizon));
			out.counts.push_back(static_cast<long>(trains.back().times.size()));
		}
		out.predicate = reconstructible(out.counts, config.K, config.J);
		const DecodeResult dec =
		    decode({std::move(trains), A, grid}, config.stop, nullptr, {},
		           /*record_history=*/false);
		out.mse = relative_mse(dec.x_hat, x);
		return out;
	};

	const unsigned workers = std::min<unsigned>(
	    std::max(1u, std::thread::hardware_concurrency()), config.trials);

	for (std::size_t r = 0; r < values.size(); ++r) {
		const double v = values[r];
		if (progress) {
			progress(static_cast<int>(r), 0);
		}
		// Trials are independent with per-trial RNG streams; outcomes are
		// stored by index and reduced in order, so this aggregates identically
		// however the work is scheduled.
		std::vector<TrialOutcome> outcomes(config.trials);
		std::atomic<int> next{0};
		std::vector<std::future<void>> tasks;
		tasks.reserve(workers);
		for (unsigned w = 0; w < workers; ++w) {
			tasks.push_back(std::async(std::launch::async, [&] {
				for (int t = next.fetch_add(1); t < config.trials;
				     t = next.fetch_add(1)) {
					outcomes[t] = run_trial(v, t);
				}
			}));
		}
		for (auto& task : tasks) {
			task.get();
		}

		SweepRow row;
		row.mean_spikes.assign(config.I, 0.0);
		std::vector<double> mses;
		mses.reserve(outcomes.size());
		for (const auto& out : outcomes) {
			row.bias += out.swept_bias;
			for (int i = 0; i < config.I; ++i) {
				row.mean_spikes[i] += static_cast<double>(out.counts[i]);
			}
			row.reconstructible_frac += out.predicate ? 1.0 : 0.0;
			mses.push_back(out.mse);
		}
		const double n = static_cast<double>(outcomes.size());
		row.bias /= n;
		row.reconstructible_frac /= n;
		for (double& s : row.mean_spikes) {
			s /= n;
			row.capped_total += std::min(s, static_cast<double>(config.K));
		}
		std::sort(mses.begin(), mses.end());
		row.mse_max = mses.back();
		for (double m : mses) {
			row.mse_mean += m;
		}
		row.mse_mean /= n;
		row.mse_median = mses.size() % 2 == 1
		                     ? mses[mses.size() / 2]
		                     : 0.5 * (mses[mses.size() / 2 - 1] + mses[mses.size() / 2]);
		result.rows.push_back(std::move(row));
	}
	return result;
}

void emit_csv(const SweepResult& result, const std::string& path)
{
	std::string out = "bias";
	for (int i = 0; i < result.channels; ++i) {
		out += ",mean_spikes_" + std::to_string(i);
	}
	out += ",capped_total,reconstructible_frac,mse_mean,mse_median,mse_max\n";
	for (const auto& row : result.rows) {
		out += format_double(row.bias);
		for (double s : row.mean_spikes) {
			out += ',' + format_double(s);
		}
		out += ',' + format_double(row.capped_total);
		out += ',' + format_double(row.reconstructible_frac);
		out += ',' + format_double(row.mse_mean);
		out += ',' + format_double(row.mse_median);
		out += ',' + format_double(row.mse_max);
		out += '\n';
	}
	write_file(path, out);
}

namespace {

std::string px(double v)
{
	char buf[32];
	std::snprintf(buf, sizeof(buf), "%.2f", v);
	return buf;
}

}  // namespace

void emit_svg(const SweepResult& result, const std::string& path)
{
	if (result.rows.empty()) {
		throw Error("emit_svg: sweep result is empty");
	}
	const double width = 720.0, height = 480.0;
	const double ml = 76.0, mr = 24.0, mt = 24.0, mb = 56.0;

	double x_lo = static_cast<double>(result.critical_count);
	double x_hi = x_lo;
	double y_lo = 0.0, y_hi = -16.0;  // log10 of MSE, filled below
	bool first = true;
	for (const auto& row : result.rows) {
		x_lo = std::min(x_lo, row.capped_total);
		x_hi = std::max(x_hi, row.capped_total);
		const double ly = std::log10(std::max(row.mse_mean, 1e-16));
		y_lo = first ? ly : std::min(y_lo, ly);
		y_hi = first ? ly : std::max(y_hi, ly);
		first = false;
	}
	x_lo -= 1.0;
	x_hi += 1.0;
	y_lo = std::floor(y_lo) - 0.5;
	y_hi = std::ceil(y_hi) + 0.5;

	const auto map_x = [&](double x) {
		return ml + (x - x_lo) / (x_hi - x_lo) * (width - ml - mr);
	};
	const auto map_y = [&](double ly) {
		return height - mb - (ly - y_lo) / (y_hi - y_lo) * (height - mt - mb);
	};

	std::string svg =
	    "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
	    "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" "
	    "viewBox=\"0 0 720 480\">\n";
	svg += "<rect x=\"0\" y=\"0\" width=\"720\" height=\"480\" fill=\"#ffffff\"/>\n";

	// decade gridlines and y tick labels
	for (int dec = static_cast<int>(std::ceil(y_lo)); dec <= static_cast<int>(std::floor(y_hi));
	     ++dec) {
		const double y = map_y(dec);
		svg += "<line x1=\"" + px(ml) + "\" y1=\"" + px(y) + "\" x2=\"" + px(width - mr) +
		       "\" y2=\"" + px(y) + "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
		svg += "<text x=\"" + px(ml - 8.0) + "\" y=\"" + px(y + 4.0) +
		       "\" font-size=\"12\" text-anchor=\"end\" font-family=\"sans-serif\">1e" +
		       std::to_string(dec) + "</text>\n";
	}
	// x ticks at integers (thinned to at most ~12 labels)
	const int x_first = static_cast<int>(std::ceil(x_lo));
	const int x_last = static_cast<int>(std::floor(x_hi));
	const int stride = std::max(1, (x_last - x_first) / 12);
	for (int x = x_first; x <= x_last; x += stride) {
		const double xp = map_x(x);
		svg += "<line x1=\"" + px(xp) + "\" y1=\"" + px(height - mb) + "\" x2=\"" + px(xp) +
		       "\" y2=\"" + px(height - mb + 5.0) + "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
		svg += "<text x=\"" + px(xp) + "\" y=\"" + px(height - mb + 20.0) +
		       "\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\">" +
		       std::to_string(x) + "</text>\n";
	}

	// axes
	svg += "<line x1=\"" + px(ml) + "\" y1=\"" + px(mt) + "\" x2=\"" + px(ml) + "\" y2=\"" +
	       px(height - mb) + "\" stroke=\"#000000\" stroke-width=\"1.5\"/>\n";
	svg += "<line x1=\"" + px(ml) + "\" y1=\"" + px(height - mb) + "\" x2=\"" + px(width - mr) +
	       "\" y2=\"" + px(height - mb) + "\" stroke=\"#000000\" stroke-width=\"1.5\"/>\n";

	// the single dashed marker at the critical spike count
	const double xc = map_x(static_cast<double>(result.critical_count));
	svg += "<line x1=\"" + px(xc) + "\" y1=\"" + px(mt) + "\" x2=\"" + px(xc) + "\" y2=\"" +
	       px(height - mb) +
	       "\" stroke=\"#2a9d3a\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\" "
	       "data-critical-count=\"" +
	       std::to_string(result.critical_count) + "\"/>\n";

	std::string points;
	for (const auto& row : result.rows) {
		points += px(map_x(row.capped_total)) + "," +
		          px(map_y(std::log10(std::max(row.mse_mean, 1e-16)))) + " ";
	}
	svg += "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.5\" points=\"" + points +
	       "\"/>\n";
	for (const auto& row : result.rows) {
		svg += "<circle cx=\"" + px(map_x(row.capped_total)) + "\" cy=\"" +
		       px(map_y(std::log10(std::max(row.mse_mean, 1e-16)))) +
		       "\" r=\"3\" fill=\"#1f6fb2\"/>\n";
	}

	svg += "<text x=\"" + px(ml + (width - ml - mr) / 2.0) + "\" y=\"" + px(height - 12.0) +
	       "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\">"
	       "capped total spike count</text>\n";
	svg += "<text x=\"18\" y=\"" + px(mt + (height - mt - mb) / 2.0) +
	       "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\" "
	       "transform=\"rotate(-90 18 " +
	       px(mt + (height - mt - mb) / 2.0) + ")\">mean relative MSE</text>\n";
	svg += "</svg>\n";
	write_file(path, svg);
}

}  // namespace temcodec
