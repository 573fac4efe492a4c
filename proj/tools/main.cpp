#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "temcodec/experiment.hpp"
#include "temcodec/serialization.hpp"

namespace {

using namespace temcodec;

std::string join_path(const std::string& dir, const std::string& name)
{
	if (dir.empty() || dir == ".") {
		return name;
	}
	return dir.back() == '/' ? dir + name : dir + "/" + name;
}

std::string diagnostics_csv(const std::vector<IterationDiagnostics>& history)
{
	std::string out = "iter,spike_residual,range_residual,step_norm,truth_distance\n";
	// long runs are thinned to ~10k rows; the final iteration is always kept
	const std::size_t stride = std::max<std::size_t>(1, history.size() / 10000);
	for (std::size_t m = 0; m < history.size(); ++m) {
		if (m % stride != 0 && m + 1 != history.size()) {
			continue;
		}
		const auto& d = history[m];
		out += std::to_string(m + 1);
		out += ',' + format_double(d.spike_residual);
		out += ',' + format_double(d.range_residual);
		out += ',' + format_double(d.step_norm);
		out += ',';
		if (d.truth_distance) {
			out += format_double(*d.truth_distance);
		}
		out += '\n';
	}
	return out;
}

std::vector<long> parse_counts(const std::string& text)
{
	std::vector<long> counts;
	std::size_t pos = 0;
	while (pos <= text.size()) {
		const std::size_t comma = std::min(text.find(',', pos), text.size());
		const std::string item = text.substr(pos, comma - pos);
		if (item.empty()) {
			throw ConfigError("empty entry in --counts");
		}
		counts.push_back(std::stol(item));
		pos = comma + 1;
	}
	return counts;
}

}  // namespace

int main(int argc, char** argv)
{
	CLI::App app{"temcodec: integrate-and-fire time encoding of mixed bandlimited "
	             "signals and alternating-projection reconstruction"};
	app.require_subcommand(1);

	std::string config_path;
	std::string out_dir = ".";
	std::uint64_t seed_override = 0;
	bool quiet = false;
	app.add_option("--config", config_path, "experiment config JSON");
	app.add_option("--out", out_dir, "output directory (must exist)");
	auto* seed_opt = app.add_option("--seed", seed_override, "override the config seed");
	app.add_flag("--quiet", quiet, "suppress progress output");

	int trial = 0;
	auto* cmd_generate = app.add_subcommand("generate", "draw random source signals");
	cmd_generate->fallthrough();
	cmd_generate->add_option("--trial", trial, "trial index for the random stream");

	std::string signals_path;
	auto* cmd_encode =
	    app.add_subcommand("encode", "mix source signals and emit spike trains");
	cmd_encode->fallthrough();
	cmd_encode->add_option("--signals", signals_path, "source signals JSON (from generate)");

	std::string spikes_path, params_path;
	auto* cmd_decode = app.add_subcommand("decode", "reconstruct signals from spike times");
	cmd_decode->fallthrough();
	cmd_decode->add_option("--spikes", spikes_path, "spike CSV (from encode)");
	cmd_decode->add_option("--params", params_path, "machine parameter JSON sidecar");

	auto* cmd_sweep = app.add_subcommand("sweep", "run the spike-rate sweep experiment");
	cmd_sweep->fallthrough();

	std::string counts_str;
	int check_K = 0, check_J = 0;
	auto* cmd_check = app.add_subcommand("check", "evaluate the reconstructibility condition");
	cmd_check->fallthrough();
	cmd_check->add_option("--counts", counts_str, "comma-separated spike counts")->required();
	cmd_check->add_option("--K", check_K, "sinc atoms per signal")->required();
	cmd_check->add_option("--J", check_J, "number of source signals")->required();

	try {
		app.parse(argc, argv);
	}
	catch (const CLI::ParseError& e) {
		const int code = app.exit(e);
		return code == 0 ? 0 : 1;
	}

	try {
		if (cmd_check->parsed()) {
			const std::vector<long> counts = parse_counts(counts_str);
			long capped = 0;
			for (long n : counts) {
				capped += std::min<long>(n, check_K);
			}
			const bool ok = reconstructible(counts, check_K, check_J);
			std::printf("reconstructible: %s (sum min(n_i,K) = %ld, critical J*K = %ld)\n",
			            ok ? "true" : "false", capped,
			            static_cast<long>(check_J) * check_K);
			return 0;
		}

		if (config_path.empty()) {
			throw ConfigError("--config is required for this command");
		}
		ExperimentConfig cfg = load_config(config_path);
		if (seed_opt->count() > 0) {
			cfg.seed = seed_override;
		}

		if (cmd_generate->parsed()) {
			const VectorSignal x = generate_signals(cfg, static_cast<std::uint64_t>(trial));
			const std::string path = join_path(out_dir, "signals.json");
			write_file(path, to_json(x));
			if (!quiet) {
				std::fprintf(stderr, "wrote %s\n", path.c_str());
			}
		}
		else if (cmd_encode->parsed()) {
			const std::string in_path =
			    signals_path.empty() ? join_path(out_dir, "signals.json") : signals_path;
			const VectorSignal x = vector_signal_from_json(read_file(in_path));
			const MixingMatrix A = MixingMatrix::validate(matrix_from_rows(cfg.A));
			const VectorSignal y = mix(A, x);
			const std::vector<SpikeTrain> trains = encode_channels(cfg, y);
			std::vector<TemParams> machines;
			for (const auto& t : trains) {
				machines.push_back(t.params);
			}
			write_file(join_path(out_dir, "spikes.csv"), spikes_to_csv(trains));
			write_file(join_path(out_dir, "tem_params.json"),
			           tem_params_to_json(machines, cfg.horizon_or_default()));
			if (!quiet) {
				std::fprintf(stderr, "wrote %s and %s\n",
				             join_path(out_dir, "spikes.csv").c_str(),
				             join_path(out_dir, "tem_params.json").c_str());
			}
		}
		else if (cmd_decode->parsed()) {
			const std::string sp =
			    spikes_path.empty() ? join_path(out_dir, "spikes.csv") : spikes_path;
			const std::string pp =
			    params_path.empty() ? join_path(out_dir, "tem_params.json") : params_path;
			const auto [machines, horizon] = tem_params_from_json(read_file(pp));
			if (static_cast<int>(machines.size()) != cfg.I) {
				throw ConfigError("params sidecar machine count differs from config I");
			}
			const auto per_channel = spikes_from_csv(read_file(sp), cfg.I);
			std::vector<SpikeTrain> trains;
			for (int i = 0; i < cfg.I; ++i) {
				trains.push_back(SpikeTrain{machines[i], per_channel[i], horizon});
			}
			const MixingMatrix A = MixingMatrix::validate(matrix_from_rows(cfg.A));
			IterationCallback cb;
			if (!quiet) {
				cb = [](int m, const IterationDiagnostics& d) {
					if (m % 1000 == 0) {
						std::fprintf(stderr,
						             "iter %d: spike residual %.3e, step %.3e\n", m,
						             d.spike_residual, d.step_norm);
					}
				};
			}
			const DecodeResult res = decode({trains, A, cfg.grid()}, cfg.stop, nullptr, cb);
			write_file(join_path(out_dir, "x_hat.json"), to_json(res.x_hat));
			write_file(join_path(out_dir, "diagnostics.csv"),
			           diagnostics_csv(res.state.history));
			if (!quiet) {
				std::fprintf(stderr, "%s after %d iterations\n",
				             res.converged ? "converged" : "stopped", res.state.iteration);
			}
		}
		else if (cmd_sweep->parsed()) {
			SweepProgress progress;
			if (!quiet) {
				progress = [&](int row, int t) {
					if (t == 0) {
						std::fprintf(stderr, "sweep row %d...\n", row);
					}
				};
			}
			const SweepResult result = run_sweep(cfg, progress);
			const std::string csv_path = join_path(out_dir, cfg.output.results_csv);
			const std::string svg_path = join_path(out_dir, cfg.output.plot_svg);
			emit_csv(result, csv_path);
			emit_svg(result, svg_path);
			if (!quiet) {
				std::fprintf(stderr, "wrote %s and %s\n", csv_path.c_str(),
				             svg_path.c_str());
			}
		}
		return 0;
	}
	catch (const ConfigError& e) {
		std::fprintf(stderr, "config error: %s\n", e.what());
		return 1;
	}
	catch (const IoError& e) {
		std::fprintf(stderr, "i/o error: %s\n", e.what());
		return 2;
	}
	catch (const std::exception& e) {
		std::fprintf(stderr, "error: %s\n", e.what());
		return 3;
	}
}
