#pragma once

#include <string>
#include <vector>

#include "temcodec/signal.hpp"
#include "temcodec/tem.hpp"

namespace temcodec {

/// Shortest decimal string that round-trips the double exactly.
std::string format_double(double v);
double parse_double(const std::string& s);

/// {"omega": ..., "t0": ..., "coeffs": [...]}
std::string to_json(const SincSignal& s);
SincSignal sinc_signal_from_json(const std::string& text);

/// {"omega": ..., "t0": ..., "signals": [[...], ...]}
std::string to_json(const VectorSignal& v);
VectorSignal vector_signal_from_json(const std::string& text);

/// CSV with header `channel,spike_time`, channels 0-based.
std::string spikes_to_csv(const std::vector<SpikeTrain>& trains);
/// Spike times per channel; `channels` fixes the row count (trailing silent
/// machines included).
std::vector<std::vector<double>> spikes_from_csv(const std::string& text, int channels);

/// Sidecar JSON carrying all machine parameters and the encoding horizon.
std::string tem_params_to_json(const std::vector<TemParams>& machines, double horizon);
std::pair<std::vector<TemParams>, double> tem_params_from_json(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace temcodec
