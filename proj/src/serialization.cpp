#include "temcodec/serialization.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

namespace temcodec {

using nlohmann::json;

std::string format_double(double v)
{
	char buf[64];
	const auto res = std::to_chars(buf, buf + sizeof(buf), v);
	return std::string(buf, res.ptr);
}

double parse_double(const std::string& s)
{
	double v = 0.0;
	const char* first = s.data();
	const char* last = s.data() + s.size();
	if (first != last && *first == '+') {
		++first;
	}
	const auto res = std::from_chars(first, last, v);
	if (res.ec != std::errc{} || res.ptr != last) {
		throw Error("parse_double: invalid number '" + s + "'");
	}
	return v;
}

std::string to_json(const SincSignal& s)
{
	json j;
	j["omega"] = s.grid.omega;
	j["t0"] = s.grid.t0;
	j["coeffs"] = s.coeffs;
	return j.dump();
}

SincSignal sinc_signal_from_json(const std::string& text)
{
	const json j = json::parse(text);
	const auto coeffs = j.at("coeffs").get<std::vector<double>>();
	const SincGrid grid(j.at("omega").get<double>(), j.at("t0").get<double>(),
	                    static_cast<int>(coeffs.size()));
	return SincSignal(grid, coeffs);
}

std::string to_json(const VectorSignal& v)
{
	json j;
	j["omega"] = v.grid().omega;
	j["t0"] = v.grid().t0;
	json rows = json::array();
	for (int i = 0; i < v.rows(); ++i) {
		rows.push_back(v.coeffs(i));
	}
	j["signals"] = std::move(rows);
	return j.dump();
}

VectorSignal vector_signal_from_json(const std::string& text)
{
	const json j = json::parse(text);
	const auto rows = j.at("signals").get<std::vector<std::vector<double>>>();
	if (rows.empty()) {
		throw Error("vector signal JSON has no rows");
	}
	const SincGrid grid(j.at("omega").get<double>(), j.at("t0").get<double>(),
	                    static_cast<int>(rows.front().size()));
	return VectorSignal(grid, rows);
}

std::string spikes_to_csv(const std::vector<SpikeTrain>& trains)
{
	std::string out = "channel,spike_time\n";
	for (std::size_t i = 0; i < trains.size(); ++i) {
		for (double t : trains[i].times) {
			out += std::to_string(i);
			out += ',';
			out += format_double(t);
			out += '\n';
		}
	}
	return out;
}

std::vector<std::vector<double>> spikes_from_csv(const std::string& text, int channels)
{
	std::vector<std::vector<double>> per_channel(channels);
	std::istringstream in(text);
	std::string line;
	if (!std::getline(in, line) || line.rfind("channel,spike_time", 0) != 0) {
		throw Error("spike CSV must start with header 'channel,spike_time'");
	}
	while (std::getline(in, line)) {
		if (line.empty()) {
			continue;
		}
		const auto comma = line.find(',');
		if (comma == std::string::npos) {
			throw Error("spike CSV row missing comma: " + line);
		}
		const int ch = std::stoi(line.substr(0, comma));
		if (ch < 0 || ch >= channels) {
			throw Error("spike CSV channel out of range: " + line);
		}
		per_channel[ch].push_back(parse_double(line.substr(comma + 1)));
	}
	return per_channel;
}

std::string tem_params_to_json(const std::vector<TemParams>& machines, double horizon)
{
	json j;
	j["horizon"] = horizon;
	json ms = json::array();
	for (const auto& m : machines) {
		ms.push_back({{"kappa", m.kappa},
		              {"delta", m.delta},
		              {"bias", m.bias},
		              {"t_start", m.t_start}});
	}
	j["machines"] = std::move(ms);
	return j.dump(2);
}

std::pair<std::vector<TemParams>, double> tem_params_from_json(const std::string& text)
{
	const json j = json::parse(text);
	std::vector<TemParams> machines;
	for (const auto& m : j.at("machines")) {
		machines.push_back(TemParams{m.at("kappa").get<double>(), m.at("delta").get<double>(),
		                             m.at("bias").get<double>(),
		                             m.at("t_start").get<double>()});
	}
	return {std::move(machines), j.at("horizon").get<double>()};
}

std::string read_file(const std::string& path)
{
	std::ifstream in(path, std::ios::binary);
	if (!in) {
		throw IoError("cannot open for reading: " + path);
	}
	std::ostringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

void write_file(const std::string& path, const std::string& content)
{
	std::ofstream out(path, std::ios::binary);
	if (!out) {
		throw IoError("cannot open for writing: " + path);
	}
	out << content;
	if (!out) {
		throw IoError("write failed: " + path);
	}
}

}  // namespace temcodec
