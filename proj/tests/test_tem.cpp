#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "temcodec/rng.hpp"
#include "temcodec/serialization.hpp"
#include "temcodec/tem.hpp"

using namespace temcodec;

namespace {

constexpr double kPi = std::numbers::pi;

SincSignal random_signal(Rng& rng, double omega, double t0, int count, double amp = 1.0)
{
	std::vector<double> c(count);
	for (double& v : c) {
		v = rng.uniform(-amp, amp);
	}
	return SincSignal(SincGrid(omega, t0, count), std::move(c));
}

// max |signal| over [lo, hi] by dense grid search plus local refinement
double max_abs(const SincSignal& s, double lo, double hi)
{
	double best = 0.0, best_t = lo;
	const int n = 4000;
	for (int i = 0; i <= n; ++i) {
		const double t = lo + (hi - lo) * i / n;
		const double v = std::abs(eval(s, t));
		if (v > best) {
			best = v;
			best_t = t;
		}
	}
	double step = (hi - lo) / n;
	double t = best_t;
	while (step > 1e-12) {
		for (double cand : {t - step, t + step}) {
			const double v = std::abs(eval(s, cand));
			if (v > best) {
				best = v;
				t = cand;
			}
		}
		step *= 0.5;
	}
	return best;
}

}  // namespace

TEST_CASE("encode: constant integrand spikes at exact unit intervals")
{
	const SincGrid g(kPi, 0.0, 4);
	const TemParams p{1.0, 0.5, 1.0, 0.0};
	const SpikeTrain train = encode(SincSignal::zero(g), p, 5.0);
	REQUIRE(train.times.size() == 5);
	for (int i = 0; i < 5; ++i) {
		CHECK(std::abs(train.times[i] - (i + 1.0)) < 1e-10);
	}
}

TEST_CASE("encode: zero bias on zero input never fires")
{
	const SincGrid g(kPi, 0.0, 4);
	const TemParams p{1.0, 0.5, 0.0, 0.0};
	CHECK(encode(SincSignal::zero(g), p, 50.0).times.empty());
}

TEST_CASE("encode rejects invalid parameters")
{
	const SincGrid g(kPi, 0.0, 2);
	CHECK_THROWS_AS(encode(SincSignal::zero(g), TemParams{0.0, 0.5, 1.0, 0.0}, 5.0), Error);
	CHECK_THROWS_AS(encode(SincSignal::zero(g), TemParams{1.0, 0.5, 1.0, 3.0}, 2.0), Error);
}

TEST_CASE("spike residuals of encoded trains vanish")
{
	Rng rng(101);
	for (int rep = 0; rep < 30; ++rep) {
		const double omega = rng.uniform(0.5, 2.0) * kPi;
		const SincSignal s = random_signal(rng, omega, 0.0, 8);
		const TemParams p{rng.uniform(0.5, 2.0), rng.uniform(0.1, 0.8), rng.uniform(0.5, 2.5),
		                  0.0};
		const SpikeTrain train = encode(s, p, s.grid.window_end());
		for (double r : spike_residuals(s, train)) {
			CHECK(std::abs(r) < 1e-9);
		}
	}
}

TEST_CASE("residuals: constant case and perturbation derivative")
{
	const SincGrid g(kPi, 0.0, 4);
	const SincSignal zero = SincSignal::zero(g);
	const TemParams p{1.0, 0.5, 1.0, 0.0};
	SpikeTrain train{p, {1.0, 2.0}, 5.0};
	for (double r : spike_residuals(zero, train)) {
		CHECK(std::abs(r) < 1e-15);
	}

	// perturbing one spike by +h changes its residual by about (y(t)+b)*h
	Rng rng(103);
	const SincSignal s = random_signal(rng, kPi, 0.0, 6);
	const TemParams p2{1.0, 0.4, 2.0, 0.0};
	SpikeTrain t2 = encode(s, p2, s.grid.window_end());
	REQUIRE(t2.times.size() >= 3);
	const double h = 1e-6;
	const std::size_t idx = 1;
	const double integrand = eval(s, t2.times[idx]) + p2.bias;
	std::vector<double> before = spike_residuals(s, t2);
	t2.times[idx] += h;
	std::vector<double> after = spike_residuals(s, t2);
	CHECK(std::abs((after[idx] - before[idx]) - integrand * h) < 1e-9);
}

TEST_CASE("rate bound when the bias dominates the signal")
{
	Rng rng(107);
	for (int rep = 0; rep < 10; ++rep) {
		const SincSignal s = random_signal(rng, kPi, 0.0, 8);
		const double c = max_abs(s, -2.0, s.grid.window_end() + 2.0);
		const TemParams p{1.0, 0.3, c + rng.uniform(0.5, 1.5), 0.0};
		const SpikeTrain train = encode(s, p, s.grid.window_end());
		REQUIRE(train.times.size() >= 2);
		const double bound = p.charge() / (p.bias - c);
		double prev = p.t_start;
		for (double t : train.times) {
			CHECK(t - prev <= bound + 1e-9);
			prev = t;
		}
		for (double r : spike_residuals(s, train)) {
			CHECK(std::abs(r) < 1e-9);
		}
	}
}

TEST_CASE("threshold crossings are the earliest ones")
{
	Rng rng(109);
	const SincSignal s = random_signal(rng, kPi, 0.0, 8);
	const TemParams p{1.0, 0.5, 1.3, 0.0};
	const SpikeTrain train = encode(s, p, s.grid.window_end());
	REQUIRE(!train.times.empty());
	double prev = p.t_start;
	for (double t : train.times) {
		for (int i = 0; i < 200; ++i) {
			const double probe = prev + (t - 1e-9 - prev) * (i + 1) / 201.0;
			const double acc = integrate(s, prev, probe) + p.bias * (probe - prev);
			CHECK(acc < p.charge());
		}
		prev = t;
	}
}

TEST_CASE("encode is deterministic and translation covariant")
{
	Rng rng(113);
	const SincSignal s = random_signal(rng, kPi, 0.0, 8);
	const TemParams p{1.0, 0.5, 1.5, 0.0};
	const SpikeTrain a = encode(s, p, s.grid.window_end());
	const SpikeTrain b = encode(s, p, s.grid.window_end());
	REQUIRE(a.times.size() == b.times.size());
	for (std::size_t i = 0; i < a.times.size(); ++i) {
		CHECK(a.times[i] == b.times[i]);
	}

	const double tau = 3.75;
	const SincSignal shifted(SincGrid(s.grid.omega, s.grid.t0 + tau, s.grid.count), s.coeffs);
	const TemParams ps{p.kappa, p.delta, p.bias, p.t_start + tau};
	const SpikeTrain c = encode(shifted, ps, s.grid.window_end() + tau);
	REQUIRE(c.times.size() == a.times.size());
	for (std::size_t i = 0; i < a.times.size(); ++i) {
		CHECK(std::abs(c.times[i] - (a.times[i] + tau)) < 1e-10);
	}
}

TEST_CASE("spike CSV and params sidecar round trip")
{
	Rng rng(127);
	const SincSignal s = random_signal(rng, kPi, 0.0, 6);
	std::vector<SpikeTrain> trains;
	trains.push_back(encode(s, TemParams{1.0, 0.5, 1.2, 0.0}, s.grid.window_end()));
	trains.push_back(encode(s, TemParams{0.8, 0.4, 0.9, 0.0}, s.grid.window_end()));
	const std::string csv = spikes_to_csv(trains);
	const auto parsed = spikes_from_csv(csv, 3);
	REQUIRE(parsed.size() == 3);
	CHECK(parsed[2].empty());
	for (int i = 0; i < 2; ++i) {
		REQUIRE(parsed[i].size() == trains[i].times.size());
		for (std::size_t l = 0; l < parsed[i].size(); ++l) {
			CHECK(parsed[i][l] == trains[i].times[l]);
		}
	}

	std::vector<TemParams> machines{trains[0].params, trains[1].params};
	const auto [back, horizon] = tem_params_from_json(tem_params_to_json(machines, 7.0));
	CHECK(horizon == 7.0);
	REQUIRE(back.size() == 2);
	CHECK(back[1].kappa == 0.8);
	CHECK(back[1].delta == 0.4);
	CHECK(back[1].bias == 0.9);
	CHECK(back[1].t_start == 0.0);
}
