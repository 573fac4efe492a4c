#include "temcodec/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "temcodec/math.hpp"

namespace temcodec {

namespace {
constexpr double kPi = std::numbers::pi;
}

SincGrid::SincGrid(double omega_, double t0_, int count_) : omega(omega_), t0(t0_), count(count_)
{
	if (!(omega > 0.0)) {
		throw Error("SincGrid: omega must be positive");
	}
	if (count < 1) {
		throw Error("SincGrid: need at least one atom");
	}
}

double SincGrid::spacing() const
{
	return kPi / omega;
}

double SincGrid::point(int k) const
{
	return t0 + (k + 1) * spacing();
}

double SincGrid::window_end() const
{
	return t0 + (count + 1) * spacing();
}

SincSignal::SincSignal(SincGrid grid_, std::vector<double> coeffs_)
    : grid(grid_), coeffs(std::move(coeffs_))
{
	if (static_cast<int>(coeffs.size()) != grid.count) {
		throw DimensionMismatch("SincSignal: coefficient count does not match grid");
	}
}

SincSignal SincSignal::zero(const SincGrid& grid)
{
	return SincSignal(grid, std::vector<double>(grid.count, 0.0));
}

Rectangle::Rectangle(double start_, double end_, double weight_)
    : start(start_), end(end_), weight(weight_)
{
	if (!(end > start)) {
		throw Error("Rectangle: end must exceed start");
	}
}

VectorSignal::VectorSignal(SincGrid grid, std::vector<std::vector<double>> coeff_rows)
    : grid_(grid), rows_(std::move(coeff_rows))
{
	for (const auto& r : rows_) {
		if (static_cast<int>(r.size()) != grid_.count) {
			throw DimensionMismatch("VectorSignal: row length does not match grid");
		}
	}
}

VectorSignal::VectorSignal(std::vector<SincSignal> rows)
    : grid_(rows.empty() ? SincGrid(1.0, 0.0, 1) : rows.front().grid)
{
	if (rows.empty()) {
		throw DimensionMismatch("VectorSignal: need at least one row");
	}
	rows_.reserve(rows.size());
	for (auto& r : rows) {
		if (!(r.grid == grid_)) {
			throw DimensionMismatch("VectorSignal: rows must share one grid");
		}
		rows_.push_back(std::move(r.coeffs));
	}
}

VectorSignal VectorSignal::zero(const SincGrid& grid, int rows)
{
	return VectorSignal(grid, std::vector<std::vector<double>>(rows, std::vector<double>(grid.count, 0.0)));
}

double eval(const SincSignal& sig, double t)
{
	double v = 0.0;
	for (int k = 0; k < sig.grid.count; ++k) {
		v += sig.coeffs[k] * sinc_eval(sig.grid.omega, t - sig.grid.point(k));
	}
	return v;
}

double eval(const HybridSignal& sig, double t)
{
	double v = eval(sig.base, t);
	for (const auto& r : sig.rects) {
		if (t >= r.start && t < r.end) {
			v += r.weight / (r.end - r.start);
		}
	}
	return v;
}

double integrate(const SincSignal& sig, double a, double b)
{
	if (b < a) {
		throw Error("integrate: interval end precedes start");
	}
	double v = 0.0;
	for (int k = 0; k < sig.grid.count; ++k) {
		v += sig.coeffs[k] * sinc_atom_integral(sig.grid.omega, sig.grid.point(k), a, b);
	}
	return v;
}

double integrate(const HybridSignal& sig, double a, double b)
{
	double v = integrate(sig.base, a, b);
	for (const auto& r : sig.rects) {
		const double overlap = std::min(b, r.end) - std::max(a, r.start);
		if (overlap > 0.0) {
			v += r.weight * overlap / (r.end - r.start);
		}
	}
	return v;
}

double rect_lowpass_value(const Rectangle& rect, double omega, double t)
{
	const double height = rect.weight / (rect.end - rect.start);
	return height * (sine_integral(omega * (t - rect.start)) - sine_integral(omega * (t - rect.end))) / kPi;
}

SincSignal bandlimit_sample(const HybridSignal& sig)
{
	const SincGrid& g = sig.base.grid;
	const double scale = kPi / g.omega;
	std::vector<double> c(g.count);
	for (int k = 0; k < g.count; ++k) {
		// on the uniform grid every other atom vanishes at t_k, so the base
		// sample is coeffs[k] * omega/pi exactly
		double v = 0.0;
		for (const auto& r : sig.rects) {
			v += rect_lowpass_value(r, g.omega, g.point(k));
		}
		c[k] = sig.base.coeffs[k] + scale * v;
	}
	return SincSignal(g, std::move(c));
}

}  // namespace temcodec
