#pragma once

#include <vector>

#include "temcodec/errors.hpp"

namespace temcodec {

/// Uniform grid of sinc atoms: atom k (1-based) sits at t0 + k*pi/omega,
/// k = 1..count.
struct SincGrid {
	double omega;  ///< angular bandwidth, > 0
	double t0;     ///< known grid origin (the grid starts one spacing after it)
	int count;     ///< number of atoms K, >= 1

	SincGrid(double omega_, double t0_, int count_);

	double spacing() const;
	/// Atom position for 0-based index k in [0, count).
	double point(int k) const;
	/// [t0, t0 + (K+1)*spacing], the window the experiments operate in.
	double window_end() const;

	bool operator==(const SincGrid&) const = default;
};

/// Finite sum of sinc atoms: sum_k coeffs[k] * sinc_omega(t - t_k).
struct SincSignal {
	SincGrid grid;
	std::vector<double> coeffs;

	SincSignal(SincGrid grid_, std::vector<double> coeffs_);
	static SincSignal zero(const SincGrid& grid);
};

/// Axis-aligned box correction; weight is the total area, so the height on
/// [start, end) is weight / (end - start).
struct Rectangle {
	double start;
	double end;
	double weight;

	Rectangle(double start_, double end_, double weight_);
};

/// A sinc sum plus rectangle corrections; the closed intermediate state that
/// spike-constraint projections produce.
struct HybridSignal {
	SincSignal base;
	std::vector<Rectangle> rects;
};

/// Stack of sinc signals sharing one grid (the vector signals x(t) and y(t)).
class VectorSignal {
public:
	VectorSignal(SincGrid grid, std::vector<std::vector<double>> coeff_rows);
	explicit VectorSignal(std::vector<SincSignal> rows);
	static VectorSignal zero(const SincGrid& grid, int rows);

	const SincGrid& grid() const { return grid_; }
	int rows() const { return static_cast<int>(rows_.size()); }
	const std::vector<double>& coeffs(int i) const { return rows_[i]; }
	std::vector<double>& coeffs(int i) { return rows_[i]; }
	SincSignal row(int i) const { return SincSignal(grid_, rows_[i]); }

private:
	SincGrid grid_;
	std::vector<std::vector<double>> rows_;
};

/// Pointwise value.
double eval(const SincSignal& sig, double t);
double eval(const HybridSignal& sig, double t);

/// Exact integral over [a, b] (requires b >= a) via the sine integral for the
/// sinc part plus interval overlaps for rectangles.
double integrate(const SincSignal& sig, double a, double b);
double integrate(const HybridSignal& sig, double a, double b);

/// Value at t of a rectangle convolved with sinc_omega (ideal low-pass).
double rect_lowpass_value(const Rectangle& rect, double omega, double t);

/// Orthogonal projection onto the span of the grid's sinc atoms: low-pass the
/// input, sample at the grid points and rescale by pi/omega (the atoms have
/// squared norm omega/pi). The sinc part passes through unchanged; each
/// rectangle contributes its low-passed value at the sample points.
SincSignal bandlimit_sample(const HybridSignal& sig);

}  // namespace temcodec
