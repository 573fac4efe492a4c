#pragma once

// Independent quadrature oracle for the test suites. Uses Gauss-Legendre
// panels with nodes computed from the Legendre recurrence, so it shares no
// code with the closed forms under test.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

struct GaussRule {
	std::vector<double> nodes, weights;

	explicit GaussRule(int n) : nodes(n), weights(n)
	{
		for (int i = 0; i < (n + 1) / 2; ++i) {
			// Newton iteration from the Chebyshev-based initial guess.
			double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
			double dp = 0.0;
			for (int it = 0; it < 100; ++it) {
				double p0 = 1.0, p1 = x;
				for (int k = 2; k <= n; ++k) {
					const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
					p0 = p1;
					p1 = p2;
				}
				dp = n * (x * p1 - p0) / (x * x - 1.0);
				const double dx = p1 / dp;
				x -= dx;
				if (std::abs(dx) < 1e-15) {
					break;
				}
			}
			nodes[i] = -x;
			nodes[n - 1 - i] = x;
			weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
		}
	}
};

inline const GaussRule& rule24()
{
	static const GaussRule rule(24);
	return rule;
}

inline double panel(const std::function<double(double)>& f, double a, double b)
{
	const GaussRule& r = rule24();
	const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
	double s = 0.0;
	for (std::size_t i = 0; i < r.nodes.size(); ++i) {
		s += r.weights[i] * f(mid + half * r.nodes[i]);
	}
	return s * half;
}

/// Adaptive panel-splitting quadrature with absolute tolerance.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-13, int depth = 0)
{
	const double whole = panel(f, a, b);
	const double mid = 0.5 * (a + b);
	const double halves = panel(f, a, mid) + panel(f, mid, b);
	if (std::abs(whole - halves) < tol || depth > 28) {
		return halves;
	}
	return integrate(f, a, mid, 0.5 * tol, depth + 1) +
	       integrate(f, mid, b, 0.5 * tol, depth + 1);
}

/// Sine integral by quadrature, one Gauss panel per half-period.
inline double si(double x)
{
	if (x < 0.0) {
		return -si(-x);
	}
	const auto f = [](double u) { return u < 1e-8 ? 1.0 - u * u / 6.0 : std::sin(u) / u; };
	double s = 0.0;
	double a = 0.0;
	while (a < x) {
		const double b = std::min(a + std::numbers::pi, x);
		s += panel(f, a, b);
		a = b;
	}
	return s;
}

}  // namespace oracle
