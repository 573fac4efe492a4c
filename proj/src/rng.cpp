#include "temcodec/rng.hpp"

#include <cmath>
#include <numbers>

namespace temcodec {

double Rng::gaussian(double mean, double sd)
{
	// Box-Muller; u1 shifted away from zero so the log is finite.
	const double u1 = (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
	const double u2 = uniform();
	const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
	return mean + sd * z;
}

}  // namespace temcodec
