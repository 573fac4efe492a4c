#include "temcodec/math.hpp"

#include <cmath>
#include <cstddef>
#include <iterator>
#include <numbers>

namespace temcodec {

namespace {

constexpr double kPi = std::numbers::pi;

// Chebyshev coefficients of the sine-integral auxiliary functions
//   F(w) = x f(x),  G(w) = x^2 g(x),  w = 1/x^2,
// fitted per x-interval ([4,8], [8,16], [16,40]); beyond x = 40 the plain
// asymptotic series truncated at 18 terms is below 2e-18 absolute.
// Generated by scripts/gen_si_tables.py (mpmath, 50 digits); max validated
// error of the assembled Si over |x| <= 1e6 is 6.7e-16.

constexpr double kChebF0[] = {0.9433310442324392, -0.027972069650662484, 0.0015348107300124439, -0.00013766978575076115, 1.608069568013896e-05, -2.2184546509800333e-06, 3.434555115274505e-07, -5.7893383175975086e-08, 1.0420310693484687e-08, -1.976318642775858e-09, 3.912294548758787e-10, -8.026831361851602e-11, 1.6976880364073418e-11, -3.6859117937513656e-12, 8.187409597959808e-13, -1.8555742955378434e-13, 4.281192516297946e-14, -1.0036715383073806e-14, 2.387107082934234e-15, -5.752016876925928e-16, 1.4025972184954495e-16, -3.45759510074795e-17, 8.609201983423576e-18, -2.1635394134013193e-18, 5.483834715639831e-19, -1.4010673384235234e-19};
constexpr double kChebG0[] = {0.8549479116469482, -0.0647070282614815, 0.005109766976730459, -0.0005666134475728348, 7.654417192248943e-05, -1.1777406929058732e-05, 1.9883885404379633e-06, -3.600122480887079e-07, 6.88534450576737e-08, -1.376398717440868e-08, 2.8539221923437894e-09, -6.102620340704591e-10, 1.33978390267823e-10, -3.009345512668001e-11, 6.896064043281099e-12, -1.6084941526249265e-12, 3.8114948452372747e-13, -9.160757953398525e-14, 2.2301616324405213e-14, -5.492928633884168e-15, 1.367405544768064e-15, -3.437450691723792e-16, 8.719440469663739e-17, -2.230285981649242e-17, 5.749002333938244e-18, -1.4926328785924506e-18, 3.901530658613938e-19, -1.0262482026184587e-19};
constexpr double kChebF1[] = {0.9825265949188605, -0.009751364168490772, 0.00022882786790767885, -1.0385441565444226e-05, 6.875708652528122e-07, -5.822991539940091e-08, 5.868525123426457e-09, -6.734771329163225e-10, 8.550134023601068e-11, -1.1770284293368955e-11, 1.7317630754575382e-12, -2.693955955728016e-13, 4.3943592762022245e-14, -7.467561333557459e-15, 1.3151607239408739e-15, -2.3903161698981793e-16, 4.467754005040039e-17, -8.562703832896472e-18, 1.6786014780485691e-18, -3.358799245379157e-19};
constexpr double kChebG1[] = {0.9508380905631286, -0.0263102888138993, 0.000945602141418164, -5.5307339368815436e-05, 4.35863713188459e-06, -4.2040224551957236e-07, 4.6942748231619013e-08, -5.85897833530841e-09, 7.983343929633061e-10, -1.1679798783020192e-10, 1.812516811956863e-11, -2.9561504463321785e-12, 5.031179101059348e-13, -8.885013578058492e-14, 1.620740041728831e-14, -3.042397116310345e-15, 5.8589738042234705e-16, -1.1545203518311427e-16, 2.3227274755701263e-17, -4.762021189663139e-18, 9.932818731358357e-19, -2.1048716988243342e-19};
constexpr double kChebF2[] = {0.9956114968311484, -0.0031201120860884883, 2.705104645692245e-05, -5.272369447485318e-07, 1.7020743132571983e-08, -7.795021448515088e-10, 4.6201838183902504e-11, -3.339871008739699e-12, 2.827187811730864e-13, -2.721916244043451e-14, 2.9167975116784535e-15, -3.4221329012282253e-16, 4.339770617669253e-17, -5.888118561954384e-18, 8.476837388836664e-19, -1.2861420793302265e-19};
constexpr double kChebG2[] = {0.9870980059491852, -0.009067451508770936, 0.00012676995319159073, -3.328721877251658e-06, 1.3264507516900471e-07, -7.125116780338712e-09, 4.792736136375293e-10, -3.843578652498239e-11, 3.550614533802187e-12, -3.684732004292485e-13, 4.21573196051428e-14, -5.240973708747164e-15, 6.999559605323785e-16, -9.951302415700566e-17, 1.494883523316866e-17, -2.3582200945165017e-18, 3.886696347902717e-19};
constexpr double kAsymF[] = {1.0, -2.0, 24.0, -720.0, 40320.0, -3628800.0, 479001600.0, -87178291200.0, 20922789888000.0, -6402373705728000.0, 2.43290200817664e+18, -1.1240007277776077e+21, 6.204484017332394e+23, -4.0329146112660565e+26, 3.0488834461171387e+29, -2.6525285981219107e+32, 2.631308369336935e+35, -2.9523279903960416e+38};
constexpr double kAsymG[] = {1.0, -6.0, 120.0, -5040.0, 362880.0, -39916800.0, 6227020800.0, -1307674368000.0, 355687428096000.0, -1.21645100408832e+17, 5.109094217170944e+19, -2.585201673888498e+22, 1.5511210043330986e+25, -1.0888869450418352e+28, 8.841761993739702e+30, -8.222838654177922e+33, 8.683317618811886e+36, -1.0333147966386145e+40};

struct AuxBranch {
	double x_lo, x_hi;
	const double* f;
	std::size_t nf;
	const double* g;
	std::size_t ng;
};

constexpr AuxBranch kBranches[] = {
    {4.0, 8.0, kChebF0, std::size(kChebF0), kChebG0, std::size(kChebG0)},
    {8.0, 16.0, kChebF1, std::size(kChebF1), kChebG1, std::size(kChebG1)},
    {16.0, 40.0, kChebF2, std::size(kChebF2), kChebG2, std::size(kChebG2)},
};

double clenshaw(const double* c, std::size_t n, double t)
{
	double b1 = 0.0, b2 = 0.0;
	for (std::size_t k = n; k-- > 1;) {
		const double b0 = 2.0 * t * b1 - b2 + c[k];
		b2 = b1;
		b1 = b0;
	}
	return t * b1 - b2 + c[0];
}

double horner(const double* c, std::size_t n, double w)
{
	double acc = 0.0;
	for (std::size_t k = n; k-- > 0;) {
		acc = acc * w + c[k];
	}
	return acc;
}

// Auxiliary functions for ax > 4: f ~ 1/x, g ~ 1/x^2 as x -> inf.
void aux_fg(double ax, double& f, double& g)
{
	const double w = 1.0 / (ax * ax);
	for (const auto& br : kBranches) {
		if (ax <= br.x_hi) {
			const double w_lo = 1.0 / (br.x_hi * br.x_hi);
			const double w_hi = 1.0 / (br.x_lo * br.x_lo);
			const double t = (2.0 * w - (w_lo + w_hi)) / (w_hi - w_lo);
			f = clenshaw(br.f, br.nf, t) / ax;
			g = clenshaw(br.g, br.ng, t) * w;
			return;
		}
	}
	f = horner(kAsymF, std::size(kAsymF), w) / ax;
	g = horner(kAsymG, std::size(kAsymG), w) * w;
}

}  // namespace

double sinc_eval(double omega, double t)
{
	const double z = omega * t;
	if (std::abs(z) < 1e-4) {
		const double z2 = z * z;
		return omega / kPi * (1.0 - z2 / 6.0 * (1.0 - z2 / 20.0));
	}
	return std::sin(z) / (kPi * t);
}

double sine_integral(double x)
{
	const double ax = std::abs(x);
	double r;
	if (ax <= 4.0) {
		// Maclaurin series; largest term is |x| so no cancellation here.
		double u = ax;
		double s = ax;
		for (int m = 0;;) {
			u *= -ax * ax / ((2.0 * m + 2.0) * (2.0 * m + 3.0));
			++m;
			const double term = u / (2.0 * m + 1.0);
			s += term;
			if (std::abs(term) <= 1e-18 * std::abs(s) + 1e-300) {
				break;
			}
		}
		r = s;
	}
	else {
		double f, g;
		aux_fg(ax, f, g);
		r = kPi / 2.0 - f * std::cos(ax) - g * std::sin(ax);
	}
	return std::signbit(x) ? -r : r;
}

double sinc_atom_integral(double omega, double center, double a, double b)
{
	return (sine_integral(omega * (b - center)) - sine_integral(omega * (a - center))) / kPi;
}

}  // namespace temcodec
