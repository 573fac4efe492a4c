#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "temcodec/mixing.hpp"
#include "temcodec/rng.hpp"

using namespace temcodec;

namespace {

constexpr double kPi = std::numbers::pi;

MixingMatrix valid(std::initializer_list<std::initializer_list<double>> rows,
                   MixingMatrix::SubsetCheck check = MixingMatrix::SubsetCheck::Auto)
{
	return MixingMatrix::validate(Eigen::MatrixXd(rows), check);
}

VectorSignal random_stack(Rng& rng, const SincGrid& g, int rows)
{
	std::vector<std::vector<double>> c(rows, std::vector<double>(g.count));
	for (auto& row : c) {
		for (double& v : row) {
			v = rng.uniform(-1.0, 1.0);
		}
	}
	return VectorSignal(g, c);
}

// Normal-equations oracle: x = (A^T A)^-1 A^T y via hand-rolled Gauss-Jordan,
// independent of the QR path under test.
Eigen::MatrixXd normal_equations_solve(const Eigen::MatrixXd& a, const Eigen::MatrixXd& rhs)
{
	const int n = static_cast<int>(a.cols());
	Eigen::MatrixXd m = a.transpose() * a;
	Eigen::MatrixXd inv = Eigen::MatrixXd::Identity(n, n);
	for (int col = 0; col < n; ++col) {
		int piv = col;
		for (int r = col + 1; r < n; ++r) {
			if (std::abs(m(r, col)) > std::abs(m(piv, col))) {
				piv = r;
			}
		}
		m.row(col).swap(m.row(piv));
		inv.row(col).swap(inv.row(piv));
		inv.row(col) /= m(col, col);
		m.row(col) /= m(col, col);
		for (int r = 0; r < n; ++r) {
			if (r != col && m(r, col) != 0.0) {
				inv.row(r) -= m(r, col) * inv.row(col);
				m.row(r) -= m(r, col) * m.row(col);
			}
		}
	}
	return inv * (a.transpose() * rhs);
}

}  // namespace

TEST_CASE("validate accepts conforming matrices and rejects degenerate ones")
{
	CHECK_NOTHROW(valid({{1.0}}));
	CHECK_NOTHROW(valid({{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}}));
	CHECK_THROWS_AS(valid({{1.0, 2.0}, {2.0, 4.0}, {3.0, 6.0}}),
	                RankDeficient);
	try {
		valid({{1.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}});
		FAIL("expected SubsetDegenerate");
	}
	catch (const SubsetDegenerate& e) {
		REQUIRE(e.rows.size() == 2);
		CHECK(e.rows[0] == 0);
		CHECK(e.rows[1] == 2);
	}
	// the same matrix passes when the subset check is off (it is rank 2)
	CHECK_NOTHROW(valid({{1.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}},
	                                     MixingMatrix::SubsetCheck::Off));
	CHECK_THROWS_AS(valid({{1.0, 0.0}}), DimensionMismatch);
}

TEST_CASE("mix: identity, duplication, linearity")
{
	const SincGrid g(kPi, 0.0, 6);
	Rng rng(201);
	const VectorSignal x = random_stack(rng, g, 2);

	const MixingMatrix id = valid({{1.0, 0.0}, {0.0, 1.0}});
	const VectorSignal y = mix(id, x);
	for (int i = 0; i < 2; ++i) {
		for (int k = 0; k < 6; ++k) {
			CHECK(y.coeffs(i)[k] == doctest::Approx(x.coeffs(i)[k]).epsilon(1e-15));
		}
	}

	const MixingMatrix dup = valid({{1.0}, {1.0}});
	const VectorSignal x1 = random_stack(rng, g, 1);
	const VectorSignal y1 = mix(dup, x1);
	REQUIRE(y1.rows() == 2);
	for (int k = 0; k < 6; ++k) {
		CHECK(y1.coeffs(0)[k] == x1.coeffs(0)[k]);
		CHECK(y1.coeffs(1)[k] == x1.coeffs(0)[k]);
	}

	const MixingMatrix a =
	    valid({{0.3, -1.2}, {0.7, 0.4}, {-0.5, 0.9}});
	const VectorSignal ya = mix(a, x);
	for (int rep = 0; rep < 20; ++rep) {
		const double t = rng.uniform(-2.0, 9.0);
		for (int i = 0; i < 3; ++i) {
			double want = 0.0;
			for (int j = 0; j < 2; ++j) {
				want += a.entries()(i, j) * eval(x.row(j), t);
			}
			CHECK(std::abs(eval(ya.row(i), t) - want) < 1e-12);
		}
	}
	CHECK_THROWS_AS(mix(a, random_stack(rng, g, 3)), DimensionMismatch);
}

TEST_CASE("project_colspace fixes its range and averages the dup matrix")
{
	const SincGrid g(kPi, 0.0, 5);
	Rng rng(203);
	const MixingMatrix a = valid({{1.0, 0.2}, {-0.4, 1.0}, {0.6, 0.7}});
	const VectorSignal x = random_stack(rng, g, 2);
	const VectorSignal y = mix(a, x);
	const VectorSignal py = project_colspace(a, y);
	for (int i = 0; i < 3; ++i) {
		for (int k = 0; k < 5; ++k) {
			CHECK(std::abs(py.coeffs(i)[k] - y.coeffs(i)[k]) < 1e-12);
		}
	}

	const MixingMatrix dup = valid({{1.0}, {1.0}});
	const VectorSignal s = random_stack(rng, g, 2);
	const VectorSignal ps = project_colspace(dup, s);
	for (int k = 0; k < 5; ++k) {
		const double avg = 0.5 * (s.coeffs(0)[k] + s.coeffs(1)[k]);
		CHECK(ps.coeffs(0)[k] == doctest::Approx(avg).epsilon(1e-14));
		CHECK(ps.coeffs(1)[k] == doctest::Approx(avg).epsilon(1e-14));
	}
}

TEST_CASE("projector is idempotent and self-adjoint")
{
	const SincGrid g(kPi, 0.0, 7);
	Rng rng(205);
	const MixingMatrix a =
	    valid({{0.9, 0.1}, {0.2, -1.1}, {-0.3, 0.8}, {0.5, 0.5}});
	const VectorSignal u = random_stack(rng, g, 4);
	const VectorSignal v = random_stack(rng, g, 4);
	const VectorSignal pu = project_colspace(a, u);
	const VectorSignal ppu = project_colspace(a, pu);
	double inner_pu_v = 0.0, inner_u_pv = 0.0;
	const VectorSignal pv = project_colspace(a, v);
	for (int i = 0; i < 4; ++i) {
		for (int k = 0; k < 7; ++k) {
			CHECK(std::abs(ppu.coeffs(i)[k] - pu.coeffs(i)[k]) < 1e-12);
			inner_pu_v += pu.coeffs(i)[k] * v.coeffs(i)[k];
			inner_u_pv += u.coeffs(i)[k] * pv.coeffs(i)[k];
		}
	}
	CHECK(std::abs(inner_pu_v - inner_u_pv) < 1e-11);
}

TEST_CASE("hybrid projection acts pointwise in t")
{
	const SincGrid g(kPi, 0.0, 5);
	Rng rng(207);
	const MixingMatrix a = valid({{1.0, 0.0}, {0.0, 1.0}, {0.8, -0.6}});
	std::vector<HybridSignal> rows;
	for (int i = 0; i < 3; ++i) {
		std::vector<Rectangle> rects;
		double t = 0.3 + 0.5 * i;
		for (int r = 0; r < 3; ++r) {
			const double len = rng.uniform(0.2, 0.9);
			rects.emplace_back(t, t + len, rng.uniform(-1.0, 1.0));
			t += len;
		}
		rows.push_back(HybridSignal{random_stack(rng, g, 1).row(0), std::move(rects)});
	}
	const auto projected = project_colspace(a, rows);
	REQUIRE(projected.size() == 3);
	for (int rep = 0; rep < 40; ++rep) {
		const double t = rng.uniform(-1.0, 7.0);
		for (int i = 0; i < 3; ++i) {
			double want = 0.0;
			for (int c = 0; c < 3; ++c) {
				want += a.projector()(i, c) * eval(rows[c], t);
			}
			CHECK(std::abs(eval(projected[i], t) - want) < 1e-12);
		}
	}

	// idempotence including the rectangle bookkeeping
	const auto twice = project_colspace(a, projected);
	for (int rep = 0; rep < 20; ++rep) {
		const double t = rng.uniform(-1.0, 7.0);
		for (int i = 0; i < 3; ++i) {
			CHECK(std::abs(eval(twice[i], t) - eval(projected[i], t)) < 1e-12);
		}
	}
}

TEST_CASE("unmix inverts mix and matches the normal-equations oracle")
{
	const SincGrid g(kPi, 0.0, 6);
	Rng rng(209);
	for (int rep = 0; rep < 10; ++rep) {
		Eigen::MatrixXd m(4, 2);
		for (int i = 0; i < 4; ++i) {
			for (int j = 0; j < 2; ++j) {
				m(i, j) = rng.uniform(-1.0, 1.0);
			}
		}
		m += 0.5 * Eigen::MatrixXd::Identity(4, 2);  // keep it well-conditioned
		const MixingMatrix a = MixingMatrix::validate(m);
		const VectorSignal x = random_stack(rng, g, 2);
		const VectorSignal rt = unmix(a, mix(a, x));
		for (int i = 0; i < 2; ++i) {
			for (int k = 0; k < 6; ++k) {
				CHECK(std::abs(rt.coeffs(i)[k] - x.coeffs(i)[k]) < 1e-11);
			}
		}

		const VectorSignal y = random_stack(rng, g, 4);
		Eigen::MatrixXd yc(4, 6);
		for (int i = 0; i < 4; ++i) {
			for (int k = 0; k < 6; ++k) {
				yc(i, k) = y.coeffs(i)[k];
			}
		}
		const Eigen::MatrixXd want = normal_equations_solve(m, yc);
		const VectorSignal got = unmix(a, y);
		for (int i = 0; i < 2; ++i) {
			for (int k = 0; k < 6; ++k) {
				CHECK(std::abs(got.coeffs(i)[k] - want(i, k)) < 1e-9);
			}
		}
		// projector consistency with the oracle: P y = A (A^T A)^-1 A^T y
		const Eigen::MatrixXd p_want = m * want;
		const VectorSignal py = project_colspace(a, y);
		for (int i = 0; i < 4; ++i) {
			for (int k = 0; k < 6; ++k) {
				CHECK(std::abs(py.coeffs(i)[k] - p_want(i, k)) < 1e-9);
			}
		}
	}

	const MixingMatrix dup = valid({{1.0}, {1.0}});
	const VectorSignal s = random_stack(rng, g, 2);
	const VectorSignal u = unmix(dup, s);
	REQUIRE(u.rows() == 1);
	for (int k = 0; k < 6; ++k) {
		CHECK(u.coeffs(0)[k] ==
		      doctest::Approx(0.5 * (s.coeffs(0)[k] + s.coeffs(1)[k])).epsilon(1e-13));
	}
}
