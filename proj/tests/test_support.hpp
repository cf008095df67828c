#pragma once

#include <complex>
#include <random>

#include <gtest/gtest.h>

#include "cavityswap/cavityswap.hpp"

namespace cavityswap::testing
{

inline void expect_complex_near(Complex actual, Complex expected, double tol)
{
	EXPECT_NEAR(actual.real(), expected.real(), tol) << "actual " << actual << " expected " << expected;
	EXPECT_NEAR(actual.imag(), expected.imag(), tol) << "actual " << actual << " expected " << expected;
}

inline Complex random_complex(std::mt19937& rng, double scale = 1.0)
{
	std::uniform_real_distribution<double> u(-scale, scale);
	return {u(rng), u(rng)};
}

template <typename Basis>
BasicState<Basis> random_state(std::mt19937& rng, const std::shared_ptr<const Basis>& basis)
{
	CVector v(static_cast<Eigen::Index>(basis->size()));
	for (Eigen::Index i = 0; i < v.size(); ++i)
		v(i) = random_complex(rng);
	return normalize(BasicState<Basis>(basis, v));
}

/// Uniform couplings with random magnitudes and phases, drive and rates of order one.
inline SystemParams random_params(std::mt19937& rng, long N, bool with_decay)
{
	std::uniform_real_distribution<double> u(0.2, 1.0);
	std::uniform_real_distribution<double> phase(-3.0, 3.0);
	SystemParams p;
	p.N = N;
	p.g_a = std::polar(u(rng), phase(rng));
	p.g_b = std::polar(u(rng), phase(rng));
	p.Omega = 1.0 + 3.0 * u(rng);
	p.phi = phase(rng);
	if (with_decay)
	{
		p.kappa_a = 0.3 * u(rng);
		p.kappa_b = 0.3 * u(rng);
		p.gamma_1 = 0.3 * u(rng);
		p.gamma_2 = 0.3 * u(rng);
	}
	return p;
}

} // namespace cavityswap::testing
