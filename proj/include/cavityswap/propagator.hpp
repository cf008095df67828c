#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include "common.hpp"
#include "linear.hpp"

namespace cavityswap
{

enum class EvolutionMethod
{
	/// Pade scaling-and-squaring matrix exponential.
	ScalingSquaring,
	/// Eigendecomposition when the eigenvector matrix is well conditioned,
	/// scaling-and-squaring otherwise.
	Eigendecomposition,
	/// Adaptive Dormand-Prince 5(4) integration of i dpsi/dt = H psi.
	RungeKutta,
};

inline std::string to_string(EvolutionMethod m)
{
	switch (m)
	{
	case EvolutionMethod::ScalingSquaring: return "scaling-squaring";
	case EvolutionMethod::Eigendecomposition: return "eigendecomposition";
	case EvolutionMethod::RungeKutta: return "runge-kutta";
	}
	return "?";
}

template <typename Basis>
struct BasicEvolutionSpec
{
	BasicOperator<Basis> op;
	double duration = 0.0;
	int sample_count = 1;
	double tolerance = 1e-10;
	EvolutionMethod method = EvolutionMethod::ScalingSquaring;

	void validate() const
	{
		if (!std::isfinite(duration) || duration < 0.0)
			throw InvalidArgumentError("evolution duration must be finite and >= 0");
		if (sample_count < 1)
			throw InvalidArgumentError("sample_count must be >= 1");
		if (!(tolerance > 0.0 && tolerance <= 1e-4))
			throw InvalidArgumentError("tolerance must lie in (0, 1e-4]");
		if (!op.matrix().allFinite())
			throw EvolutionError("operator has non-finite entries");
	}
};

class CollectiveBasis;
using EvolutionSpec = BasicEvolutionSpec<CollectiveBasis>;

template <typename Basis>
struct Sample
{
	double t;
	BasicState<Basis> state;
};

namespace detail
{

/// Largest condition number of the eigenvector matrix accepted by the
/// eigendecomposition route.
inline constexpr double max_eigenvector_condition = 1e6;

inline CMatrix expm(const CMatrix& h, double t)
{
	const CMatrix a = (-I * t) * h;
	return a.exp();
}

struct Eigensystem
{
	CVector values;
	CMatrix vectors;
	Eigen::PartialPivLU<CMatrix> inverse;
};

/// Empty when the solver fails or the eigenvectors are too ill conditioned.
inline std::optional<Eigensystem> guarded_eigensystem(const CMatrix& h)
{
	Eigen::ComplexEigenSolver<CMatrix> solver(h, true);
	if (solver.info() != Eigen::Success)
		return std::nullopt;
	const CMatrix& v = solver.eigenvectors();
	Eigen::JacobiSVD<CMatrix> svd(v);
	const auto& s = svd.singularValues();
	if (s.size() == 0 || !(s(s.size() - 1) > 0.0) || s(0) / s(s.size() - 1) >= max_eigenvector_condition)
		return std::nullopt;
	return Eigensystem{solver.eigenvalues(), v, Eigen::PartialPivLU<CMatrix>(v)};
}

inline CMatrix propagator_from(const Eigensystem& es, double t)
{
	const CVector phases = (es.values * (-I * t)).array().exp().matrix();
	return es.vectors * phases.asDiagonal() * es.inverse.inverse();
}

/// exp(-i H t) as a dense matrix, by the requested (non-integrator) route.
inline CMatrix propagator(const CMatrix& h, double t, EvolutionMethod method)
{
	if (method == EvolutionMethod::Eigendecomposition)
		if (auto es = guarded_eigensystem(h))
			return propagator_from(*es, t);
	return expm(h, t);
}

/// Dormand-Prince 5(4), error-per-step control on the max norm. Integrates
/// dpsi/dt = -i H psi from 0 to `duration`.
inline CVector integrate_dopri(const CMatrix& h, CVector psi, double duration, double tolerance)
{
	if (duration == 0.0)
		return psi;
	constexpr double a21 = 1.0 / 5;
	constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
	constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
	constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
	constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
					 a65 = -5103.0 / 18656;
	constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
	constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
					 e6 = 22.0 / 525, e7 = -1.0 / 40;

	const CMatrix a = -I * h;
	auto f = [&](const CVector& y) -> CVector { return a * y; };

	const double scale_norm = std::max(h.cwiseAbs().rowwise().sum().maxCoeff(), 1e-300);
	double step = std::min(duration, 0.1 / scale_norm);
	double t = 0.0;
	const double atol = tolerance * 1e-2;
	const double rtol = tolerance * 1e-2;
	CVector k1 = f(psi);
	long steps = 0;
	while (t < duration)
	{
		if (++steps > 50'000'000)
			throw EvolutionError("integrator exceeded step budget");
		if (t + step > duration)
			step = duration - t;
		const CVector k2 = f(psi + step * (a21 * k1));
		const CVector k3 = f(psi + step * (a31 * k1 + a32 * k2));
		const CVector k4 = f(psi + step * (a41 * k1 + a42 * k2 + a43 * k3));
		const CVector k5 = f(psi + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
		const CVector k6 = f(psi + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
		const CVector next = psi + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
		const CVector k7 = f(next);
		const CVector err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

		double err_norm = 0.0;
		for (Eigen::Index i = 0; i < psi.size(); ++i)
		{
			const double sc = atol + rtol * std::max(std::abs(psi(i)), std::abs(next(i)));
			err_norm = std::max(err_norm, std::abs(err(i)) / sc);
		}
		if (!std::isfinite(err_norm))
			throw EvolutionError("integrator produced non-finite values");
		if (err_norm <= 1.0)
		{
			t += step;
			psi = next;
			k1 = k7;
		}
		const double factor = err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
		step *= factor;
		if (step < std::numeric_limits<double>::epsilon() * std::max(duration, 1e-300))
			throw EvolutionError("integrator step size underflow");
	}
	return psi;
}

template <typename Basis>
void require_compatible(const BasicEvolutionSpec<Basis>& spec, const BasicState<Basis>& psi0)
{
	spec.validate();
	if (!same_basis(spec.op.basis_ptr(), psi0.basis_ptr()))
		throw BasisMismatchError("operator and initial state live on different bases");
	if (!psi0.amplitudes().allFinite())
		throw EvolutionError("initial state has non-finite amplitudes");
}

inline void check_finite(const CVector& v)
{
	if (!v.allFinite())
		throw EvolutionError("evolution produced non-finite amplitudes");
}

/// Compares one application of exp(-i H t) against two applications of
/// exp(-i H t/2); throws when they disagree by more than `tolerance`.
inline CVector self_checked_step(const CMatrix& h, const CVector& psi, double t, EvolutionMethod method,
	double tolerance)
{
	const CVector full = propagator(h, t, method) * psi;
	const CMatrix half = propagator(h, 0.5 * t, method);
	const CVector twice = half * (half * psi);
	check_finite(full);
	const double ref = std::max(psi.norm(), std::numeric_limits<double>::min());
	const double deviation = (full - twice).norm() / ref;
	if (deviation > tolerance)
		throw EvolutionError("half-step self-check failed: relative deviation " + std::to_string(deviation));
	return twice;
}

} // namespace detail

/// exp(-i H t) psi0 for the operator and duration of `spec`.
template <typename Basis>
BasicState<Basis> evolve(const BasicEvolutionSpec<Basis>& spec, const BasicState<Basis>& psi0)
{
	detail::require_compatible(spec, psi0);
	const CMatrix& h = spec.op.matrix();
	CVector out = spec.method == EvolutionMethod::RungeKutta
		? detail::integrate_dopri(h, psi0.amplitudes(), spec.duration, spec.tolerance)
		: detail::self_checked_step(h, psi0.amplitudes(), spec.duration, spec.method, spec.tolerance);
	detail::check_finite(out);
	return BasicState<Basis>(psi0.basis_ptr(), std::move(out));
}

/// States at t_k = k * duration / sample_count for k = 1..sample_count.
template <typename Basis>
std::vector<Sample<Basis>> evolve_timeseries(const BasicEvolutionSpec<Basis>& spec, const BasicState<Basis>& psi0)
{
	detail::require_compatible(spec, psi0);
	const CMatrix& h = spec.op.matrix();
	const double dt = spec.duration / spec.sample_count;
	std::vector<Sample<Basis>> samples;
	samples.reserve(static_cast<std::size_t>(spec.sample_count));

	CVector psi = psi0.amplitudes();
	if (spec.method == EvolutionMethod::RungeKutta)
	{
		for (int k = 1; k <= spec.sample_count; ++k)
		{
			psi = detail::integrate_dopri(h, std::move(psi), dt, spec.tolerance);
			detail::check_finite(psi);
			samples.push_back({k * dt, BasicState<Basis>(psi0.basis_ptr(), psi)});
		}
		return samples;
	}

	// The step propagator is checked once and then reused.
	const CMatrix half = detail::propagator(h, 0.5 * dt, spec.method);
	const CMatrix step = half * half;
	const CMatrix direct = detail::propagator(h, dt, spec.method);
	const double deviation = (direct - step).cwiseAbs().maxCoeff();
	if (!(deviation <= spec.tolerance))
		throw EvolutionError("half-step self-check failed: deviation " + std::to_string(deviation));
	for (int k = 1; k <= spec.sample_count; ++k)
	{
		psi = step * psi;
		detail::check_finite(psi);
		samples.push_back({k * dt, BasicState<Basis>(psi0.basis_ptr(), psi)});
	}
	return samples;
}

} // namespace cavityswap
