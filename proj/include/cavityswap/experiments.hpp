#pragma once

#include <algorithm>
#include <cmath>
#include <exception>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "common.hpp"
#include "gates.hpp"
#include "hamiltonians.hpp"

namespace cavityswap
{

/// How experimental "X MHz" figures are turned into rates.
enum class UnitConvention
{
	/// The figure is nu with rate = 2 pi nu (the usual "g/2pi = 16 MHz").
	Angular,
	/// The figure is already the rate: rate = X * 10^6 s^-1.
	Plain,
};

inline std::string to_string(UnitConvention u) { return u == UnitConvention::Angular ? "angular" : "plain"; }

inline UnitConvention parse_unit_convention(const std::string& text)
{
	if (text == "angular")
		return UnitConvention::Angular;
	if (text == "plain")
		return UnitConvention::Plain;
	throw InvalidArgumentError("unknown unit convention '" + text + "' (expected angular or plain)");
}

/// MHz figure to a rate in s^-1.
inline double mhz_to_rate(double mhz, UnitConvention units)
{
	return (units == UnitConvention::Angular ? 2.0 * pi : 1.0) * mhz * 1e6;
}

/// Gate runs over a grid of g/kappa. Each point sets g_a = g_b = g = x * kappa
/// (kappa taken from base.kappa_a) and Omega = omega_ratio * sqrt(N) * g; the
/// remaining fields of `base` are used as given.
struct SweepSpec
{
	std::vector<double> grid;
	SystemParams base;
	double omega_ratio = 20.0;
	Backend backend = Backend::Full;
	bool include_decay = true;
	GateOptions options;
	int threads = 1;

	void validate() const
	{
		if (grid.empty())
			throw InvalidArgumentError("sweep grid is empty");
		for (std::size_t i = 0; i < grid.size(); ++i)
		{
			if (!(grid[i] > 0.0) || !std::isfinite(grid[i]))
				throw InvalidArgumentError("sweep grid values must be finite and > 0");
			if (i > 0 && !(grid[i] > grid[i - 1]))
				throw InvalidArgumentError("sweep grid must be strictly increasing");
		}
		if (!(base.kappa_a > 0.0))
			throw InvalidArgumentError("g/kappa sweep needs kappa > 0");
		if (!(omega_ratio > 0.0))
			throw InvalidArgumentError("omega_ratio must be > 0");
		base.validate();
	}

	SystemParams point(double g_over_kappa) const
	{
		SystemParams p = base;
		const double g = g_over_kappa * base.kappa_a;
		p.g_a = p.g_b = g;
		p.Omega = omega_ratio * std::sqrt(static_cast<double>(p.N)) * g;
		return p;
	}
};

struct SweepRow
{
	double g_over_kappa;
	GateResult result;
};

namespace detail
{

/// Evaluates f(i) for i in [0, n) on up to `threads` workers; results keep index order.
template <typename Result, typename F>
std::vector<Result> parallel_map(std::size_t n, int threads, F f)
{
	std::vector<std::optional<Result>> slots(n);
	std::vector<std::exception_ptr> errors(n);
	const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1, std::max<std::size_t>(n, 1));
	auto work = [&](std::size_t w) {
		for (std::size_t i = w; i < n; i += workers)
		{
			try
			{
				slots[i].emplace(f(i));
			}
			catch (...)
			{
				errors[i] = std::current_exception();
			}
		}
	};
	if (workers == 1)
	{
		work(0);
	}
	else
	{
		std::vector<std::thread> pool;
		for (std::size_t w = 0; w < workers; ++w)
			pool.emplace_back(work, w);
		for (auto& t : pool)
			t.join();
	}
	for (auto& e : errors)
		if (e)
			std::rethrow_exception(e);
	std::vector<Result> out;
	out.reserve(n);
	for (auto& s : slots)
		out.push_back(std::move(*s));
	return out;
}

} // namespace detail

/// One swap-gate run per grid point. A failing point aborts the sweep with
/// its parameters in the message.
inline std::vector<SweepRow> sweep_g_over_kappa(const SweepSpec& spec)
{
	spec.validate();
	return detail::parallel_map<SweepRow>(spec.grid.size(), spec.threads, [&](std::size_t i) {
		const double x = spec.grid[i];
		const SystemParams p = spec.point(x);
		try
		{
			return SweepRow{x, run_swap_gate(p, spec.backend, spec.include_decay, spec.options)};
		}
		catch (const Error& e)
		{
			std::ostringstream msg;
			msg.precision(17);
			msg << "sweep point g/kappa=" << x << " (g=" << p.g_a.real() << ", kappa=" << p.kappa_a
				<< ", Omega=" << p.Omega << ", N=" << p.N << ") failed: " << e.what();
			throw EvolutionError(msg.str());
		}
	});
}

struct RwaRow
{
	double omega_ratio;
	double infidelity;
};

struct RwaConvergence
{
	std::vector<RwaRow> rows;
	/// Least-squares slope of log(infidelity) against log(omega_ratio).
	double log_log_slope = 0.0;
};

/// Decay-free full-model swap infidelity as Omega / (sqrt(N) g) varies.
inline RwaConvergence rwa_convergence(const std::vector<double>& multipliers, long N = 40'000, double g = 1.0,
	const GateOptions& options = {}, int threads = 1)
{
	if (multipliers.empty())
		throw InvalidArgumentError("rwa_convergence needs at least one multiplier");
	RwaConvergence out;
	out.rows = detail::parallel_map<RwaRow>(multipliers.size(), threads, [&](std::size_t i) {
		const auto p = SystemParams::uniform(N, g, multipliers[i]);
		return RwaRow{multipliers[i], 1.0 - run_swap_gate(p, Backend::Full, false, options).fidelity};
	});

	double sx = 0, sy = 0, sxx = 0, sxy = 0;
	int n = 0;
	for (const auto& r : out.rows)
	{
		if (!(r.infidelity > 0.0))
			continue;
		const double x = std::log(r.omega_ratio), y = std::log(r.infidelity);
		sx += x, sy += y, sxx += x * x, sxy += x * y;
		++n;
	}
	if (n >= 2 && (n * sxx - sx * sx) != 0.0)
		out.log_log_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
	return out;
}

struct UnitsInput
{
	double g_mhz = 16.0;
	double kappa_mhz = 1.4;
	double gamma_mhz = 3.0;
	long N = 40'000;
	double omega_ratio = 20.0;
	UnitConvention units = UnitConvention::Angular;
};

/// Times in seconds, rates in s^-1.
struct UnitsReport
{
	double g = 0.0;
	double kappa = 0.0;
	double gamma = 0.0;
	double Omega = 0.0;
	double xi = 0.0;
	double xi_over_g = 0.0;
	double gate_time = 0.0;
	double photon_lifetime = 0.0;
	/// gate_time / photon_lifetime.
	double ratio = 0.0;
};

inline UnitsReport physical_units_report(const UnitsInput& in)
{
	const std::pair<const char*, double> positive[] = {
		{"g", in.g_mhz}, {"kappa", in.kappa_mhz}, {"gamma", in.gamma_mhz}, {"omega_ratio", in.omega_ratio}};
	for (auto [name, value] : positive)
		if (!(value > 0.0) || !std::isfinite(value))
			throw InvalidArgumentError(std::string(name) + " must be > 0");
	if (in.N < 1)
		throw InvalidArgumentError("N must be >= 1");

	UnitsReport r;
	r.g = mhz_to_rate(in.g_mhz, in.units);
	r.kappa = mhz_to_rate(in.kappa_mhz, in.units);
	r.gamma = mhz_to_rate(in.gamma_mhz, in.units);
	const auto p = SystemParams::uniform(in.N, r.g, in.omega_ratio);
	r.Omega = p.Omega;
	r.xi = std::abs(effective_coupling(p));
	r.xi_over_g = r.xi / r.g;
	r.gate_time = swap_gate_time(p);
	r.photon_lifetime = 1.0 / r.kappa;
	r.ratio = r.gate_time / r.photon_lifetime;
	return r;
}

struct ScalingRow
{
	long N;
	/// |xi| with Omega held at its value for the first N of the list.
	double xi_fixed_omega;
	/// |xi| with Omega = omega_ratio * sqrt(N) * g.
	double xi_scaled_omega;
};

/// Effective coupling against atom number: linear in N at fixed drive,
/// sqrt(N) when the drive tracks the collective coupling.
inline std::vector<ScalingRow> coupling_scaling(const std::vector<long>& atom_counts, double g = 1.0,
	double omega_ratio = 20.0)
{
	if (atom_counts.empty())
		throw InvalidArgumentError("coupling_scaling needs at least one atom count");
	const double fixed_omega = SystemParams::uniform(atom_counts.front(), g, omega_ratio).Omega;
	std::vector<ScalingRow> rows;
	for (long n : atom_counts)
	{
		auto fixed = SystemParams::uniform(n, g, omega_ratio);
		fixed.Omega = fixed_omega;
		rows.push_back({n, std::abs(effective_coupling(fixed)),
			std::abs(effective_coupling(SystemParams::uniform(n, g, omega_ratio)))});
	}
	return rows;
}

} // namespace cavityswap
