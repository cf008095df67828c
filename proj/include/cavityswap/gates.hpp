#pragma once

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "collective_basis.hpp"
#include "common.hpp"
#include "hamiltonians.hpp"
#include "propagator.hpp"

namespace cavityswap
{

/// Which Hamiltonian drives a protocol run.
enum class Backend
{
	/// Full collective interaction-picture model, with no-jump damping when requested.
	Full,
	/// Beam-splitter Hamiltonian on the all-ground label plus cavity damping there.
	Effective,
};

inline std::string to_string(Backend b) { return b == Backend::Full ? "full" : "effective"; }

inline Backend parse_backend(const std::string& text)
{
	if (text == "full")
		return Backend::Full;
	if (text == "effective")
		return Backend::Effective;
	throw InvalidArgumentError("unknown backend '" + text + "' (expected full or effective)");
}

struct GateOptions
{
	double tolerance = 1e-10;
	EvolutionMethod method = EvolutionMethod::ScalingSquaring;
	/// When > 0 the run is sampled at this many evenly spaced times and the
	/// norm at each sample is kept in GateResult::norms.
	int trajectory_samples = 0;
};

/// Figures of merit of one swap-gate run.
///
/// `amplitudes` holds the unnormalized conditional state on every basis
/// label; coefficient_name() maps labels to the alpha/beta/eta/zeta/chi/xi/delta
/// names of the conditional-state expansion.
struct GateResult
{
	double fidelity = 0.0;
	double p_loss = 0.0;
	double gate_time = 0.0;
	Complex xi{};
	std::map<BasisLabel, Complex> amplitudes;
	Backend backend = Backend::Full;
	/// ||psi(t_k)|| at t_0 = 0 and each trajectory sample; empty unless requested.
	std::vector<double> norms;
};

/// alpha_xy (ground, <= 1 photon per mode), delta_xy (ground, 2 photons in one
/// mode), beta_xy (Phi1), eta_xy (Phi2), zeta/chi/xi_00 (Phi3/4/5).
inline std::string coefficient_name(const BasisLabel& label)
{
	const std::string photons = std::to_string(label.n_a) + std::to_string(label.n_b);
	switch (label.atomic)
	{
	case AtomicLabel::G: return (label.n_a > 1 || label.n_b > 1 ? "delta_" : "alpha_") + photons;
	case AtomicLabel::Phi1: return "beta_" + photons;
	case AtomicLabel::Phi2: return "eta_" + photons;
	case AtomicLabel::Phi3: return "zeta_" + photons;
	case AtomicLabel::Phi4: return "chi_" + photons;
	case AtomicLabel::Phi5: return "xi_" + photons;
	}
	return photons;
}

/// Generator of a protocol run on `basis`.
inline OperatorMatrix protocol_operator(const SystemParams& params, Backend backend, bool include_decay,
	const BasisPtr& basis)
{
	if (backend == Backend::Full)
		return include_decay ? build_H_nonhermitian(params, basis) : build_H_I(params, basis);
	const auto h = build_H_eff(params, basis);
	if (!include_decay)
		return h;
	return OperatorMatrix(basis, h.matrix() + build_cavity_decay_on_ground(params, basis).matrix(), false);
}

/// pi / (2 |xi|); throws when xi vanishes.
inline double swap_gate_time(const SystemParams& params)
{
	const double magnitude = std::abs(effective_coupling(params));
	if (!(magnitude > 0.0))
		throw InvalidArgumentError("swap gate needs a nonzero effective coupling");
	return pi / (2.0 * magnitude);
}

/// Evolves the equal superposition of the four logical inputs for pi/(2|xi|)
/// and scores it against the ideal swap output. For complex xi the target's
/// single-photon phases follow arg(xi).
inline GateResult run_swap_gate(const SystemParams& params, Backend backend, bool include_decay,
	const GateOptions& options = {})
{
	const auto basis = enumerate_basis(2);
	GateResult result;
	result.backend = backend;
	result.xi = effective_coupling(params);
	result.gate_time = swap_gate_time(params);

	const StateVector psi0 = initial_swap_state(basis);
	EvolutionSpec spec{protocol_operator(params, backend, include_decay, basis), result.gate_time,
		std::max(options.trajectory_samples, 1), options.tolerance, options.method};

	StateVector out = psi0;
	if (options.trajectory_samples > 0)
	{
		const auto series = evolve_timeseries(spec, psi0);
		result.norms.push_back(norm(psi0));
		for (const auto& s : series)
			result.norms.push_back(norm(s.state));
		out = series.back().state;
	}
	else
	{
		out = evolve(spec, psi0);
	}

	const double norm2 = out.amplitudes().squaredNorm();
	if (!(norm2 > 0.0) || !std::isfinite(norm2))
		throw EvolutionError("conditional state has vanishing or non-finite norm");
	result.p_loss = 1.0 - norm2;
	const StateVector target = ideal_swap_target(basis, std::arg(result.xi));
	result.fidelity = std::norm(inner_product(target, out)) / norm2;
	for (std::size_t i = 0; i < basis->size(); ++i)
		result.amplitudes.emplace((*basis)[i], out[i]);
	return result;
}

inline constexpr std::array<const char*, 4> logical_inputs{"00", "01", "10", "11"};

/// Output state for each logical input |n_a n_b> (keys "00", "01", "10", "11")
/// after evolving for time t with the atoms starting in G.
inline std::map<std::string, StateVector> truth_table(const SystemParams& params, Backend backend, double t,
	bool include_decay = false, const GateOptions& options = {})
{
	const auto basis = enumerate_basis(2);
	const EvolutionSpec spec{protocol_operator(params, backend, include_decay, basis), t, 1, options.tolerance,
		options.method};
	std::map<std::string, StateVector> out;
	for (const char* key : logical_inputs)
	{
		const BasisLabel input{AtomicLabel::G, key[0] - '0', key[1] - '0'};
		out.emplace(key, evolve(spec, basis_state(basis, input)));
	}
	return out;
}

/// Probability of |G,0,1> at time t starting from |G,1,0>.
inline double conversion_efficiency(const SystemParams& params, Backend backend, double t,
	bool include_decay = false, const GateOptions& options = {})
{
	const auto basis = enumerate_basis(1);
	const EvolutionSpec spec{protocol_operator(params, backend, include_decay, basis), t, 1, options.tolerance,
		options.method};
	const auto psi = evolve(spec, basis_state(basis, {AtomicLabel::G, 1, 0}));
	return std::norm(psi.amplitude(BasisLabel{AtomicLabel::G, 0, 1}));
}

/// conversion_efficiency() sampled at t_k = k * duration / samples, k = 1..samples.
inline std::vector<std::pair<double, double>> conversion_curve(const SystemParams& params, Backend backend,
	double duration, int samples, bool include_decay = false, const GateOptions& options = {})
{
	const auto basis = enumerate_basis(1);
	const EvolutionSpec spec{protocol_operator(params, backend, include_decay, basis), duration, samples,
		options.tolerance, options.method};
	const BasisLabel target{AtomicLabel::G, 0, 1};
	std::vector<std::pair<double, double>> curve;
	for (const auto& s : evolve_timeseries(spec, basis_state(basis, {AtomicLabel::G, 1, 0})))
		curve.emplace_back(s.t, std::norm(s.state.amplitude(target)));
	return curve;
}

} // namespace cavityswap
