#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "collective_basis.hpp"
#include "common.hpp"
#include "hamiltonians.hpp"
#include "linear.hpp"
#include "propagator.hpp"

namespace cavityswap::oracle
{

/// Brute-force reference model: `atoms` distinguishable three-level atoms
/// times two Fock spaces truncated at `cutoff_a`, `cutoff_b` photons.
/// Test-time ground truth for the collective reduction; cost grows as 3^atoms.
class FullBasis
{
public:
	enum Level : int
	{
		g = 0,
		e1 = 1,
		e2 = 2,
	};

	static constexpr int max_atoms = 4;
	static constexpr std::size_t max_dimension = 100'000;

	FullBasis(int atoms, int cutoff_a, int cutoff_b)
		: atoms_{atoms}, cutoff_a_{cutoff_a}, cutoff_b_{cutoff_b}
	{
		if (atoms < 1 || atoms > max_atoms)
			throw InvalidArgumentError("full model supports 1.." + std::to_string(max_atoms) + " atoms");
		if (cutoff_a < 0 || cutoff_b < 0)
			throw InvalidArgumentError("photon cutoffs must be non-negative");
		atomic_dim_ = 1;
		for (int j = 0; j < atoms; ++j)
			atomic_dim_ *= 3;
		const double dim = static_cast<double>(atomic_dim_) * (cutoff_a + 1) * (cutoff_b + 1);
		if (dim > static_cast<double>(max_dimension))
			throw InvalidArgumentError("full model dimension exceeds " + std::to_string(max_dimension));
	}

	int atoms() const { return atoms_; }
	int cutoff_a() const { return cutoff_a_; }
	int cutoff_b() const { return cutoff_b_; }
	std::size_t atomic_dimension() const { return atomic_dim_; }
	std::size_t size() const
	{
		return atomic_dim_ * static_cast<std::size_t>(cutoff_a_ + 1) * static_cast<std::size_t>(cutoff_b_ + 1);
	}

	/// Atom 0 is the most significant base-3 digit of `config`.
	Level level(std::size_t config, int atom) const
	{
		for (int j = atoms_ - 1; j > atom; --j)
			config /= 3;
		return static_cast<Level>(config % 3);
	}

	std::size_t with_level(std::size_t config, int atom, Level lvl) const
	{
		std::size_t weight = 1;
		for (int j = atoms_ - 1; j > atom; --j)
			weight *= 3;
		const auto old = static_cast<std::size_t>(level(config, atom));
		return config - old * weight + static_cast<std::size_t>(lvl) * weight;
	}

	std::size_t index(std::size_t config, int n_a, int n_b) const
	{
		return (config * static_cast<std::size_t>(cutoff_a_ + 1) + static_cast<std::size_t>(n_a))
				* static_cast<std::size_t>(cutoff_b_ + 1)
			+ static_cast<std::size_t>(n_b);
	}

	struct Decoded
	{
		std::size_t config;
		int n_a;
		int n_b;
	};

	Decoded decode(std::size_t i) const
	{
		const auto nb = static_cast<std::size_t>(cutoff_b_ + 1);
		const auto na = static_cast<std::size_t>(cutoff_a_ + 1);
		return {i / (na * nb), static_cast<int>((i / nb) % na), static_cast<int>(i % nb)};
	}

	friend bool operator==(const FullBasis&, const FullBasis&) = default;

private:
	int atoms_;
	int cutoff_a_;
	int cutoff_b_;
	std::size_t atomic_dim_ = 1;
};

using FullBasisPtr = std::shared_ptr<const FullBasis>;
using FullState = BasicState<FullBasis>;
using FullOperator = BasicOperator<FullBasis>;

inline FullBasisPtr make_full_basis(int atoms, int cutoff_a, int cutoff_b)
{
	return std::make_shared<const FullBasis>(atoms, cutoff_a, cutoff_b);
}

/// The interaction-picture Hamiltonian written atom by atom:
///   sum_j [g_a a |e1><g|_j + g_b b |e2><g|_j + Omega e^{i phi} |e2><e1|_j] + h.c.
/// plus, when `include_decay`, the diagonal no-jump damping.
inline FullOperator build_full_H(const SystemParams& params, const FullBasisPtr& basis, bool include_decay)
{
	params.validate();
	if (params.N != basis->atoms())
		throw InvalidArgumentError("params.N does not match full-model atom count");
	const auto dim = static_cast<Eigen::Index>(basis->size());
	CMatrix m = CMatrix::Zero(dim, dim);
	const Complex drive = params.Omega * std::polar(1.0, params.phi);
	auto add = [&](std::size_t to, std::size_t from, Complex v) {
		m(static_cast<Eigen::Index>(to), static_cast<Eigen::Index>(from)) += v;
		m(static_cast<Eigen::Index>(from), static_cast<Eigen::Index>(to)) += std::conj(v);
	};

	for (std::size_t i = 0; i < basis->size(); ++i)
	{
		const auto [config, n_a, n_b] = basis->decode(i);
		int count_e1 = 0, count_e2 = 0;
		for (int j = 0; j < basis->atoms(); ++j)
		{
			switch (basis->level(config, j))
			{
			case FullBasis::g:
				if (n_a > 0)
					add(basis->index(basis->with_level(config, j, FullBasis::e1), n_a - 1, n_b), i,
						params.g_a * std::sqrt(static_cast<double>(n_a)));
				if (n_b > 0)
					add(basis->index(basis->with_level(config, j, FullBasis::e2), n_a, n_b - 1), i,
						params.g_b * std::sqrt(static_cast<double>(n_b)));
				break;
			case FullBasis::e1:
				++count_e1;
				add(basis->index(basis->with_level(config, j, FullBasis::e2), n_a, n_b), i, drive);
				break;
			case FullBasis::e2:
				++count_e2;
				break;
			}
		}
		if (include_decay)
			m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += -0.5 * I
				* (params.gamma_1 * count_e1 + params.gamma_2 * count_e2 + params.kappa_a * n_a
					+ params.kappa_b * n_b);
	}
	return FullOperator(basis, std::move(m), !(include_decay && params.has_decay()));
}

enum class PairNormalization
{
	/// 1/sqrt(2 N (N-1)) on the ordered double sum of identical levels: unit norm.
	Orthonormal,
	/// 1/sqrt(N (N-1)) on every double sum, as the states are sometimes written.
	/// Phi4 and Phi5 then have norm sqrt(2).
	AsPrinted,
};

/// Explicit atomic vector (length 3^atoms) of a collective label, built from
/// the single and ordered double sums over atoms.
inline CVector collective_atomic_vector(AtomicLabel label, const FullBasis& basis,
	PairNormalization convention = PairNormalization::Orthonormal)
{
	const int n = basis.atoms();
	const double dn = n;
	CVector v = CVector::Zero(static_cast<Eigen::Index>(basis.atomic_dimension()));
	const std::size_t ground = 0;
	auto at = [&](std::size_t config) -> Complex& { return v(static_cast<Eigen::Index>(config)); };

	auto single = [&](FullBasis::Level lvl) {
		for (int j = 0; j < n; ++j)
			at(basis.with_level(ground, j, lvl)) += 1.0 / std::sqrt(dn);
	};
	auto pair = [&](FullBasis::Level first, FullBasis::Level second, double prefactor) {
		for (int j = 0; j < n; ++j)
			for (int k = 0; k < n; ++k)
				if (k != j)
					at(basis.with_level(basis.with_level(ground, j, first), k, second)) += prefactor;
	};
	const double mixed = n > 1 ? 1.0 / std::sqrt(dn * (dn - 1.0)) : 0.0;
	const double same = convention == PairNormalization::Orthonormal ? mixed / std::sqrt(2.0) : mixed;

	switch (label)
	{
	case AtomicLabel::G: at(ground) = 1.0; break;
	case AtomicLabel::Phi1: single(FullBasis::e1); break;
	case AtomicLabel::Phi2: single(FullBasis::e2); break;
	case AtomicLabel::Phi3: pair(FullBasis::e1, FullBasis::e2, mixed); break;
	case AtomicLabel::Phi4: pair(FullBasis::e1, FullBasis::e1, same); break;
	case AtomicLabel::Phi5: pair(FullBasis::e2, FullBasis::e2, same); break;
	}
	return v;
}

/// Columns are the embedded collective basis vectors (full dim x collective dim).
inline CMatrix embedding_matrix(const CollectiveBasis& coll, const FullBasis& full)
{
	CMatrix v = CMatrix::Zero(static_cast<Eigen::Index>(full.size()), static_cast<Eigen::Index>(coll.size()));
	for (std::size_t k = 0; k < coll.size(); ++k)
	{
		const auto& label = coll[k];
		if (label.n_a > full.cutoff_a() || label.n_b > full.cutoff_b())
			throw InvalidArgumentError("label (" + to_string(label) + ") exceeds full-model photon cutoff");
		const CVector atomic = collective_atomic_vector(label.atomic, full);
		for (Eigen::Index c = 0; c < atomic.size(); ++c)
			if (atomic(c) != Complex{})
				v(static_cast<Eigen::Index>(full.index(static_cast<std::size_t>(c), label.n_a, label.n_b)),
					static_cast<Eigen::Index>(k)) = atomic(c);
	}
	return v;
}

/// Expands each collective label into its explicit symmetrized sum over atoms.
inline FullState embed(const StateVector& state, const FullBasisPtr& full)
{
	const auto& coll = state.basis();
	for (std::size_t k = 0; k < coll.size(); ++k)
		if (full->atoms() < 2 && excitation(coll[k].atomic) == 2 && state[k] != Complex{})
			throw InvalidArgumentError("double atomic excitation needs at least two atoms");
	return FullState(full, embedding_matrix(coll, *full) * state.amplitudes());
}

struct ElementCheck
{
	/// max |V^dag H_full V - H_collective| relative to max |H_collective|.
	double element_error = 0.0;
	/// max |(1 - V V^dag) H_full V| relative to max |H_collective|: leakage
	/// of the symmetric subspace under one application of H_full.
	double closure_error = 0.0;
};

/// Compares every collective matrix element of the no-jump Hamiltonian with
/// its brute-force projection at N = params.N atoms.
inline ElementCheck check_matrix_elements(const SystemParams& params, int max_excitation = 2)
{
	if (max_excitation > max_atomic_excitation)
		throw InvalidArgumentError("collective basis is exact only up to two excitations");
	const auto coll = enumerate_basis(max_excitation);
	const auto full = make_full_basis(static_cast<int>(params.N), max_excitation, max_excitation);
	const CMatrix h_coll = build_H_nonhermitian(params, coll).matrix();
	const CMatrix h_full = build_full_H(params, full, true).matrix();
	const CMatrix v = embedding_matrix(*coll, *full);
	const double scale = std::max(h_coll.cwiseAbs().maxCoeff(), 1e-300);
	const CMatrix hv = h_full * v;
	ElementCheck out;
	out.element_error = (v.adjoint() * hv - h_coll).cwiseAbs().maxCoeff() / scale;
	out.closure_error = (hv - v * (v.adjoint() * hv)).cwiseAbs().maxCoeff() / scale;
	return out;
}

struct DynamicsComparison
{
	/// max over samples of || embed(psi_collective(t)) - psi_full(t) ||.
	double max_deviation = 0.0;
	/// max over samples of || (1 - P_sym) psi_full(t) ||.
	double max_leakage = 0.0;
};

/// Evolves psi0 under the collective no-jump Hamiltonian and embed(psi0)
/// under the brute-force one for the same duration.
inline DynamicsComparison compare_dynamics(const SystemParams& params, double t, const StateVector& psi0,
	double tolerance = 1e-10, int sample_count = 16)
{
	const auto& coll = psi0.basis_ptr();
	if (coll->max_excitation() > max_atomic_excitation)
		throw InvalidArgumentError("collective basis is exact only up to two excitations");
	const int cutoff = coll->max_excitation();
	const auto full = make_full_basis(static_cast<int>(params.N), cutoff, cutoff);

	const auto coll_series = evolve_timeseries(
		BasicEvolutionSpec<CollectiveBasis>{build_H_nonhermitian(params, coll), t, sample_count, tolerance},
		psi0);
	const auto full_series = evolve_timeseries(
		BasicEvolutionSpec<FullBasis>{build_full_H(params, full, true), t, sample_count, tolerance},
		embed(psi0, full));
	const CMatrix v = embedding_matrix(*coll, *full);

	DynamicsComparison out;
	for (std::size_t k = 0; k < coll_series.size(); ++k)
	{
		const CVector& full_psi = full_series[k].state.amplitudes();
		const CVector embedded = v * coll_series[k].state.amplitudes();
		out.max_deviation = std::max(out.max_deviation, (embedded - full_psi).norm());
		out.max_leakage = std::max(out.max_leakage, (full_psi - v * (v.adjoint() * full_psi)).norm());
	}
	return out;
}

} // namespace cavityswap::oracle
