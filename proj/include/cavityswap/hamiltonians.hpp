#pragma once

#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <string>

#include <Eigen/Eigenvalues>

#include "collective_basis.hpp"
#include "common.hpp"
#include "linear.hpp"

namespace cavityswap
{

/// Physical constants of the ensemble-cavity model. All atoms couple with
/// the same strengths and see the same drive. Rates and couplings are
/// angular frequencies in the caller's unit; times are in the inverse unit.
struct SystemParams
{
	long N = 1;
	Complex g_a{1.0, 0.0};
	Complex g_b{1.0, 0.0};
	double Omega = 0.0;
	double phi = 0.0;
	double kappa_a = 0.0;
	double kappa_b = 0.0;
	double gamma_1 = 0.0;
	double gamma_2 = 0.0;

	/// Throws InvalidArgumentError naming the first offending field.
	void validate() const
	{
		auto finite = [](double x) { return std::isfinite(x); };
		if (N < 1)
			throw InvalidArgumentError("N must be >= 1");
		if (!finite(g_a.real()) || !finite(g_a.imag()))
			throw InvalidArgumentError("g_a must be finite");
		if (!finite(g_b.real()) || !finite(g_b.imag()))
			throw InvalidArgumentError("g_b must be finite");
		if (!finite(phi))
			throw InvalidArgumentError("phi must be finite");
		const std::pair<const char*, double> rates[] = {{"Omega", Omega}, {"kappa_a", kappa_a},
			{"kappa_b", kappa_b}, {"gamma_1", gamma_1}, {"gamma_2", gamma_2}};
		for (auto [name, value] : rates)
			if (!finite(value) || value < 0.0)
				throw InvalidArgumentError(std::string(name) + " must be finite and >= 0");
	}

	bool has_decay() const
	{
		return kappa_a > 0.0 || kappa_b > 0.0 || gamma_1 > 0.0 || gamma_2 > 0.0;
	}

	SystemParams without_decay() const
	{
		SystemParams p = *this;
		p.kappa_a = p.kappa_b = p.gamma_1 = p.gamma_2 = 0.0;
		return p;
	}

	/// Symmetric operating point: g_a = g_b = g, Omega = omega_ratio * sqrt(N) * g,
	/// and all four decay rates equal to `decay`.
	static SystemParams uniform(long N, double g, double omega_ratio, double decay = 0.0)
	{
		SystemParams p;
		p.N = N;
		p.g_a = p.g_b = g;
		p.Omega = omega_ratio * std::sqrt(static_cast<double>(N)) * g;
		p.kappa_a = p.kappa_b = p.gamma_1 = p.gamma_2 = decay;
		return p;
	}
};

using OperatorMatrix = BasicOperator<CollectiveBasis>;

namespace detail
{

inline Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

/// sqrt((n+1)(N - n1 - n2)) : amplitude of adding one atom to a level of the
/// symmetric state with occupancy `occ`, where `n` is that level's count.
inline double raise_factor(long N, Occupancy occ, int n)
{
	const double ground = static_cast<double>(N - occ.total());
	if (ground <= 0.0)
		return 0.0;
	return std::sqrt(static_cast<double>(n + 1) * ground);
}

/// Adds `value` at (row, col) and its conjugate at (col, row).
inline void add_hermitian_pair(CMatrix& m, std::size_t row, std::size_t col, Complex value)
{
	m(idx(row), idx(col)) += value;
	m(idx(col), idx(row)) += std::conj(value);
}

} // namespace detail

/// Atom-cavity coupling: sum_j g_a a |e1><g|_j + g_b b |e2><g|_j + h.c.,
/// written on symmetric collective states.
inline OperatorMatrix build_H_cav(const SystemParams& params, const BasisPtr& basis)
{
	params.validate();
	CMatrix m = CMatrix::Zero(detail::idx(basis->size()), detail::idx(basis->size()));
	for (std::size_t col = 0; col < basis->size(); ++col)
	{
		const auto& from = (*basis)[col];
		const Occupancy occ = occupancy(from.atomic);
		if (from.n_a > 0)
		{
			const auto to_atomic = atomic_label_for({occ.e1 + 1, occ.e2});
			if (to_atomic)
				if (auto row = basis->find({*to_atomic, from.n_a - 1, from.n_b}))
					detail::add_hermitian_pair(m, *row, col,
						params.g_a * std::sqrt(static_cast<double>(from.n_a))
							* detail::raise_factor(params.N, occ, occ.e1));
		}
		if (from.n_b > 0)
		{
			const auto to_atomic = atomic_label_for({occ.e1, occ.e2 + 1});
			if (to_atomic)
				if (auto row = basis->find({*to_atomic, from.n_a, from.n_b - 1}))
					detail::add_hermitian_pair(m, *row, col,
						params.g_b * std::sqrt(static_cast<double>(from.n_b))
							* detail::raise_factor(params.N, occ, occ.e2));
		}
	}
	return OperatorMatrix(basis, std::move(m), true);
}

/// Classical drive: sum_j Omega e^{i phi} |e2><e1|_j + h.c.
inline OperatorMatrix build_H_cla(const SystemParams& params, const BasisPtr& basis)
{
	params.validate();
	CMatrix m = CMatrix::Zero(detail::idx(basis->size()), detail::idx(basis->size()));
	const Complex drive = params.Omega * std::polar(1.0, params.phi);
	for (std::size_t col = 0; col < basis->size(); ++col)
	{
		const auto& from = (*basis)[col];
		const Occupancy occ = occupancy(from.atomic);
		if (occ.e1 == 0)
			continue;
		const auto to_atomic = atomic_label_for({occ.e1 - 1, occ.e2 + 1});
		if (!to_atomic)
			continue;
		if (auto row = basis->find({*to_atomic, from.n_a, from.n_b}))
			detail::add_hermitian_pair(m, *row, col,
				drive * std::sqrt(static_cast<double>(occ.e1 * (occ.e2 + 1))));
	}
	return OperatorMatrix(basis, std::move(m), true);
}

inline OperatorMatrix build_H_I(const SystemParams& params, const BasisPtr& basis)
{
	return build_H_cav(params, basis) + build_H_cla(params, basis);
}

/// No-jump damping: -(i/2)(gamma_1 n_e1 + gamma_2 n_e2 + kappa_a n_a + kappa_b n_b).
inline OperatorMatrix build_decay(const SystemParams& params, const BasisPtr& basis)
{
	params.validate();
	CMatrix m = CMatrix::Zero(detail::idx(basis->size()), detail::idx(basis->size()));
	for (std::size_t i = 0; i < basis->size(); ++i)
	{
		const auto& label = (*basis)[i];
		const Occupancy occ = occupancy(label.atomic);
		const double rate = params.gamma_1 * occ.e1 + params.gamma_2 * occ.e2
			+ params.kappa_a * label.n_a + params.kappa_b * label.n_b;
		m(detail::idx(i), detail::idx(i)) = -0.5 * I * rate;
	}
	return OperatorMatrix(basis, std::move(m), !params.has_decay());
}

inline OperatorMatrix build_H_nonhermitian(const SystemParams& params, const BasisPtr& basis)
{
	const auto h = build_H_I(params, basis);
	return OperatorMatrix(basis, h.matrix() + build_decay(params, basis).matrix(), false);
}

/// xi = N conj(g_a) g_b e^{-i phi} / Omega for uniform couplings.
inline Complex effective_coupling(const SystemParams& params)
{
	params.validate();
	if (!(params.Omega > 0.0))
		throw InvalidArgumentError("effective coupling needs Omega > 0");
	return static_cast<double>(params.N) * std::conj(params.g_a) * params.g_b
		* std::polar(1.0, -params.phi) / params.Omega;
}

/// Beam-splitter exchange -(xi a^dag b + conj(xi) b^dag a) acting on the
/// all-ground atomic label only. Sign chosen so that exp(-i H t) sends
/// |0,1> to cos(xi t)|0,1> + i sin(xi t)|1,0> for real xi.
inline OperatorMatrix build_H_eff(Complex xi, const BasisPtr& basis)
{
	CMatrix m = CMatrix::Zero(detail::idx(basis->size()), detail::idx(basis->size()));
	for (std::size_t col = 0; col < basis->size(); ++col)
	{
		const auto& from = (*basis)[col];
		if (from.atomic != AtomicLabel::G || from.n_b == 0)
			continue;
		if (auto row = basis->find({AtomicLabel::G, from.n_a + 1, from.n_b - 1}))
			detail::add_hermitian_pair(m, *row, col,
				-xi * std::sqrt(static_cast<double>((from.n_a + 1) * from.n_b)));
	}
	return OperatorMatrix(basis, std::move(m), true);
}

inline OperatorMatrix build_H_eff(const SystemParams& params, const BasisPtr& basis)
{
	return build_H_eff(effective_coupling(params), basis);
}

/// Cavity part of the no-jump damping restricted to the all-ground label:
/// -(i/2)(kappa_a n_a + kappa_b n_b) on G rows, zero elsewhere.
inline OperatorMatrix build_cavity_decay_on_ground(const SystemParams& params, const BasisPtr& basis)
{
	params.validate();
	CMatrix m = CMatrix::Zero(detail::idx(basis->size()), detail::idx(basis->size()));
	for (std::size_t i = 0; i < basis->size(); ++i)
	{
		const auto& label = (*basis)[i];
		if (label.atomic == AtomicLabel::G)
			m(detail::idx(i), detail::idx(i)) = -0.5 * I * (params.kappa_a * label.n_a + params.kappa_b * label.n_b);
	}
	return OperatorMatrix(basis, std::move(m), params.kappa_a == 0.0 && params.kappa_b == 0.0);
}

/// Diagonal operator counting total excitations n_a + n_b + n_e1 + n_e2.
inline OperatorMatrix excitation_number(const BasisPtr& basis)
{
	CMatrix m = CMatrix::Zero(detail::idx(basis->size()), detail::idx(basis->size()));
	for (std::size_t i = 0; i < basis->size(); ++i)
		m(detail::idx(i), detail::idx(i)) = static_cast<double>((*basis)[i].excitation());
	return OperatorMatrix(basis, std::move(m), true);
}

/// Applies exp(-i H_cla t), moving between the interaction picture of the
/// full Hamiltonian and the frame rotating with the drive. Each excitation
/// sector of H_cla is diagonalized exactly.
inline StateVector frame_transform(const StateVector& state, double t, const SystemParams& params)
{
	const auto h = build_H_cla(params, state.basis_ptr());
	const auto& basis = state.basis();
	CVector out = state.amplitudes();
	for (int sector = 0; sector <= basis.max_excitation(); ++sector)
	{
		const auto range = basis.sector(sector);
		const auto begin = detail::idx(range.begin);
		const auto n = detail::idx(range.size());
		const CMatrix block = h.matrix().block(begin, begin, n, n);
		Eigen::SelfAdjointEigenSolver<CMatrix> solver(block);
		const CVector phases = (solver.eigenvalues().cast<Complex>() * (-I * t)).array().exp().matrix();
		const CMatrix& v = solver.eigenvectors();
		out.segment(begin, n) = v * phases.asDiagonal() * (v.adjoint() * out.segment(begin, n));
	}
	return StateVector(state.basis_ptr(), std::move(out));
}

/// Debug dump: one `row col re im` line per nonzero element.
template <typename Basis>
void write_matrix(std::ostream& os, const BasicOperator<Basis>& op)
{
	const auto old_precision = os.precision(std::numeric_limits<double>::max_digits10);
	for (Eigen::Index r = 0; r < op.matrix().rows(); ++r)
		for (Eigen::Index c = 0; c < op.matrix().cols(); ++c)
			if (const Complex v = op.matrix()(r, c); v != Complex{})
				os << r << ' ' << c << ' ' << v.real() << ' ' << v.imag() << '\n';
	os.precision(old_precision);
}

} // namespace cavityswap
