#pragma once

#include <cmath>
#include <memory>
#include <utility>

#include "common.hpp"

namespace cavityswap
{

template <typename Basis>
bool same_basis(const std::shared_ptr<const Basis>& a, const std::shared_ptr<const Basis>& b)
{
	return a == b || (a && b && *a == *b);
}

/// Complex amplitude vector over a basis. Immutable once built.
template <typename Basis>
class BasicState
{
public:
	explicit BasicState(std::shared_ptr<const Basis> basis)
		: basis_{std::move(basis)}, amplitudes_{CVector::Zero(static_cast<Eigen::Index>(basis_->size()))}
	{
	}

	BasicState(std::shared_ptr<const Basis> basis, CVector amplitudes)
		: basis_{std::move(basis)}, amplitudes_{std::move(amplitudes)}
	{
		if (static_cast<std::size_t>(amplitudes_.size()) != basis_->size())
			throw BasisMismatchError("state dimension " + std::to_string(amplitudes_.size())
				+ " does not match basis size " + std::to_string(basis_->size()));
	}

	const Basis& basis() const { return *basis_; }
	const std::shared_ptr<const Basis>& basis_ptr() const { return basis_; }
	const CVector& amplitudes() const { return amplitudes_; }
	std::size_t size() const { return static_cast<std::size_t>(amplitudes_.size()); }

	Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }

	template <typename Label>
	Complex amplitude(const Label& label) const
	{
		return amplitudes_(static_cast<Eigen::Index>(basis_->index_of(label)));
	}

	friend BasicState operator+(const BasicState& x, const BasicState& y)
	{
		require_same(x, y);
		return BasicState(x.basis_, x.amplitudes_ + y.amplitudes_);
	}

	friend BasicState operator-(const BasicState& x, const BasicState& y)
	{
		require_same(x, y);
		return BasicState(x.basis_, x.amplitudes_ - y.amplitudes_);
	}

	friend BasicState operator*(Complex c, const BasicState& x)
	{
		return BasicState(x.basis_, c * x.amplitudes_);
	}

	static void require_same(const BasicState& x, const BasicState& y)
	{
		if (!same_basis(x.basis_, y.basis_))
			throw BasisMismatchError("states live on different bases");
	}

private:
	std::shared_ptr<const Basis> basis_;
	CVector amplitudes_;
};

/// <x|y>, antilinear in x.
template <typename Basis>
Complex inner_product(const BasicState<Basis>& x, const BasicState<Basis>& y)
{
	BasicState<Basis>::require_same(x, y);
	return x.amplitudes().dot(y.amplitudes());
}

template <typename Basis>
double norm(const BasicState<Basis>& x)
{
	return x.amplitudes().norm();
}

template <typename Basis>
BasicState<Basis> normalize(const BasicState<Basis>& x)
{
	const double n = norm(x);
	if (!(n > 0.0) || !std::isfinite(n))
		throw InvalidArgumentError("cannot normalize a state of norm " + std::to_string(n));
	return BasicState<Basis>(x.basis_ptr(), x.amplitudes() / n);
}

/// Dense square matrix over a basis. When `hermitian` is set the matrix is
/// checked to be Hermitian to 1e-12 relative to its largest element.
template <typename Basis>
class BasicOperator
{
public:
	static constexpr double hermiticity_tolerance = 1e-12;

	BasicOperator(std::shared_ptr<const Basis> basis, CMatrix matrix, bool hermitian)
		: basis_{std::move(basis)}, matrix_{std::move(matrix)}, hermitian_{hermitian}
	{
		const auto n = static_cast<Eigen::Index>(basis_->size());
		if (matrix_.rows() != n || matrix_.cols() != n)
			throw BasisMismatchError("operator shape does not match basis size " + std::to_string(n));
		if (hermitian_ && hermiticity_defect() > hermiticity_tolerance * std::max(max_abs(), 1e-300))
			throw InvalidArgumentError("operator flagged Hermitian but M != M^dagger");
	}

	const Basis& basis() const { return *basis_; }
	const std::shared_ptr<const Basis>& basis_ptr() const { return basis_; }
	const CMatrix& matrix() const { return matrix_; }
	bool hermitian() const { return hermitian_; }
	std::size_t size() const { return basis_->size(); }

	Complex operator()(std::size_t row, std::size_t col) const
	{
		return matrix_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
	}

	double max_abs() const { return matrix_.size() == 0 ? 0.0 : matrix_.cwiseAbs().maxCoeff(); }

	/// max |M - M^dagger| over all elements.
	double hermiticity_defect() const
	{
		return matrix_.size() == 0 ? 0.0 : (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
	}

	/// (M - M^dagger) / 2i, Hermitian by construction.
	CMatrix anti_hermitian_part() const
	{
		return (matrix_ - matrix_.adjoint()) / (2.0 * I);
	}

	BasicState<Basis> apply(const BasicState<Basis>& psi) const
	{
		if (!same_basis(basis_, psi.basis_ptr()))
			throw BasisMismatchError("operator and state live on different bases");
		return BasicState<Basis>(basis_, matrix_ * psi.amplitudes());
	}

	friend BasicOperator operator+(const BasicOperator& x, const BasicOperator& y)
	{
		if (!same_basis(x.basis_, y.basis_))
			throw BasisMismatchError("operators live on different bases");
		return BasicOperator(x.basis_, x.matrix_ + y.matrix_, x.hermitian_ && y.hermitian_);
	}

private:
	std::shared_ptr<const Basis> basis_;
	CMatrix matrix_;
	bool hermitian_;
};

} // namespace cavityswap
