#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <istream>
#include <iomanip>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "common.hpp"
#include "linear.hpp"

namespace cavityswap
{

/// Collective atomic states of the ensemble in the permutation-symmetric
/// subspace: the all-ground state and the five normalized symmetric states
/// carrying one or two excitations.
///
///   G    : every atom in g
///   Phi1 : one atom in e1 (W state)
///   Phi2 : one atom in e2
///   Phi3 : one atom in e1 and another in e2
///   Phi4 : two atoms in e1
///   Phi5 : two atoms in e2
enum class AtomicLabel : int
{
	G = 0,
	Phi1,
	Phi2,
	Phi3,
	Phi4,
	Phi5,
};

inline constexpr std::array<AtomicLabel, 6> all_atomic_labels{
	AtomicLabel::G, AtomicLabel::Phi1, AtomicLabel::Phi2,
	AtomicLabel::Phi3, AtomicLabel::Phi4, AtomicLabel::Phi5};

/// Number of atoms in (e1, e2).
struct Occupancy
{
	int e1 = 0;
	int e2 = 0;

	constexpr int total() const { return e1 + e2; }
	friend constexpr bool operator==(const Occupancy&, const Occupancy&) = default;
};

constexpr Occupancy occupancy(AtomicLabel label)
{
	switch (label)
	{
	case AtomicLabel::G: return {0, 0};
	case AtomicLabel::Phi1: return {1, 0};
	case AtomicLabel::Phi2: return {0, 1};
	case AtomicLabel::Phi3: return {1, 1};
	case AtomicLabel::Phi4: return {2, 0};
	case AtomicLabel::Phi5: return {0, 2};
	}
	return {};
}

constexpr int excitation(AtomicLabel label) { return occupancy(label).total(); }

/// Inverse of occupancy(); empty when the occupancy needs more than two excitations.
constexpr std::optional<AtomicLabel> atomic_label_for(Occupancy occ)
{
	for (auto label : all_atomic_labels)
		if (occupancy(label) == occ)
			return label;
	return std::nullopt;
}

inline constexpr int max_atomic_excitation = 2;

inline std::string_view to_string(AtomicLabel label)
{
	constexpr std::array<std::string_view, 6> names{"G", "Phi1", "Phi2", "Phi3", "Phi4", "Phi5"};
	return names[static_cast<std::size_t>(label)];
}

inline AtomicLabel parse_atomic_label(std::string_view text)
{
	for (auto label : all_atomic_labels)
		if (to_string(label) == text)
			return label;
	throw InvalidArgumentError("unknown atomic label '" + std::string(text) + "'");
}

/// Atomic collective state times Fock state |n_a, n_b> of the two cavity modes.
struct BasisLabel
{
	AtomicLabel atomic = AtomicLabel::G;
	int n_a = 0;
	int n_b = 0;

	constexpr int excitation() const { return n_a + n_b + cavityswap::excitation(atomic); }

	friend constexpr auto operator<=>(const BasisLabel&, const BasisLabel&) = default;
};

inline std::string to_string(const BasisLabel& label)
{
	return std::string(to_string(label.atomic)) + "," + std::to_string(label.n_a) + "," + std::to_string(label.n_b);
}

/// Sector-blocked basis of the symmetric subspace.
///
/// Order is sector-major (total excitation 0, 1, ...). Inside a sector the
/// atomic labels come in the order G, Phi1, ..., Phi5 and, for each atomic
/// label, photon pairs run with n_a descending. Serialized states refer to
/// these indices, so the order is part of the interface.
///
/// Atomic labels stop at two excitations. Sectors up to 2 are therefore
/// complete; in higher sectors the photon content is complete but states
/// with three or more atomic excitations are absent.
class CollectiveBasis
{
public:
	struct Range
	{
		std::size_t begin = 0;
		std::size_t end = 0;
		std::size_t size() const { return end - begin; }
		friend bool operator==(const Range&, const Range&) = default;
	};

	explicit CollectiveBasis(int max_excitation)
		: max_excitation_{max_excitation}
	{
		if (max_excitation < 0)
			throw InvalidArgumentError("max_excitation must be non-negative");
		for (int sector = 0; sector <= max_excitation; ++sector)
		{
			Range range{labels_.size(), labels_.size()};
			for (auto atomic : all_atomic_labels)
			{
				const int photons = sector - cavityswap::excitation(atomic);
				if (photons < 0)
					continue;
				for (int n_a = photons; n_a >= 0; --n_a)
					labels_.push_back({atomic, n_a, photons - n_a});
			}
			range.end = labels_.size();
			sectors_.push_back(range);
		}
		for (std::size_t i = 0; i < labels_.size(); ++i)
			index_.emplace(labels_[i], i);
	}

	std::size_t size() const { return labels_.size(); }
	int max_excitation() const { return max_excitation_; }
	const std::vector<BasisLabel>& labels() const { return labels_; }
	const BasisLabel& operator[](std::size_t i) const { return labels_.at(i); }

	/// Index range of the given excitation sector.
	Range sector(int excitation) const
	{
		if (excitation < 0 || excitation > max_excitation_)
			throw InvalidArgumentError("sector " + std::to_string(excitation) + " outside basis");
		return sectors_[static_cast<std::size_t>(excitation)];
	}

	std::optional<std::size_t> find(const BasisLabel& label) const
	{
		auto it = index_.find(label);
		if (it == index_.end())
			return std::nullopt;
		return it->second;
	}

	std::size_t index_of(const BasisLabel& label) const
	{
		if (auto i = find(label))
			return *i;
		throw InvalidArgumentError("label (" + to_string(label) + ") not in basis");
	}

	friend bool operator==(const CollectiveBasis& a, const CollectiveBasis& b)
	{
		return a.max_excitation_ == b.max_excitation_;
	}

private:
	int max_excitation_;
	std::vector<BasisLabel> labels_;
	std::vector<Range> sectors_;
	std::map<BasisLabel, std::size_t> index_;
};

using BasisPtr = std::shared_ptr<const CollectiveBasis>;
using StateVector = BasicState<CollectiveBasis>;

/// All labels with total excitation <= max_excitation.
inline BasisPtr enumerate_basis(int max_excitation)
{
	return std::make_shared<const CollectiveBasis>(max_excitation);
}

/// Unit vector on a single label.
inline StateVector basis_state(const BasisPtr& basis, const BasisLabel& label)
{
	CVector v = CVector::Zero(static_cast<Eigen::Index>(basis->size()));
	v(static_cast<Eigen::Index>(basis->index_of(label))) = 1.0;
	return StateVector(basis, std::move(v));
}

/// Atoms in G, cavity in (|00> + |01> + |10> + |11>) / 2.
inline StateVector initial_swap_state(const BasisPtr& basis)
{
	if (basis->max_excitation() < 2)
		throw InvalidArgumentError("swap states need a basis with max_excitation >= 2");
	CVector v = CVector::Zero(static_cast<Eigen::Index>(basis->size()));
	for (auto [n_a, n_b] : {std::pair{0, 0}, {0, 1}, {1, 0}, {1, 1}})
		v(static_cast<Eigen::Index>(basis->index_of({AtomicLabel::G, n_a, n_b}))) = 0.5;
	return StateVector(basis, std::move(v));
}

/// Output of the ideal swap gate for initial_swap_state():
/// (|00> + i e^{i theta} |10> + i e^{-i theta} |01> - |11>) / 2 with theta = arg(xi).
/// theta = 0 gives the textbook target for a real positive coupling.
inline StateVector ideal_swap_target(const BasisPtr& basis, double xi_phase = 0.0)
{
	if (basis->max_excitation() < 2)
		throw InvalidArgumentError("swap states need a basis with max_excitation >= 2");
	CVector v = CVector::Zero(static_cast<Eigen::Index>(basis->size()));
	auto at = [&](int n_a, int n_b) -> Complex& {
		return v(static_cast<Eigen::Index>(basis->index_of({AtomicLabel::G, n_a, n_b})));
	};
	at(0, 0) = 0.5;
	at(1, 0) = 0.5 * I * std::polar(1.0, xi_phase);
	at(0, 1) = 0.5 * I * std::polar(1.0, -xi_phase);
	at(1, 1) = -0.5;
	return StateVector(basis, std::move(v));
}

/// Writes one `label n_a n_b re im` row per basis element.
inline void write_state(std::ostream& os, const StateVector& state)
{
	const auto old_precision = os.precision(std::numeric_limits<double>::max_digits10);
	for (std::size_t i = 0; i < state.size(); ++i)
	{
		const auto& label = state.basis()[i];
		os << to_string(label.atomic) << ' ' << label.n_a << ' ' << label.n_b << ' '
		   << state[i].real() << ' ' << state[i].imag() << '\n';
	}
	os.precision(old_precision);
}

/// Reads rows written by write_state(). Blank lines and `#` comments are
/// skipped; labels not listed are zero.
inline StateVector read_state(std::istream& is, const BasisPtr& basis)
{
	CVector v = CVector::Zero(static_cast<Eigen::Index>(basis->size()));
	std::string line;
	int line_no = 0;
	while (std::getline(is, line))
	{
		++line_no;
		if (auto hash = line.find('#'); hash != std::string::npos)
			line.erase(hash);
		std::istringstream row(line);
		std::string atomic;
		if (!(row >> atomic))
			continue;
		BasisLabel label;
		double re = 0.0, im = 0.0;
		if (!(row >> label.n_a >> label.n_b >> re >> im))
			throw InvalidArgumentError("malformed state row at line " + std::to_string(line_no));
		label.atomic = parse_atomic_label(atomic);
		v(static_cast<Eigen::Index>(basis->index_of(label))) = Complex{re, im};
	}
	return StateVector(basis, std::move(v));
}

} // namespace cavityswap
