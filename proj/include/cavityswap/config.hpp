#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "common.hpp"
#include "experiments.hpp"
#include "gates.hpp"
#include "hamiltonians.hpp"

namespace cavityswap
{

inline constexpr std::array<std::string_view, 7> experiment_names{
	"swap", "truth-table", "conversion", "fig2-sweep", "rwa", "units-report", "oracle-check"};

/// Everything a CLI run needs. Rates are MHz figures converted with `units`
/// (see mhz_to_rate); unset optionals fall back to the shared value
/// (g_a, g_b -> g; kappa_a, kappa_b -> kappa; gamma -> kappa; gamma_1, gamma_2 -> gamma;
/// omega -> omega_ratio * sqrt(N) * g).
struct RunConfig
{
	std::string experiment;

	long N = 40'000;
	double g = 16.0;
	std::optional<double> g_a;
	std::optional<double> g_b;
	std::optional<double> omega;
	double omega_ratio = 20.0;
	double phi = 0.0;
	double kappa = 1.4;
	std::optional<double> kappa_a;
	std::optional<double> kappa_b;
	std::optional<double> gamma;
	std::optional<double> gamma_1;
	std::optional<double> gamma_2;
	UnitConvention units = UnitConvention::Angular;

	Backend backend = Backend::Full;
	bool decay = true;
	/// Evolution time for truth-table and conversion, as a fraction of pi/(2|xi|).
	double t_frac = 1.0;
	int samples = 20;
	std::vector<double> grid{1.0, 2.0, 5.0, 10.0, 20.0};
	std::vector<double> multipliers{5.0, 10.0, 20.0, 40.0};
	std::vector<double> atoms{2.0, 3.0};
	double tolerance = 1e-10;
	double oracle_threshold = 1e-8;
	std::string out = ".";
	int threads = 1;

	friend bool operator==(const RunConfig&, const RunConfig&) = default;

	double gamma_value() const { return gamma.value_or(kappa); }

	/// Physical parameters in s^-1.
	SystemParams system_params() const
	{
		SystemParams p;
		p.N = N;
		const double g_rate = mhz_to_rate(g, units);
		p.g_a = g_a ? mhz_to_rate(*g_a, units) : g_rate;
		p.g_b = g_b ? mhz_to_rate(*g_b, units) : g_rate;
		p.Omega = omega ? mhz_to_rate(*omega, units) : omega_ratio * std::sqrt(static_cast<double>(N)) * g_rate;
		p.phi = phi;
		p.kappa_a = mhz_to_rate(kappa_a.value_or(kappa), units);
		p.kappa_b = mhz_to_rate(kappa_b.value_or(kappa), units);
		p.gamma_1 = mhz_to_rate(gamma_1.value_or(gamma_value()), units);
		p.gamma_2 = mhz_to_rate(gamma_2.value_or(gamma_value()), units);
		return p;
	}

	GateOptions gate_options() const
	{
		GateOptions o;
		o.tolerance = tolerance;
		return o;
	}

	/// Throws ConfigError naming the offending field.
	void validate() const
	{
		if (std::find(experiment_names.begin(), experiment_names.end(), experiment) == experiment_names.end())
			throw ConfigError("unknown experiment '" + experiment + "'");
		auto non_negative = [](const char* name, double v) {
			if (!(v >= 0.0) || !std::isfinite(v))
				throw ConfigError(std::string(name) + " must be finite and >= 0");
		};
		auto non_negative_opt = [&](const char* name, const std::optional<double>& v) {
			if (v)
				non_negative(name, *v);
		};
		if (N < 1)
			throw ConfigError("N must be >= 1");
		if (!std::isfinite(g))
			throw ConfigError("g must be finite");
		non_negative("omega_ratio", omega_ratio);
		non_negative_opt("omega", omega);
		non_negative("kappa", kappa);
		non_negative_opt("kappa_a", kappa_a);
		non_negative_opt("kappa_b", kappa_b);
		non_negative_opt("gamma", gamma);
		non_negative_opt("gamma_1", gamma_1);
		non_negative_opt("gamma_2", gamma_2);
		if (!std::isfinite(phi))
			throw ConfigError("phi must be finite");
		if (!(t_frac >= 0.0) || !std::isfinite(t_frac))
			throw ConfigError("t_frac must be finite and >= 0");
		if (samples < 1)
			throw ConfigError("samples must be >= 1");
		if (!(tolerance > 0.0 && tolerance <= 1e-4))
			throw ConfigError("tolerance must lie in (0, 1e-4]");
		if (!(oracle_threshold > 0.0))
			throw ConfigError("oracle_threshold must be > 0");
		if (threads < 1)
			throw ConfigError("threads must be >= 1");
		if (grid.empty())
			throw ConfigError("grid must not be empty");
		for (std::size_t i = 0; i < grid.size(); ++i)
			if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1])))
				throw ConfigError("grid must be positive and strictly increasing");
		if (multipliers.empty())
			throw ConfigError("multipliers must not be empty");
		for (double m : multipliers)
			if (!(m > 0.0))
				throw ConfigError("multipliers must be > 0");
		for (double a : atoms)
			if (a != std::floor(a) || a < 2 || a > 4)
				throw ConfigError("atoms must be integers in [2, 4]");
	}
};

namespace detail
{

inline constexpr std::array<std::string_view, 27> config_keys{"experiment", "N", "g", "g_a", "g_b", "omega",
	"omega_ratio", "phi", "kappa", "kappa_a", "kappa_b", "gamma", "gamma_1", "gamma_2", "units", "backend",
	"decay", "t_frac", "samples", "grid", "multipliers", "atoms", "tolerance", "oracle_threshold", "out",
	"threads", "include_decay"};

inline std::size_t edit_distance(std::string_view a, std::string_view b)
{
	std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
	for (std::size_t j = 0; j <= b.size(); ++j)
		prev[j] = j;
	for (std::size_t i = 1; i <= a.size(); ++i)
	{
		cur[0] = i;
		for (std::size_t j = 1; j <= b.size(); ++j)
			cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
		std::swap(prev, cur);
	}
	return prev[b.size()];
}

template <std::size_t M>
std::string_view nearest(std::string_view word, const std::array<std::string_view, M>& candidates)
{
	std::string_view best = candidates.front();
	std::size_t best_d = std::numeric_limits<std::size_t>::max();
	for (auto c : candidates)
		if (auto d = edit_distance(word, c); d < best_d)
			best = c, best_d = d;
	return best;
}

inline std::string trim(std::string_view s)
{
	const auto b = s.find_first_not_of(" \t\r");
	if (b == std::string_view::npos)
		return {};
	const auto e = s.find_last_not_of(" \t\r");
	return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(const std::string& key, const std::string& value)
{
	std::istringstream is(value);
	is.imbue(std::locale::classic());
	double v = 0.0;
	std::string rest;
	if (!(is >> v) || (is >> rest))
		throw ConfigError("value of '" + key + "' is not a number: '" + value + "'");
	return v;
}

inline long parse_long(const std::string& key, const std::string& value)
{
	long v = 0;
	auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
	if (ec != std::errc{} || ptr != value.data() + value.size())
	{
		// Accept 4e4-style integers.
		const double d = parse_double(key, value);
		if (d != std::floor(d) || std::abs(d) > 1e15)
			throw ConfigError("value of '" + key + "' is not an integer: '" + value + "'");
		return static_cast<long>(d);
	}
	return v;
}

inline bool parse_bool(const std::string& key, const std::string& value)
{
	if (value == "true" || value == "yes" || value == "1" || value == "on")
		return true;
	if (value == "false" || value == "no" || value == "0" || value == "off")
		return false;
	throw ConfigError("value of '" + key + "' is not a boolean: '" + value + "'");
}

inline std::vector<double> parse_list(const std::string& key, const std::string& value)
{
	std::vector<double> out;
	std::string item;
	std::istringstream is(value);
	while (std::getline(is, item, ','))
		if (auto t = trim(item); !t.empty())
			out.push_back(parse_double(key, t));
	return out;
}

inline std::string format(double v)
{
	std::ostringstream os;
	os.imbue(std::locale::classic());
	os.precision(std::numeric_limits<double>::max_digits10);
	os << v;
	return os.str();
}

inline std::string format_list(const std::vector<double>& v)
{
	std::string out;
	for (std::size_t i = 0; i < v.size(); ++i)
		out += (i ? ", " : "") + format(v[i]);
	return out;
}

inline void apply_key(RunConfig& c, const std::string& key, const std::string& value)
{
	if (key == "experiment") c.experiment = value;
	else if (key == "N") c.N = parse_long(key, value);
	else if (key == "g") c.g = parse_double(key, value);
	else if (key == "g_a") c.g_a = parse_double(key, value);
	else if (key == "g_b") c.g_b = parse_double(key, value);
	else if (key == "omega") c.omega = parse_double(key, value);
	else if (key == "omega_ratio") c.omega_ratio = parse_double(key, value);
	else if (key == "phi") c.phi = parse_double(key, value);
	else if (key == "kappa") c.kappa = parse_double(key, value);
	else if (key == "kappa_a") c.kappa_a = parse_double(key, value);
	else if (key == "kappa_b") c.kappa_b = parse_double(key, value);
	else if (key == "gamma") c.gamma = parse_double(key, value);
	else if (key == "gamma_1") c.gamma_1 = parse_double(key, value);
	else if (key == "gamma_2") c.gamma_2 = parse_double(key, value);
	else if (key == "units")
	{
		try { c.units = parse_unit_convention(value); }
		catch (const InvalidArgumentError& e) { throw ConfigError(e.what()); }
	}
	else if (key == "backend")
	{
		try { c.backend = parse_backend(value); }
		catch (const InvalidArgumentError& e) { throw ConfigError(e.what()); }
	}
	else if (key == "decay" || key == "include_decay") c.decay = parse_bool(key, value);
	else if (key == "t_frac") c.t_frac = parse_double(key, value);
	else if (key == "samples") c.samples = static_cast<int>(parse_long(key, value));
	else if (key == "grid") c.grid = parse_list(key, value);
	else if (key == "multipliers") c.multipliers = parse_list(key, value);
	else if (key == "atoms") c.atoms = parse_list(key, value);
	else if (key == "tolerance") c.tolerance = parse_double(key, value);
	else if (key == "oracle_threshold") c.oracle_threshold = parse_double(key, value);
	else if (key == "out") c.out = value;
	else if (key == "threads") c.threads = static_cast<int>(parse_long(key, value));
	else
		throw ConfigError("unknown key '" + key + "' (did you mean '" + std::string(nearest(key, config_keys)) + "'?)");
}

} // namespace detail

/// Parses an INI-like document:
///
///     # comment
///     units = angular        # keys before any section apply to every experiment
///     [fig2-sweep]
///     grid = 1, 2, 5, 10, 20
///
/// Section headers name experiments. The experiment run is `experiment` when
/// given (e.g. from the command line), else the `experiment` key, else the
/// only section present. Keys from other sections are ignored but still
/// checked. Missing keys take their defaults.
inline RunConfig parse_config(std::string_view text, std::optional<std::string> experiment = std::nullopt)
{
	using Entries = std::vector<std::pair<std::string, std::string>>;
	Entries global;
	std::map<std::string, Entries> sections;
	std::vector<std::string> section_order;
	Entries* current = &global;

	std::istringstream is{std::string(text)};
	std::string raw;
	int line_no = 0;
	while (std::getline(is, raw))
	{
		++line_no;
		if (auto hash = raw.find('#'); hash != std::string::npos)
			raw.erase(hash);
		const std::string line = detail::trim(raw);
		if (line.empty())
			continue;
		if (line.front() == '[')
		{
			if (line.back() != ']')
				throw ConfigError("malformed section header at line " + std::to_string(line_no));
			const std::string name = detail::trim(std::string_view(line).substr(1, line.size() - 2));
			if (std::find(experiment_names.begin(), experiment_names.end(), name) == experiment_names.end())
				throw ConfigError("unknown experiment section '" + name + "' (did you mean '"
					+ std::string(detail::nearest(name, experiment_names)) + "'?)");
			if (!sections.count(name))
				section_order.push_back(name);
			current = &sections[name];
			continue;
		}
		const auto eq = line.find('=');
		if (eq == std::string::npos)
			throw ConfigError("expected 'key = value' at line " + std::to_string(line_no));
		const std::string key = detail::trim(std::string_view(line).substr(0, eq));
		const std::string value = detail::trim(std::string_view(line).substr(eq + 1));
		if (std::find(detail::config_keys.begin(), detail::config_keys.end(), key) == detail::config_keys.end())
			throw ConfigError("unknown key '" + key + "' at line " + std::to_string(line_no) + " (did you mean '"
				+ std::string(detail::nearest(key, detail::config_keys)) + "'?)");
		current->emplace_back(key, value);
	}

	RunConfig config;
	for (const auto& [k, v] : global)
		detail::apply_key(config, k, v);
	if (experiment)
		config.experiment = *experiment;
	if (config.experiment.empty())
	{
		if (section_order.size() != 1)
			throw ConfigError("missing experiment: give an 'experiment' key, a single section, or name it on the command line");
		config.experiment = section_order.front();
	}
	if (auto it = sections.find(config.experiment); it != sections.end())
		for (const auto& [k, v] : it->second)
			detail::apply_key(config, k, v);
	config.validate();
	return config;
}

/// Inverse of parse_config(): parse_config(serialize_config(c)) == c.
inline std::string serialize_config(const RunConfig& c)
{
	std::ostringstream os;
	using detail::format;
	os << "[" << c.experiment << "]\n";
	os << "N = " << c.N << '\n';
	os << "g = " << format(c.g) << '\n';
	auto opt = [&](const char* key, const std::optional<double>& v) {
		if (v)
			os << key << " = " << format(*v) << '\n';
	};
	opt("g_a", c.g_a);
	opt("g_b", c.g_b);
	opt("omega", c.omega);
	os << "omega_ratio = " << format(c.omega_ratio) << '\n';
	os << "phi = " << format(c.phi) << '\n';
	os << "kappa = " << format(c.kappa) << '\n';
	opt("kappa_a", c.kappa_a);
	opt("kappa_b", c.kappa_b);
	opt("gamma", c.gamma);
	opt("gamma_1", c.gamma_1);
	opt("gamma_2", c.gamma_2);
	os << "units = " << to_string(c.units) << '\n';
	os << "backend = " << to_string(c.backend) << '\n';
	os << "decay = " << (c.decay ? "true" : "false") << '\n';
	os << "t_frac = " << format(c.t_frac) << '\n';
	os << "samples = " << c.samples << '\n';
	os << "grid = " << detail::format_list(c.grid) << '\n';
	os << "multipliers = " << detail::format_list(c.multipliers) << '\n';
	os << "atoms = " << detail::format_list(c.atoms) << '\n';
	os << "tolerance = " << format(c.tolerance) << '\n';
	os << "oracle_threshold = " << format(c.oracle_threshold) << '\n';
	os << "out = " << c.out << '\n';
	os << "threads = " << c.threads << '\n';
	return os.str();
}

} // namespace cavityswap
