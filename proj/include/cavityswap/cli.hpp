#pragma once

#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "collective_basis.hpp"
#include "config.hpp"
#include "experiments.hpp"
#include "full_model.hpp"
#include "gates.hpp"

namespace cavityswap
{

/// Flat `name=value` record, one scalar per line.
class ResultRecord
{
public:
	void add(const std::string& name, double value) { entries_.emplace_back(name, detail::format(value)); }
	void add(const std::string& name, const std::string& value) { entries_.emplace_back(name, value); }
	void add(const std::string& name, Complex value)
	{
		add(name + "_re", value.real());
		add(name + "_im", value.imag());
	}

	const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

	void write(std::ostream& os) const
	{
		for (const auto& [k, v] : entries_)
			os << k << '=' << v << '\n';
	}

private:
	std::vector<std::pair<std::string, std::string>> entries_;
};

/// Comma-separated table with a header row.
struct CsvTable
{
	std::vector<std::string> header;
	std::vector<std::vector<double>> rows;

	void write(std::ostream& os) const
	{
		for (std::size_t i = 0; i < header.size(); ++i)
			os << (i ? "," : "") << header[i];
		os << '\n';
		for (const auto& row : rows)
		{
			for (std::size_t i = 0; i < row.size(); ++i)
				os << (i ? "," : "") << detail::format(row[i]);
			os << '\n';
		}
	}
};

/// Two-column x y blocks, one per curve, separated by blank lines.
struct PlotData
{
	std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> curves;

	void write(std::ostream& os) const
	{
		for (std::size_t c = 0; c < curves.size(); ++c)
		{
			if (c)
				os << "\n\n";
			os << "# " << curves[c].first << '\n';
			for (auto [x, y] : curves[c].second)
				os << detail::format(x) << ' ' << detail::format(y) << '\n';
		}
	}
};

/// Everything one experiment produced, before anything is written.
struct RunOutput
{
	ResultRecord record;
	std::vector<std::pair<std::string, CsvTable>> tables;
	std::vector<std::pair<std::string, PlotData>> plots;
	std::vector<std::pair<std::string, StateVector>> states;
	bool passed = true;
};

namespace detail
{

inline void add_gate_result(ResultRecord& r, const GateResult& g)
{
	r.add("backend", to_string(g.backend));
	r.add("fidelity", g.fidelity);
	r.add("p_loss", g.p_loss);
	r.add("gate_time", g.gate_time);
	r.add("gate_time_ns", g.gate_time * 1e9);
	r.add("xi", g.xi);
	for (const auto& [label, amp] : g.amplitudes)
		r.add("amp_" + coefficient_name(label), amp);
}

inline RunOutput run_swap(const RunConfig& c)
{
	RunOutput out;
	const auto p = c.system_params();
	GateOptions options = c.gate_options();
	options.trajectory_samples = c.samples;
	const auto result = run_swap_gate(p, c.backend, c.decay, options);
	out.record.add("experiment", c.experiment);
	add_gate_result(out.record, result);
	out.record.add("xi_over_g", std::abs(result.xi) / std::abs(p.g_a));
	CVector amps(static_cast<Eigen::Index>(result.amplitudes.size()));
	const auto basis = enumerate_basis(2);
	for (std::size_t i = 0; i < basis->size(); ++i)
		amps(static_cast<Eigen::Index>(i)) = result.amplitudes.at((*basis)[i]);
	out.states.emplace_back("swap_output.state", StateVector(basis, amps));
	return out;
}

inline RunOutput run_truth_table(const RunConfig& c)
{
	RunOutput out;
	const auto p = c.system_params();
	const double t = c.t_frac * swap_gate_time(p);
	out.record.add("experiment", c.experiment);
	out.record.add("backend", to_string(c.backend));
	out.record.add("t", t);
	for (const auto& [input, state] : truth_table(p, c.backend, t, c.decay, c.gate_options()))
	{
		for (const char* key : logical_inputs)
			out.record.add("out_" + input + "_" + key,
				state.amplitude(BasisLabel{AtomicLabel::G, key[0] - '0', key[1] - '0'}));
		out.record.add("norm_" + input, norm(state));
		out.states.emplace_back("truth_table_" + input + ".state", state);
	}
	return out;
}

inline RunOutput run_conversion(const RunConfig& c)
{
	RunOutput out;
	const auto p = c.system_params();
	const double duration = c.t_frac * swap_gate_time(p);
	const double xi = std::abs(effective_coupling(p));
	const auto curve = conversion_curve(p, c.backend, duration, c.samples, c.decay, c.gate_options());
	CsvTable table{{"t", "efficiency", "sin2_xi_t"}, {}};
	PlotData plot;
	plot.curves.push_back({"efficiency", {}});
	plot.curves.push_back({"sin2_xi_t", {}});
	for (auto [t, eff] : curve)
	{
		const double analytic = std::pow(std::sin(xi * t), 2);
		table.rows.push_back({t, eff, analytic});
		plot.curves[0].second.emplace_back(t, eff);
		plot.curves[1].second.emplace_back(t, analytic);
	}
	out.record.add("experiment", c.experiment);
	out.record.add("backend", to_string(c.backend));
	out.record.add("t", duration);
	out.record.add("efficiency", curve.back().second);
	out.tables.emplace_back("conversion.csv", std::move(table));
	out.plots.emplace_back("conversion.plot", std::move(plot));
	return out;
}

inline RunOutput run_fig2_sweep(const RunConfig& c)
{
	RunOutput out;
	SweepSpec spec;
	spec.grid = c.grid;
	spec.base = c.system_params();
	spec.omega_ratio = c.omega_ratio;
	spec.backend = c.backend;
	spec.include_decay = c.decay;
	spec.options = c.gate_options();
	spec.threads = c.threads;
	const auto rows = sweep_g_over_kappa(spec);

	CsvTable table{{"g_over_kappa", "fidelity", "p_loss", "gate_time", "xi_re", "xi_im"}, {}};
	PlotData plot;
	plot.curves.push_back({"p_loss", {}});
	plot.curves.push_back({"fidelity", {}});
	for (const auto& row : rows)
	{
		const auto& r = row.result;
		table.rows.push_back({row.g_over_kappa, r.fidelity, r.p_loss, r.gate_time, r.xi.real(), r.xi.imag()});
		plot.curves[0].second.emplace_back(row.g_over_kappa, r.p_loss);
		plot.curves[1].second.emplace_back(row.g_over_kappa, r.fidelity);
	}
	out.record.add("experiment", c.experiment);
	out.record.add("points", static_cast<double>(rows.size()));
	out.tables.emplace_back("fig2_sweep.csv", std::move(table));
	out.plots.emplace_back("fig2_sweep.plot", std::move(plot));
	return out;
}

inline RunOutput run_rwa(const RunConfig& c)
{
	RunOutput out;
	const auto conv = rwa_convergence(c.multipliers, c.N, mhz_to_rate(c.g, c.units), c.gate_options(), c.threads);
	CsvTable table{{"omega_ratio", "infidelity"}, {}};
	PlotData plot;
	plot.curves.push_back({"infidelity", {}});
	for (const auto& r : conv.rows)
	{
		table.rows.push_back({r.omega_ratio, r.infidelity});
		plot.curves[0].second.emplace_back(r.omega_ratio, r.infidelity);
	}
	out.record.add("experiment", c.experiment);
	out.record.add("log_log_slope", conv.log_log_slope);
	out.tables.emplace_back("rwa_convergence.csv", std::move(table));
	out.plots.emplace_back("rwa_convergence.plot", std::move(plot));
	return out;
}

inline RunOutput run_units_report(const RunConfig& c)
{
	RunOutput out;
	const auto r = physical_units_report({c.g, c.kappa, c.gamma_value(), c.N, c.omega_ratio, c.units});
	out.record.add("experiment", c.experiment);
	out.record.add("units", to_string(c.units));
	out.record.add("g", r.g);
	out.record.add("kappa", r.kappa);
	out.record.add("gamma", r.gamma);
	out.record.add("Omega", r.Omega);
	out.record.add("xi", r.xi);
	out.record.add("xi_over_g", r.xi_over_g);
	out.record.add("gate_time", r.gate_time);
	out.record.add("gate_time_ns", r.gate_time * 1e9);
	out.record.add("photon_lifetime", r.photon_lifetime);
	out.record.add("photon_lifetime_us", r.photon_lifetime * 1e6);
	out.record.add("ratio", r.ratio);

	CsvTable scaling{{"N", "xi_fixed_omega", "xi_scaled_omega"}, {}};
	for (const auto& row : coupling_scaling({100, 400, 1'600, 10'000, 40'000}, r.g, c.omega_ratio))
		scaling.rows.push_back({static_cast<double>(row.N), row.xi_fixed_omega, row.xi_scaled_omega});
	out.tables.emplace_back("coupling_scaling.csv", std::move(scaling));
	return out;
}

/// Collective model against the brute-force one at each requested atom
/// count, in units where g = 1.
inline RunOutput run_oracle_check(const RunConfig& c)
{
	RunOutput out;
	out.record.add("experiment", c.experiment);
	const auto physical = c.system_params();
	const double scale = std::abs(physical.g_a) > 0.0 ? std::abs(physical.g_a) : 1.0;
	double worst = 0.0;
	for (double a : c.atoms)
	{
		const int n = static_cast<int>(a);
		SystemParams p = physical;
		p.N = n;
		p.g_a /= scale;
		p.g_b /= scale;
		p.kappa_a /= scale;
		p.kappa_b /= scale;
		p.gamma_1 /= scale;
		p.gamma_2 /= scale;
		// Keep the drive at omega_ratio * sqrt(n) * g for the small ensemble.
		p.Omega = c.omega ? physical.Omega / scale : c.omega_ratio * std::sqrt(static_cast<double>(n)) * std::abs(p.g_a);
		if (!c.decay)
			p = p.without_decay();
		const auto elements = oracle::check_matrix_elements(p);
		const double t = p.Omega > 0.0 && std::abs(effective_coupling(p)) > 0.0 ? swap_gate_time(p) : 5.0;
		const auto dyn = oracle::compare_dynamics(p, t, initial_swap_state(enumerate_basis(2)), c.tolerance);
		const std::string suffix = "_n" + std::to_string(n);
		out.record.add("element_error" + suffix, elements.element_error);
		out.record.add("closure_error" + suffix, elements.closure_error);
		out.record.add("max_deviation" + suffix, dyn.max_deviation);
		out.record.add("max_leakage" + suffix, dyn.max_leakage);
		worst = std::max({worst, dyn.max_deviation, elements.element_error});
	}
	out.passed = worst <= c.oracle_threshold;
	out.record.add("max_deviation", worst);
	out.record.add("threshold", c.oracle_threshold);
	out.record.add("pass", out.passed ? "true" : "false");
	return out;
}

} // namespace detail

/// Computes an experiment without touching the filesystem.
inline RunOutput compute(const RunConfig& config)
{
	config.validate();
	const auto& e = config.experiment;
	if (e == "swap") return detail::run_swap(config);
	if (e == "truth-table") return detail::run_truth_table(config);
	if (e == "conversion") return detail::run_conversion(config);
	if (e == "fig2-sweep") return detail::run_fig2_sweep(config);
	if (e == "rwa") return detail::run_rwa(config);
	if (e == "units-report") return detail::run_units_report(config);
	if (e == "oracle-check") return detail::run_oracle_check(config);
	throw ConfigError("unknown experiment '" + e + "'");
}

/// Writes results.txt plus any tables, plot files and states into `dir`.
inline std::vector<std::filesystem::path> write_outputs(const RunOutput& out, const std::filesystem::path& dir)
{
	std::filesystem::create_directories(dir);
	std::vector<std::filesystem::path> written;
	auto open = [&](const std::string& name) {
		written.push_back(dir / name);
		std::ofstream f(written.back(), std::ios::binary);
		if (!f)
			throw Error("cannot open " + written.back().string() + " for writing");
		return f;
	};
	{
		auto f = open("results.txt");
		out.record.write(f);
	}
	for (const auto& [name, table] : out.tables)
	{
		auto f = open(name);
		table.write(f);
	}
	for (const auto& [name, plot] : out.plots)
	{
		auto f = open(name);
		plot.write(f);
	}
	for (const auto& [name, state] : out.states)
	{
		auto f = open(name);
		write_state(f, state);
	}
	return written;
}

/// Runs the configured experiment, writes its files and echoes the record to
/// `log`. Returns 0 on success, 1 when an experiment check fails (oracle-check)
/// and 2 on errors, which are reported on `err`.
inline int run(const RunConfig& config, std::ostream& log, std::ostream& err)
{
	try
	{
		const RunOutput out = compute(config);
		const auto files = write_outputs(out, config.out);
		out.record.write(log);
		for (const auto& f : files)
			log << "# wrote " << f.string() << '\n';
		return out.passed ? 0 : 1;
	}
	catch (const std::exception& e)
	{
		err << "error: " << e.what() << '\n';
		return 2;
	}
}

} // namespace cavityswap
