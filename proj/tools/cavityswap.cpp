#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "cavityswap/cli.hpp"

int main(int argc, char** argv)
{
	CLI::App app{"Collective-atom two-mode cavity simulator: swap gate, frequency conversion, sweeps"};
	app.require_subcommand(1);

	std::string config_path;
	std::string out_dir;
	std::string units;
	int threads = 0;

	for (auto name : cavityswap::experiment_names)
	{
		auto* sub = app.add_subcommand(std::string(name), "run the " + std::string(name) + " experiment");
		sub->add_option("--config", config_path, "key = value config file (sections per experiment)");
		sub->add_option("--out", out_dir, "output directory (default: config 'out' or .)");
		sub->add_option("--units", units, "how MHz figures become rates")->check(CLI::IsMember({"angular", "plain"}));
		sub->add_option("--threads", threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
	}

	CLI11_PARSE(app, argc, argv);
	const std::string experiment = app.get_subcommands().front()->get_name();

	std::string text;
	if (!config_path.empty())
	{
		std::ifstream f(config_path);
		if (!f)
		{
			std::cerr << "error: cannot read config " << config_path << '\n';
			return 2;
		}
		std::ostringstream ss;
		ss << f.rdbuf();
		text = ss.str();
	}

	cavityswap::RunConfig config;
	try
	{
		config = cavityswap::parse_config(text, experiment);
		if (!out_dir.empty())
			config.out = out_dir;
		if (!units.empty())
			config.units = cavityswap::parse_unit_convention(units);
		if (threads > 0)
			config.threads = threads;
		config.validate();
	}
	catch (const std::exception& e)
	{
		std::cerr << "error: " << e.what() << '\n';
		return 2;
	}
	return cavityswap::run(config, std::cout, std::cerr);
}
