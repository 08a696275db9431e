#include "wlest/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wlest/io.hpp"
#include "wlest/simulation.hpp"

namespace wlest::cli {

namespace {

void write_text_file(const std::filesystem::path& path,
                     const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw ValidationError("failed writing '" + path.string() + "'");
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    fn();
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace

int cmd_estimate(const EstimateOptions& opts, std::ostream& err) {
  return guarded(err, [&] {
    const LinearModel<double> model = io::parse_model_file(opts.model);
    const ComplexVector y = io::read_measurements_file(opts.measurements);
    const EstimateResult<double> result = estimate(opts.estimator, model, y);
    std::ostringstream os;
    io::write_estimate(os, result);
    write_text_file(opts.out, os.str());
  });
}

int cmd_simulate(const SimulateOptions& opts, std::ostream& err) {
  if (opts.trials && *opts.trials == 0) {
    err << "error: --trials must be positive\n";
    return 1;
  }
  return guarded(err, [&] {
    SweepConfig config = io::parse_sweep_config_file(opts.config);
    if (opts.trials) config.trials = *opts.trials;
    if (opts.seed) config.seed = *opts.seed;
    if (opts.workers) config.workers = *opts.workers;
    const BmseTable table = run_sweep(config);
    write_text_file(opts.out, io::results_to_csv(table));
  });
}

int cmd_plot(const PlotOptions& opts, std::ostream& err) {
  return guarded(err, [&] {
    std::ifstream in(opts.input);
    if (!in) throw ParseError("cannot open '" + opts.input.string() + "'");
    const io::ResultsCsv results = io::read_results(in);
    write_text_file(opts.out, io::render_svg(results));
  });
}

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Linear and widely linear estimation of real parameter vectors "
               "from complex measurements",
               "wlest"};
  app.require_subcommand(1);

  EstimateOptions est;
  std::string estimator_flag;
  auto* estimate_cmd = app.add_subcommand(
      "estimate", "Apply one estimator to a model and a measurement vector");
  estimate_cmd->add_option("--model", est.model, "Model JSON file")->required();
  estimate_cmd
      ->add_option("--measurements", est.measurements,
                   "Measurement CSV (re,im)")
      ->required();
  estimate_cmd
      ->add_option("--estimator", estimator_flag,
                   "blue | bwlue | wlmmse | re-blue | rbwlue")
      ->required()
      ->check(CLI::IsMember({"blue", "bwlue", "wlmmse", "re-blue", "re_blue",
                             "rbwlue"}));
  estimate_cmd->add_option("--out", est.out, "Output CSV")->required();

  SimulateOptions sim;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  auto* simulate_cmd =
      app.add_subcommand("simulate", "Run the BMSE sweep and write a CSV");
  simulate_cmd->add_option("--config", sim.config, "Sweep config JSON")
      ->required();
  simulate_cmd->add_option("--out", sim.out, "Results CSV")->required();
  auto* trials_opt =
      simulate_cmd
          ->add_option("--trials", trials, "Override trials per grid point")
          ->check(CLI::PositiveNumber);
  auto* seed_opt = simulate_cmd->add_option("--seed", seed, "Override seed");
  auto* workers_opt = simulate_cmd->add_option(
      "--workers", workers, "Worker threads (0 = all cores)");

  PlotOptions plot;
  auto* plot_cmd =
      app.add_subcommand("plot", "Render a results CSV as a log-log SVG");
  plot_cmd->add_option("--input", plot.input, "Results CSV")->required();
  plot_cmd->add_option("--out", plot.out, "Output SVG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 1;
  }

  if (estimate_cmd->parsed()) {
    est.estimator = parse_estimator(estimator_flag);
    return cmd_estimate(est, err);
  }
  if (simulate_cmd->parsed()) {
    if (trials_opt->count() > 0) sim.trials = trials;
    if (seed_opt->count() > 0) sim.seed = seed;
    if (workers_opt->count() > 0) sim.workers = workers;
    return cmd_simulate(sim, err);
  }
  return cmd_plot(plot, err);
}

}  // namespace wlest::cli
