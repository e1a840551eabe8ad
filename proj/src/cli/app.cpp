#include <CLI11.hpp>
#include <functional>
#include <ostream>

#include "shiftkl/cli.hpp"
#include "shiftkl/errors.hpp"

namespace shiftkl::cli {

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Shifted-composition KL bounds, schedules and Langevin sampler checks", "shiftkl"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<double> constant;
  std::string suite;
  app.add_option("--config", config_path, "key=value configuration file");
  app.add_option("--out", out_path, "CSV output path (default: standard output)");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--constant", constant, "multiplicative constant for order-of-magnitude formulas");
  app.add_option("--set", overrides, "override one key, key=value")->take_all();
  app.set_version_flag("--version", kToolVersion);

  const std::vector<std::pair<std::string, std::function<int(CommandContext&)>>> commands{
      {"bound", cmd_bound},   {"shifts", cmd_shifts},          {"plan", cmd_plan},
      {"sample", cmd_sample}, {"local-errors", cmd_local_errors}, {"verify", cmd_verify}};
  const std::map<std::string, std::string> help{
      {"bound", "evaluate KL and W2 bounds"},
      {"shifts", "compute a shift schedule and its objective"},
      {"plan", "step size and iteration counts per scheme and setting"},
      {"sample", "run a sampler on a diagonal quadratic target"},
      {"local-errors", "one-step weak and strong errors against the diffusion"},
      {"verify", "run a verification suite (toy, shifts, gaussian-lmc, local-errors, slopes)"}};
  for (const auto& [name, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name, help.at(name));
    if (name == "verify") sub->add_option("suite", suite, "suite name")->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    CommandContext ctx;
    ctx.out = &out;
    if (!config_path.empty()) ctx.config = Config::load(config_path);
    for (const auto& o : overrides) ctx.config.apply_override(o);
    if (seed) ctx.config.set("seed", std::to_string(*seed));
    if (constant) ctx.config.set("constant", format_number(*constant));
    if (!out_path.empty()) ctx.out_path = out_path;
    for (const auto& [name, fn] : commands) {
      if (app.got_subcommand(name)) {
        ctx.command = name;
        if (name == "verify") ctx.positional.push_back(suite);
        return fn(ctx);
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace shiftkl::cli
