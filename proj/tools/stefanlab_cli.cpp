// Command line front end. Each subcommand expects a config whose `mode`
// matches it; --out overrides the configured output directory. Exit codes:
// 0 success, 2 invalid or unreadable config, 3 solver failure, 4 failed
// acceptance criteria.
#include <cstdio>
#include <string>

#include "CLI11.hpp"

#include "stefanlab/runner.hpp"

namespace {

int execute(const std::string& config_path, const std::string& out_dir,
            stefanlab::RunMode expected) {
  stefanlab::ConfigMap map;
  try {
    map = stefanlab::load_config_file(config_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  const auto it = map.values.find("mode");
  const std::string want = stefanlab::mode_name(expected);
  if (it != map.values.end() && it->second != want) {
    std::fprintf(stderr, "violation: mode: config says '%s', this command runs '%s'\n",
                 it->second.c_str(), want.c_str());
    return 2;
  }
  map.values["mode"] = want;

  stefanlab::RunOutcome outcome;
  try {
    outcome = stefanlab::run(map, out_dir);
  } catch (const stefanlab::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  for (const auto& msg : outcome.messages)
    std::fprintf(outcome.code == 0 ? stdout : stderr, "%s\n", msg.c_str());
  return outcome.code;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for a degenerate parabolic regularization study"};
  app.require_subcommand(1);

  struct Cmd {
    const char* name;
    const char* help;
    stefanlab::RunMode mode;
  };
  const Cmd cmds[] = {
      {"solve", "run one initial value problem and store its trajectory",
       stefanlab::RunMode::solve},
      {"sweep", "solve across a ladder of regularization strengths",
       stefanlab::RunMode::visc_sweep},
      {"l1sweep", "solve under a concentrating source at fixed mass",
       stefanlab::RunMode::l1_sweep},
      {"verify", "run the acceptance criteria and report each verdict",
       stefanlab::RunMode::verify},
      {"trunclab", "exercise the truncation lemmas on synthetic families",
       stefanlab::RunMode::trunclab},
  };

  struct Args {
    std::string config;
    std::string out;
  };
  Args args[5];
  for (int i = 0; i < 5; ++i) {
    CLI::App* sub = app.add_subcommand(cmds[i].name, cmds[i].help);
    sub->add_option("--config", args[i].config, "path to a key = value config or a manifest")
        ->required();
    sub->add_option("--out", args[i].out, "output directory (overrides output_dir)");
  }

  CLI11_PARSE(app, argc, argv);

  for (int i = 0; i < 5; ++i)
    if (app.get_subcommand(cmds[i].name)->parsed())
      return execute(args[i].config, args[i].out, cmds[i].mode);
  return 2;
}
