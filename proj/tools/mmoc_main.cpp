#include <string>

#include "CLI11.hpp"
#include "mmoc/runconfig.hpp"

namespace {

int run_solve(const std::string& target, const std::string& out_dir,
              bool all_presets, const std::string& guess_override) {
  using namespace mmoc;
  try {
    if (all_presets) {
      if (!target.empty())
        return report_failure(
            "InvalidConfig", "--all-presets does not take a target",
            exit_code::kInvalidConfig);
      if (!guess_override.empty())
        return report_failure(
            "InvalidConfig",
            "--guess cannot be combined with --all-presets; each preset "
            "carries its own guess",
            exit_code::kInvalidConfig);
      int first_failure = exit_code::kSuccess;
      for (const std::string& name : preset_names()) {
        RunConfig cfg = preset_config(name);
        if (!out_dir.empty()) cfg.output_path = out_dir;
        const int rc = run_config(cfg);
        if (first_failure == exit_code::kSuccess) first_failure = rc;
      }
      return first_failure;
    }

    if (target.empty())
      return report_failure("InvalidConfig",
                            "missing target: pass a preset name or a JSON "
                            "config path (or --all-presets)",
                            exit_code::kInvalidConfig);

    RunConfig cfg = load_config(target);
    if (!out_dir.empty()) cfg.output_path = out_dir;
    if (!guess_override.empty()) {
      cfg.guess_kind = guess_override;
      cfg.guess_values.clear();
    }
    return run_config(cfg);
  } catch (const UnknownPreset& e) {
    return report_failure("UnknownPreset", e.what(),
                          exit_code::kUnknownPreset);
  } catch (const UnknownKey& e) {
    return report_failure("UnknownKey", e.what(), exit_code::kUnknownKey);
  } catch (const ParseError& e) {
    return report_failure("ParseError", e.what(), exit_code::kParseError);
  } catch (const IOFailure& e) {
    return report_failure("IOFailure", e.what(), exit_code::kIOFailure);
  } catch (const std::exception& e) {
    return report_failure("Internal", e.what(), exit_code::kInternal);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "min-max trajectory solver for single-axis spacecraft rotation"};
  app.require_subcommand(1);

  auto* solve =
      app.add_subcommand("solve", "solve a preset or config and emit results");
  std::string target;
  std::string out_dir;
  std::string guess_override;
  bool all_presets = false;
  solve->add_option("target", target,
                    "preset name or path to a JSON config file");
  solve->add_option("--out", out_dir,
                    "directory for emitted files (default: cwd)");
  solve->add_flag("--all-presets", all_presets,
                  "run every built-in preset in sequence");
  solve
      ->add_option("--guess", guess_override,
                   "override the initial velocity guess generator")
      ->check(CLI::IsMember({"zero", "drift"}));

  CLI11_PARSE(app, argc, argv);

  return run_solve(target, out_dir, all_presets, guess_override);
}
