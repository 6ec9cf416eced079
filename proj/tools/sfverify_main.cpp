#include <CLI11.hpp>
#include <iostream>

#include "sfverify/cli.hpp"

int main(int argc, char** argv) {
  using sfv::cli::RunConfig;
  RunConfig cfg;
  CLI::App app{"sfverify: check generated chart code against its chart"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-o,--output", cfg.output, "Write the result here instead of standard output");
  };
  auto add_run = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "Trace generator seed")->capture_default_str();
    sub->add_option("--traces", cfg.trace_count, "Number of co-simulation traces")->capture_default_str();
    sub->add_option("--max-len", cfg.trace_len_max, "Maximum trace length")->capture_default_str();
    sub->add_option("--lo", cfg.domain_lo, "Smallest generated input value")->capture_default_str();
    sub->add_option("--hi", cfg.domain_hi, "Largest generated input value")->capture_default_str();
    sub->add_option("--broadcast-depth", cfg.broadcast_depth_limit, "Broadcast nesting bound")->capture_default_str();
    sub->add_option("-j,--workers", cfg.workers, "Co-simulation worker threads")->capture_default_str();
  };
  std::map<std::string, sfv::refine::MatchMode> modes{{"normalized", sfv::refine::MatchMode::Normalized},
                                                      {"exact", sfv::refine::MatchMode::Exact}};
  std::map<std::string, sfv::cli::ReportFormat> formats{{"text", sfv::cli::ReportFormat::Text},
                                                        {"json", sfv::cli::ReportFormat::Json}};

  auto* validate = app.add_subcommand("validate", "Check a chart for well-formedness");
  validate->add_option("chart", cfg.chart, "Chart file (.sfc)")->required();

  auto* simulate = app.add_subcommand("simulate", "Run a chart over a trace, one JSON line per step");
  simulate->add_option("chart", cfg.chart, "Chart file (.sfc)")->required();
  simulate->add_option("trace", cfg.trace, "Trace file")->required();
  add_common(simulate);

  auto* generate = app.add_subcommand("generate", "Emit the reference implementation of a chart");
  generate->add_option("chart", cfg.chart, "Chart file (.sfc)")->required();
  generate->add_flag("--c", cfg.emit_c, "Emit C instead of program text");
  add_common(generate);

  auto* retrieve = app.add_subcommand("retrieve", "Print the retrieve relation and its property check");
  retrieve->add_option("chart", cfg.chart, "Chart file (.sfc)")->required();
  retrieve->add_option("implementation", cfg.implementation, "Implementation (.sfi or .c); default: generated");
  retrieve->add_option("--format", cfg.report_format, "text or json")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  retrieve->add_option("--lo", cfg.domain_lo, "Smallest data value checked")->capture_default_str();
  retrieve->add_option("--hi", cfg.domain_hi, "Largest data value checked")->capture_default_str();
  add_common(retrieve);

  auto* verify = app.add_subcommand("verify", "Verify an implementation against a chart");
  verify->add_option("chart", cfg.chart, "Chart file (.sfc)")->required();
  verify->add_option("implementation", cfg.implementation, "Implementation (.sfi or .c)")->required();
  verify->add_option("--match", cfg.match_mode, "normalized or exact")
      ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
  verify->add_option("--format", cfg.report_format, "text or json")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  verify->add_flag("--no-cosim{false}", cfg.cosimulate, "Skip co-simulation");
  add_run(verify);
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : sfv::cli::kInvalid;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  return sfv::cli::run(cfg, std::cout, std::cerr);
}
