#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Compliant explicit reference governor: closed-loop simulation front end"};
    app.require_subcommand(1);

    std::string run_path;
    cerg::cli::RunOptions run_options;
    CLI::App* run = app.add_subcommand("run", "Simulate one scenario and write its artifacts");
    run->add_option("file", run_path, "scenario file")->required();
    run->add_flag("--no-governor", run_options.no_governor,
                  "hold the applied reference at the raw target (baseline)");
    run->add_option("--out", run_options.out_dir, "output directory");
    run->add_flag("--plots", run_options.plots, "write SVG plots");

    std::string compare_path;
    std::string compare_out;
    CLI::App* compare =
        app.add_subcommand("compare", "Run governed and baseline variants side by side");
    compare->add_option("file", compare_path, "scenario file")->required();
    compare->add_option("--out", compare_out, "output directory");

    std::string validate_path;
    CLI::App* validate = app.add_subcommand("validate", "Parse and check a scenario file");
    validate->add_option("file", validate_path, "scenario file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (run->parsed()) return cerg::cli::cmd_run(run_path, run_options);
    if (compare->parsed()) return cerg::cli::cmd_compare(compare_path, compare_out);
    if (validate->parsed()) return cerg::cli::cmd_validate(validate_path);
    return 2;
}
