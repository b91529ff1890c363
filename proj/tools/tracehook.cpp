// tracehook: a miniature EVM with real-time transaction trace properties
// Copyright 2026 The tracehook Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tracehook/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"miniature EVM with hook-checked transaction trace properties"};
    app.require_subcommand(1);

    tracehook::RunOptions run_opts;
    CLI::App* run = app.add_subcommand("run", "execute a scenario file");
    run->add_option("scenario", run_opts.scenario_path, "scenario JSON file")->required();
    run->add_option("--trace-out", run_opts.trace_out,
                    "write the last transaction's trace JSON to this path");
    run->add_flag("--quiet", run_opts.quiet, "suppress receipt output");

    tracehook::CheckOptions check_opts;
    CLI::App* check = app.add_subcommand("check", "evaluate properties over a stored trace");
    check->add_option("--trace", check_opts.trace_path, "trace JSON file")->required();
    check->add_option("--properties", check_opts.properties_path, "property file (.pltl)");
    check->add_option("--registry", check_opts.registry_path,
                      "scenario file supplying the flashloan provider registry");
    check->add_option("--at", check_opts.at, "'hooks' or a trace position")
        ->default_val("hooks");
    check->add_option("--only", check_opts.only,
                      "property names to check (defaults to all in --properties)");

    std::string parse_path;
    CLI::App* parse = app.add_subcommand("parse", "parse and pretty-print a property file");
    parse->add_option("file", parse_path, "property file (.pltl)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : tracehook::kExitUsage;
    }

    if (std::getenv("TRACEHOOK_DEBUG") != nullptr)
        run_opts.debug = true;

    if (run->parsed())
        return tracehook::cmd_run(run_opts, std::cout, std::cerr);
    if (check->parsed())
        return tracehook::cmd_check(check_opts, std::cout, std::cerr);
    if (parse->parsed())
        return tracehook::cmd_parse(parse_path, std::cout, std::cerr);
    return tracehook::kExitUsage;
}
