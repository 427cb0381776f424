#include <iostream>

#include <CLI11.hpp>

#include "bfree/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Subspaces of states unaffected by the interaction part of a split generator"};
    app.require_subcommand(1);

    bfree::cli::SubspaceOptions sub_opts;
    auto* sub = app.add_subcommand(
        "subspace", "Compute the invariant subspace annihilated by the interaction part");
    sub->add_option("--model", sub_opts.model, "Model file or catalog:NAME")->required();
    sub->add_option("--tol", sub_opts.tol, "Explicit rank tolerance (default: automatic)");
    sub->add_option("--out", sub_opts.out, "Report JSON path")->required();
    sub->add_option("--sector-n", sub_opts.sector_n,
                    "Restrict to the excitation-number sector n (two-mode model)");
    sub->add_option("--max-power", sub_opts.max_power, "Power cap for the common-eigenvector test");

    bfree::cli::VerifyOptions ver_opts;
    auto* ver = app.add_subcommand("verify",
                                   "Propagate a state and compare full against free evolution");
    ver->add_option("--model", ver_opts.model, "Model file or catalog:NAME")->required();
    ver->add_option("--state", ver_opts.state, "State file (state_vector or density_matrix)")
        ->required();
    ver->add_option("--t-max", ver_opts.t_max, "End of the time grid (default 10)");
    ver->add_option("--t-steps", ver_opts.t_steps, "Number of grid points (default 101)");
    ver->add_option("--tol", ver_opts.tol, "Verdict tolerance (default 1e-8 or BFREE_TOL)");
    ver->add_option("--out", ver_opts.out, "Report JSON path; CSV lands next to it")->required();

    bfree::cli::ShemeshOptions sh_opts;
    auto* sh = app.add_subcommand("shemesh", "Common-eigenvector test for the generator pair");
    sh->add_option("--model", sh_opts.model, "Model file or catalog:NAME")->required();
    sh->add_option("--max-power", sh_opts.max_power, "Power cap (default min(n-1, 12))");
    sh->add_option("--out", sh_opts.out, "Report JSON path")->required();

    auto* cat = app.add_subcommand("catalog", "List, inspect or export the built-in models");
    cat->require_subcommand(1);
    auto* cat_list = cat->add_subcommand("list", "List catalog entries");
    std::string show_name;
    auto* cat_show = cat->add_subcommand("show", "Describe one catalog entry");
    cat_show->add_option("name", show_name, "Catalog model name")->required();
    std::string export_name, export_path;
    auto* cat_export = cat->add_subcommand("export", "Write a catalog entry as a model file");
    cat_export->add_option("name", export_name, "Catalog model name")->required();
    cat_export->add_option("path", export_path, "Output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : bfree::cli::kExitValidation;
    }

    if (sub->parsed()) return bfree::cli::cmd_subspace(sub_opts, std::cerr);
    if (ver->parsed()) return bfree::cli::cmd_verify(ver_opts, std::cerr);
    if (sh->parsed()) return bfree::cli::cmd_shemesh(sh_opts, std::cerr);
    if (cat_list->parsed()) return bfree::cli::cmd_catalog_list(std::cout, std::cerr);
    if (cat_show->parsed()) return bfree::cli::cmd_catalog_show(show_name, std::cout, std::cerr);
    if (cat_export->parsed())
        return bfree::cli::cmd_catalog_export(export_name, export_path, std::cerr);
    return bfree::cli::kExitValidation;
}
