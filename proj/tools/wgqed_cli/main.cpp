#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "run.hpp"
#include "wgqed/errors.hpp"

namespace {

using namespace wgqed_cli;

struct Cli {
    GlobalOptions global;
    SingleOptions single;
    EnsembleOptions ensemble;
    SweepOptions sweep;
    McOptions mc;
    FigureOptions figure;

    CLI::App app{"weak-drive collective nonlinear response of waveguide-coupled emitter chains"};
    CLI::App* sub_single = nullptr;
    CLI::App* sub_ensemble = nullptr;
    CLI::App* sub_sweep = nullptr;
    CLI::App* sub_mc = nullptr;
    CLI::App* sub_figure = nullptr;

    Cli() {
        app.require_subcommand(1);
        app.add_option("--out", global.out_path,
                       "output path (figure: output directory); default stdout");
        app.add_option("--format", global.format, "csv | json")
            ->check(CLI::IsMember({"csv", "json"}));
        app.add_option("--config", global.config_path,
                       "flat key=value config file; command-line flags override");
        app.add_option("--grid-width", global.grid_width, "frequency grid half-width W (units Gamma)");
        app.add_option("--grid-points", global.grid_points, "frequency grid points (power of two >= 1024)");
        app.add_option("--seed", global.seed, "random seed for Monte Carlo");
        app.add_option("--tau-max", global.tau_max, "trace window |tau| <= tau-max (units 1/Gamma)");
        app.add_option("--threads", global.threads, "worker threads for sweeps (0 = hardware)");

        sub_single = app.add_subcommand("single", "single-emitter response");
        sub_single->add_option("--mode", single.mode, "external | waveguide | combined");
        sub_single->add_option("--beta", single.beta, "coupling efficiency (0, 1)");
        sub_single->add_option("--delta", single.delta, "detuning (units Gamma)");
        sub_single->add_option("--omega-wg", single.omega_wg, "guided Rabi amplitude (units Gamma)");
        sub_single->add_option("--omega-ext", single.omega_ext, "external Rabi amplitude (units Gamma)");
        sub_single->add_option("--rel-phase", single.rel_phase, "phase of omega-ext relative to omega-wg");
        sub_single->add_option("--observable", single.observable,
                               "g2_trace | g2_zero | psi_incoh_spectrum | psi_incoh_zero | squeezing");
        sub_single->add_option("--theta", single.theta, "quadrature angle for squeezing");

        sub_ensemble = app.add_subcommand("ensemble", "N-emitter chain response");
        sub_ensemble->add_option("--geometry", ensemble.geometry,
                                 "waveguide | bragg | antibragg | combined");
        sub_ensemble->add_option("--beta", ensemble.beta, "coupling efficiency (0, 1)");
        sub_ensemble->add_option("--delta", ensemble.delta, "detuning (units Gamma)");
        sub_ensemble->add_option("--n", ensemble.n, "number of emitters");
        sub_ensemble->add_option("--omega-wg", ensemble.omega_wg, "guided Rabi amplitude");
        sub_ensemble->add_option("--omega-ext", ensemble.omega_ext, "external Rabi amplitude");
        sub_ensemble->add_option("--rel-phase", ensemble.rel_phase, "relative drive phase");
        sub_ensemble->add_option("--method", ensemble.method, "closed | direct (waveguide oracle)");
        sub_ensemble->add_option("--observable", ensemble.observable,
                                 "g2_trace | g2_zero | psi_incoh_spectrum | psi_incoh_zero | squeezing");
        sub_ensemble->add_option("--theta", ensemble.theta, "quadrature angle for squeezing");

        sub_sweep = app.add_subcommand("sweep", "observable versus atom number");
        sub_sweep->add_option("--geometry", sweep.geometry,
                              "waveguide | bragg | antibragg | combined");
        sub_sweep->add_option("--beta", sweep.beta, "coupling efficiency (0, 1)");
        sub_sweep->add_option("--delta", sweep.delta, "detuning (units Gamma)");
        sub_sweep->add_option("--n", sweep.n_range, "atom-number range lo:hi[:step]");
        sub_sweep->add_option("--omega-wg", sweep.omega_wg, "guided Rabi amplitude");
        sub_sweep->add_option("--omega-ext", sweep.omega_ext, "external Rabi amplitude");
        sub_sweep->add_option("--rel-phase", sweep.rel_phase, "relative drive phase");
        sub_sweep->add_option("--observable", sweep.observable,
                              "g2_zero | psi_incoh_zero | alpha_out");

        sub_mc = app.add_subcommand("mc", "random-distance Monte Carlo g2(0)");
        sub_mc->add_option("--beta", mc.beta, "coupling efficiency (0, 1)");
        sub_mc->add_option("--n", mc.n, "number of emitters");
        sub_mc->add_option("--samples", mc.samples, "Monte Carlo samples (>= 100)");

        sub_figure = app.add_subcommand("figure", "reproduce study figure data as CSV");
        sub_figure->add_option("--id", figure.id,
                               "fig2 | fig3 | fig4 | fig5 | fig6 | fig7 | fig8 | fig9 | figB1");

        // Global flags may appear after the subcommand as well.
        for (CLI::App* sub : {sub_single, sub_ensemble, sub_sweep, sub_mc, sub_figure}) {
            sub->fallthrough();
        }
    }
};

// Merge config-file values for options the user did not pass, by re-parsing a
// rebuilt argument list (config pairs are inserted only for absent keys, so
// CLI11's single-use policy stays satisfied).
std::vector<std::string> merge_config_args(Cli& pass1, const std::vector<std::string>& original) {
    if (pass1.global.config_path.empty()) return original;
    const auto cfg = load_config_file(pass1.global.config_path);
    CLI::App* sub = pass1.app.get_subcommands().at(0);

    std::vector<std::string> global_extra, sub_extra;
    for (const auto& [key, value] : cfg) {
        const std::string flag = "--" + key;
        CLI::Option* opt = nullptr;
        bool is_sub = false;
        try {
            opt = sub->get_option(flag);
            is_sub = true;
        } catch (const CLI::OptionNotFound&) {
            try {
                opt = pass1.app.get_option(flag);
            } catch (const CLI::OptionNotFound&) {
                throw std::invalid_argument("unknown config key '" + key + "'");
            }
        }
        if (opt->count() > 0) continue;  // command line wins
        auto& dst = is_sub ? sub_extra : global_extra;
        dst.push_back(flag);
        dst.push_back(value);
    }
    std::vector<std::string> merged;
    merged.insert(merged.end(), global_extra.begin(), global_extra.end());
    merged.insert(merged.end(), original.begin(), original.end());
    merged.insert(merged.end(), sub_extra.begin(), sub_extra.end());
    return merged;
}

int dispatch(Cli& cli) {
    const std::string cmd = cli.app.get_subcommands().at(0)->get_name();
    if (cmd == "figure") {
        const auto files = run_figure(cli.global, cli.figure);
        for (const auto& f : files) std::fprintf(stderr, "wrote %s\n", f.c_str());
        return 0;
    }
    Table table;
    if (cmd == "single") {
        table = run_single(cli.global, cli.single);
    } else if (cmd == "ensemble") {
        table = run_ensemble(cli.global, cli.ensemble);
    } else if (cmd == "sweep") {
        table = run_sweep(cli.global, cli.sweep);
    } else if (cmd == "mc") {
        table = run_mc(cli.global, cli.mc);
    }
    const std::string content = (cli.global.format == "json") ? render_json(cmd, table)
                                                              : render_csv(cmd, table);
    write_output(cli.global.out_path, content);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    try {
        Cli pass1;
        try {
            // CLI11 expects (and consumes) a reversed argument vector.
            std::vector<std::string> rev(args.rbegin(), args.rend());
            pass1.app.parse(rev);
        } catch (const CLI::CallForHelp& e) {
            return pass1.app.exit(e);
        } catch (const CLI::ParseError& e) {
            pass1.app.exit(e);
            return 2;
        }
        const auto merged = merge_config_args(pass1, args);
        if (merged.size() == args.size()) {
            return dispatch(pass1);
        }
        Cli pass2;
        try {
            std::vector<std::string> rev(merged.rbegin(), merged.rend());
            pass2.app.parse(rev);
        } catch (const CLI::ParseError& e) {
            pass2.app.exit(e);
            return 2;
        }
        return dispatch(pass2);
    } catch (const wgqed::GridTruncationError& e) {
        std::fprintf(stderr, "error: %s\nhint: rerun with a larger --grid-width\n", e.what());
        return 3;
    } catch (const wgqed::NoPhysicalAngleError& e) {
        std::fprintf(stderr, "error: %s\nhint: lower the order m or increase the spacing\n",
                     e.what());
        return 3;
    } catch (const wgqed::SaturatedOpticalDepthError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const wgqed::UnsupportedGeometryError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
