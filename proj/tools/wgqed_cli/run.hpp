#ifndef WGQED_CLI_RUN_HPP
#define WGQED_CLI_RUN_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "wgqed/ensemble.hpp"
#include "wgqed/observables.hpp"

namespace wgqed_cli {

inline constexpr const char* kToolVersion = "wgqed 1.0";

// Options shared by every subcommand. Every run is reproducible from the
// resolved option set (echoed into the output metadata).
struct GlobalOptions {
    std::string out_path;           // empty = stdout (figure: output directory)
    std::string format = "csv";    // csv | json
    std::string config_path;
    double grid_width = 20.0;
    int grid_points = 1 << 14;
    unsigned long long seed = 1234;
    double tau_max = 10.0;
    int threads = 0;  // 0 = hardware concurrency
};

struct SingleOptions {
    std::string mode = "external";  // external | waveguide | combined
    double beta = 0.01;
    double delta = 0.0;
    double omega_wg = 0.0;
    double omega_ext = 0.05;
    double rel_phase = 0.0;  // phase of omega_ext relative to omega_wg
    std::string observable = "g2_trace";
    double theta = 0.0;
};

struct EnsembleOptions {
    std::string geometry = "waveguide";  // waveguide | bragg | antibragg | combined
    double beta = 0.01;
    double delta = 0.0;
    long n = 1;
    double omega_wg = 0.05;
    double omega_ext = 0.05;
    double rel_phase = 0.0;
    std::string method = "closed";  // closed | direct (waveguide only)
    std::string observable = "psi_incoh_spectrum";
    double theta = 0.0;
};

struct SweepOptions {
    std::string geometry = "waveguide";
    double beta = 0.01;
    double delta = 0.0;
    std::string n_range = "1:100";  // lo:hi[:step]
    double omega_wg = 0.05;
    double omega_ext = 0.05;
    double rel_phase = 0.0;
    std::string observable = "g2_zero";  // g2_zero | psi_incoh_zero | alpha_out
};

struct McOptions {
    double beta = 0.01;
    long n = 2;
    long samples = 100000;
};

struct FigureOptions {
    std::string id = "fig2";
};

// Tabular result: numeric columns plus the resolved-config echo block.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, std::string>> config_block;
    std::vector<std::string> info_lines;
};

std::string format_double(double v);

// Writers; CSV dialect: comma separated, '.' decimal, '#' metadata header,
// LF line endings.
std::string render_csv(const std::string& cmd, const Table& table);
std::string render_json(const std::string& cmd, const Table& table);
void write_output(const std::string& path, const std::string& content);

// Flat key=value config files; '#'-prefixed lines are accepted with the
// prefix stripped, so an emitted config block can be reused verbatim.
std::map<std::string, std::string> load_config_file(const std::string& path);

struct NRange {
    long lo = 1, hi = 1, step = 1;
};
NRange parse_n_range(const std::string& text);  // throws std::invalid_argument

Table run_single(const GlobalOptions& g, const SingleOptions& o);
Table run_ensemble(const GlobalOptions& g, const EnsembleOptions& o);
Table run_sweep(const GlobalOptions& g, const SweepOptions& o);
Table run_mc(const GlobalOptions& g, const McOptions& o);

// Figure reproduction: one CSV per panel, written under g.out_path (default
// current directory). Returns the emitted file names.
std::vector<std::string> run_figure(const GlobalOptions& g, const FigureOptions& o);

// Shared helpers for runners.
wgqed::EnsembleResponse build_chain(const std::string& geometry, const wgqed::EmitterParams& p,
                                    const wgqed::DriveConfig& drive,
                                    const wgqed::FrequencyGrid& grid,
                                    const std::string& method = "closed");
wgqed::DriveConfig make_drive(const std::string& geometry, long n, double omega_wg,
                              double omega_ext, double rel_phase);

void parallel_for(long count, int threads, const std::function<void(long)>& body);

}  // namespace wgqed_cli

#endif
