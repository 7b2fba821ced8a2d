#include "run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "wgqed/errors.hpp"
#include "wgqed/single_emitter.hpp"

namespace wgqed_cli {

using wgqed::Complex;
using wgqed::DriveConfig;
using wgqed::DriveMode;
using wgqed::EmitterParams;
using wgqed::EnsembleResponse;
using wgqed::FrequencyGrid;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
}

std::string render_csv(const std::string& cmd, const Table& table) {
    std::ostringstream os;
    os << "# " << kToolVersion << "\n";
    os << "# cmd=" << cmd << "\n";
    os << "# config-begin\n";
    for (const auto& [k, v] : table.config_block) os << "# " << k << "=" << v << "\n";
    os << "# config-end\n";
    for (const auto& line : table.info_lines) os << "# " << line << "\n";
    for (size_t c = 0; c < table.columns.size(); ++c) {
        os << table.columns[c] << (c + 1 < table.columns.size() ? "," : "");
    }
    os << "\n";
    for (const auto& row : table.rows) {
        for (size_t c = 0; c < row.size(); ++c) {
            os << format_double(row[c]) << (c + 1 < row.size() ? "," : "");
        }
        os << "\n";
    }
    return os.str();
}

std::string render_json(const std::string& cmd, const Table& table) {
    nlohmann::ordered_json j;
    j["tool"] = kToolVersion;
    j["cmd"] = cmd;
    nlohmann::ordered_json cfg;
    for (const auto& [k, v] : table.config_block) cfg[k] = v;
    j["config"] = cfg;
    j["info"] = table.info_lines;
    j["columns"] = table.columns;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::array();
        for (double v : row) {
            if (std::isfinite(v)) {
                r.push_back(v);
            } else {
                r.push_back(format_double(v));  // "inf" / "nan" as strings
            }
        }
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j.dump(1) + "\n";
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    out << content;
}

std::map<std::string, std::string> load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::map<std::string, std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        // Accept emitted metadata lines verbatim: strip one leading '#'.
        std::string s = line;
        size_t start = s.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        if (s[start] == '#') {
            s = s.substr(start + 1);
            start = s.find_first_not_of(" \t");
            if (start == std::string::npos) continue;
        } else {
            s = s.substr(start);
            start = 0;
        }
        s = s.substr(start);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.pop_back();
        if (s.empty() || s == "config-begin" || s == "config-end") continue;
        const size_t eq = s.find('=');
        if (eq == std::string::npos) continue;  // non key=value metadata
        std::string key = s.substr(0, eq);
        std::string value = s.substr(eq + 1);
        while (!key.empty() && key.back() == ' ') key.pop_back();
        if (key == "cmd") continue;  // informational
        out[key] = value;
    }
    return out;
}

NRange parse_n_range(const std::string& text) {
    NRange r;
    const char* s = text.c_str();
    char* end = nullptr;
    r.lo = std::strtol(s, &end, 10);
    if (end == s || *end != ':') throw std::invalid_argument("n-range must be lo:hi[:step], got '" + text + "'");
    s = end + 1;
    r.hi = std::strtol(s, &end, 10);
    if (end == s) throw std::invalid_argument("n-range must be lo:hi[:step], got '" + text + "'");
    if (*end == ':') {
        s = end + 1;
        r.step = std::strtol(s, &end, 10);
        if (end == s || *end != '\0')
            throw std::invalid_argument("n-range must be lo:hi[:step], got '" + text + "'");
    } else if (*end != '\0') {
        throw std::invalid_argument("n-range must be lo:hi[:step], got '" + text + "'");
    }
    if (r.lo < 0 || r.hi < r.lo || r.step < 1)
        throw std::invalid_argument("n-range requires 0 <= lo <= hi and step >= 1");
    return r;
}

DriveConfig make_drive(const std::string& geometry, long n, double omega_wg, double omega_ext,
                       double rel_phase) {
    DriveConfig d;
    d.n_emitters = n;
    const Complex ext = omega_ext * std::exp(Complex(0.0, rel_phase));
    if (geometry == "waveguide") {
        d.mode = DriveMode::Waveguide;
        d.omega_wg = omega_wg;
    } else if (geometry == "bragg") {
        d.mode = DriveMode::Bragg;
        d.omega_ext = ext;
    } else if (geometry == "antibragg") {
        d.mode = DriveMode::AntiBragg;
        d.omega_ext = ext;
    } else if (geometry == "combined") {
        d.mode = DriveMode::Combined;
        d.omega_wg = omega_wg;
        d.omega_ext = ext;
    } else if (geometry == "external") {
        d.mode = DriveMode::ExternalSingle;
        d.omega_ext = ext;
    } else {
        throw std::invalid_argument("unknown geometry '" + geometry + "'");
    }
    return d;
}

EnsembleResponse build_chain(const std::string& geometry, const EmitterParams& p,
                             const DriveConfig& drive, const FrequencyGrid& grid,
                             const std::string& method) {
    if (method != "closed" && method != "direct") {
        throw std::invalid_argument("method must be 'closed' or 'direct'");
    }
    if (geometry == "waveguide") {
        return method == "direct" ? wgqed::waveguide_chain_direct(p, drive, grid)
                                  : wgqed::waveguide_chain(p, drive, grid);
    }
    if (method == "direct") {
        throw std::invalid_argument("method 'direct' applies to the waveguide geometry only");
    }
    if (geometry == "bragg") return wgqed::bragg_chain(p, drive, grid);
    if (geometry == "antibragg") return wgqed::antibragg_chain(p, drive, grid);
    if (geometry == "combined") return wgqed::combined_chain(p, drive, grid);
    throw std::invalid_argument("unknown geometry '" + geometry + "'");
}

void parallel_for(long count, int threads, const std::function<void(long)>& body) {
    int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (nthreads < 1) nthreads = 1;
    nthreads = static_cast<int>(std::min<long>(nthreads, count));
    if (nthreads <= 1) {
        for (long i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::future<void>> futures;
    futures.reserve(static_cast<size_t>(nthreads));
    for (int t = 0; t < nthreads; ++t) {
        futures.push_back(std::async(std::launch::async, [&, t] {
            for (long i = t; i < count; i += nthreads) body(i);
        }));
    }
    for (auto& f : futures) f.get();
}

namespace {

void append_globals(Table& t, const GlobalOptions& g) {
    t.config_block.emplace_back("grid-width", format_double(g.grid_width));
    t.config_block.emplace_back("grid-points", std::to_string(g.grid_points));
    t.config_block.emplace_back("seed", std::to_string(g.seed));
    t.config_block.emplace_back("tau-max", format_double(g.tau_max));
    t.config_block.emplace_back("format", g.format);
}

void append_flags(Table& t, const wgqed::ValidityFlags& flags) {
    const auto msgs = flags.messages();
    if (msgs.empty()) {
        t.info_lines.push_back("flags: none");
    } else {
        for (const auto& m : msgs) t.info_lines.push_back("flag: " + m);
    }
}

FrequencyGrid grid_of(const GlobalOptions& g) { return FrequencyGrid(g.grid_width, g.grid_points); }

// Trace rows restricted to |tau| <= tau_max.
void fill_trace_rows(Table& t, const std::vector<double>& tau, const std::vector<double>& g2,
                     double tau_max) {
    for (size_t j = 0; j < tau.size(); ++j) {
        if (std::abs(tau[j]) <= tau_max) t.rows.push_back({tau[j], g2[j]});
    }
}

}  // namespace

Table run_single(const GlobalOptions& g, const SingleOptions& o) {
    Table t;
    t.config_block.emplace_back("mode", o.mode);
    t.config_block.emplace_back("beta", format_double(o.beta));
    t.config_block.emplace_back("delta", format_double(o.delta));
    t.config_block.emplace_back("omega-wg", format_double(o.omega_wg));
    t.config_block.emplace_back("omega-ext", format_double(o.omega_ext));
    t.config_block.emplace_back("rel-phase", format_double(o.rel_phase));
    t.config_block.emplace_back("observable", o.observable);
    t.config_block.emplace_back("theta", format_double(o.theta));
    append_globals(t, g);

    const EmitterParams p(o.beta, o.delta);
    const FrequencyGrid grid = grid_of(g);
    wgqed::SingleEmitterResponse r = [&] {
        if (o.mode == "external") {
            return wgqed::response_external(
                p, make_drive("external", 1, o.omega_wg, o.omega_ext, o.rel_phase));
        }
        if (o.mode == "waveguide") {
            DriveConfig d = make_drive("waveguide", 1, o.omega_wg, o.omega_ext, o.rel_phase);
            return wgqed::response_waveguide(p, d);
        }
        if (o.mode == "combined") {
            return wgqed::response_combined(
                p, make_drive("combined", 1, o.omega_wg, o.omega_ext, o.rel_phase));
        }
        throw std::invalid_argument("mode must be external, waveguide, or combined");
    }();
    append_flags(t, r.flags);

    if (o.observable == "g2_trace") {
        const auto trace = wgqed::g2_trace(r, grid);
        t.columns = {"tau_gamma", "g2"};
        fill_trace_rows(t, trace.tau, trace.g2, g.tau_max);
    } else if (o.observable == "g2_zero") {
        t.columns = {"g2"};
        t.rows.push_back({wgqed::g2_zero(r)});
    } else if (o.observable == "psi_incoh_spectrum") {
        t.columns = {"omega_over_gamma", "re_psi", "im_psi", "abs_psi"};
        for (int k = 0; k < grid.n_points(); ++k) {
            const Complex v = r.psi_incoh_freq(grid.omega(k));
            t.rows.push_back({grid.omega(k), v.real(), v.imag(), std::abs(v)});
        }
    } else if (o.observable == "psi_incoh_zero") {
        const Complex v = wgqed::psi_incoh_at_zero(r);
        t.columns = {"re_psi", "im_psi", "abs_psi"};
        t.rows.push_back({v.real(), v.imag(), std::abs(v)});
    } else if (o.observable == "squeezing") {
        const auto s = wgqed::squeezing_spectrum(r, grid, o.theta);
        t.columns = {"omega_over_gamma", "S_theta", "optimal_theta", "S_min"};
        for (size_t k = 0; k < s.omega.size(); ++k) {
            t.rows.push_back({s.omega[k], s.s_theta[k], s.optimal_theta[k], s.s_min[k]});
        }
    } else {
        throw std::invalid_argument("unknown observable '" + o.observable + "'");
    }
    return t;
}

Table run_ensemble(const GlobalOptions& g, const EnsembleOptions& o) {
    Table t;
    t.config_block.emplace_back("geometry", o.geometry);
    t.config_block.emplace_back("beta", format_double(o.beta));
    t.config_block.emplace_back("delta", format_double(o.delta));
    t.config_block.emplace_back("n", std::to_string(o.n));
    t.config_block.emplace_back("omega-wg", format_double(o.omega_wg));
    t.config_block.emplace_back("omega-ext", format_double(o.omega_ext));
    t.config_block.emplace_back("rel-phase", format_double(o.rel_phase));
    t.config_block.emplace_back("method", o.method);
    t.config_block.emplace_back("observable", o.observable);
    t.config_block.emplace_back("theta", format_double(o.theta));
    append_globals(t, g);

    const EmitterParams p(o.beta, o.delta);
    const FrequencyGrid grid = grid_of(g);
    const DriveConfig drive = make_drive(o.geometry, o.n, o.omega_wg, o.omega_ext, o.rel_phase);
    const EnsembleResponse r = build_chain(o.geometry, p, drive, grid, o.method);
    append_flags(t, r.flags);
    t.info_lines.push_back("psi_norm_ref=|alpha_sc1^2| (first-emitter coherent scattering)");

    if (o.observable == "g2_trace") {
        const auto trace = wgqed::g2_trace(r);
        t.columns = {"tau_gamma", "g2"};
        fill_trace_rows(t, trace.tau, trace.g2, g.tau_max);
        if (trace.coherent_power_zero) t.info_lines.push_back("note: " + trace.note);
    } else if (o.observable == "g2_zero") {
        t.columns = {"g2"};
        t.rows.push_back({wgqed::g2_zero(r)});
    } else if (o.observable == "psi_incoh_spectrum") {
        const double ref = std::abs(r.alpha_sc1_sq);
        t.columns = {"omega_over_gamma", "re_psi", "im_psi", "abs_psi", "abs_psi_norm"};
        for (int k = 0; k < grid.n_points(); ++k) {
            const Complex v = r.psi_incoh_freq[static_cast<size_t>(k)];
            t.rows.push_back({grid.omega(k), v.real(), v.imag(), std::abs(v), std::abs(v) / ref});
        }
    } else if (o.observable == "psi_incoh_zero") {
        const Complex v = wgqed::psi_incoh_at_zero(r);
        t.columns = {"re_psi", "im_psi", "abs_psi"};
        t.rows.push_back({v.real(), v.imag(), std::abs(v)});
    } else if (o.observable == "squeezing") {
        const auto s = wgqed::squeezing_spectrum(r, o.theta);
        t.columns = {"omega_over_gamma", "S_theta", "optimal_theta", "S_min"};
        for (size_t k = 0; k < s.omega.size(); ++k) {
            t.rows.push_back({s.omega[k], s.s_theta[k], s.optimal_theta[k], s.s_min[k]});
        }
    } else {
        throw std::invalid_argument("unknown observable '" + o.observable + "'");
    }
    return t;
}

Table run_sweep(const GlobalOptions& g, const SweepOptions& o) {
    Table t;
    t.config_block.emplace_back("geometry", o.geometry);
    t.config_block.emplace_back("beta", format_double(o.beta));
    t.config_block.emplace_back("delta", format_double(o.delta));
    t.config_block.emplace_back("n", o.n_range);
    t.config_block.emplace_back("omega-wg", format_double(o.omega_wg));
    t.config_block.emplace_back("omega-ext", format_double(o.omega_ext));
    t.config_block.emplace_back("rel-phase", format_double(o.rel_phase));
    t.config_block.emplace_back("observable", o.observable);
    append_globals(t, g);

    const EmitterParams p(o.beta, o.delta);
    const FrequencyGrid grid = grid_of(g);
    const NRange range = parse_n_range(o.n_range);
    std::vector<long> ns;
    for (long n = range.lo; n <= range.hi; n += range.step) ns.push_back(n);

    if (o.observable == "g2_zero") {
        t.columns = {"n", "g2"};
    } else if (o.observable == "psi_incoh_zero") {
        t.columns = {"n", "re_psi", "im_psi", "abs_psi"};
    } else if (o.observable == "alpha_out") {
        t.columns = {"n", "re_alpha_out", "im_alpha_out", "abs_alpha_out"};
    } else {
        throw std::invalid_argument("sweep observable must be g2_zero, psi_incoh_zero, or alpha_out");
    }

    t.rows.assign(ns.size(), {});
    wgqed::ValidityFlags merged;
    std::mutex flag_mutex;
    parallel_for(static_cast<long>(ns.size()), g.threads, [&](long i) {
        const long n = ns[static_cast<size_t>(i)];
        const DriveConfig drive = make_drive(o.geometry, n, o.omega_wg, o.omega_ext, o.rel_phase);
        const EnsembleResponse r = build_chain(o.geometry, p, drive, grid);
        std::vector<double> row;
        if (o.observable == "g2_zero") {
            row = {static_cast<double>(n), wgqed::g2_zero(r)};
        } else if (o.observable == "psi_incoh_zero") {
            const Complex v = wgqed::psi_incoh_at_zero(r);
            row = {static_cast<double>(n), v.real(), v.imag(), std::abs(v)};
        } else {
            const Complex v = r.alpha_out.value;
            row = {static_cast<double>(n), v.real(), v.imag(), std::abs(v)};
        }
        t.rows[static_cast<size_t>(i)] = std::move(row);
        std::lock_guard<std::mutex> lock(flag_mutex);
        merged.merge(r.flags);
    });
    append_flags(t, merged);
    return t;
}

Table run_mc(const GlobalOptions& g, const McOptions& o) {
    Table t;
    t.config_block.emplace_back("beta", format_double(o.beta));
    t.config_block.emplace_back("n", std::to_string(o.n));
    t.config_block.emplace_back("samples", std::to_string(o.samples));
    append_globals(t, g);

    const EmitterParams p(o.beta, 0.0);
    DriveConfig d = make_drive("external", o.n, 0.0, 0.05, 0.0);
    const auto est = wgqed::random_distance_g2_mc(p, d, o.samples, g.seed);
    t.info_lines.push_back("estimator: mean |(sum e^{i phi})^2 - sum e^{2 i phi}|^2 / 2 over mean |sum e^{i phi}|^2 squared");
    t.columns = {"n", "g2", "std_error", "samples"};
    t.rows.push_back({static_cast<double>(o.n), est.g2_zero, est.std_error,
                      static_cast<double>(est.n_samples)});
    return t;
}

}  // namespace wgqed_cli
