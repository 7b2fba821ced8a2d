#include "wgqed/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "wgqed/core.hpp"
#include "wgqed/errors.hpp"
#include "wgqed/single_emitter.hpp"

namespace wgqed {

void BraggGeometry::validate() const {
    if (!(lattice_spacing > 0.0) || !(wavelength > 0.0)) {
        throw std::invalid_argument("lattice spacing and wavelength must be positive");
    }
    if (lattice_spacing < wavelength) {
        throw std::invalid_argument(
            "lattice spacing must be >= the free-space wavelength (near-field coupling between "
            "emitters is not modeled)");
    }
    if (!(n_eff >= 1.0)) {
        throw std::invalid_argument("effective index must be >= 1");
    }
}

namespace {

double angle_from_cos(const BraggGeometry& geom, double m_eff) {
    geom.validate();
    const double c = m_eff * geom.wavelength / geom.lattice_spacing - geom.n_eff;
    if (std::abs(c) > 1.0) {
        throw NoPhysicalAngleError(geom.order, geom.lattice_spacing, geom.n_eff, c);
    }
    return std::acos(c);
}

}  // namespace

double bragg_angle(const BraggGeometry& geom) {
    return angle_from_cos(geom, static_cast<double>(geom.order));
}

double anti_bragg_angle(const BraggGeometry& geom) {
    return angle_from_cos(geom, static_cast<double>(geom.order) + 0.5);
}

namespace {

// Fallback guard for the geometric closed form. The cancellation error of
// [a^N - b^N]/(a - b) grows like eps * |a^N| / (N |a - b| / |a|), so the guard
// must scale with the magnitudes; below it the direct sum is exact enough.
constexpr double kDegenerateDenominator = 1e-4;

// sum_{n=1}^{N} a^{n-1} b^{N-n}: s_k = a s_{k-1} + b^k built with a running
// power of b (multiplications only, stable for |a|, |b| <= 1).
Complex cascade_sum(Complex a, Complex b, long n) {
    if (n <= 0) return Complex(0.0, 0.0);
    Complex s(1.0, 0.0);  // k = 0 term of s_k recurrence
    Complex bpow(1.0, 0.0);
    for (long k = 1; k < n; ++k) {
        bpow *= b;
        s = s * a + bpow;
    }
    return s;
}

// Closed-form geometric bracket [a^N - b^N] / [a - b] with the direct-sum
// fallback at (near-)degenerate denominators. a = t_Delta^2,
// b = t_{Delta+omega} t_{Delta-omega}; omega = 0 lands in the fallback, which
// evaluates to N a^{N-1} there.
Complex chain_bracket(Complex a, Complex b, long n) {
    const Complex den = a - b;
    if (std::abs(den) < kDegenerateDenominator * std::max(std::abs(a), std::abs(b))) {
        return cascade_sum(a, b, n);
    }
    return (powi(a, n) - powi(b, n)) / den;
}

struct UnitChain {
    // Everything per unit drive amplitude: alpha_out = Omega * alpha_out_unit,
    // psi_coh = Omega^2 * coh_unit, psi_incoh(omega) = Omega^2 * incoh_unit(omega).
    Complex alpha_out_unit;
    Complex coh_unit;
    std::function<Complex(double)> incoh_unit;
    std::optional<Complex> ratio_tau0;  // psi_incoh(0)/psi_coh closed form (N <= 1)
    Complex alpha_sc1_sq_unit;          // first-emitter alpha_sc^2 per Omega^2
};

EnsembleResponse assemble(const EmitterParams& p, const DriveConfig& drive,
                          const FrequencyGrid& grid, DriveMode geometry, Complex drive_amp,
                          const UnitChain& u, ValidityFlags flags) {
    EnsembleResponse r{geometry, p, drive, grid,
                       ComplexAmplitude{},  ComplexAmplitude{}, {}, nullptr,
                       {},   nullptr, std::nullopt, Complex{}, flags};
    const Complex amp2 = drive_amp * drive_amp;
    r.alpha_out = {drive_amp * u.alpha_out_unit, AmplitudeUnit::SqrtFlux};
    r.psi_coh = {amp2 * u.coh_unit, AmplitudeUnit::Flux};
    r.alpha_sc1_sq = amp2 * u.alpha_sc1_sq_unit;

    const int n = grid.n_points();
    r.psi_incoh_freq.resize(static_cast<size_t>(n));
    const bool coh_zero = (u.coh_unit == Complex(0.0, 0.0));
    if (!coh_zero) r.incoh_over_coh.resize(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        const Complex unit = u.incoh_unit(grid.omega(k));
        r.psi_incoh_freq[static_cast<size_t>(k)] = amp2 * unit;
        if (!coh_zero) r.incoh_over_coh[static_cast<size_t>(k)] = unit / u.coh_unit;
    }
    auto incoh_unit = u.incoh_unit;
    r.psi_incoh_freq_fn = [incoh_unit, amp2](double w) { return amp2 * incoh_unit(w); };
    if (!coh_zero) {
        const Complex coh = u.coh_unit;
        r.incoh_over_coh_fn = [incoh_unit, coh](double w) { return incoh_unit(w) / coh; };
    }
    r.incoh_over_coh_tau0 = u.ratio_tau0;
    return r;
}

// Normalized spectrum of the resonant chain sum:
//   incoh_unit(omega) = psi_tilde(omega) * sum_n t^{2(n-1)} (t_+ t_-)^{N-n}
// shared by the waveguide (any detuning) and Bragg (resonant) geometries.
std::function<Complex(double)> chain_incoh_unit(const EmitterParams& p, long n_emitters,
                                                bool direct) {
    const double beta = p.beta;
    const double delta = p.delta;
    const Complex td2 = [&] {
        const Complex t = trans_coeff(beta, delta);
        return t * t;
    }();
    return [beta, delta, td2, n_emitters, direct](double w) {
        const Complex pair = trans_coeff(beta, delta + w) * trans_coeff(beta, delta - w);
        const Complex bracket = direct ? cascade_sum(td2, pair, n_emitters)
                                       : chain_bracket(td2, pair, n_emitters);
        EmitterParams pp(beta, delta);
        return incoherent_freq_unit(pp, w) * bracket;
    };
}

void require_resonant(const EmitterParams& p, const char* what) {
    if (std::abs(p.delta) > 1e-12) {
        std::ostringstream os;
        os << what << " is restricted to resonant drive (delta = 0), got delta = " << p.delta;
        throw UnsupportedGeometryError(os.str());
    }
}

UnitChain waveguide_unit(const EmitterParams& p, long n, bool direct) {
    UnitChain u;
    const double beta = p.beta;
    const Complex t = trans_coeff(beta, p.delta);
    const Complex g = gen_coeff(beta, p.delta);
    const Complex tN = powi(t, n);
    u.alpha_out_unit = tN / (2.0 * std::sqrt(beta));
    u.coh_unit = tN * tN / (4.0 * beta);
    u.incoh_unit = chain_incoh_unit(p, n, direct);
    u.alpha_sc1_sq_unit = g * g / (4.0 * beta);
    if (n == 0) u.ratio_tau0 = Complex(0.0, 0.0);
    if (n == 1) u.ratio_tau0 = -(g * g) / (t * t);
    return u;
}

}  // namespace

EnsembleResponse waveguide_chain(const EmitterParams& p, const DriveConfig& drive,
                                 const FrequencyGrid& grid) {
    if (drive.mode != DriveMode::Waveguide) {
        throw std::invalid_argument("waveguide_chain requires Waveguide drive mode");
    }
    drive.validate();
    return assemble(p, drive, grid, DriveMode::Waveguide, drive.omega_wg,
                    waveguide_unit(p, drive.n_emitters, false), make_flags(p, drive));
}

EnsembleResponse waveguide_chain_direct(const EmitterParams& p, const DriveConfig& drive,
                                        const FrequencyGrid& grid) {
    if (drive.mode != DriveMode::Waveguide) {
        throw std::invalid_argument("waveguide_chain_direct requires Waveguide drive mode");
    }
    drive.validate();
    return assemble(p, drive, grid, DriveMode::Waveguide, drive.omega_wg,
                    waveguide_unit(p, drive.n_emitters, true), make_flags(p, drive));
}

EnsembleResponse bragg_chain(const EmitterParams& p, const DriveConfig& drive,
                             const FrequencyGrid& grid) {
    if (drive.mode != DriveMode::Bragg) {
        throw std::invalid_argument("bragg_chain requires Bragg drive mode");
    }
    drive.validate();
    require_resonant(p, "bragg_chain");
    const long n = drive.n_emitters;
    const double beta = p.beta;
    const Complex t0 = trans_coeff(beta, 0.0);
    UnitChain u;
    // alpha_out = alpha_sc_1 (1 - t0^N)/(2 beta), alpha_sc_1 = -sqrt(beta) Omega.
    u.alpha_out_unit = -std::sqrt(beta) * (1.0 - powi(t0, n)) / (2.0 * beta);
    u.coh_unit = u.alpha_out_unit * u.alpha_out_unit;
    u.incoh_unit = chain_incoh_unit(p, n, false);
    u.alpha_sc1_sq_unit = Complex(beta, 0.0);
    if (n == 0) u.ratio_tau0 = Complex(0.0, 0.0);
    if (n == 1) u.ratio_tau0 = Complex(-1.0, 0.0);
    return assemble(p, drive, grid, DriveMode::Bragg, drive.omega_ext, u, make_flags(p, drive));
}

EnsembleResponse antibragg_chain(const EmitterParams& p, const DriveConfig& drive,
                                 const FrequencyGrid& grid) {
    if (drive.mode != DriveMode::AntiBragg) {
        throw std::invalid_argument("antibragg_chain requires AntiBragg drive mode");
    }
    drive.validate();
    require_resonant(p, "antibragg_chain");
    const long n = drive.n_emitters;
    const double beta = p.beta;
    const bool odd = (n % 2 != 0);
    UnitChain u;
    // Alternating-sign coherent sum: alpha_sc for odd N, zero for even N. All
    // emitters stay driven at the full external amplitude (back-action of the
    // residual guided field is negligible for beta << 1).
    u.alpha_out_unit = odd ? Complex(-std::sqrt(beta), 0.0) : Complex(0.0, 0.0);
    u.coh_unit = odd ? Complex(beta, 0.0) : Complex(0.0, 0.0);
    u.incoh_unit = [beta, n](double w) {
        const double pair = std::norm(trans_coeff(beta, w));
        const double num = 1.0 - std::pow(pair, static_cast<double>(n));
        const double den = 1.0 - pair;  // = 4 beta (1-beta)/(1+4 w^2) > 0
        EmitterParams pp(beta, 0.0);
        return incoherent_freq_unit(pp, w) * (num / den);
    };
    u.alpha_sc1_sq_unit = Complex(beta, 0.0);
    if (n == 0) u.ratio_tau0 = Complex(0.0, 0.0);
    if (n == 1) u.ratio_tau0 = Complex(-1.0, 0.0);
    return assemble(p, drive, grid, DriveMode::AntiBragg, drive.omega_ext, u, make_flags(p, drive));
}

EnsembleResponse combined_chain(const EmitterParams& p, const DriveConfig& drive,
                                const FrequencyGrid& grid) {
    if (drive.mode != DriveMode::Combined) {
        throw std::invalid_argument("combined_chain requires Combined drive mode");
    }
    drive.validate();
    require_resonant(p, "combined_chain");
    const double ratio = drive.drive_ratio();  // rejects out-of-phase drives
    if (ratio == 0.0) {
        // Pure guided drive: identical to the waveguide chain, same code path
        // so the equivalence is bit-exact.
        DriveConfig wg = drive;
        wg.mode = DriveMode::Waveguide;
        auto resp = waveguide_chain(p, wg, grid);
        resp.geometry = DriveMode::Combined;
        resp.drive = drive;
        return resp;
    }
    const long n = drive.n_emitters;
    const double beta = p.beta;
    const double t0 = 1.0 - 2.0 * beta;

    // beta'(n) = beta (1 + r / t0^{n-1}): the external field keeps its
    // strength while the guided field is attenuated, so the effective
    // coupling grows along the chain.
    std::vector<double> beta_eff(static_cast<size_t>(n));
    std::vector<double> gen(static_cast<size_t>(n));   // 16 beta'(k)^2 * prod_{i<k} t'(i)^2
    double t0pow = 1.0;
    double prod_tp = 1.0;   // running prod t'(i)
    double prod_tp2 = 1.0;  // running prod t'(i)^2
    double max_beta_eff = 0.0;
    for (long k = 0; k < n; ++k) {
        const double bk = beta * (1.0 + ratio / t0pow);
        beta_eff[static_cast<size_t>(k)] = bk;
        gen[static_cast<size_t>(k)] = prod_tp2 * 16.0 * bk * bk;
        max_beta_eff = std::max(max_beta_eff, std::abs(bk));
        const double tp = 1.0 - 2.0 * bk;
        prod_tp *= tp;
        prod_tp2 *= tp * tp;
        t0pow *= t0;
    }

    UnitChain u;
    u.alpha_out_unit = Complex(prod_tp / (2.0 * std::sqrt(beta)), 0.0);
    u.coh_unit = Complex(prod_tp * prod_tp / (4.0 * beta), 0.0);
    u.incoh_unit = [beta, n, gen](double w) {
        const double pair = std::norm(trans_coeff(beta, w));
        // sum_k gen_k pair^{N-1-k} by a Horner recurrence (k = 0-based).
        double s = 0.0;
        for (long k = 0; k < n; ++k) s = s * pair + gen[static_cast<size_t>(k)];
        const double lorentz = 1.0 / (1.0 + 4.0 * w * w);
        return Complex(-lorentz * s / (4.0 * beta), 0.0);
    };
    u.alpha_sc1_sq_unit = Complex(beta * (1.0 + ratio) * (1.0 + ratio), 0.0);
    if (n == 0) u.ratio_tau0 = Complex(0.0, 0.0);
    if (n == 1) {
        const double b1 = beta_eff[0];
        const double tp1 = 1.0 - 2.0 * b1;
        u.ratio_tau0 = Complex(-(2.0 * b1) * (2.0 * b1) / (tp1 * tp1), 0.0);
    }
    ValidityFlags flags = make_flags(p, drive);
    flags.antiphase_drive = (ratio < 0.0);
    flags.large_effective_coupling = (max_beta_eff > 0.1);
    return assemble(p, drive, grid, DriveMode::Combined, drive.omega_wg, u, flags);
}

namespace {

uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace

McEstimate random_distance_g2_mc(const EmitterParams& p, const DriveConfig& drive, long n_samples,
                                 unsigned long long seed) {
    if (n_samples < 100) {
        throw std::invalid_argument("Monte Carlo requires at least 100 samples");
    }
    if (drive.n_emitters < 1) {
        throw std::invalid_argument("Monte Carlo requires at least one emitter");
    }
    require_resonant(p, "random_distance_g2_mc");
    const long n_emit = drive.n_emitters;

    // Fixed-size chunks with per-chunk generators: the sample stream is a
    // function of (seed, chunk) only, so any parallel schedule over chunks
    // reproduces the serial result.
    constexpr long kChunk = 8192;
    double sum_x = 0.0, sum_y = 0.0, sum_xx = 0.0, sum_yy = 0.0, sum_xy = 0.0;
    long done = 0;
    for (long chunk = 0; done < n_samples; ++chunk) {
        std::mt19937_64 rng(splitmix64(seed + 0x5851F42D4C957F2Dull * static_cast<uint64_t>(chunk)));
        std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
        const long count = std::min(kChunk, n_samples - done);
        for (long i = 0; i < count; ++i) {
            Complex s1(0.0, 0.0), s2(0.0, 0.0);
            for (long e = 0; e < n_emit; ++e) {
                const double ph = phase(rng);
                s1 += std::exp(Complex(0.0, ph));
                s2 += std::exp(Complex(0.0, 2.0 * ph));
            }
            // Two-photon amplitude with the same-emitter pair cancelled by its
            // incoherent counterpart; the 1/2 removes the double counting of
            // ordered pairs.
            const double x = 0.5 * std::norm(s1 * s1 - s2);
            const double y = std::norm(s1);
            sum_x += x;
            sum_y += y;
            sum_xx += x * x;
            sum_yy += y * y;
            sum_xy += x * y;
        }
        done += count;
    }
    const double m = static_cast<double>(n_samples);
    const double mean_x = sum_x / m;
    const double mean_y = sum_y / m;
    McEstimate est{};
    est.n_samples = n_samples;
    est.seed = seed;
    est.g2_zero = mean_x / (mean_y * mean_y);
    if (mean_x == 0.0) {
        est.std_error = 0.0;
        return est;
    }
    const double var_x = (sum_xx - m * mean_x * mean_x) / (m - 1.0);
    const double var_y = (sum_yy - m * mean_y * mean_y) / (m - 1.0);
    const double cov_xy = (sum_xy - m * mean_x * mean_y) / (m - 1.0);
    const double rel_var = var_x / (mean_x * mean_x) + 4.0 * var_y / (mean_y * mean_y) -
                           4.0 * cov_xy / (mean_x * mean_y);
    est.std_error = std::abs(est.g2_zero) * std::sqrt(std::max(rel_var, 0.0) / m);
    return est;
}

}  // namespace wgqed
