#include "wgqed/observables.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "wgqed/errors.hpp"

namespace wgqed {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const char* kCoherentZeroNote = "coherent power is zero";

double wrap_half_pi(double theta) {
    // Fold to (-pi/2, pi/2]: S_theta has period pi in theta.
    while (theta > 0.5 * M_PI) theta -= M_PI;
    while (theta <= -0.5 * M_PI) theta += M_PI;
    return theta;
}

SqueezingSpectrum squeeze_from_samples(const std::vector<double>& omega,
                                       const std::vector<Complex>& psi, double theta,
                                       ValidityFlags flags) {
    SqueezingSpectrum s;
    s.omega = omega;
    s.theta = theta;
    s.flags = flags;
    const size_t n = psi.size();
    s.s_theta.resize(n);
    s.optimal_theta.resize(n);
    s.s_min.resize(n);
    for (size_t k = 0; k < n; ++k) {
        const double mag = std::abs(psi[k]);
        const double phase = (mag > 0.0) ? std::arg(psi[k]) : 0.0;
        s.s_theta[k] = -0.5 * mag * std::cos(2.0 * theta + phase);
        // cos(2 theta + phase) = 1 minimizes S_theta.
        s.optimal_theta[k] = wrap_half_pi(-0.5 * phase);
        s.s_min[k] = -0.5 * mag;
    }
    return s;
}

}  // namespace

CorrelationTrace g2_trace(const SingleEmitterResponse& r, const FrequencyGrid& grid) {
    CorrelationTrace trace;
    trace.flags = r.flags;
    const int n = grid.n_points();
    const double dtau = M_PI / grid.half_width();
    trace.tau.resize(static_cast<size_t>(n));
    trace.g2.resize(static_cast<size_t>(n));
    const bool coh_zero = (r.psi_coh.value == Complex(0.0, 0.0));
    trace.coherent_power_zero = coh_zero;
    if (coh_zero) trace.note = kCoherentZeroNote;
    for (int j = 0; j < n; ++j) {
        const double tau = (j - n / 2) * dtau;
        trace.tau[static_cast<size_t>(j)] = tau;
        trace.g2[static_cast<size_t>(j)] =
            coh_zero ? kInf : std::norm(1.0 + r.incoh_over_coh_time(tau));
    }
    return trace;
}

CorrelationTrace g2_trace(const EnsembleResponse& r) {
    CorrelationTrace trace;
    trace.flags = r.flags;
    if (!r.incoh_over_coh_fn) {
        // Zero coherent power: the normalized correlation diverges at this
        // model order.
        const int n = r.grid.n_points();
        const double dtau = M_PI / r.grid.half_width();
        trace.tau.resize(static_cast<size_t>(n));
        trace.g2.assign(static_cast<size_t>(n), kInf);
        for (int j = 0; j < n; ++j) trace.tau[static_cast<size_t>(j)] = (j - n / 2) * dtau;
        trace.coherent_power_zero = true;
        trace.note = kCoherentZeroNote;
        return trace;
    }
    TimeTrace ratio = SpectralTransform::freq_to_time(r.incoh_over_coh, r.incoh_over_coh_fn, r.grid);
    trace.flags.grid_widened |= ratio.widened;
    const size_t n = ratio.values.size();
    trace.tau = ratio.tau;
    trace.g2.resize(n);
    for (size_t j = 0; j < n; ++j) {
        Complex q = ratio.values[j];
        if (ratio.tau[j] == 0.0 && r.incoh_over_coh_tau0) q = *r.incoh_over_coh_tau0;
        trace.g2[j] = std::norm(1.0 + q);
    }
    return trace;
}

double g2_zero(const SingleEmitterResponse& r) {
    if (r.psi_coh.value == Complex(0.0, 0.0)) return kInf;
    return std::norm(1.0 + r.incoh_over_coh_time(0.0));
}

double g2_zero(const EnsembleResponse& r) {
    if (!r.incoh_over_coh_fn) return kInf;
    const Complex q = r.incoh_over_coh_tau0 ? *r.incoh_over_coh_tau0
                                            : grid_integral(r.incoh_over_coh, r.grid);
    return std::norm(1.0 + q);
}

SqueezingSpectrum squeezing_spectrum(const EnsembleResponse& r, double theta) {
    return squeeze_from_samples(r.grid.omegas(), r.psi_incoh_freq, theta, r.flags);
}

SqueezingSpectrum squeezing_spectrum(const SingleEmitterResponse& r, const FrequencyGrid& grid,
                                     double theta) {
    std::vector<Complex> psi(static_cast<size_t>(grid.n_points()));
    for (int k = 0; k < grid.n_points(); ++k) {
        psi[static_cast<size_t>(k)] = r.psi_incoh_freq(grid.omega(k));
    }
    return squeeze_from_samples(grid.omegas(), psi, theta, r.flags);
}

Complex psi_incoh_at_zero(const SingleEmitterResponse& r) { return r.psi_incoh_time(0.0); }

Complex psi_incoh_at_zero(const EnsembleResponse& r) {
    if (r.incoh_over_coh_tau0 && r.incoh_over_coh_fn) {
        return *r.incoh_over_coh_tau0 * r.psi_coh.value;
    }
    return grid_integral(r.psi_incoh_freq, r.grid);
}

TimeTrace psi_incoh_time_trace(const EnsembleResponse& r) {
    return SpectralTransform::freq_to_time(r.psi_incoh_freq, r.psi_incoh_freq_fn, r.grid);
}

Complex approx_large_od_spectrum(const EmitterParams& p, long n, double omega) {
    if (std::abs(p.delta) > 1e-12) {
        throw UnsupportedGeometryError("large-OD approximation is resonant only (delta = 0)");
    }
    if (n < 1) throw std::invalid_argument("large-OD approximation requires n >= 1");
    if (omega == 0.0) {
        throw std::invalid_argument("large-OD approximation is rejected at omega = 0");
    }
    const double od = optical_depth_small_beta(p, n);
    const double w2 = omega * omega;
    return Complex(
        p.beta / w2 * (std::exp(-od) - std::exp(-od / (1.0 + 4.0 * w2))), 0.0);
}

double approx_g2_zero(const EmitterParams& p, long n) {
    if (n < 1) throw std::invalid_argument("g2 approximation requires n >= 1");
    const double amp =
        std::exp(4.0 * p.beta * static_cast<double>(n)) *
        std::sqrt(p.beta / (4.0 * M_PI * static_cast<double>(n)));
    return (1.0 - amp) * (1.0 - amp);
}

}  // namespace wgqed
