#ifndef WGQED_OBSERVABLES_HPP
#define WGQED_OBSERVABLES_HPP

#include <string>
#include <vector>

#include "wgqed/ensemble.hpp"
#include "wgqed/single_emitter.hpp"
#include "wgqed/spectral_transform.hpp"

namespace wgqed {

// g2 values are >= 0; +inf marks zero coherent power (anti-Bragg even N, or a
// resonant beta = 1/2 absorber), where the normalized correlation diverges.
struct CorrelationTrace {
    std::vector<double> tau;  // units 1/Gamma
    std::vector<double> g2;
    bool coherent_power_zero = false;
    std::string note;
    ValidityFlags flags;
};

struct SqueezingSpectrum {
    std::vector<double> omega;
    double theta = 0.0;
    std::vector<double> s_theta;
    std::vector<double> optimal_theta;  // per-omega minimizer of S_theta
    std::vector<double> s_min;          // min over theta = -|psi_incoh|/2
    ValidityFlags flags;
};

// g2(tau) = |psi_coh + psi_incoh(tau)|^2 / |alpha_out|^4, evaluated through
// the drive-normalized ratio so a global drive rescale or phase leaves every
// sample bit-identical.
CorrelationTrace g2_trace(const SingleEmitterResponse& r, const FrequencyGrid& grid);
CorrelationTrace g2_trace(const EnsembleResponse& r);

double g2_zero(const SingleEmitterResponse& r);
double g2_zero(const EnsembleResponse& r);

// S_theta(omega) = -(1/2)|psi_incoh(omega)| cos(2 theta + Arg psi_incoh(omega))
// with X_theta = (a e^{i theta} + a^dag e^{-i theta})/2.
SqueezingSpectrum squeezing_spectrum(const EnsembleResponse& r, double theta);
SqueezingSpectrum squeezing_spectrum(const SingleEmitterResponse& r, const FrequencyGrid& grid,
                                     double theta);

// psi_incoh(tau = 0) = (1/2pi) int psi_incoh(omega) d omega, by trapezoid on
// the grid. Exact analytic values are used where available (single emitter,
// chains of length N <= 1).
Complex psi_incoh_at_zero(const SingleEmitterResponse& r);
Complex psi_incoh_at_zero(const EnsembleResponse& r);

// Sampled psi_incoh(tau) via the tail-completed fast transform.
TimeTrace psi_incoh_time_trace(const EnsembleResponse& r);

// Resonant large-OD continuum approximation of the waveguide-chain spectrum,
// per unit alpha_in^2, with OD = 4 beta N:
//   psi(omega) ~ (beta/omega^2) [e^{-OD} - e^{-OD/(1+4 omega^2)}]
// Rejects omega = 0 (the two terms are kept separate there).
Complex approx_large_od_spectrum(const EmitterParams& p, long n, double omega);

// Resonant closed-form approximation g2(0) ~ [1 - e^{4 beta N} sqrt(beta/(4 pi N))]^2.
double approx_g2_zero(const EmitterParams& p, long n);

}  // namespace wgqed

#endif
