#ifndef WGQED_SINGLE_EMITTER_HPP
#define WGQED_SINGLE_EMITTER_HPP

#include <functional>

#include "wgqed/core.hpp"
#include "wgqed/types.hpp"

namespace wgqed {

// Exact single-emitter two-photon response. psi_incoh_time/freq are the
// analytic forms; incoh_over_coh_time is the drive-independent ratio
// psi_incoh(tau)/psi_coh used by g2 (exact cancellations survive in it).
struct SingleEmitterResponse {
    ComplexAmplitude psi_coh;    // flux
    ComplexAmplitude alpha_out;  // sqrt-flux
    std::function<Complex(double)> psi_incoh_time;
    std::function<Complex(double)> psi_incoh_freq;
    std::function<Complex(double)> incoh_over_coh_time;
    ValidityFlags flags;
};

// psi_incoh(tau) = -alpha_sc^2 e^{-|tau|/2} e^{i Delta |tau|}
Complex incoherent_time(const EmitterParams& p, Complex omega_local, double tau);

// psi_incoh(omega) = -(Omega^2 / (2 beta^2)) g_Delta g_{Delta+omega} g_{Delta-omega};
// the Fourier transform of incoherent_time under psi(omega) = int psi(tau) e^{i omega tau} dtau.
Complex incoherent_freq(const EmitterParams& p, Complex omega_local, double omega);

// Normalized spectrum per unit Omega^2 (drive-independent shape).
Complex incoherent_freq_unit(const EmitterParams& p, double omega);

SingleEmitterResponse response_external(const EmitterParams& p, const DriveConfig& drive);
SingleEmitterResponse response_waveguide(const EmitterParams& p, const DriveConfig& drive);
SingleEmitterResponse response_combined(const EmitterParams& p, const DriveConfig& drive);

}  // namespace wgqed

#endif
