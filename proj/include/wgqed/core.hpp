#ifndef WGQED_CORE_HPP
#define WGQED_CORE_HPP

#include "wgqed/types.hpp"

namespace wgqed {

// Elementary single-pass coefficients, Gamma = 1.
//
//   g(x) = 2 beta / (1 - 2 i x)        photon generation coefficient
//   t(x) = 1 - g(x)                    single-atom transmission coefficient
//
// x is the effective detuning argument (Delta, Delta +/- omega, or omega).
inline Complex gen_coeff(double beta, double x) {
    return 2.0 * beta / Complex(1.0, -2.0 * x);
}

inline Complex trans_coeff(double beta, double x) {
    return 1.0 - gen_coeff(beta, x);
}

// Integer power by repeated squaring; stable for |z| <= 1 and n up to the
// chain lengths used here.
Complex powi(Complex z, long n);

ComplexAmplitude photon_generation_coefficient(const EmitterParams& p, double at_detuning);
ComplexAmplitude transmission_coefficient(const EmitterParams& p, double at_detuning);

// alpha_sc = -(Omega / (2 sqrt(beta))) g_Delta, units sqrt-flux. Linear in the
// local drive.
ComplexAmplitude coherent_scattering_amplitude(const EmitterParams& p, Complex omega_local);

// OD = -2 N log|t_Delta|. Throws SaturatedOpticalDepthError when t_Delta = 0
// (beta = 1/2 on resonance).
double optical_depth(const EmitterParams& p, long n);

// Small-beta approximation OD ~ 4 beta N.
double optical_depth_small_beta(const EmitterParams& p, long n);

}  // namespace wgqed

#endif
