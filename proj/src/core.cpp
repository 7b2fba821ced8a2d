#include "wgqed/core.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "wgqed/errors.hpp"

namespace wgqed {

Complex powi(Complex z, long n) {
    if (n < 0) throw std::invalid_argument("powi: negative exponent");
    Complex acc(1.0, 0.0);
    while (n > 0) {
        if (n & 1) acc *= z;
        z *= z;
        n >>= 1;
    }
    return acc;
}

ComplexAmplitude photon_generation_coefficient(const EmitterParams& p, double at_detuning) {
    return {gen_coeff(p.beta, at_detuning), AmplitudeUnit::Dimensionless};
}

ComplexAmplitude transmission_coefficient(const EmitterParams& p, double at_detuning) {
    return {trans_coeff(p.beta, at_detuning), AmplitudeUnit::Dimensionless};
}

ComplexAmplitude coherent_scattering_amplitude(const EmitterParams& p, Complex omega_local) {
    const Complex alpha_sc =
        -(omega_local / (2.0 * std::sqrt(p.beta))) * gen_coeff(p.beta, p.delta);
    return {alpha_sc, AmplitudeUnit::SqrtFlux};
}

double optical_depth(const EmitterParams& p, long n) {
    if (n < 0) throw std::invalid_argument("optical_depth: n must be >= 0");
    const double t_abs = std::abs(trans_coeff(p.beta, p.delta));
    if (t_abs == 0.0) {
        std::ostringstream os;
        os << "optical depth saturates: |t| = 0 at beta = " << p.beta << ", delta = " << p.delta;
        throw SaturatedOpticalDepthError(os.str());
    }
    return -2.0 * static_cast<double>(n) * std::log(t_abs);
}

double optical_depth_small_beta(const EmitterParams& p, long n) {
    if (n < 0) throw std::invalid_argument("optical_depth_small_beta: n must be >= 0");
    return 4.0 * p.beta * static_cast<double>(n);
}

}  // namespace wgqed
