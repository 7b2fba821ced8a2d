#include "wgqed/single_emitter.hpp"

#include <cmath>
#include <stdexcept>

namespace wgqed {

Complex incoherent_time(const EmitterParams& p, Complex omega_local, double tau) {
    const Complex alpha_sc = coherent_scattering_amplitude(p, omega_local).value;
    const double at = std::abs(tau);
    return -alpha_sc * alpha_sc * std::exp(Complex(-0.5 * at, p.delta * at));
}

Complex incoherent_freq(const EmitterParams& p, Complex omega_local, double omega) {
    return omega_local * omega_local * incoherent_freq_unit(p, omega);
}

Complex incoherent_freq_unit(const EmitterParams& p, double omega) {
    const double b = p.beta;
    // The symmetric pair product is formed first so the result is even in
    // omega bit-exactly.
    const Complex pair = gen_coeff(b, p.delta + omega) * gen_coeff(b, p.delta - omega);
    return -gen_coeff(b, p.delta) * pair / (2.0 * b * b);
}

namespace {

// Decay kernel e^{-|tau|/2} e^{i Delta |tau|} shared by every geometry.
Complex decay_kernel(double delta, double tau) {
    const double at = std::abs(tau);
    return std::exp(Complex(-0.5 * at, delta * at));
}

SingleEmitterResponse build_response(const EmitterParams& p, const DriveConfig& drive,
                                     Complex alpha_out, Complex psi_coh, Complex omega_total,
                                     Complex ratio0) {
    SingleEmitterResponse r;
    r.alpha_out = {alpha_out, AmplitudeUnit::SqrtFlux};
    r.psi_coh = {psi_coh, AmplitudeUnit::Flux};
    const double delta = p.delta;
    EmitterParams pp = p;
    r.psi_incoh_time = [pp, omega_total](double tau) {
        return incoherent_time(pp, omega_total, tau);
    };
    r.psi_incoh_freq = [pp, omega_total](double omega) {
        return incoherent_freq(pp, omega_total, omega);
    };
    // ratio0 = psi_incoh(0)/psi_coh, formed without the drive amplitude.
    r.incoh_over_coh_time = [ratio0, delta](double tau) {
        return ratio0 * decay_kernel(delta, tau);
    };
    r.flags = make_flags(p, drive);
    return r;
}

}  // namespace

SingleEmitterResponse response_external(const EmitterParams& p, const DriveConfig& drive) {
    if (drive.mode != DriveMode::ExternalSingle) {
        throw std::invalid_argument("response_external requires ExternalSingle drive mode");
    }
    drive.validate();
    const Complex alpha_sc = coherent_scattering_amplitude(p, drive.omega_ext).value;
    // psi_coh = alpha_sc^2 and psi_incoh(0) = -alpha_sc^2: the ratio is -1
    // exactly, which keeps the tau = 0 destructive interference exact.
    return build_response(p, drive, alpha_sc, alpha_sc * alpha_sc, drive.omega_ext,
                          Complex(-1.0, 0.0));
}

SingleEmitterResponse response_waveguide(const EmitterParams& p, const DriveConfig& drive) {
    if (drive.mode != DriveMode::Waveguide) {
        throw std::invalid_argument("response_waveguide requires Waveguide drive mode");
    }
    if (drive.n_emitters != 1) {
        throw std::invalid_argument("response_waveguide is the single-emitter response (N = 1)");
    }
    drive.validate();
    const Complex alpha_in = drive.omega_wg / (2.0 * std::sqrt(p.beta));
    const Complex t = trans_coeff(p.beta, p.delta);
    const Complex g = gen_coeff(p.beta, p.delta);
    const Complex ratio0 = -(g * g) / (t * t);
    return build_response(p, drive, t * alpha_in, t * t * alpha_in * alpha_in, drive.omega_wg,
                          ratio0);
}

SingleEmitterResponse response_combined(const EmitterParams& p, const DriveConfig& drive) {
    if (drive.mode != DriveMode::Combined) {
        throw std::invalid_argument("response_combined requires Combined drive mode");
    }
    if (drive.n_emitters != 1) {
        throw std::invalid_argument("response_combined is the single-emitter response (N = 1)");
    }
    drive.validate();
    const double r = drive.drive_ratio();  // rejects out-of-phase drives
    if (r == 0.0) {
        DriveConfig wg = drive;
        wg.mode = DriveMode::Waveguide;
        auto resp = response_waveguide(p, wg);
        resp.flags.merge(make_flags(p, drive));
        return resp;
    }
    const double beta_eff = p.beta * (1.0 + r);
    const Complex alpha_in = drive.omega_wg / (2.0 * std::sqrt(p.beta));
    const Complex t_eff = 1.0 - 2.0 * beta_eff / Complex(1.0, -2.0 * p.delta);
    const Complex g_eff = 1.0 - t_eff;
    const Complex ratio0 = -(g_eff * g_eff) / (t_eff * t_eff);
    auto resp = build_response(p, drive, t_eff * alpha_in, t_eff * t_eff * alpha_in * alpha_in,
                               drive.omega_wg + drive.omega_ext, ratio0);
    resp.flags.antiphase_drive = (r < 0.0);
    resp.flags.large_effective_coupling = (std::abs(beta_eff) > 0.1);
    return resp;
}

}  // namespace wgqed
