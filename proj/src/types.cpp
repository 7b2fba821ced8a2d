#include "wgqed/types.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wgqed {

EmitterParams::EmitterParams(double beta_, double delta_) : beta(beta_), delta(delta_) {
    if (!(beta > 0.0 && beta < 1.0)) {
        std::ostringstream os;
        os << "beta must lie in (0, 1), got " << beta;
        throw std::invalid_argument(os.str());
    }
    if (!std::isfinite(delta)) {
        throw std::invalid_argument("delta must be finite");
    }
}

const char* drive_mode_name(DriveMode mode) {
    switch (mode) {
        case DriveMode::ExternalSingle: return "external";
        case DriveMode::Waveguide: return "waveguide";
        case DriveMode::Bragg: return "bragg";
        case DriveMode::AntiBragg: return "antibragg";
        case DriveMode::Combined: return "combined";
    }
    return "unknown";
}

void DriveConfig::validate() const {
    if (n_emitters < 0) {
        throw std::invalid_argument("n_emitters must be non-negative");
    }
    if (std::abs(omega_wg) + std::abs(omega_ext) <= 0.0) {
        throw std::invalid_argument("drive amplitudes vanish: |omega_wg| + |omega_ext| must be > 0");
    }
    switch (mode) {
        case DriveMode::Waveguide:
            if (std::abs(omega_wg) == 0.0)
                throw std::invalid_argument("waveguide mode requires omega_wg != 0");
            break;
        case DriveMode::ExternalSingle:
        case DriveMode::Bragg:
        case DriveMode::AntiBragg:
            if (std::abs(omega_ext) == 0.0)
                throw std::invalid_argument("external modes require omega_ext != 0");
            break;
        case DriveMode::Combined:
            if (std::abs(omega_wg) == 0.0)
                throw std::invalid_argument("combined mode requires omega_wg != 0");
            break;
    }
}

Complex DriveConfig::active_amplitude() const {
    switch (mode) {
        case DriveMode::Waveguide: return omega_wg;
        case DriveMode::ExternalSingle:
        case DriveMode::Bragg:
        case DriveMode::AntiBragg: return omega_ext;
        case DriveMode::Combined: return omega_wg + omega_ext;
    }
    return omega_wg;
}

bool DriveConfig::weak_drive_ok() const {
    return std::max(std::abs(omega_wg), std::abs(omega_ext)) <= 0.1;
}

double DriveConfig::drive_ratio() const {
    // Explicit real formula instead of complex division: a common phase factor
    // on both amplitudes then cancels bit-exactly.
    const double den = std::norm(omega_wg);
    if (den == 0.0) {
        throw std::invalid_argument("drive ratio undefined: omega_wg = 0");
    }
    const Complex num = omega_ext * std::conj(omega_wg);
    const double re = num.real() / den;
    const double im = num.imag() / den;
    if (std::abs(im) > 1e-12 * std::max(1.0, std::abs(re))) {
        std::ostringstream os;
        os << "omega_ext/omega_wg must be real (in phase or in phase opposition), got imaginary part "
           << im;
        throw std::invalid_argument(os.str());
    }
    return re;
}

void ValidityFlags::merge(const ValidityFlags& other) {
    strong_coupling |= other.strong_coupling;
    strong_drive |= other.strong_drive;
    antiphase_drive |= other.antiphase_drive;
    large_effective_coupling |= other.large_effective_coupling;
    grid_widened |= other.grid_widened;
}

bool ValidityFlags::any() const {
    return strong_coupling || strong_drive || antiphase_drive || large_effective_coupling ||
           grid_widened;
}

std::vector<std::string> ValidityFlags::messages() const {
    std::vector<std::string> out;
    if (strong_coupling)
        out.push_back("beta > 0.1: weak-coupling assumption strained");
    if (strong_drive)
        out.push_back("|Omega| > 0.1 Gamma: leading-order-in-drive model strained");
    if (antiphase_drive)
        out.push_back("combined drive ratio < 0 (fields in phase opposition)");
    if (large_effective_coupling)
        out.push_back("effective coupling beta'(n) > 0.1 along the chain");
    if (grid_widened)
        out.push_back("frequency grid auto-widened to satisfy the adequacy check");
    return out;
}

ValidityFlags make_flags(const EmitterParams& p, const DriveConfig& drive) {
    ValidityFlags f;
    f.strong_coupling = !p.weak_coupling_ok();
    f.strong_drive = !drive.weak_drive_ok();
    return f;
}

}  // namespace wgqed
