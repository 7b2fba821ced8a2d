#ifndef WGQED_TYPES_HPP
#define WGQED_TYPES_HPP

#include <complex>
#include <string>
#include <vector>

namespace wgqed {

using Complex = std::complex<double>;

// Units convention: Gamma = 1 throughout. Frequencies and Rabi amplitudes are
// in units of Gamma, times in units of 1/Gamma. |alpha|^2 is a photon flux in
// photons per 1/Gamma, so psi(omega) = int psi(tau) e^{i omega tau} dtau is
// dimensionless and psi(tau) carries flux units.
enum class AmplitudeUnit {
    SqrtFlux,       // field amplitudes alpha (units Gamma^{1/2})
    Flux,           // two-photon amplitudes psi(tau) (units Gamma)
    Dimensionless,  // psi(omega), coefficients g and t
};

struct ComplexAmplitude {
    Complex value{0.0, 0.0};
    AmplitudeUnit unit{AmplitudeUnit::Dimensionless};
};

// Per-chain physical constants. beta is the probability that an emitted
// photon enters the forward-propagating guided mode; delta is the laser-atom
// detuning in units of Gamma.
struct EmitterParams {
    double beta;
    double gamma = 1.0;  // fixed natural unit
    double delta = 0.0;

    EmitterParams(double beta_, double delta_);

    // Weak-coupling model assumption; beyond 0.1 results are still evaluated
    // but flagged.
    bool weak_coupling_ok() const { return beta <= 0.1; }
};

enum class DriveMode { ExternalSingle, Waveguide, Bragg, AntiBragg, Combined };

const char* drive_mode_name(DriveMode mode);

// Illumination geometry and complex Rabi amplitudes (units of Gamma).
// ExternalSingle, Bragg and AntiBragg read omega_ext only; Waveguide reads
// omega_wg only; Combined reads both.
struct DriveConfig {
    DriveMode mode = DriveMode::Waveguide;
    Complex omega_wg{0.0, 0.0};
    Complex omega_ext{0.0, 0.0};
    long n_emitters = 1;

    void validate() const;  // throws std::invalid_argument

    // Drive amplitude actually read by the mode (for Combined, the total
    // amplitude seen by the first emitter).
    Complex active_amplitude() const;

    // Model is leading order in Omega; beyond 0.1 Gamma results are flagged.
    bool weak_drive_ok() const;

    // Combined illumination: Omega_ext / Omega_wg as a signed real. Throws
    // std::invalid_argument when the two amplitudes are not in phase (or in
    // phase opposition) or when omega_wg vanishes.
    double drive_ratio() const;
};

struct ValidityFlags {
    bool strong_coupling = false;          // beta > 0.1
    bool strong_drive = false;             // max |Omega| > 0.1 Gamma
    bool antiphase_drive = false;          // combined ratio < 0
    bool large_effective_coupling = false; // combined beta'(n) > 0.1 somewhere
    bool grid_widened = false;             // transform auto-widened the grid

    void merge(const ValidityFlags& other);
    bool any() const;
    std::vector<std::string> messages() const;
};

ValidityFlags make_flags(const EmitterParams& p, const DriveConfig& drive);

}  // namespace wgqed

#endif
