#ifndef WGQED_ENSEMBLE_HPP
#define WGQED_ENSEMBLE_HPP

#include <optional>
#include <vector>

#include "wgqed/grid.hpp"
#include "wgqed/spectral_transform.hpp"
#include "wgqed/types.hpp"

namespace wgqed {

// External illumination geometry of a regularly spaced chain.
// lattice_spacing and wavelength share one length unit; n_eff is the
// effective refractive index of the guided mode.
struct BraggGeometry {
    double lattice_spacing;
    double wavelength;
    double n_eff;
    int order;

    void validate() const;  // throws std::invalid_argument
};

// cos(theta) = m lambda/a - n_eff (Bragg), with m -> m + 1/2 for anti-Bragg.
// Throws NoPhysicalAngleError when |cos| > 1.
double bragg_angle(const BraggGeometry& geom);
double anti_bragg_angle(const BraggGeometry& geom);

// N-emitter output. Absolute fields carry the drive amplitude; the
// drive-normalized ratio psi_incoh/psi_coh is computed without ever touching
// the drive, so g2 derived from it is bit-identical under rescaling or
// rephasing of the drive.
struct EnsembleResponse {
    DriveMode geometry;
    EmitterParams params;
    DriveConfig drive;
    FrequencyGrid grid;

    ComplexAmplitude alpha_out;  // sqrt-flux
    ComplexAmplitude psi_coh;    // flux, = alpha_out^2

    std::vector<Complex> psi_incoh_freq;  // sampled on the grid, dimensionless
    SpectrumFn psi_incoh_freq_fn;

    std::vector<Complex> incoh_over_coh;  // empty when psi_coh = 0
    SpectrumFn incoh_over_coh_fn;
    // Closed-form psi_incoh(tau=0)/psi_coh, available for N <= 1 where the
    // single-emitter analytic form applies.
    std::optional<Complex> incoh_over_coh_tau0;

    Complex alpha_sc1_sq;  // first-emitter alpha_sc^2 (normalization reference)
    ValidityFlags flags;
};

// Illumination through the waveguide, any detuning: closed-form geometric sum
// with a direct-summation fallback at (near-)degenerate denominators.
EnsembleResponse waveguide_chain(const EmitterParams& p, const DriveConfig& drive,
                                 const FrequencyGrid& grid);

// Same contract evaluated by explicit O(N)-per-frequency summation over the
// emitters; serves as the brute-force oracle for the closed form.
EnsembleResponse waveguide_chain_direct(const EmitterParams& p, const DriveConfig& drive,
                                        const FrequencyGrid& grid);

// External illumination at the Bragg angle, resonant drive only.
EnsembleResponse bragg_chain(const EmitterParams& p, const DriveConfig& drive,
                             const FrequencyGrid& grid);

// External illumination at the anti-Bragg angle, resonant drive only.
EnsembleResponse antibragg_chain(const EmitterParams& p, const DriveConfig& drive,
                                 const FrequencyGrid& grid);

// Combined waveguide + external illumination at the Bragg angle, resonant,
// with in-phase (or anti-phase) real amplitude ratio.
EnsembleResponse combined_chain(const EmitterParams& p, const DriveConfig& drive,
                                const FrequencyGrid& grid);

struct McEstimate {
    double g2_zero;
    double std_error;
    long n_samples;
    unsigned long long seed;
};

// Monte Carlo over i.i.d. uniform propagation phases for emitters at random
// distances (resonant, low optical depth): estimates g2(0), converging to
// 1 - 1/N. Deterministic for a fixed seed regardless of the internal chunk
// parallelism.
McEstimate random_distance_g2_mc(const EmitterParams& p, const DriveConfig& drive,
                                 long n_samples, unsigned long long seed);

}  // namespace wgqed

#endif
