#ifndef WGQED_SPECTRAL_TRANSFORM_HPP
#define WGQED_SPECTRAL_TRANSFORM_HPP

#include <functional>
#include <vector>

#include "wgqed/grid.hpp"
#include "wgqed/types.hpp"

namespace wgqed {

using SpectrumFn = std::function<Complex(double)>;

// psi(tau_j) = (1/2pi) sum_k psi(omega_k) e^{-i omega_k tau_j} d_omega on the
// conjugate grid tau_j = (j - n/2) pi/W.
struct TimeTrace {
    std::vector<double> tau;
    std::vector<Complex> values;
    double half_width_used = 0.0;  // frequency half-width actually used
    bool widened = false;
};

// Fast transform with an analytic tail completion. The spectra in this
// library fall off as even powers of 1/omega; the transform fits
// sum_k c_k / (sigma^2 + omega^2)^k (sigma = W/2) at nodes at and beyond the
// grid boundary, transforms the remainder with an FFT, and adds the fitted
// part in closed form. Grid adequacy is judged by the fit residual at
// interleaved check nodes relative to the spectrum peak; on failure the
// window is doubled (up to max_widenings) before GridTruncationError.
class SpectralTransform {
public:
    static constexpr int kTailTerms = 6;
    static constexpr double kAdequacyThreshold = 1e-6;
    static constexpr int kMaxWidenings = 3;

    // Transform a spectrum given by an evaluator. Samples on the (possibly
    // widened) grid are taken internally.
    static TimeTrace freq_to_time(const SpectrumFn& psi, const FrequencyGrid& grid);

    // Same, reusing precomputed samples for the nominal grid (must match).
    static TimeTrace freq_to_time(const std::vector<Complex>& samples, const SpectrumFn& psi,
                                  const FrequencyGrid& grid);

    // (1/2pi) int |psi|^2 over the real line: grid trapezoid plus the closed
    // form tail of the fitted model (used by the Parseval checks).
    static double spectrum_power(const std::vector<Complex>& samples, const SpectrumFn& psi,
                                 const FrequencyGrid& grid);
};

// Plain trapezoid on the grid: (1/2pi) sum_k psi(omega_k) d_omega. No tail
// completion; this is the quadrature convention for scalar tau = 0 integrals.
Complex grid_integral(const std::vector<Complex>& samples, const FrequencyGrid& grid);

}  // namespace wgqed

#endif
