#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "wgqed/core.hpp"
#include "wgqed/errors.hpp"

using namespace wgqed;

namespace {
double rel_err(Complex a, Complex b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}
}  // namespace

TEST_CASE("photon generation coefficient examples") {
    CHECK(photon_generation_coefficient(EmitterParams(0.5, 0.0), 0.0).value == Complex(1.0, 0.0));
    CHECK(photon_generation_coefficient(EmitterParams(0.01, 0.0), 0.0).value ==
          Complex(0.02, 0.0));
    const Complex g = photon_generation_coefficient(EmitterParams(0.01, 0.5), 0.5).value;
    CHECK(rel_err(g, Complex(0.01, 0.01)) < 1e-15);
}

TEST_CASE("transmission coefficient examples") {
    CHECK(transmission_coefficient(EmitterParams(0.5, 0.0), 0.0).value == Complex(0.0, 0.0));
    CHECK(transmission_coefficient(EmitterParams(0.01, 0.0), 0.0).value == Complex(0.98, 0.0));
    const Complex t = transmission_coefficient(EmitterParams(0.01, 0.5), 0.5).value;
    CHECK(rel_err(t, Complex(0.99, -0.01)) < 1e-15);
}

TEST_CASE("transmission magnitude identity") {
    // |t|^2 = 1 - 4 beta (1 - beta) / (1 + 4 x^2)
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> beta_d(1e-4, 0.999);
    std::uniform_real_distribution<double> x_d(-30.0, 30.0);
    for (int i = 0; i < 500; ++i) {
        const double beta = beta_d(rng);
        const double x = x_d(rng);
        const double lhs = std::norm(trans_coeff(beta, x));
        const double rhs = 1.0 - 4.0 * beta * (1.0 - beta) / (1.0 + 4.0 * x * x);
        CHECK(std::abs(lhs - rhs) < 1e-14);
        CHECK(std::abs(trans_coeff(beta, x)) <= 1.0 + 1e-15);
    }
}

TEST_CASE("g + t = 1 exactly and conjugation symmetry") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> beta_d(1e-4, 0.999);
    std::uniform_real_distribution<double> x_d(-30.0, 30.0);
    for (int i = 0; i < 500; ++i) {
        const double beta = beta_d(rng);
        const double x = x_d(rng);
        CHECK(gen_coeff(beta, x) + trans_coeff(beta, x) == Complex(1.0, 0.0));
        CHECK(gen_coeff(beta, -x) == std::conj(gen_coeff(beta, x)));
    }
}

TEST_CASE("coherent scattering amplitude examples") {
    const EmitterParams p(0.01, 0.0);
    CHECK(rel_err(coherent_scattering_amplitude(p, Complex(0.1, 0.0)).value,
                  Complex(-0.01, 0.0)) < 1e-15);
    CHECK(coherent_scattering_amplitude(p, Complex(0.0, 0.0)).value == Complex(0.0, 0.0));
    const EmitterParams pd(0.01, 0.5);
    CHECK(rel_err(coherent_scattering_amplitude(pd, Complex(0.1, 0.0)).value,
                  Complex(-0.005, -0.005)) < 1e-15);
    CHECK(coherent_scattering_amplitude(p, Complex(0.1, 0.0)).unit == AmplitudeUnit::SqrtFlux);
}

TEST_CASE("scattering amplitude is linear in the drive") {
    const EmitterParams p(0.03, 0.7);
    const Complex base = coherent_scattering_amplitude(p, Complex(0.05, 0.01)).value;
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    for (int i = 0; i < 100; ++i) {
        const Complex c(d(rng), d(rng));
        const Complex lhs = coherent_scattering_amplitude(p, c * Complex(0.05, 0.01)).value;
        CHECK(rel_err(lhs, c * base) < 1e-14);
    }
}

TEST_CASE("optical depth") {
    const EmitterParams p(0.01, 0.0);
    CHECK(optical_depth(p, 1) == doctest::Approx(-2.0 * std::log(0.98)).epsilon(1e-14));
    CHECK(optical_depth(p, 0) == 0.0);
    CHECK(optical_depth_small_beta(EmitterParams(0.01, 0.0), 100) == doctest::Approx(4.0));
    CHECK_THROWS_AS(optical_depth(EmitterParams(0.5, 0.0), 5), SaturatedOpticalDepthError);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(EmitterParams(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(EmitterParams(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(EmitterParams(-0.1, 0.0), std::invalid_argument);
    CHECK(EmitterParams(0.2, 0.0).weak_coupling_ok() == false);
    CHECK(EmitterParams(0.05, 0.0).weak_coupling_ok() == true);

    DriveConfig d;
    d.mode = DriveMode::Waveguide;
    d.omega_wg = Complex(0.0, 0.0);
    CHECK_THROWS_AS(d.validate(), std::invalid_argument);
    d.omega_wg = Complex(0.05, 0.0);
    CHECK_NOTHROW(d.validate());
    CHECK(d.weak_drive_ok());
    d.omega_wg = Complex(0.2, 0.0);
    CHECK_FALSE(d.weak_drive_ok());
}

TEST_CASE("drive ratio phase restriction") {
    DriveConfig d;
    d.mode = DriveMode::Combined;
    d.omega_wg = Complex(0.02, 0.0);
    d.omega_ext = Complex(0.04, 0.0);
    CHECK(d.drive_ratio() == doctest::Approx(2.0));
    d.omega_ext = Complex(-0.04, 0.0);
    CHECK(d.drive_ratio() == doctest::Approx(-2.0));
    d.omega_ext = Complex(0.0, 0.04);
    CHECK_THROWS_AS(d.drive_ratio(), std::invalid_argument);
    // A common phase on both amplitudes keeps the ratio real.
    const Complex rot = std::exp(Complex(0.0, 0.9));
    d.omega_wg = Complex(0.02, 0.0) * rot;
    d.omega_ext = Complex(0.04, 0.0) * rot;
    CHECK(d.drive_ratio() == doctest::Approx(2.0));
}
