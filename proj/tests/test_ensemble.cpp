#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "wgqed/ensemble.hpp"
#include "wgqed/errors.hpp"
#include "wgqed/observables.hpp"
#include "wgqed/single_emitter.hpp"

using namespace wgqed;

namespace {

double rel_err(Complex a, Complex b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

DriveConfig drive_for(DriveMode mode, long n, Complex wg = Complex(0.05, 0.0),
                      Complex ext = Complex(0.05, 0.0)) {
    DriveConfig d;
    d.mode = mode;
    d.n_emitters = n;
    switch (mode) {
        case DriveMode::Waveguide: d.omega_wg = wg; d.omega_ext = 0.0; break;
        case DriveMode::Combined: d.omega_wg = wg; d.omega_ext = ext; break;
        default: d.omega_ext = ext; d.omega_wg = 0.0; break;
    }
    return d;
}

const FrequencyGrid kSmallGrid(20.0, 1 << 10);

}  // namespace

TEST_CASE("bragg and anti-bragg angles") {
    BraggGeometry geom{1.0, 1.0, 1.0, 1};
    CHECK(bragg_angle(geom) == doctest::Approx(M_PI / 2.0).epsilon(1e-14));
    // cos(zeta) = (m + 1/2) lambda/a - n_eff
    CHECK(anti_bragg_angle(geom) == doctest::Approx(std::acos(0.5)).epsilon(1e-14));

    BraggGeometry geom12{1.0, 1.0, 1.2, 1};
    CHECK(bragg_angle(geom12) == doctest::Approx(std::acos(1.0 - 1.2)).epsilon(1e-14));

    BraggGeometry high{1.0, 1.0, 1.0, 3};
    CHECK_THROWS_AS(bragg_angle(high), NoPhysicalAngleError);
    try {
        bragg_angle(high);
    } catch (const NoPhysicalAngleError& e) {
        CHECK(e.order == 3);
        CHECK(std::string(e.what()).find("m = 3") != std::string::npos);
    }
    BraggGeometry sub{0.5, 1.0, 1.0, 1};
    CHECK_THROWS_AS(bragg_angle(sub), std::invalid_argument);
}

TEST_CASE("waveguide chain reduces to the single emitter at N = 1") {
    const EmitterParams p(0.01, 0.7);
    const auto chain = waveguide_chain(p, drive_for(DriveMode::Waveguide, 1), kSmallGrid);
    DriveConfig single = drive_for(DriveMode::Waveguide, 1);
    const auto one = response_waveguide(p, single);
    CHECK(rel_err(chain.alpha_out.value, one.alpha_out.value) < 1e-15);
    CHECK(rel_err(chain.psi_coh.value, one.psi_coh.value) < 1e-15);
    for (int k = 0; k < kSmallGrid.n_points(); k += 97) {
        const double w = kSmallGrid.omega(k);
        CHECK(rel_err(chain.psi_incoh_freq[static_cast<size_t>(k)], one.psi_incoh_freq(w)) <
              1e-13);
    }
    CHECK(rel_err(psi_incoh_at_zero(chain), psi_incoh_at_zero(one)) < 1e-15);
}

TEST_CASE("direct chain: empty chain and two-emitter expansion") {
    const EmitterParams p(0.01, 0.0);
    const auto empty = waveguide_chain_direct(p, drive_for(DriveMode::Waveguide, 0), kSmallGrid);
    const Complex alpha_in = Complex(0.05, 0.0) / (2.0 * std::sqrt(0.01));
    CHECK(empty.alpha_out.value == alpha_in);
    for (const auto& v : empty.psi_incoh_freq) CHECK(v == Complex(0.0, 0.0));

    // N = 2 at omega = 0: both branches give 2 t0^2 Omega^2 psi_tilde(0).
    const auto two = waveguide_chain_direct(p, drive_for(DriveMode::Waveguide, 2), kSmallGrid);
    const Complex t0 = trans_coeff(0.01, 0.0);
    const Complex expected =
        Complex(0.05, 0.0) * 0.05 * incoherent_freq_unit(p, 0.0) * (2.0 * t0 * t0);
    const Complex got = two.psi_incoh_freq[static_cast<size_t>(kSmallGrid.zero_index())];
    CHECK(rel_err(got, expected) < 1e-13);
}

TEST_CASE("closed form matches the direct sum") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> beta_d(1e-3, 0.05);
    std::uniform_real_distribution<double> delta_d(-3.0, 3.0);
    std::uniform_int_distribution<long> n_d(1, 1000);
    std::uniform_int_distribution<int> k_d(0, kSmallGrid.n_points() - 1);
    for (int trial = 0; trial < 60; ++trial) {
        const EmitterParams p(beta_d(rng), delta_d(rng));
        const auto d = drive_for(DriveMode::Waveguide, n_d(rng));
        const auto closed = waveguide_chain(p, d, kSmallGrid);
        const auto direct = waveguide_chain_direct(p, d, kSmallGrid);
        for (int j = 0; j < 16; ++j) {
            const int k = k_d(rng);
            CHECK(rel_err(closed.psi_incoh_freq[static_cast<size_t>(k)],
                          direct.psi_incoh_freq[static_cast<size_t>(k)]) < 1e-10);
        }
    }
}

TEST_CASE("closed form omega -> 0 limit matches the degenerate branch") {
    const EmitterParams p(0.01, 0.4);
    const auto d = drive_for(DriveMode::Waveguide, 40);
    const auto chain = waveguide_chain(p, d, kSmallGrid);
    const Complex at_zero = chain.psi_incoh_freq_fn(0.0);
    double prev = 1.0;
    for (double w : {1e-4, 1e-5, 1e-6}) {
        const double err = rel_err(chain.psi_incoh_freq_fn(w), at_zero);
        CHECK(err < prev);  // quadratic approach to the omega = 0 branch
        prev = err;
    }
    CHECK(rel_err(chain.psi_incoh_freq_fn(1e-6), at_zero) < 1e-8);
    CHECK(rel_err(chain.psi_incoh_freq_fn(1e-8), at_zero) < 1e-12);
}

TEST_CASE("coherent output decays exponentially along the chain") {
    const EmitterParams p(0.02, 1.1);
    const double t_abs = std::abs(trans_coeff(0.02, 1.1));
    double prev = std::abs(
        waveguide_chain(p, drive_for(DriveMode::Waveguide, 1), kSmallGrid).alpha_out.value);
    for (long n = 2; n <= 40; ++n) {
        const double cur = std::abs(
            waveguide_chain(p, drive_for(DriveMode::Waveguide, n), kSmallGrid).alpha_out.value);
        CHECK(cur / prev == doctest::Approx(t_abs).epsilon(1e-13));
        prev = cur;
    }
}

TEST_CASE("low optical depth: coherent build-up of the incoherent component") {
    // psi_incoh ~ N psi^(1) pointwise while N (1 - t^2)-type corrections stay
    // below the tolerance.
    const EmitterParams p(1e-3, 0.0);
    const auto one = waveguide_chain(p, drive_for(DriveMode::Waveguide, 1), kSmallGrid);
    const long n = 3;  // OD = 0.012
    const auto chain = waveguide_chain(p, drive_for(DriveMode::Waveguide, n), kSmallGrid);
    for (int k = 0; k < kSmallGrid.n_points(); k += 31) {
        const double dev = rel_err(chain.psi_incoh_freq[static_cast<size_t>(k)],
                                   static_cast<double>(n) * one.psi_incoh_freq[static_cast<size_t>(k)]);
        CHECK(dev < 0.01);
    }
}

TEST_CASE("resonant chain spectra are real, non-positive, and even") {
    const EmitterParams p(0.01, 0.0);
    for (DriveMode mode : {DriveMode::Waveguide, DriveMode::Bragg, DriveMode::AntiBragg}) {
        const auto d = drive_for(mode, 25);
        const auto r = mode == DriveMode::Waveguide ? waveguide_chain(p, d, kSmallGrid)
                       : mode == DriveMode::Bragg   ? bragg_chain(p, d, kSmallGrid)
                                                    : antibragg_chain(p, d, kSmallGrid);
        const int n = kSmallGrid.n_points();
        for (int k = 1; k < n; ++k) {
            const Complex v = r.psi_incoh_freq[static_cast<size_t>(k)];
            CHECK(std::abs(v.imag()) < 1e-18);
            CHECK(v.real() <= 0.0);
            CHECK(v == r.psi_incoh_freq[static_cast<size_t>(n - k)]);
        }
    }
}

TEST_CASE("bragg chain equals the waveguide chain incoherent spectrum at equal drive") {
    const EmitterParams p(0.01, 0.0);
    const auto wg = waveguide_chain(p, drive_for(DriveMode::Waveguide, 17), kSmallGrid);
    const auto br = bragg_chain(p, drive_for(DriveMode::Bragg, 17), kSmallGrid);
    for (int k = 0; k < kSmallGrid.n_points(); ++k) {
        CHECK(wg.psi_incoh_freq[static_cast<size_t>(k)] ==
              br.psi_incoh_freq[static_cast<size_t>(k)]);
    }
}

TEST_CASE("bragg chain photon statistics") {
    const EmitterParams p(0.01, 0.0);
    CHECK(g2_zero(bragg_chain(p, drive_for(DriveMode::Bragg, 1), kSmallGrid)) < 1e-12);
    const double g2_two = g2_zero(bragg_chain(p, drive_for(DriveMode::Bragg, 2), kSmallGrid));
    CHECK(g2_two == doctest::Approx(0.25).epsilon(0.08));
    const double g2_many = g2_zero(bragg_chain(p, drive_for(DriveMode::Bragg, 400), kSmallGrid));
    CHECK(g2_many == doctest::Approx(1.0).epsilon(0.05));
    CHECK_THROWS_AS(bragg_chain(EmitterParams(0.01, 0.5), drive_for(DriveMode::Bragg, 2), kSmallGrid),
                    UnsupportedGeometryError);
}

TEST_CASE("anti-bragg chain") {
    const EmitterParams p(0.01, 0.0);
    // Single emitter: exact single-emitter result.
    const auto one = antibragg_chain(p, drive_for(DriveMode::AntiBragg, 1), kSmallGrid);
    DriveConfig ds = drive_for(DriveMode::AntiBragg, 1);
    ds.mode = DriveMode::ExternalSingle;
    const auto single = response_external(p, ds);
    for (int k = 0; k < kSmallGrid.n_points(); k += 111) {
        const double w = kSmallGrid.omega(k);
        CHECK(rel_err(one.psi_incoh_freq[static_cast<size_t>(k)], single.psi_incoh_freq(w)) <
              1e-13);
    }
    CHECK(g2_zero(one) < 1e-12);

    // Even atom number: no coherent output.
    const auto even = antibragg_chain(p, drive_for(DriveMode::AntiBragg, 8), kSmallGrid);
    CHECK(even.alpha_out.value == Complex(0.0, 0.0));
    CHECK(std::isinf(g2_zero(even)));

    // Magnitude grows monotonically with N at fixed omega.
    double prev = 0.0;
    for (long n : {1L, 3L, 9L, 33L, 101L, 301L}) {
        const auto r = antibragg_chain(p, drive_for(DriveMode::AntiBragg, n), kSmallGrid);
        const double mag = std::abs(r.psi_incoh_freq[static_cast<size_t>(kSmallGrid.zero_index())]);
        CHECK(mag > prev);
        prev = mag;
    }

    // Plateau at omega ~ 0: |psi(0) / alpha_sc^2| -> 1/(beta(1-beta)).
    const auto big = antibragg_chain(p, drive_for(DriveMode::AntiBragg, 800), kSmallGrid);
    const double plateau =
        std::abs(big.psi_incoh_freq[static_cast<size_t>(kSmallGrid.zero_index())]) /
        std::abs(big.alpha_sc1_sq);
    CHECK(plateau == doctest::Approx(1.0 / (0.01 * 0.99)).epsilon(1e-6));
}

TEST_CASE("combined chain reduces to the waveguide chain bit-exactly at r = 0") {
    const EmitterParams p(0.01, 0.0);
    DriveConfig d = drive_for(DriveMode::Combined, 60, Complex(0.05, 0.0), Complex(0.0, 0.0));
    const auto combined = combined_chain(p, d, kSmallGrid);
    const auto wg = waveguide_chain(p, drive_for(DriveMode::Waveguide, 60), kSmallGrid);
    CHECK(combined.alpha_out.value == wg.alpha_out.value);
    CHECK(combined.psi_coh.value == wg.psi_coh.value);
    CHECK(std::memcmp(combined.psi_incoh_freq.data(), wg.psi_incoh_freq.data(),
                      combined.psi_incoh_freq.size() * sizeof(Complex)) == 0);
}

TEST_CASE("combined chain N = 1 equals the combined single-emitter response") {
    const EmitterParams p(0.01, 0.0);
    DriveConfig d = drive_for(DriveMode::Combined, 1, Complex(0.02, 0.0), Complex(0.04, 0.0));
    const auto chain = combined_chain(p, d, kSmallGrid);
    const auto single = response_combined(p, d);
    CHECK(rel_err(chain.alpha_out.value, single.alpha_out.value) < 1e-14);
    CHECK(rel_err(chain.psi_coh.value, single.psi_coh.value) < 1e-14);
    for (int k = 0; k < kSmallGrid.n_points(); k += 131) {
        const double w = kSmallGrid.omega(k);
        CHECK(rel_err(chain.psi_incoh_freq[static_cast<size_t>(k)], single.psi_incoh_freq(w)) <
              1e-13);
    }
    CHECK(g2_zero(chain) == doctest::Approx(g2_zero(single)).epsilon(1e-13));
}

TEST_CASE("combined chain rejects detuned or out-of-phase drives") {
    DriveConfig d = drive_for(DriveMode::Combined, 5, Complex(0.02, 0.0), Complex(0.04, 0.0));
    CHECK_THROWS_AS(combined_chain(EmitterParams(0.01, 0.3), d, kSmallGrid),
                    UnsupportedGeometryError);
    DriveConfig bad = d;
    bad.omega_ext = Complex(0.0, 0.04);
    CHECK_THROWS_AS(combined_chain(EmitterParams(0.01, 0.0), bad, kSmallGrid),
                    std::invalid_argument);
    DriveConfig anti = d;
    anti.omega_ext = Complex(-0.01, 0.0);
    CHECK(combined_chain(EmitterParams(0.01, 0.0), anti, kSmallGrid).flags.antiphase_drive);
}

TEST_CASE("monte carlo random-distance statistics") {
    const EmitterParams p(0.005, 0.0);
    DriveConfig d = drive_for(DriveMode::ExternalSingle, 1);
    CHECK_THROWS_AS(random_distance_g2_mc(p, d, 50, 1), std::invalid_argument);

    const auto one = random_distance_g2_mc(p, d, 2000, 42);
    CHECK(std::abs(one.g2_zero) < 1e-28);  // exact cancellation up to roundoff

    d.n_emitters = 4;
    const auto four = random_distance_g2_mc(p, d, 100000, 42);
    CHECK(std::abs(four.g2_zero - 0.75) <= 3.0 * four.std_error);

    d.n_emitters = 64;
    const auto many = random_distance_g2_mc(p, d, 40000, 7);
    CHECK(many.g2_zero == doctest::Approx(1.0 - 1.0 / 64.0).epsilon(0.05));

    // Deterministic for a fixed seed.
    const auto again = random_distance_g2_mc(p, d, 40000, 7);
    CHECK(again.g2_zero == many.g2_zero);
    CHECK(again.std_error == many.std_error);
}
