#include "wgqed/spectral_transform.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "wgqed/errors.hpp"

namespace wgqed {

namespace {

constexpr int K = SpectralTransform::kTailTerms;

// Fit nodes at and beyond the grid boundary, and interleaved residual checks.
constexpr std::array<double, K> kFitFactors = {1.0, 1.3, 1.7, 2.3, 3.2, 4.5};
constexpr std::array<double, K> kCheckFactors = {1.15, 1.5, 2.0, 2.75, 3.8, 6.0};

std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

// Solve the K x K complex system A x = b by Gaussian elimination with
// partial pivoting. A is tiny and well conditioned after column scaling.
std::array<Complex, K> solve_dense(std::array<std::array<Complex, K>, K> a,
                                   std::array<Complex, K> b) {
    for (int col = 0; col < K; ++col) {
        int pivot = col;
        for (int r = col + 1; r < K; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        if (std::abs(a[col][col]) == 0.0) {
            throw std::runtime_error("tail fit system is singular");
        }
        for (int r = col + 1; r < K; ++r) {
            const Complex f = a[r][col] / a[col][col];
            for (int c = col; c < K; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::array<Complex, K> x{};
    for (int r = K - 1; r >= 0; --r) {
        Complex s = b[r];
        for (int c = r + 1; c < K; ++c) s -= a[r][c] * x[c];
        x[r] = s / a[r][r];
    }
    return x;
}

// Model of the spectrum at and beyond the boundary:
//   model(omega) = sum_k c_k / (sigma^2 + omega^2)^k,  k = 1..K, sigma = W/2.
// Coefficients are kept in the boundary-normalized basis (v/vW)^k for
// conditioning; c_k = d_k / vW^k.
struct TailModel {
    double sigma;
    double v_at_boundary;
    std::array<Complex, K> d;

    double v(double omega) const { return 1.0 / (sigma * sigma + omega * omega); }

    Complex eval(double omega) const {
        const double u = v(omega) / v_at_boundary;
        Complex acc(0.0, 0.0);
        double up = 1.0;
        for (int k = 0; k < K; ++k) {
            up *= u;
            acc += d[k] * up;
        }
        return acc;
    }
};

TailModel fit_tail(const SpectrumFn& psi, double half_width) {
    TailModel m;
    m.sigma = 0.5 * half_width;
    m.v_at_boundary = m.v(kFitFactors[0] * half_width);
    std::array<std::array<Complex, K>, K> a{};
    std::array<Complex, K> b{};
    for (int row = 0; row < K; ++row) {
        const double x = kFitFactors[static_cast<size_t>(row)] * half_width;
        const double u = m.v(x) / m.v_at_boundary;
        double up = 1.0;
        for (int col = 0; col < K; ++col) {
            up *= u;
            a[row][col] = Complex(up, 0.0);
        }
        b[row] = psi(x);
    }
    m.d = solve_dense(a, b);
    return m;
}

// Closed-form transforms of the model basis under
// (1/2pi) int f_k(omega) e^{-i omega tau} d omega with f_k = (sigma^2+omega^2)^{-k}:
//   = P_k(sigma|tau|) e^{-sigma|tau|} / (2 sigma^{2k-1})
// where P_1 = 1 and P_{m+1}(u) = [(2m-1) P_m + u (P_m - P_m')] / (2m).
std::array<std::array<double, K>, K> tail_polynomials() {
    std::array<std::array<double, K>, K> p{};  // p[m][j]: coefficient of u^j in P_{m+1}
    p[0][0] = 1.0;
    for (int m = 1; m < K; ++m) {
        for (int j = 0; j < K; ++j) {
            const double pm = p[m - 1][j];
            const double pm_shift = (j > 0) ? p[m - 1][j - 1] : 0.0;
            const double dpm_shift = (j > 0) ? j * p[m - 1][j] : 0.0;  // u * P'_m at u^j: j p_j u^j
            p[m][j] = ((2 * m - 1) * pm + pm_shift - dpm_shift) / (2.0 * m);
        }
    }
    return p;
}

double eval_poly(const std::array<double, K>& coeffs, double u) {
    double acc = 0.0;
    for (int j = K - 1; j >= 0; --j) acc = acc * u + coeffs[static_cast<size_t>(j)];
    return acc;
}

std::vector<Complex> sample(const SpectrumFn& psi, const FrequencyGrid& grid) {
    std::vector<Complex> out(static_cast<size_t>(grid.n_points()));
    for (int k = 0; k < grid.n_points(); ++k) out[static_cast<size_t>(k)] = psi(grid.omega(k));
    return out;
}

double peak_magnitude(const std::vector<Complex>& samples) {
    double peak = 0.0;
    for (const auto& v : samples) peak = std::max(peak, std::abs(v));
    return peak;
}

bool tail_adequate(const SpectrumFn& psi, const TailModel& model, double half_width, double peak) {
    for (double f : kCheckFactors) {
        const double x = f * half_width;
        if (std::abs(psi(x) - model.eval(x)) > SpectralTransform::kAdequacyThreshold * peak) {
            return false;
        }
    }
    return true;
}

TimeTrace run_transform(const std::vector<Complex>& samples, const TailModel& model,
                        const FrequencyGrid& grid) {
    const int n = grid.n_points();
    const double dw = grid.spacing();
    const double dtau = 2.0 * M_PI / (n * dw);

    fftw_complex* buf_in;
    fftw_complex* buf_out;
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        buf_in = fftw_alloc_complex(static_cast<size_t>(n));
        buf_out = fftw_alloc_complex(static_cast<size_t>(n));
        plan = fftw_plan_dft_1d(n, buf_in, buf_out, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    for (int k = 0; k < n; ++k) {
        const Complex phi = samples[static_cast<size_t>(k)] - model.eval(grid.omega(k));
        const double sgn = (k & 1) ? -1.0 : 1.0;
        buf_in[k][0] = sgn * phi.real();
        buf_in[k][1] = sgn * phi.imag();
    }
    fftw_execute(plan);

    const auto polys = tail_polynomials();
    TimeTrace trace;
    trace.tau.resize(static_cast<size_t>(n));
    trace.values.resize(static_cast<size_t>(n));
    trace.half_width_used = grid.half_width();
    // n is a multiple of 4, so the (-1)^{n/2} factor from centering both
    // grids is +1.
    const double scale = dw / (2.0 * M_PI);
    for (int j = 0; j < n; ++j) {
        const double tau = (j - n / 2) * dtau;
        const double sgn = (j & 1) ? -1.0 : 1.0;
        Complex value = scale * sgn * Complex(buf_out[j][0], buf_out[j][1]);
        const double x = model.sigma * std::abs(tau);
        const double damp = std::exp(-x);
        if (damp > 0.0) {
            double sig_pow = model.sigma;  // sigma^{2k-1}
            double vWk = model.v_at_boundary;
            for (int k = 1; k <= K; ++k) {
                const Complex c_k = model.d[static_cast<size_t>(k - 1)] / vWk;
                value += c_k * eval_poly(polys[static_cast<size_t>(k - 1)], x) * damp /
                         (2.0 * sig_pow);
                sig_pow *= model.sigma * model.sigma;
                vWk *= model.v_at_boundary;
            }
        }
        trace.tau[static_cast<size_t>(j)] = tau;
        trace.values[static_cast<size_t>(j)] = value;
    }
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_destroy_plan(plan);
        fftw_free(buf_in);
        fftw_free(buf_out);
    }
    return trace;
}

}  // namespace

TimeTrace SpectralTransform::freq_to_time(const SpectrumFn& psi, const FrequencyGrid& grid) {
    return freq_to_time(sample(psi, grid), psi, grid);
}

TimeTrace SpectralTransform::freq_to_time(const std::vector<Complex>& samples,
                                          const SpectrumFn& psi, const FrequencyGrid& grid) {
    if (samples.size() != static_cast<size_t>(grid.n_points())) {
        throw std::invalid_argument("sample count does not match the grid");
    }
    std::vector<Complex> cur = samples;
    FrequencyGrid g = grid;
    for (int attempt = 0; attempt <= kMaxWidenings; ++attempt) {
        const double peak = peak_magnitude(cur);
        if (peak == 0.0) {
            // Zero spectrum: zero trace on the conjugate grid.
            TimeTrace trace;
            const int n = g.n_points();
            const double dtau = 2.0 * M_PI / (n * g.spacing());
            trace.tau.resize(static_cast<size_t>(n));
            trace.values.assign(static_cast<size_t>(n), Complex(0.0, 0.0));
            for (int j = 0; j < n; ++j) trace.tau[static_cast<size_t>(j)] = (j - n / 2) * dtau;
            trace.half_width_used = g.half_width();
            trace.widened = (attempt > 0);
            return trace;
        }
        const TailModel model = fit_tail(psi, g.half_width());
        if (tail_adequate(psi, model, g.half_width(), peak)) {
            TimeTrace trace = run_transform(cur, model, g);
            trace.widened = (attempt > 0);
            return trace;
        }
        if (attempt == kMaxWidenings) break;
        g = g.widened(1);
        cur = sample(psi, g);
    }
    std::ostringstream os;
    os << "spectrum is not adequately captured by the frequency grid even after " << kMaxWidenings
       << " widenings (final half-width " << g.half_width() * 2.0 / 2.0
       << "); increase --grid-width";
    throw GridTruncationError(os.str());
}

double SpectralTransform::spectrum_power(const std::vector<Complex>& samples, const SpectrumFn& psi,
                                         const FrequencyGrid& grid) {
    double acc = 0.0;
    for (const auto& v : samples) acc += std::norm(v);
    acc *= grid.spacing() / (2.0 * M_PI);
    // Tail of |model|^2 over |omega| > W via the recursion
    //   I_{m+1} = [(2m-1) I_m - W/(sigma^2+W^2)^m] / (2 m sigma^2),
    //   I_1 = (pi/2 - atan(W/sigma)) / sigma.
    const TailModel model = fit_tail(psi, grid.half_width());
    const double W = grid.half_width();
    const double s = model.sigma;
    std::array<double, 2 * K + 1> moments{};  // I_m, m = 1..2K
    moments[1] = (M_PI / 2.0 - std::atan(W / s)) / s;
    double denom_pow = 1.0 / (s * s + W * W);  // (sigma^2+W^2)^{-m}
    for (int m = 1; m < 2 * K; ++m) {
        moments[static_cast<size_t>(m + 1)] =
            ((2 * m - 1) * moments[static_cast<size_t>(m)] - W * denom_pow) / (2.0 * m * s * s);
        denom_pow /= (s * s + W * W);
    }
    std::array<Complex, K> c{};
    double vWk = 1.0;
    for (int k = 0; k < K; ++k) {
        vWk *= model.v_at_boundary;
        c[static_cast<size_t>(k)] = model.d[static_cast<size_t>(k)] / vWk;
    }
    double tail = 0.0;
    for (int k = 1; k <= K; ++k) {
        for (int l = 1; l <= K; ++l) {
            tail += (c[static_cast<size_t>(k - 1)] * std::conj(c[static_cast<size_t>(l - 1)]))
                        .real() *
                    moments[static_cast<size_t>(k + l)];
        }
    }
    acc += 2.0 * tail / (2.0 * M_PI);
    return acc;
}

Complex grid_integral(const std::vector<Complex>& samples, const FrequencyGrid& grid) {
    if (samples.size() != static_cast<size_t>(grid.n_points())) {
        throw std::invalid_argument("sample count does not match the grid");
    }
    Complex acc(0.0, 0.0);
    for (const auto& v : samples) acc += v;
    return acc * grid.spacing() / (2.0 * M_PI);
}

}  // namespace wgqed
