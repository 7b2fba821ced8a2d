#ifndef WGQED_GRID_HPP
#define WGQED_GRID_HPP

#include <vector>

namespace wgqed {

// Uniform frequency grid, symmetric about 0 and containing omega = 0 exactly:
// omega_k = (k - n/2) * (2W/n), k = 0..n-1. Conjugate time grid under the
// fast transform has spacing dtau = pi / W.
class FrequencyGrid {
public:
    FrequencyGrid(double half_width, int n_points);  // throws std::invalid_argument

    double half_width() const { return half_width_; }
    int n_points() const { return n_; }
    double spacing() const { return 2.0 * half_width_ / n_; }
    int zero_index() const { return n_ / 2; }
    double omega(int k) const { return (k - n_ / 2) * spacing(); }
    std::vector<double> omegas() const;

    FrequencyGrid widened(int doublings) const;

    static FrequencyGrid default_grid() { return FrequencyGrid(20.0, 1 << 14); }

private:
    double half_width_;
    int n_;
};

}  // namespace wgqed

#endif
