#include "wgqed/grid.hpp"

#include <sstream>
#include <stdexcept>

namespace wgqed {

namespace {
bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

FrequencyGrid::FrequencyGrid(double half_width, int n_points)
    : half_width_(half_width), n_(n_points) {
    if (!(half_width > 0.0)) {
        throw std::invalid_argument("grid half-width must be positive");
    }
    if (!is_power_of_two(n_points) || n_points < (1 << 10)) {
        std::ostringstream os;
        os << "grid points must be a power of two >= 1024, got " << n_points;
        throw std::invalid_argument(os.str());
    }
}

std::vector<double> FrequencyGrid::omegas() const {
    std::vector<double> w(static_cast<size_t>(n_));
    for (int k = 0; k < n_; ++k) w[static_cast<size_t>(k)] = omega(k);
    return w;
}

FrequencyGrid FrequencyGrid::widened(int doublings) const {
    double w = half_width_;
    for (int i = 0; i < doublings; ++i) w *= 2.0;
    return FrequencyGrid(w, n_);
}

}  // namespace wgqed
