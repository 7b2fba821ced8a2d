#include "wgqed/errors.hpp"

#include <sstream>

namespace wgqed {

namespace {
std::string no_angle_message(int order, double lattice_spacing, double n_eff, double cos_value) {
    std::ostringstream os;
    os << "no physical angle: |cos(theta)| = " << std::abs(cos_value)
       << " > 1 for order m = " << order << ", lattice spacing a = " << lattice_spacing
       << ", n_eff = " << n_eff;
    return os.str();
}
}  // namespace

NoPhysicalAngleError::NoPhysicalAngleError(int order_, double lattice_spacing_, double n_eff_,
                                           double cos_value_)
    : std::runtime_error(no_angle_message(order_, lattice_spacing_, n_eff_, cos_value_)),
      order(order_),
      lattice_spacing(lattice_spacing_),
      n_eff(n_eff_),
      cos_value(cos_value_) {}

}  // namespace wgqed
