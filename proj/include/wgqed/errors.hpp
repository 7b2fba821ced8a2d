#ifndef WGQED_ERRORS_HPP
#define WGQED_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wgqed {

// Numerical guard errors. Invalid parameter values use std::invalid_argument;
// these types mark conditions where the requested computation is well-formed
// but cannot be carried out (the CLI maps them to exit code 3).

class GridTruncationError : public std::runtime_error {
public:
    explicit GridTruncationError(const std::string& what) : std::runtime_error(what) {}
};

class NoPhysicalAngleError : public std::runtime_error {
public:
    NoPhysicalAngleError(int order, double lattice_spacing, double n_eff, double cos_value);
    int order;
    double lattice_spacing;
    double n_eff;
    double cos_value;
};

class SaturatedOpticalDepthError : public std::runtime_error {
public:
    explicit SaturatedOpticalDepthError(const std::string& what) : std::runtime_error(what) {}
};

class UnsupportedGeometryError : public std::runtime_error {
public:
    explicit UnsupportedGeometryError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wgqed

#endif
