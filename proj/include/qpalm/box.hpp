#pragma once

#include "qpalm/types.hpp"

namespace qpalm {

// Axis-aligned box X = prod_i [lower_i, upper_i] with exact Euclidean projection.
struct BoxSet {
    Vec lower;
    Vec upper;

    BoxSet() = default;
    BoxSet(Vec lo, Vec hi);

    // Centered cube [-half_width, half_width]^n.
    static BoxSet cube(int n, double half_width);

    int dim() const { return static_cast<int>(lower.size()); }

    // Set diameter ||upper - lower||_2.
    double diameter() const { return (upper - lower).norm(); }

    // Componentwise clamp; the unique nearest point of the box.
    Vec project(const Vec& z) const;

    bool contains(const Vec& x, double tol = 0.0) const;
};

} // namespace qpalm
