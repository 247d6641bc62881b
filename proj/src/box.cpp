#include "qpalm/box.hpp"

namespace qpalm {

BoxSet::BoxSet(Vec lo, Vec hi) : lower(std::move(lo)), upper(std::move(hi)) {
    if (lower.size() != upper.size())
        throw InputError("BoxSet: lower and upper must have equal length");
    for (int i = 0; i < lower.size(); ++i)
        if (!(lower[i] <= upper[i]))
            throw InputError("BoxSet: lower > upper at component " + std::to_string(i));
}

BoxSet BoxSet::cube(int n, double half_width) {
    if (n < 1 || !(half_width > 0.0)) throw InputError("BoxSet::cube: need n >= 1 and half_width > 0");
    return BoxSet(Vec::Constant(n, -half_width), Vec::Constant(n, half_width));
}

Vec BoxSet::project(const Vec& z) const {
    if (z.size() != lower.size())
        throw InputError("BoxSet::project: dimension mismatch");
    return z.cwiseMax(lower).cwiseMin(upper);
}

bool BoxSet::contains(const Vec& x, double tol) const {
    if (x.size() != lower.size()) return false;
    for (int i = 0; i < x.size(); ++i)
        if (x[i] < lower[i] - tol || x[i] > upper[i] + tol) return false;
    return true;
}

} // namespace qpalm
