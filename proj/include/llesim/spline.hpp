#pragma once

#include <cstddef>
#include <vector>

namespace llesim {

/// Natural cubic spline through strictly increasing knots.
///
/// Second derivatives vanish at both end knots. Evaluation outside the knot
/// range continues the terminal cubic polynomial of the nearest end segment,
/// which is the extrapolation rule used by the dispersion fit.
class NaturalCubicSpline {
public:
    /// Requires x strictly increasing and x.size() == y.size() >= 2.
    NaturalCubicSpline(std::vector<double> x, std::vector<double> y);

    double eval(double x) const;
    double deriv(double x) const;

    std::size_t knot_count() const { return x_.size(); }

private:
    std::size_t segment(double x) const;

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> m_; // second derivatives at the knots
};

} // namespace llesim
