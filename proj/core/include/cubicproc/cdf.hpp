#pragma once

#include "cubicproc/kernel.hpp"

namespace cubic {

/// Distribution-function view of a kernel: F(s,x,y,z,t,w) = int_{lo}^{w} f.
/// Evaluation accumulates whole panels and finishes with a Gauss rule on the
/// partial panel, so values along increasing w share their prefix sums and
/// monotonicity holds exactly for a nonnegative integrand.
class CdfView {
public:
    explicit CdfView(Kernel k, int panels = 64, int points_per_panel = 16,
                     double spread = 8.0);

    /// Truncated domain used for the given arguments, [mu - spread*sigma,
    /// mu + spread*sigma] from the kernel metadata.
    std::pair<double, double> domain(double s, double x, double y, double z, double t) const;

    double value(double s, double x, double y, double z, double t, double w) const;

    struct BoundaryCheck {
        double at_lo = 0.0;        // F at the lower truncation edge
        double at_hi = 0.0;        // F at the upper truncation edge
        double monotonicity = 0.0; // most negative increment over the scan grid
    };

    /// Scans F over the domain grid and reports the boundary values and the
    /// worst monotonicity defect (0 when F is nondecreasing).
    BoundaryCheck boundary_check(double s, double x, double y, double z, double t) const;

private:
    Kernel kernel_;
    int panels_;
    int points_per_panel_;
    double spread_;
};

}  // namespace cubic
