#include "cubicproc/cdf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cubic {

CdfView::CdfView(Kernel k, int panels, int points_per_panel, double spread)
    : kernel_(std::move(k)), panels_(panels), points_per_panel_(points_per_panel),
      spread_(spread) {
    if (panels_ < 1 || points_per_panel_ < 1 || !(spread_ > 0.0))
        throw std::invalid_argument("CdfView: bad discretization parameters");
}

std::pair<double, double> CdfView::domain(double s, double x, double y, double z,
                                          double t) const {
    const double mu = kernel_.mean_hint(x, y, z);
    const double sigma = kernel_.sigma_hint(s, t);
    return {mu - spread_ * sigma, mu + spread_ * sigma};
}

double CdfView::value(double s, double x, double y, double z, double t, double w) const {
    const auto [lo, hi] = domain(s, x, y, z, t);
    if (w <= lo) return 0.0;
    const double top = std::min(w, hi);
    const double width = (hi - lo) / panels_;
    const int full = std::min(panels_, static_cast<int>(std::floor((top - lo) / width)));
    const GaussLegendre& gl = gauss_legendre(points_per_panel_);

    auto panel_integral = [&](double a, double b) {
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        double acc = 0.0;
        for (int i = 0; i < points_per_panel_; ++i)
            acc += half * gl.weights[i] * kernel_(s, x, y, z, t, mid + half * gl.nodes[i]);
        return acc;
    };

    double acc = 0.0;
    for (int p = 0; p < full; ++p) acc += panel_integral(lo + p * width, lo + (p + 1) * width);
    const double partial_lo = lo + full * width;
    if (top > partial_lo) acc += panel_integral(partial_lo, top);
    return acc;
}

CdfView::BoundaryCheck CdfView::boundary_check(double s, double x, double y, double z,
                                               double t) const {
    const auto [lo, hi] = domain(s, x, y, z, t);
    BoundaryCheck check;
    check.at_lo = value(s, x, y, z, t, lo);
    check.at_hi = value(s, x, y, z, t, hi);

    // Scan a grid finer than the panels so partial-panel evaluation is
    // exercised, and record the most negative increment.
    const int scan = panels_ * 4;
    double prev = check.at_lo;
    double worst = 0.0;
    for (int i = 1; i <= scan; ++i) {
        const double w = lo + (hi - lo) * static_cast<double>(i) / scan;
        const double cur = value(s, x, y, z, t, w);
        worst = std::min(worst, cur - prev);
        prev = cur;
    }
    check.monotonicity = worst;
    return check;
}

}  // namespace cubic
