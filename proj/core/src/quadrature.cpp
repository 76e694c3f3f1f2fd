#include "cubicproc/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace cubic {

namespace {

// Legendre nodes by Newton iteration on the three-term recurrence; the
// usual cosine guess converges in a handful of steps to machine precision.
GaussLegendre build_rule(int n) {
    GaussLegendre rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double step = p1 / pp;
            z -= step;
            if (std::abs(step) < 1e-15) break;
        }
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        const double w = 2.0 / ((1.0 - z * z) * pp * pp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

}  // namespace

const GaussLegendre& gauss_legendre(int points) {
    if (points < 1) throw std::invalid_argument("gauss_legendre: points must be >= 1");
    static std::map<int, GaussLegendre> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(points);
    if (it == cache.end()) it = cache.emplace(points, build_rule(points)).first;
    return it->second;
}

PanelRule composite_rule(double lo, double hi, int panels, int points_per_panel) {
    if (!(lo < hi)) throw std::invalid_argument("composite_rule: need lo < hi");
    if (panels < 1 || points_per_panel < 1)
        throw std::invalid_argument("composite_rule: panels and points must be >= 1");
    const GaussLegendre& gl = gauss_legendre(points_per_panel);
    PanelRule rule;
    rule.lo = lo;
    rule.hi = hi;
    rule.panels = panels;
    rule.points_per_panel = points_per_panel;
    rule.nodes.reserve(static_cast<std::size_t>(panels) * points_per_panel);
    rule.weights.reserve(rule.nodes.capacity());
    const double width = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
        const double a = lo + p * width;
        const double mid = a + 0.5 * width;
        for (int i = 0; i < points_per_panel; ++i) {
            rule.nodes.push_back(mid + 0.5 * width * gl.nodes[i]);
            rule.weights.push_back(0.5 * width * gl.weights[i]);
        }
    }
    return rule;
}

double integrate(const std::function<double(double)>& f, const PanelRule& rule) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * f(rule.nodes[i]);
    return acc;
}

double integrate(const std::function<double(double)>& f, double lo, double hi, int panels,
                 int points_per_panel) {
    return integrate(f, composite_rule(lo, hi, panels, points_per_panel));
}

}  // namespace cubic
