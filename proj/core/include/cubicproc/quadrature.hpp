#pragma once

#include <functional>
#include <vector>

namespace cubic {

/// Gauss-Legendre rule on [-1, 1]. Nodes are found by Newton iteration on
/// the Legendre recurrence and cached per point count.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussLegendre& gauss_legendre(int points);

/// Composite rule: `panels` equal panels over [lo, hi], `points` Gauss nodes
/// per panel.
struct PanelRule {
    double lo = 0.0;
    double hi = 0.0;
    int panels = 0;
    int points_per_panel = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
};

PanelRule composite_rule(double lo, double hi, int panels, int points_per_panel);

double integrate(const std::function<double(double)>& f, const PanelRule& rule);
double integrate(const std::function<double(double)>& f, double lo, double hi, int panels,
                 int points_per_panel);

}  // namespace cubic
