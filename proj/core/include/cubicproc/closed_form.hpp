#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cubicproc/cubic_tensor.hpp"
#include "cubicproc/simplex.hpp"

namespace cubic {

/// A transition family given in closed form, evaluable at real times with
/// gap t - s >= 1. The evaluator receives the initial distribution because
/// closed-form families typically reference it.
///
/// Deliberately permissive: nothing is assumed about the values. Which of
/// the structural conditions actually hold is measured by
/// `verify_conditions`, not enforced here.
struct ClosedFormFamily {
    int n = 0;
    std::string name;
    std::function<double(double s, double t, int i, int j, int k, int l,
                         const SimplexVector& x0)>
        eval;

    double operator()(double s, double t, int i, int j, int k, int l,
                      const SimplexVector& x0) const {
        return eval(s, t, i, j, k, l, x0);
    }

    /// All n^4 entries at (s, t) as a raw tensor (shape-checked only).
    CubicTensor tensor(double s, double t, const SimplexVector& x0) const;

    /// Distribution at real time tau: x0 for tau = 0, otherwise the
    /// contraction of p^[0,tau] with x0 in all three parent slots (tau >= 1).
    SimplexVector distribution(double tau, const SimplexVector& x0) const;
};

/// Three-state closed-form family with mixing parameter 0 <= epsilon <= 1/2.
///
/// Unit-gap law: triply-equal parent rows keep their state with probability
/// 1 - 2*epsilon (and place nothing elsewhere, so those rows lose 2*epsilon
/// of mass whenever epsilon > 0); all other rows are uniform. Over longer
/// gaps the entries relax towards the initial distribution. The verifier
/// reports the defects quantitatively instead of repairing them.
ClosedFormFamily example1_family(double epsilon);

/// Family with every entry 1/n, constant in time.
ClosedFormFamily uniform_family(int n);

struct ConditionCheck {
    std::string name;        // "I".."V"
    double statistic = 0.0;  // max defect over the scanned grid
    double tolerance = 0.0;
    bool pass = false;
    bool vacuous = false;    // condition IV has no finite-state content
    std::string worst;       // human-readable location of the worst defect
    std::map<std::string, double> metadata;  // auxiliary statistics
};

struct ConditionReport {
    int s_max = 0;
    int t_max = 0;
    std::vector<ConditionCheck> checks;

    bool all_pass() const;
    const ConditionCheck& check(const std::string& name) const;
};

/// Scans the integer grid 0 <= s <= s_max, s < t <= t_max and reports, per
/// structural condition, the worst defect found:
///   I   unit-gap homogeneity   max |p^[t,t+1] - p^[0,1]|
///   II  parent symmetry        max |p(ijk,l) - p(perm(ijk),l)|
///   III measure property       max |row sum - 1|, most negative entry
///   IV  (vacuous for finite state spaces, reported as such)
///   V   fundamental equation   max residual over all admissible (s,tau,t)
/// A condition passes iff its statistic is <= tol. Defects are data here,
/// never exceptions.
ConditionReport verify_conditions(const ClosedFormFamily& f, const SimplexVector& x0,
                                  int s_max, int t_max, double tol = kDefaultTol);

/// Fundamental-equation residual for a closed-form family, with the
/// intermediate distribution x^(tau) computed from the family itself.
double fundamental_residual(const ClosedFormFamily& f, const SimplexVector& x0, double s,
                            double tau, double t);

}  // namespace cubic
