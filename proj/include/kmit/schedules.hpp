#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kmit/types.hpp"

namespace kmit {

/// Scalar parameter sequence indexed by k >= 1. Three flavours:
///   constant : c_k = c
///   ramp     : c_k = (1 - 1/k) * c, increasing toward c
///   prefix   : explicit finite list; repeats the last value past the end,
///              but carries no limit information (verdicts based on it are
///              horizon-limited).
class ScalarSchedule {
public:
    static ScalarSchedule constant(double value);
    static ScalarSchedule ramp(double value);
    static ScalarSchedule prefix(std::vector<double> values);

    double at(int k) const; // k >= 1
    bool has_known_limit() const { return kind_ != Kind::Prefix; }
    double limit() const;   // throws std::logic_error for prefix schedules
    bool is_constant() const { return kind_ == Kind::Constant; }

    std::string describe() const; // "constant 0.3", "ramp 0.3", "prefix[n]"
    std::string kind_name() const;
    double nominal_value() const { return value_; }

private:
    enum class Kind { Constant, Ramp, Prefix };
    Kind kind_ = Kind::Constant;
    double value_ = 0.0;
    std::vector<double> values_;
};

/// Per-iteration parameters alpha_k, beta_k, lambda_k and optional
/// contraction moduli q_k (default 1).
struct ParameterSchedule {
    ScalarSchedule alpha = ScalarSchedule::constant(0.0);
    ScalarSchedule beta = ScalarSchedule::constant(0.0);
    ScalarSchedule lambda = ScalarSchedule::constant(0.5);
    std::optional<ScalarSchedule> q;

    double alpha_at(int k) const { return alpha.at(k); }
    double beta_at(int k) const { return beta.at(k); }
    double lambda_at(int k) const { return lambda.at(k); }
    double q_at(int k) const { return q ? q->at(k) : 1.0; }
    double mu_at(int k) const;
    double nu_at(int k) const;

    bool has_known_limits() const;

    static ParameterSchedule constants(double alpha, double beta, double lambda,
                                       std::optional<double> q = std::nullopt);

    /// key=value text form, e.g. "alpha=0.3,alpha_kind=ramp,beta=0,lambda=0.5".
    static ParameterSchedule parse(const std::string& text);
    std::string to_text() const;
};

/// nu_k = 1/lambda_k - 1, for lambda_k in (0,1).
double nu(double lambda_k);

/// mu_k = (1 - lambda_k) * alpha_k + lambda_k * beta_k.
double mu(double alpha_k, double beta_k, double lambda_k);

/// Bracket of the weak compatibility condition at index k (negative sup
/// over k means the configuration is admissible):
///   (1-l)a(1+a) + l b(1+b) + nu_k a(1-a) - nu_{k-1}(1-a_{k-1})
/// Convention at k = 1: nu_0 = nu_1 and alpha_0 = alpha_1.
double weak_margin(const ParameterSchedule& schedule, int k);

/// Strong-convergence variant with contraction moduli:
///   (1-l)a(1+a) + l q^2 b(1+b) + nu_k a(1-a) - Q_k nu_{k-1}(1-a_{k-1}),
/// where Q_k = 1 - l + l q^2. Equals weak_margin when q_k == 1.
double strong_margin(const ParameterSchedule& schedule, int k);

/// Constant-parameter quadratic
///   (beta-alpha)(1+alpha+beta) l^2 + (1-alpha+2 alpha^2) l - (1-alpha)^2,
/// negative exactly when the constant configuration is admissible.
double constant_case_margin(double alpha, double beta, double lambda);

struct LambdaBound {
    double value; // min(1, closed-form bound)
    bool capped;  // raw bound exceeded 1 (constraint non-binding)
};

/// Largest admissible relaxation for constant inertia (alpha, beta),
/// capped at 1. Closed-form branches:
///   beta == alpha : (1-a)^2 / (1 - a + 2 a^2)
///   alpha == 0    : 1 / (1 + beta)
///   beta == 0     : (1-a)^2 / (a (1+a)) for a >= 1/3, else 1
LambdaBound lambda_bound_info(double alpha, double beta);
double lambda_bound(double alpha, double beta);

double lambda_heavy_ball(double alpha); // alpha > 0
double lambda_nesterov(double alpha);
double lambda_reflected(double beta);

struct FeasibilityVerdict {
    bool hypothesis_ok = true;
    std::vector<std::string> violated;
    double weak_margin_sup = 0.0;
    std::optional<double> strong_margin_sup;
    bool feasible_weak = false;
    std::optional<bool> feasible_strong;
    /// True when some component schedule is a raw prefix, so the supremum
    /// could only be inspected up to the horizon.
    bool horizon_limited = false;
};

/// Checks every standing-hypothesis clause (parameter ranges, sup bounds
/// strictly below 1, mu_k nondecreasing) and the sup of the margin brackets
/// over k = 1..horizon. For schedules with known limits the limit term is
/// evaluated exactly and folded into the sup.
FeasibilityVerdict check_feasibility(const ParameterSchedule& schedule, int horizon);

/// Additive error stream, evaluated lazily per iteration index (k >= 1).
/// A default-constructed (null) function denotes the zero stream.
using PerturbationFn = std::function<Vec(int)>;

struct PerturbationSchedule {
    PerturbationFn eps;   // enters the y-line
    PerturbationFn rho;   // enters the z-line
    PerturbationFn theta; // enters the x-update

    bool any() const { return static_cast<bool>(eps) || static_cast<bool>(rho) ||
                              static_cast<bool>(theta); }

    Vec eps_at(int k, Eigen::Index dim) const;
    Vec rho_at(int k, Eigen::Index dim) const;
    Vec theta_at(int k, Eigen::Index dim) const;

    /// (scale / k^power) * direction
    static PerturbationFn power_decay(double scale, double power, Vec direction);
};

struct StreamSummary {
    std::vector<double> l1_partial;    // sum of norms up to k
    std::vector<double> l2sq_partial;  // sum of squared norms up to k
    double l1_total = 0.0;
    double l2sq_total = 0.0;
    double l1_tail_ratio = 0.0; // last-quarter / first-quarter contribution
    double l2_tail_ratio = 0.0;
    bool l1_apparently_summable = true;
    bool l2_apparently_summable = true;
};

struct PerturbationSummary {
    StreamSummary eps, rho, theta;
};

/// Partial l1/l2 budgets of each stream over k = 1..horizon plus a
/// tail-growth heuristic (ratio above 1e-2 flags apparent non-summability).
PerturbationSummary classify_perturbations(const PerturbationSchedule& perts,
                                           int horizon, Eigen::Index dim);

} // namespace kmit
