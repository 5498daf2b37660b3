#pragma once

#include <iosfwd>
#include <vector>

#include "kmit/operators.hpp"
#include "kmit/schedules.hpp"
#include "kmit/types.hpp"

namespace kmit {

/// Snapshot of the three-line update at index k. At k = 1 the two iterates
/// coincide (x_0 = x_1).
struct IterationState {
    int k = 1;
    Vec x_prev;
    Vec x_curr;
    Vec y;
    Vec z;

    static IterationState initial(Vec x0);
};

struct StepParams {
    double alpha = 0.0;
    double beta = 0.0;
    double lambda = 0.5;
};

/// Pointers are borrowed; null means the zero perturbation.
struct StepPerturbations {
    const Vec* eps = nullptr;
    const Vec* rho = nullptr;
    const Vec* theta = nullptr;
};

/// One update
///   y = x_k + alpha (x_k - x_{k-1}) + eps
///   z = x_k + beta  (x_k - x_{k-1}) + rho
///   x_{k+1} = (1 - lambda) y + lambda T_k z + theta
IterationState step(const IterationState& state, const OperatorFamily& family,
                    const StepParams& params, const StepPerturbations& perts = {});

enum class StopReason { tolerance, max_iter, divergence };

struct RunReport {
    std::vector<int> ks;                       // recorded iteration indices
    std::vector<double> residual_trace;        // ||T_k x_k - x_k||
    std::vector<double> km_residual_trace;     // ||T_k z_k - y_k||
    std::vector<double> step_norms;            // ||x_k - x_{k-1}||
    std::vector<double> step_sq_partial_sums;  // running sum of squared steps
    std::vector<double> dist_trace;            // ||x_k - p*||; empty if unknown
    StopReason stop_reason = StopReason::max_iter;
    int iterations = 0;
    bool perturbed = false;
    Vec final_point;

    bool converged() const { return stop_reason == StopReason::tolerance; }
    bool has_dist() const { return !dist_trace.empty(); }

    /// Header: k,residual,km_residual,step_norm,step_sq_sum[,dist]
    void write_csv(std::ostream& os) const;
};

/// ||T_k x - x||.
double residual(const OperatorFamily& family, int k, const Vec& x);

/// Iterates from x_0 = x_1 = x0 until residual(k, x_k) <= tolerance or
/// k = max_iter, recording one trace row per index (decimated by 10 past
/// 10^6 iterations). Aborts with StopReason::divergence when an iterate
/// leaves [-1e150, 1e150] or turns non-finite, keeping the last finite k.
RunReport run(const OperatorFamily& family, const ParameterSchedule& schedule,
              const PerturbationSchedule& perts, const Vec& x0, double tolerance,
              int max_iter);

struct RateCheck {
    bool pass = false;
    double min_slack = 0.0; // min over k of (bound_k - dist_k^2)
};

/// Verifies  dist_k^2 <= Q^k dist_1^2 / ((1-Lambda)(1-A))  at every recorded
/// index of an unperturbed contractive run, with Q = sup_k (1 - l_k + l_k q_k^2),
/// Lambda = sup l_k, A = sup alpha_k.
RateCheck verify_linear_rate(const RunReport& report, const ParameterSchedule& schedule);

struct SummabilityDiagnostics {
    double total_step_sq = 0.0;        // final partial sum of squared steps
    double last_quarter_share = 0.0;   // share contributed by the last quarter
    std::vector<double> k_min_km_sq;   // k * min_{j<=k} km_residual_j^2
};

SummabilityDiagnostics summability_diagnostics(const RunReport& report);

} // namespace kmit
