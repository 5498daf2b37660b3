#include "kmit/iteration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace kmit {

namespace {

constexpr double kDivergenceCap = 1e150;
constexpr long kDenseTraceLimit = 1000000;

bool within_cap(const Vec& x) {
    return x.allFinite() && x.cwiseAbs().maxCoeff() <= kDivergenceCap;
}

void append_sig(std::string& line, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12e", v);
    line += buf;
}

} // namespace

IterationState IterationState::initial(Vec x0) {
    IterationState s;
    s.k = 1;
    s.x_prev = x0;
    s.x_curr = std::move(x0);
    return s;
}

IterationState step(const IterationState& state, const OperatorFamily& family,
                    const StepParams& params, const StepPerturbations& perts) {
    const Vec& x = state.x_curr;
    if (x.size() != family.dim())
        throw std::invalid_argument("step: point dimension does not match operator domain");

    Vec momentum = x - state.x_prev;
    Vec y = x + params.alpha * momentum;
    if (perts.eps) y += *perts.eps;
    Vec z = x + params.beta * momentum;
    if (perts.rho) z += *perts.rho;

    Vec x_next = (1.0 - params.lambda) * y + params.lambda * family.apply(state.k, z);
    if (perts.theta) x_next += *perts.theta;

    IterationState next;
    next.k = state.k + 1;
    next.x_prev = x;
    next.x_curr = std::move(x_next);
    next.y = std::move(y);
    next.z = std::move(z);
    return next;
}

double residual(const OperatorFamily& family, int k, const Vec& x) {
    return (family.apply(k, x) - x).norm();
}

RunReport run(const OperatorFamily& family, const ParameterSchedule& schedule,
              const PerturbationSchedule& perts, const Vec& x0, double tolerance,
              int max_iter) {
    if (!(tolerance > 0.0)) throw std::domain_error("run: tolerance must be positive");
    if (max_iter < 1) throw std::domain_error("run: max_iter must be >= 1");
    if (x0.size() != family.dim())
        throw std::invalid_argument("run: point dimension does not match operator domain");

    const Eigen::Index n = x0.size();
    RunReport report;
    auto reference = family.limit_point();
    if (reference && reference->size() != n)
        throw std::invalid_argument("run: reference point dimension mismatch");

    Vec x_prev = x0;
    Vec x_curr = x0;
    double step_sq_sum = 0.0;

    for (int k = 1; k <= max_iter; ++k) {
        double res = residual(family, k, x_curr);
        double step_norm = (x_curr - x_prev).norm();
        step_sq_sum += step_norm * step_norm;

        Vec eps = perts.eps_at(k, n);
        Vec rho = perts.rho_at(k, n);
        Vec theta = perts.theta_at(k, n);
        if (eps.squaredNorm() > 0.0 || rho.squaredNorm() > 0.0 || theta.squaredNorm() > 0.0)
            report.perturbed = true;

        Vec momentum = x_curr - x_prev;
        double a = schedule.alpha_at(k), b = schedule.beta_at(k), l = schedule.lambda_at(k);
        Vec y = x_curr + a * momentum + eps;
        Vec z = x_curr + b * momentum + rho;
        Vec tz = family.apply(k, z);
        double km_res = (tz - y).norm();

        bool record = k <= kDenseTraceLimit || k % 10 == 0;
        if (record) {
            report.ks.push_back(k);
            report.residual_trace.push_back(res);
            report.km_residual_trace.push_back(km_res);
            report.step_norms.push_back(step_norm);
            report.step_sq_partial_sums.push_back(step_sq_sum);
            if (reference) report.dist_trace.push_back((x_curr - *reference).norm());
        }

        if (res <= tolerance) {
            report.stop_reason = StopReason::tolerance;
            report.iterations = k;
            report.final_point = x_curr;
            return report;
        }
        if (k == max_iter) break;

        Vec x_next = (1.0 - l) * y + l * tz + theta;
        if (!within_cap(x_next)) {
            report.stop_reason = StopReason::divergence;
            report.iterations = k;
            report.final_point = x_curr;
            return report;
        }
        x_prev = std::move(x_curr);
        x_curr = std::move(x_next);
    }

    report.stop_reason = StopReason::max_iter;
    report.iterations = max_iter;
    report.final_point = x_curr;
    return report;
}

void RunReport::write_csv(std::ostream& os) const {
    bool dist = has_dist();
    os << "k,residual,km_residual,step_norm,step_sq_sum";
    if (dist) os << ",dist";
    os << "\n";
    for (std::size_t i = 0; i < ks.size(); ++i) {
        std::string line = std::to_string(ks[i]);
        line += ',';
        append_sig(line, residual_trace[i]);
        line += ',';
        append_sig(line, km_residual_trace[i]);
        line += ',';
        append_sig(line, step_norms[i]);
        line += ',';
        append_sig(line, step_sq_partial_sums[i]);
        if (dist) {
            line += ',';
            append_sig(line, dist_trace[i]);
        }
        os << line << "\n";
    }
}

RateCheck verify_linear_rate(const RunReport& report, const ParameterSchedule& schedule) {
    if (report.perturbed)
        throw std::invalid_argument("verify_linear_rate: run was perturbed");
    if (!report.has_dist())
        throw std::invalid_argument("verify_linear_rate: report has no distance trace");
    if (!schedule.q)
        throw std::invalid_argument("verify_linear_rate: schedule has no contraction moduli");

    double sup_q_factor = 0.0; // Q = sup Q_k
    double sup_lambda = 0.0;
    double sup_alpha = 0.0;
    for (int k = 1; k <= report.iterations; ++k) {
        double l = schedule.lambda_at(k), qk = schedule.q_at(k);
        sup_q_factor = std::max(sup_q_factor, 1.0 - l + l * qk * qk);
        sup_lambda = std::max(sup_lambda, l);
        sup_alpha = std::max(sup_alpha, schedule.alpha_at(k));
    }
    if (schedule.has_known_limits()) {
        double l = schedule.lambda.limit();
        double qk = schedule.q->limit();
        sup_q_factor = std::max(sup_q_factor, 1.0 - l + l * qk * qk);
        sup_lambda = std::max(sup_lambda, l);
        sup_alpha = std::max(sup_alpha, schedule.alpha.limit());
    }

    double d1_sq = report.dist_trace.front() * report.dist_trace.front();
    double denom = (1.0 - sup_lambda) * (1.0 - sup_alpha);
    RateCheck out;
    out.pass = true;
    out.min_slack = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < report.ks.size(); ++i) {
        double bound = std::pow(sup_q_factor, report.ks[i]) * d1_sq / denom;
        double slack = bound - report.dist_trace[i] * report.dist_trace[i];
        out.min_slack = std::min(out.min_slack, slack);
        if (slack < 0.0) out.pass = false;
    }
    return out;
}

SummabilityDiagnostics summability_diagnostics(const RunReport& report) {
    SummabilityDiagnostics out;
    if (report.step_sq_partial_sums.empty()) return out;
    out.total_step_sq = report.step_sq_partial_sums.back();

    std::size_t n = report.step_sq_partial_sums.size();
    std::size_t q = std::max<std::size_t>(1, n / 4);
    if (out.total_step_sq > 0.0) {
        if (n > q) {
            double before = report.step_sq_partial_sums[n - q - 1];
            out.last_quarter_share = (out.total_step_sq - before) / out.total_step_sq;
        } else {
            out.last_quarter_share = 1.0;
        }
    }

    out.k_min_km_sq.resize(n);
    double running_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        double r = report.km_residual_trace[i];
        running_min = std::min(running_min, r * r);
        out.k_min_km_sq[i] = static_cast<double>(report.ks[i]) * running_min;
    }
    return out;
}

} // namespace kmit
