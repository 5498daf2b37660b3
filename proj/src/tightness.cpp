#include "kmit/tightness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "kmit/schedules.hpp"

namespace kmit {

namespace {

constexpr double kScanStep = 1e-3;
constexpr int kScanCount = 1000; // lambda grid i * 1e-3, i = 1..1000

void append_sig(std::string& line, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12e", v);
    line += buf;
}

} // namespace

Eigen::Matrix2cd CompanionSystem::matrix() const {
    Eigen::Matrix2cd m;
    m << omega, -delta, std::complex<double>(1.0, 0.0), std::complex<double>(0.0, 0.0);
    return m;
}

CompanionSystem companion(double alpha, double beta, double lambda, double phi) {
    std::complex<double> phase = std::polar(1.0, phi);
    CompanionSystem sys;
    sys.omega = (1.0 - lambda) * (1.0 + alpha) + lambda * (1.0 + beta) * phase;
    sys.delta = (1.0 - lambda) * alpha + lambda * beta * phase;
    return sys;
}

double spectral_radius(const CompanionSystem& sys) {
    std::complex<double> s = std::sqrt(sys.omega * sys.omega - 4.0 * sys.delta);
    std::complex<double> r1 = 0.5 * (sys.omega + s);
    std::complex<double> r2 = 0.5 * (sys.omega - s);
    // Root pairing: divide delta by the larger root to avoid cancellation.
    std::complex<double> big = std::abs(r1) >= std::abs(r2) ? r1 : r2;
    if (std::abs(big) == 0.0) return 0.0;
    std::complex<double> small = sys.delta / big;
    return std::max(std::abs(big), std::abs(small));
}

ThresholdResult lambda_tilde_phi_info(double alpha, double beta, double phi, double tol) {
    if (!(tol > 0.0)) throw std::domain_error("lambda_tilde_phi: tol must be positive");

    auto stable = [&](double lambda) {
        return spectral_radius(companion(alpha, beta, lambda, phi)) < 1.0;
    };

    int first_unstable = 0; // 1-based scan index; 0 = none found
    ThresholdResult out;
    for (int i = 1; i <= kScanCount; ++i) {
        bool ok = stable(i * kScanStep);
        if (!ok && first_unstable == 0) {
            first_unstable = i;
        } else if (ok && first_unstable != 0) {
            out.restabilizes = true;
        }
    }
    if (first_unstable == 0) {
        out.value = 1.0;
        return out;
    }

    double lo = (first_unstable - 1) * kScanStep; // lo = 0 when the first sample fails
    double hi = first_unstable * kScanStep;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (stable(mid))
            lo = mid;
        else
            hi = mid;
    }
    out.value = 0.5 * (lo + hi);
    out.stable_set_empty = out.value <= tol;
    return out;
}

double lambda_tilde_phi(double alpha, double beta, double phi, double tol) {
    return lambda_tilde_phi_info(alpha, beta, phi, tol).value;
}

double lambda_tilde(double alpha, double beta, double tol, int phi_steps) {
    if (phi_steps < 1) throw std::domain_error("lambda_tilde: phi_steps must be >= 1");
    double best = 1.0;
    for (int j = 1; j <= phi_steps; ++j) {
        double phi = j * M_PI / phi_steps;
        best = std::min(best, lambda_tilde_phi(alpha, beta, phi, tol));
    }
    return best;
}

void lambda_tilde_sweep_serial(std::span<const std::pair<double, double>> samples,
                               double tol, int phi_steps, std::span<double> out) {
    if (out.size() != samples.size())
        throw std::invalid_argument("lambda_tilde_sweep: output size mismatch");
    for (std::size_t i = 0; i < samples.size(); ++i)
        out[i] = lambda_tilde(samples[i].first, samples[i].second, tol, phi_steps);
}

void lambda_tilde_sweep_parallel(std::span<const std::pair<double, double>> samples,
                                 double tol, int phi_steps, std::span<double> out) {
    if (out.size() != samples.size())
        throw std::invalid_argument("lambda_tilde_sweep: output size mismatch");
    const auto n = static_cast<std::ptrdiff_t>(samples.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        out[i] = lambda_tilde(samples[i].first, samples[i].second, tol, phi_steps);
}

std::string regime_name(Regime r) {
    switch (r) {
    case Regime::heavy_ball: return "heavy_ball";
    case Regime::nesterov: return "nesterov";
    case Regime::reflected: return "reflected";
    case Regime::general: return "general";
    }
    return "general";
}

namespace {

struct Domain {
    Regime regime;
    std::string description;
    std::vector<std::pair<double, double>> samples;
    double measure;
};

} // namespace

TightnessReport tightness_report(int grid_resolution, double tol, int phi_steps,
                                 bool parallel) {
    if (grid_resolution < 10)
        throw std::domain_error("tightness_report: grid resolution must be >= 10");

    const int n = grid_resolution;
    auto midpoint = [n](int i) { return (i + 0.5) / n; };

    std::vector<Domain> domains;
    domains.push_back({Regime::heavy_ball, "beta = 0, alpha in [0,1)", {}, 1.0});
    domains.push_back({Regime::nesterov, "beta = alpha in [0,1)", {}, 1.0});
    domains.push_back({Regime::reflected, "alpha = 0, beta in [0,1]", {}, 1.0});
    domains.push_back({Regime::general, "alpha in [0,1), beta in [0,1]", {}, 1.0});
    for (int i = 0; i < n; ++i) {
        domains[0].samples.emplace_back(midpoint(i), 0.0);
        domains[1].samples.emplace_back(midpoint(i), midpoint(i));
        domains[2].samples.emplace_back(0.0, midpoint(i));
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            domains[3].samples.emplace_back(midpoint(i), midpoint(j));

    TightnessReport report;
    report.grid_resolution = grid_resolution;
    report.tol = tol;

    for (std::size_t d = 0; d < domains.size(); ++d) {
        auto& dom = domains[d];
        std::vector<double> tilde(dom.samples.size());
        if (parallel)
            lambda_tilde_sweep_parallel(dom.samples, tol, phi_steps, tilde);
        else
            lambda_tilde_sweep_serial(dom.samples, tol, phi_steps, tilde);

        RegimeSummary sum;
        sum.regime = dom.regime;
        sum.domain = dom.description;
        double abs_sum = 0.0;
        for (std::size_t i = 0; i < dom.samples.size(); ++i) {
            TightnessSample s;
            s.regime = dom.regime;
            s.alpha = dom.samples[i].first;
            s.beta = dom.samples[i].second;
            s.lambda_bound = lambda_bound(s.alpha, s.beta);
            s.lambda_tilde = tilde[i];
            s.gap = s.lambda_tilde - s.lambda_bound;
            report.samples.push_back(s);

            double g = std::abs(s.gap);
            abs_sum += g;
            if (g > sum.gap_linf) {
                sum.gap_linf = g;
                sum.argmax_alpha = s.alpha;
                sum.argmax_beta = s.beta;
            }
        }
        sum.gap_l1 = dom.measure * abs_sum / static_cast<double>(dom.samples.size());
        report.summary[d] = sum;
    }
    return report;
}

void TightnessReport::write_csv(std::ostream& os) const {
    os << "regime,alpha,beta,lambda_bound,lambda_tilde,gap\n";
    for (const auto& s : samples) {
        std::string line = regime_name(s.regime);
        line += ',';
        append_sig(line, s.alpha);
        line += ',';
        append_sig(line, s.beta);
        line += ',';
        append_sig(line, s.lambda_bound);
        line += ',';
        append_sig(line, s.lambda_tilde);
        line += ',';
        append_sig(line, s.gap);
        os << line << "\n";
    }
}

void TightnessReport::write_summary(std::ostream& os) const {
    os << "regime,domain,gap_l1,gap_linf,argmax_alpha,argmax_beta\n";
    for (const auto& s : summary) {
        std::string line = regime_name(s.regime);
        line += ",\"";
        line += s.domain;
        line += "\",";
        append_sig(line, s.gap_l1);
        line += ',';
        append_sig(line, s.gap_linf);
        line += ',';
        append_sig(line, s.argmax_alpha);
        line += ',';
        append_sig(line, s.argmax_beta);
        os << line << "\n";
    }
}

} // namespace kmit
