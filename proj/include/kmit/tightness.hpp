#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace kmit {

/// Second-order linear recurrence x_{k+1} = omega x_k - delta x_{k-1},
/// in matrix form [[omega, -delta], [1, 0]] with characteristic polynomial
/// mu^2 - omega mu + delta.
struct CompanionSystem {
    std::complex<double> omega;
    std::complex<double> delta;

    Eigen::Matrix2cd matrix() const;
};

/// Companion system of the constant-parameter update applied to the planar
/// rotation z -> e^{i phi} z:
///   omega = (1-lambda)(1+alpha) + lambda (1+beta) e^{i phi}
///   delta = (1-lambda) alpha    + lambda beta      e^{i phi}
CompanionSystem companion(double alpha, double beta, double lambda, double phi);

/// Largest root modulus of mu^2 - omega mu + delta.
double spectral_radius(const CompanionSystem& sys);

struct ThresholdResult {
    double value = 0.0;
    bool stable_set_empty = false;
    /// The scan found a stable lambda beyond the first instability; the
    /// reported threshold keeps the first sign change.
    bool restabilizes = false;
};

/// sup { lambda in (0,1] : spectral_radius < 1 }, located by a coarse scan
/// (step 1e-3) plus bisection on the first sign change, to within tol.
ThresholdResult lambda_tilde_phi_info(double alpha, double beta, double phi, double tol);
double lambda_tilde_phi(double alpha, double beta, double phi, double tol = 1e-6);

/// Minimum of lambda_tilde_phi over the angle grid {j pi / phi_steps}.
double lambda_tilde(double alpha, double beta, double tol = 1e-6, int phi_steps = 30);

/// Fills out[i] = lambda_tilde(samples[i]) for each (alpha, beta) sample.
/// Serial reference and the OpenMP kernel produce identical results.
void lambda_tilde_sweep_serial(std::span<const std::pair<double, double>> samples,
                               double tol, int phi_steps, std::span<double> out);
void lambda_tilde_sweep_parallel(std::span<const std::pair<double, double>> samples,
                                 double tol, int phi_steps, std::span<double> out);

enum class Regime { heavy_ball, nesterov, reflected, general };

std::string regime_name(Regime r);

struct TightnessSample {
    Regime regime;
    double alpha;
    double beta;
    double lambda_bound;
    double lambda_tilde;
    double gap;
};

struct RegimeSummary {
    Regime regime;
    std::string domain;
    double gap_l1 = 0.0;   // mean |gap| times domain measure
    double gap_linf = 0.0; // max |gap| over samples
    double argmax_alpha = 0.0;
    double argmax_beta = 0.0;
};

struct TightnessReport {
    std::vector<TightnessSample> samples;
    std::array<RegimeSummary, 4> summary;
    double grid_resolution = 0;
    double tol = 0.0;

    /// Header: regime,alpha,beta,lambda_bound,lambda_tilde,gap
    void write_csv(std::ostream& os) const;
    /// Four-row table: regime, domain, l1 and sup gap norms.
    void write_summary(std::ostream& os) const;
};

/// Gap study lambda_tilde - lambda_bound over the four constant-inertia
/// domains (beta = 0; beta = alpha; alpha = 0; the full square), each
/// discretised at midpoints with the given resolution.
TightnessReport tightness_report(int grid_resolution, double tol = 1e-6,
                                 int phi_steps = 30, bool parallel = true);

} // namespace kmit
