#pragma once

#include <cstdint>
#include <memory>

#include "kmit/image.hpp"
#include "kmit/operators.hpp"
#include "kmit/schedules.hpp"
#include "kmit/types.hpp"

namespace kmit {

/// Low-rank recovery of a damaged image via the three-operator composition:
/// data term 1/2 ||A X - X_corrupt||^2 plus nuclear-norm penalties on both
/// unfoldings, weighted by sigma.
struct InpaintProblem {
    ImageTensor x_corrupt;
    Mask mask;
    double sigma = 0.5;
    double rho = 1.0;
    double lambda = 0.5;
    std::shared_ptr<const OperatorFamily> family;

    Eigen::Index rows() const { return x_corrupt.rows(); }
    Eigen::Index cols() const { return x_corrupt.cols(); }

    Vec initial_point() const { return to_vec(x_corrupt); }

    /// Solutions live behind the B-resolvent of the governing iterate.
    ImageTensor recover(const Vec& x) const;

    /// Composite objective evaluated at the B-resolvent of x.
    double objective_at(const Vec& x) const;

    /// Masked mean-square error against the corrupt data, at the recovery.
    double data_mse_at(const Vec& x) const;

    /// Residual tolerance scaled from a 512x512 baseline by the square root
    /// of the pixel-count ratio.
    double rescaled_tolerance(double base_tol) const;
    double tolerance_scale_factor() const;
};

/// Samples a mask erasing floor(ratio * rows * cols) distinct pixels with
/// the seeded generator, corrupts the image, and assembles the splitting
/// family (resolvents of the two nuclear-norm penalties, gradient of the
/// masked data term, cocoercivity constant 1).
InpaintProblem build_inpainting(const ImageTensor& image, double erase_ratio,
                                std::uint64_t seed, double sigma, double rho);

/// Oligopoly equilibrium: m producers with quadratic costs, affine inverse
/// demand with intercept gamma, strategies boxed to [1, 40].
struct CournotProblem {
    int m = 0;
    double gamma = 0.0;
    Vec beta_coef; // demand slopes, in (0,1]
    Vec p_cost;    // quadratic cost coefficients, in [1,3]
    Vec q_cost;    // linear cost coefficients, in [1,3]
    Mat B;         // zero diagonal, row i constant beta_i off-diagonal
    Mat B_tilde;   // diag(beta_i)
    Mat J;         // Jacobian of F: B + 2 B_tilde + diag(p_cost)
    Vec c;         // affine offset: q_cost - gamma * ones
    double lipschitz = 0.0;
    double box_lo = 1.0;
    double box_hi = 40.0;
    std::uint64_t seed = 0;

    Vec F(const Vec& x) const;
    std::shared_ptr<const OperatorFamily> family(double rho) const;

    /// Minimum of <F(x), v - x> over the 2m points obtained by moving one
    /// coordinate to either box end; nonnegative (up to tolerance) at an
    /// equilibrium.
    double vi_vertex_min(const Vec& x) const;
};

Vec cournot_F(const CournotProblem& problem, const Vec& x);

/// Draws beta_i in (0,1], p_i and q_i in [1,3] with the seeded generator
/// and computes the Lipschitz constant as the spectral norm of J.
CournotProblem build_cournot(int m, double gamma, std::uint64_t seed);

/// Largest singular value via power iteration on J^T J.
double spectral_norm_power_iteration(const Mat& J, double rel_tol = 1e-10,
                                     int max_iter = 100000);

enum class Variant { none, heavy_ball, nesterov, reflected };

Variant parse_variant(const std::string& name);
std::string variant_name(Variant v);

struct VariantParams {
    double alpha = 0.0;
    double beta = 0.0;
};

/// Largest inertia that keeps the given relaxation admissible: for the
/// Heavy-Ball and Nesterov regimes the bound is inverted by bisection, for
/// the reflected regime beta = min(1, 1/lambda - 1).
VariantParams tight_inertia_for(Variant v, double lambda);

/// Ramped schedule alpha_k = (1 - 1/k) alpha, beta_k = (1 - 1/k) beta with
/// the tight limiting inertia and constant relaxation.
ParameterSchedule variant_schedule(Variant v, double lambda);

} // namespace kmit
