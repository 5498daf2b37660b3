#include "kmit/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace kmit {

ImageTensor InpaintProblem::recover(const Vec& x) const {
    auto dy = std::dynamic_pointer_cast<const DavisYin>(family);
    if (!dy) throw std::logic_error("InpaintProblem: family is not a splitting operator");
    return from_vec(dy->resolvent_b(x), rows(), cols());
}

double InpaintProblem::objective_at(const Vec& x) const {
    ImageTensor z = recover(x);
    ImageTensor masked = mask.apply(z);
    double data = 0.0;
    for (int c = 0; c < 3; ++c)
        data += (masked.channel[c] - x_corrupt.channel[c]).squaredNorm();
    return 0.5 * data + sigma * nuclear_norm(unfold1(z)) + sigma * nuclear_norm(unfold2(z));
}

double InpaintProblem::data_mse_at(const Vec& x) const {
    ImageTensor z = recover(x);
    ImageTensor masked = mask.apply(z);
    double err = 0.0;
    for (int c = 0; c < 3; ++c)
        err += (masked.channel[c] - x_corrupt.channel[c]).squaredNorm();
    double kept = 3.0 * (static_cast<double>(mask.omega.size()) -
                         static_cast<double>(mask.erased_count()));
    return kept > 0.0 ? err / kept : 0.0;
}

double InpaintProblem::tolerance_scale_factor() const {
    return std::sqrt(static_cast<double>(rows() * cols()) / (512.0 * 512.0));
}

double InpaintProblem::rescaled_tolerance(double base_tol) const {
    return base_tol * tolerance_scale_factor();
}

InpaintProblem build_inpainting(const ImageTensor& image, double erase_ratio,
                                std::uint64_t seed, double sigma, double rho) {
    if (!(erase_ratio >= 0.0 && erase_ratio < 1.0))
        throw std::domain_error("build_inpainting: erase ratio must lie in [0,1)");
    if (!(sigma > 0.0)) throw std::domain_error("build_inpainting: sigma must be positive");
    if (!(rho > 0.0 && rho < 2.0))
        throw std::domain_error("build_inpainting: rho must lie in (0,2)");

    const Eigen::Index rows = image.rows(), cols = image.cols();
    const Eigen::Index pixels = rows * cols;
    auto erase = static_cast<Eigen::Index>(erase_ratio * static_cast<double>(pixels));

    Mask mask = Mask::all_ones(rows, cols);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(pixels));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::mt19937_64 gen(seed);
    std::shuffle(order.begin(), order.end(), gen);
    for (Eigen::Index i = 0; i < erase; ++i) {
        Eigen::Index pos = order[static_cast<std::size_t>(i)];
        mask.omega(pos % rows, pos / rows) = 0;
    }

    InpaintProblem prob;
    prob.mask = mask;
    prob.x_corrupt = mask.apply(image);
    prob.sigma = sigma;
    prob.rho = rho;

    const double threshold = rho * sigma;
    PointMap ja = [rows, cols, threshold](const Vec& v) {
        return to_vec(refold1(nuclear_prox(unfold1(from_vec(v, rows, cols)), threshold)));
    };
    PointMap jb = [rows, cols, threshold](const Vec& v) {
        return to_vec(refold2(nuclear_prox(unfold2(from_vec(v, rows, cols)), threshold)));
    };
    Vec corrupt_flat = to_vec(prob.x_corrupt);
    Mask mask_copy = mask;
    PointMap grad = [mask_copy, corrupt_flat](const Vec& v) -> Vec {
        return mask_copy.apply_vec(v) - corrupt_flat;
    };

    prob.family = std::make_shared<DavisYin>(
        davis_yin(jb, ja, grad, rho, /*cocoercivity=*/1.0, 3 * pixels));
    return prob;
}

Vec CournotProblem::F(const Vec& x) const {
    if (x.size() != m) throw std::domain_error("cournot_F: point has wrong length");
    return J * x + c;
}

Vec cournot_F(const CournotProblem& problem, const Vec& x) { return problem.F(x); }

std::shared_ptr<const OperatorFamily> CournotProblem::family(double rho) const {
    BoxProjection proj = box_projection(box_lo, box_hi);
    Mat jac = J;
    Vec offset = c;
    PointMap field = [jac, offset](const Vec& x) -> Vec { return jac * x + offset; };
    PointMap project = [proj](const Vec& x) { return proj(x); };
    return std::make_shared<ProjectedGradient>(
        projected_gradient(project, field, rho, lipschitz, m));
}

double CournotProblem::vi_vertex_min(const Vec& x) const {
    Vec fx = F(x);
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
        best = std::min(best, fx(i) * (box_lo - x(i)));
        best = std::min(best, fx(i) * (box_hi - x(i)));
    }
    return best;
}

double spectral_norm_power_iteration(const Mat& J, double rel_tol, int max_iter) {
    if (J.size() == 0) return 0.0;
    Vec v = Vec::Constant(J.cols(), 1.0 / std::sqrt(static_cast<double>(J.cols())));
    double estimate = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Vec w = J.transpose() * (J * v);
        double norm = w.norm();
        if (norm == 0.0) return 0.0;
        v = w / norm;
        if (it > 0 && std::abs(norm - estimate) <= rel_tol * norm) {
            estimate = norm;
            break;
        }
        estimate = norm;
    }
    return std::sqrt(estimate);
}

CournotProblem build_cournot(int m, double gamma, std::uint64_t seed) {
    if (m < 1) throw std::domain_error("build_cournot: m must be >= 1");

    CournotProblem prob;
    prob.m = m;
    prob.gamma = gamma;
    prob.seed = seed;

    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> cost(1.0, 3.0);

    prob.beta_coef = Vec(m);
    for (int i = 0; i < m; ++i) prob.beta_coef(i) = 1.0 - unit(gen); // (0, 1]
    prob.p_cost = Vec(m);
    for (int i = 0; i < m; ++i) prob.p_cost(i) = cost(gen);
    prob.q_cost = Vec(m);
    for (int i = 0; i < m; ++i) prob.q_cost(i) = cost(gen);

    prob.B = Mat::Zero(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (i != j) prob.B(i, j) = prob.beta_coef(i);
    prob.B_tilde = prob.beta_coef.asDiagonal();
    prob.J = prob.B + 2.0 * prob.B_tilde;
    prob.J += Mat(prob.p_cost.asDiagonal());
    prob.c = prob.q_cost - Vec::Constant(m, gamma);
    prob.lipschitz = spectral_norm_power_iteration(prob.J);
    return prob;
}

Variant parse_variant(const std::string& name) {
    if (name == "none") return Variant::none;
    if (name == "hb" || name == "heavy-ball" || name == "heavy_ball") return Variant::heavy_ball;
    if (name == "nesterov") return Variant::nesterov;
    if (name == "reflected") return Variant::reflected;
    throw std::invalid_argument("unknown variant '" + name + "'");
}

std::string variant_name(Variant v) {
    switch (v) {
    case Variant::none: return "none";
    case Variant::heavy_ball: return "hb";
    case Variant::nesterov: return "nesterov";
    case Variant::reflected: return "reflected";
    }
    return "none";
}

namespace {

// Bisection for the largest alpha on the decreasing branch of bound(alpha).
double invert_decreasing(double lo, double hi, double target,
                         const std::function<double(double)>& bound) {
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        double mid = 0.5 * (lo + hi);
        if (bound(mid) > target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

VariantParams tight_inertia_for(Variant v, double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw std::domain_error("tight_inertia_for: lambda must lie in (0,1)");
    VariantParams p;
    switch (v) {
    case Variant::none:
        break;
    case Variant::heavy_ball:
        p.alpha = invert_decreasing(1.0 / 3.0, 1.0 - 1e-12, lambda,
                                    [](double a) { return lambda_heavy_ball(a); });
        break;
    case Variant::nesterov: {
        double a = invert_decreasing(0.0, 1.0 - 1e-12, lambda,
                                     [](double x) { return lambda_nesterov(x); });
        p.alpha = a;
        p.beta = a;
        break;
    }
    case Variant::reflected:
        p.beta = std::min(1.0, 1.0 / lambda - 1.0);
        break;
    }
    return p;
}

ParameterSchedule variant_schedule(Variant v, double lambda) {
    VariantParams p = tight_inertia_for(v, lambda);
    ParameterSchedule s;
    s.alpha = p.alpha > 0.0 ? ScalarSchedule::ramp(p.alpha) : ScalarSchedule::constant(0.0);
    s.beta = p.beta > 0.0 ? ScalarSchedule::ramp(p.beta) : ScalarSchedule::constant(0.0);
    s.lambda = ScalarSchedule::constant(lambda);
    return s;
}

} // namespace kmit
