#include "kmit/operators.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/SVD>

namespace kmit {

AffineContraction::AffineContraction(Vec p_star, double q) : p_star_(std::move(p_star)), q_(q) {
    if (!(q > 0.0 && q < 1.0))
        throw std::domain_error("affine_contraction: q must lie in (0,1)");
}

Vec AffineContraction::apply(int, const Vec& x) const {
    return p_star_ + q_ * (x - p_star_);
}

Rotation2D::Rotation2D(double phi) : phi_(phi) {
    if (!(phi > 0.0 && phi <= M_PI))
        throw std::domain_error("rotation2d: phi must lie in (0, pi]");
    rot_ << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
}

Vec Rotation2D::apply(int, const Vec& x) const {
    if (x.size() != 2)
        throw std::invalid_argument("rotation2d: expected a 2-dimensional point");
    return rot_ * x;
}

ConstantTargetFamily::ConstantTargetFamily(std::vector<Vec> targets)
    : targets_(std::move(targets)) {
    if (targets_.empty())
        throw std::invalid_argument("constant_family: empty target sequence");
    all_equal_ = true;
    for (const auto& t : targets_)
        if (t != targets_.front()) {
            all_equal_ = false;
            break;
        }
}

const Vec& ConstantTargetFamily::target(int k) const {
    if (k < 1) throw std::domain_error("constant_family: index must be >= 1");
    auto i = static_cast<std::size_t>(k - 1);
    return i < targets_.size() ? targets_[i] : targets_.back();
}

Vec ConstantTargetFamily::apply(int k, const Vec&) const { return target(k); }

std::optional<Vec> ConstantTargetFamily::fixed_point() const {
    if (all_equal_) return targets_.front();
    return std::nullopt;
}

ShiftedFamily::ShiftedFamily(std::shared_ptr<const OperatorFamily> base, Vec p_inf)
    : base_(std::move(base)), p_inf_(std::move(p_inf)) {
    if (!base_) throw std::invalid_argument("shifted_family: null base family");
    if (!base_->fixed_point_at(1))
        throw std::invalid_argument("shifted_family: base family exposes no per-index fixed points");
    if (p_inf_.size() != base_->dim())
        throw std::invalid_argument("shifted_family: p_inf dimension mismatch");
}

Vec ShiftedFamily::apply(int k, const Vec& x) const {
    auto pk = base_->fixed_point_at(k);
    if (!pk)
        throw std::invalid_argument("shifted_family: missing fixed point at index " +
                                    std::to_string(k));
    return base_->apply(k, x + *pk - p_inf_) - *pk + p_inf_;
}

BoxProjection::BoxProjection(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!(lo < hi)) throw std::domain_error("box_projection: requires lo < hi");
}

Vec BoxProjection::operator()(const Vec& x) const {
    return x.cwiseMax(lo_).cwiseMin(hi_);
}

Mat nuclear_prox(const Mat& X, double threshold) {
    if (threshold < 0.0)
        throw std::domain_error("nuclear_prox: threshold must be nonnegative");
    if (!X.allFinite())
        throw std::runtime_error("nuclear_prox: non-finite input matrix");
    if (threshold == 0.0) return X;
    Eigen::BDCSVD<Mat> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Vec sv = (svd.singularValues().array() - threshold).max(0.0).matrix();
    return svd.matrixU() * sv.asDiagonal() * svd.matrixV().transpose();
}

double nuclear_norm(const Mat& X) {
    Eigen::BDCSVD<Mat> svd(X);
    return svd.singularValues().sum();
}

double operator_norm(const Mat& X) {
    Eigen::BDCSVD<Mat> svd(X);
    return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

DavisYin::DavisYin(PointMap jb, PointMap ja, PointMap c, double rho, double cocoercivity,
                   Eigen::Index dim)
    : jb_(std::move(jb)), ja_(std::move(ja)), c_(std::move(c)), rho_(rho), dim_(dim) {
    if (!jb_ || !ja_ || !c_)
        throw std::invalid_argument("davis_yin: all three component maps are required");
    certified_ = rho > 0.0 && rho < 2.0 * cocoercivity;
}

Vec DavisYin::apply(int, const Vec& x) const {
    Vec u = jb_(x);
    return x - u + ja_(2.0 * u - x - rho_ * c_(u));
}

ProjectedGradient::ProjectedGradient(PointMap project, PointMap f, double rho,
                                     double lipschitz, Eigen::Index dim)
    : project_(std::move(project)), f_(std::move(f)), rho_(rho), dim_(dim) {
    if (!project_ || !f_)
        throw std::invalid_argument("projected_gradient: projection and field maps are required");
    certified_ = rho > 0.0 && lipschitz > 0.0 && rho < 2.0 / lipschitz;
}

Vec ProjectedGradient::apply(int, const Vec& x) const {
    return project_(x - rho_ * f_(x));
}

AffineContraction affine_contraction(Vec p_star, double q) {
    return AffineContraction(std::move(p_star), q);
}

Rotation2D rotation2d(double phi) { return Rotation2D(phi); }

ConstantTargetFamily constant_family(std::vector<Vec> targets) {
    return ConstantTargetFamily(std::move(targets));
}

ShiftedFamily shifted_family(std::shared_ptr<const OperatorFamily> base, Vec p_inf) {
    return ShiftedFamily(std::move(base), std::move(p_inf));
}

BoxProjection box_projection(double lo, double hi) { return BoxProjection(lo, hi); }

DavisYin davis_yin(PointMap jb, PointMap ja, PointMap c, double rho, double cocoercivity,
                   Eigen::Index dim) {
    return DavisYin(std::move(jb), std::move(ja), std::move(c), rho, cocoercivity, dim);
}

ProjectedGradient projected_gradient(PointMap project, PointMap f, double rho,
                                     double lipschitz, Eigen::Index dim) {
    return ProjectedGradient(std::move(project), std::move(f), rho, lipschitz, dim);
}

} // namespace kmit
