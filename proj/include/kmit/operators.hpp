#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "kmit/types.hpp"

namespace kmit {

/// Indexed family of quasi-nonexpansive maps T_k, safe for concurrent
/// read-only use. Fixed-point accessors return certificates when known:
/// fixed_point() a common fixed point, fixed_point_at(k) a per-index one
/// (moving sets), limit_point() the reference the iterates should approach.
class OperatorFamily {
public:
    virtual ~OperatorFamily() = default;

    virtual Vec apply(int k, const Vec& x) const = 0;
    virtual Eigen::Index dim() const = 0;

    virtual std::optional<Vec> fixed_point() const { return std::nullopt; }
    virtual std::optional<Vec> fixed_point_at(int k) const {
        (void)k;
        return fixed_point();
    }
    virtual std::optional<Vec> limit_point() const { return fixed_point(); }
    virtual std::optional<double> contraction_modulus() const { return std::nullopt; }

    /// False when the configured step size falls outside the range that
    /// certifies nonexpansiveness (the run is still permitted).
    virtual bool step_size_certified() const { return true; }
};

using PointMap = std::function<Vec(const Vec&)>;

/// T x = p* + q (x - p*): the canonical q-quasi-contraction with Fix = {p*}.
class AffineContraction final : public OperatorFamily {
public:
    AffineContraction(Vec p_star, double q);
    Vec apply(int, const Vec& x) const override;
    Eigen::Index dim() const override { return p_star_.size(); }
    std::optional<Vec> fixed_point() const override { return p_star_; }
    std::optional<double> contraction_modulus() const override { return q_; }

private:
    Vec p_star_;
    double q_;
};

/// Counterclockwise rotation of the plane by phi in (0, pi]; Fix = {0}.
class Rotation2D final : public OperatorFamily {
public:
    explicit Rotation2D(double phi);
    Vec apply(int, const Vec& x) const override;
    Eigen::Index dim() const override { return 2; }
    std::optional<Vec> fixed_point() const override { return Vec(Vec::Zero(2)); }
    double phi() const { return phi_; }

private:
    double phi_;
    Eigen::Matrix2d rot_;
};

/// T_k == p_k regardless of the input; Fix(T_k) = {p_k}. Indices past the
/// provided sequence repeat the last target (eventually constant).
class ConstantTargetFamily final : public OperatorFamily {
public:
    explicit ConstantTargetFamily(std::vector<Vec> targets);
    Vec apply(int k, const Vec&) const override;
    Eigen::Index dim() const override { return targets_.front().size(); }
    std::optional<Vec> fixed_point() const override;
    std::optional<Vec> fixed_point_at(int k) const override { return target(k); }
    std::optional<Vec> limit_point() const override { return targets_.back(); }
    const Vec& target(int k) const;

private:
    std::vector<Vec> targets_;
    bool all_equal_;
};

/// T~_k x = T_k(x + p_k - p_inf) - p_k + p_inf, which turns a moving-set
/// family into one with the common fixed point p_inf.
class ShiftedFamily final : public OperatorFamily {
public:
    ShiftedFamily(std::shared_ptr<const OperatorFamily> base, Vec p_inf);
    Vec apply(int k, const Vec& x) const override;
    Eigen::Index dim() const override { return base_->dim(); }
    std::optional<Vec> fixed_point() const override { return p_inf_; }
    std::optional<double> contraction_modulus() const override {
        return base_->contraction_modulus();
    }

private:
    std::shared_ptr<const OperatorFamily> base_;
    Vec p_inf_;
};

/// Componentwise clamp to [lo, hi].
class BoxProjection {
public:
    BoxProjection(double lo, double hi);
    Vec operator()(const Vec& x) const;
    double lo() const { return lo_; }
    double hi() const { return hi_; }

private:
    double lo_, hi_;
};

/// Singular-value soft-thresholding: U max(S - threshold, 0) V^T.
Mat nuclear_prox(const Mat& X, double threshold);

/// Sum of singular values.
double nuclear_norm(const Mat& X);

/// Largest singular value.
double operator_norm(const Mat& X);

/// Three-operator composition
///   T x = x - JB(x) + JA(2 JB(x) - x - rho * C(JB(x))),
/// nonexpansive for rho in (0, 2 tau) when C is tau-cocoercive. Solutions
/// of the underlying inclusion are recovered as JB(fixed point).
class DavisYin final : public OperatorFamily {
public:
    DavisYin(PointMap jb, PointMap ja, PointMap c, double rho, double cocoercivity,
             Eigen::Index dim);
    Vec apply(int, const Vec& x) const override;
    Eigen::Index dim() const override { return dim_; }
    bool step_size_certified() const override { return certified_; }
    double rho() const { return rho_; }
    Vec resolvent_b(const Vec& x) const { return jb_(x); }

private:
    PointMap jb_, ja_, c_;
    double rho_;
    Eigen::Index dim_;
    bool certified_;
};

/// T x = P(x - rho F(x)); nonexpansive for rho in (0, 2/L) with F monotone
/// and L-Lipschitz.
class ProjectedGradient final : public OperatorFamily {
public:
    ProjectedGradient(PointMap project, PointMap f, double rho, double lipschitz,
                      Eigen::Index dim);
    Vec apply(int, const Vec& x) const override;
    Eigen::Index dim() const override { return dim_; }
    bool step_size_certified() const override { return certified_; }
    double rho() const { return rho_; }

private:
    PointMap project_, f_;
    double rho_;
    Eigen::Index dim_;
    bool certified_;
};

AffineContraction affine_contraction(Vec p_star, double q);
Rotation2D rotation2d(double phi);
ConstantTargetFamily constant_family(std::vector<Vec> targets);
ShiftedFamily shifted_family(std::shared_ptr<const OperatorFamily> base, Vec p_inf);
BoxProjection box_projection(double lo, double hi);
DavisYin davis_yin(PointMap jb, PointMap ja, PointMap c, double rho, double cocoercivity,
                   Eigen::Index dim);
ProjectedGradient projected_gradient(PointMap project, PointMap f, double rho,
                                     double lipschitz, Eigen::Index dim);

} // namespace kmit
