#pragma once

#include <array>
#include <cstdint>

#include "kmit/types.hpp"

namespace kmit {

/// Three-channel image with real-valued intensities (working range [0,1]).
struct ImageTensor {
    std::array<Mat, 3> channel;

    Eigen::Index rows() const { return channel[0].rows(); }
    Eigen::Index cols() const { return channel[0].cols(); }
    Eigen::Index size() const { return 3 * rows() * cols(); }

    static ImageTensor zero(Eigen::Index rows, Eigen::Index cols);
    static ImageTensor constant(Eigen::Index rows, Eigen::Index cols, double value);

    double squared_norm() const;
};

/// Horizontal concatenation of the channel slices: M x 3N.
Mat unfold1(const ImageTensor& x);
/// Vertical concatenation of the channel slices: 3M x N.
Mat unfold2(const ImageTensor& x);
ImageTensor refold1(const Mat& m);
ImageTensor refold2(const Mat& m);

/// Channel-major flattening used to drive the generic iteration.
Vec to_vec(const ImageTensor& x);
ImageTensor from_vec(const Vec& v, Eigen::Index rows, Eigen::Index cols);

/// Binary pixel validity pattern; 0 marks a damaged pixel (all channels).
/// Application (zeroing damaged pixels) is a self-adjoint projection.
struct Mask {
    Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> omega;

    Eigen::Index rows() const { return omega.rows(); }
    Eigen::Index cols() const { return omega.cols(); }
    Eigen::Index erased_count() const;

    ImageTensor apply(const ImageTensor& x) const;
    Vec apply_vec(const Vec& v) const;

    static Mask all_ones(Eigen::Index rows, Eigen::Index cols);
};

} // namespace kmit
