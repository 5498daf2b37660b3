#include "kmit/image.hpp"

#include <stdexcept>

namespace kmit {

ImageTensor ImageTensor::zero(Eigen::Index rows, Eigen::Index cols) {
    ImageTensor x;
    for (auto& c : x.channel) c = Mat::Zero(rows, cols);
    return x;
}

ImageTensor ImageTensor::constant(Eigen::Index rows, Eigen::Index cols, double value) {
    ImageTensor x;
    for (auto& c : x.channel) c = Mat::Constant(rows, cols, value);
    return x;
}

double ImageTensor::squared_norm() const {
    double s = 0.0;
    for (const auto& c : channel) s += c.squaredNorm();
    return s;
}

Mat unfold1(const ImageTensor& x) {
    Mat m(x.rows(), 3 * x.cols());
    for (int c = 0; c < 3; ++c) m.middleCols(c * x.cols(), x.cols()) = x.channel[c];
    return m;
}

Mat unfold2(const ImageTensor& x) {
    Mat m(3 * x.rows(), x.cols());
    for (int c = 0; c < 3; ++c) m.middleRows(c * x.rows(), x.rows()) = x.channel[c];
    return m;
}

ImageTensor refold1(const Mat& m) {
    if (m.cols() % 3 != 0)
        throw std::domain_error("refold1: column count must be divisible by 3");
    Eigen::Index cols = m.cols() / 3;
    ImageTensor x;
    for (int c = 0; c < 3; ++c) x.channel[c] = m.middleCols(c * cols, cols);
    return x;
}

ImageTensor refold2(const Mat& m) {
    if (m.rows() % 3 != 0)
        throw std::domain_error("refold2: row count must be divisible by 3");
    Eigen::Index rows = m.rows() / 3;
    ImageTensor x;
    for (int c = 0; c < 3; ++c) x.channel[c] = m.middleRows(c * rows, rows);
    return x;
}

Vec to_vec(const ImageTensor& x) {
    Eigen::Index per = x.rows() * x.cols();
    Vec v(3 * per);
    for (int c = 0; c < 3; ++c)
        v.segment(c * per, per) = Eigen::Map<const Vec>(x.channel[c].data(), per);
    return v;
}

ImageTensor from_vec(const Vec& v, Eigen::Index rows, Eigen::Index cols) {
    Eigen::Index per = rows * cols;
    if (v.size() != 3 * per)
        throw std::domain_error("from_vec: vector length does not match 3 * rows * cols");
    ImageTensor x;
    for (int c = 0; c < 3; ++c)
        x.channel[c] = Eigen::Map<const Mat>(v.segment(c * per, per).data(), rows, cols);
    return x;
}

Eigen::Index Mask::erased_count() const {
    return omega.size() - static_cast<Eigen::Index>(omega.cast<int>().sum());
}

ImageTensor Mask::apply(const ImageTensor& x) const {
    if (x.rows() != rows() || x.cols() != cols())
        throw std::invalid_argument("Mask::apply: shape mismatch");
    ImageTensor out;
    Mat w = omega.cast<double>().matrix();
    for (int c = 0; c < 3; ++c) out.channel[c] = x.channel[c].cwiseProduct(w);
    return out;
}

Vec Mask::apply_vec(const Vec& v) const {
    return to_vec(apply(from_vec(v, rows(), cols())));
}

Mask Mask::all_ones(Eigen::Index rows, Eigen::Index cols) {
    Mask m;
    m.omega.setOnes(rows, cols);
    return m;
}

} // namespace kmit
