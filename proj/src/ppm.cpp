#include "kmit/ppm.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <vector>

namespace kmit {

PpmParseError::PpmParseError(const std::string& what, std::size_t byte_offset)
    : std::runtime_error(what + " at byte " + std::to_string(byte_offset)),
      offset(byte_offset) {}

namespace {

struct Cursor {
    const std::vector<std::uint8_t>& buf;
    std::size_t pos = 0;

    bool eof() const { return pos >= buf.size(); }
    std::uint8_t peek() const {
        if (eof()) throw PpmParseError("unexpected end of file", pos);
        return buf[pos];
    }
    std::uint8_t take() {
        std::uint8_t c = peek();
        ++pos;
        return c;
    }
};

bool is_space(std::uint8_t c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

void skip_ws_and_comments(Cursor& cur) {
    while (!cur.eof()) {
        std::uint8_t c = cur.peek();
        if (is_space(c)) {
            cur.take();
        } else if (c == '#') {
            while (!cur.eof() && cur.take() != '\n') {
            }
        } else {
            break;
        }
    }
}

long parse_int(Cursor& cur) {
    skip_ws_and_comments(cur);
    std::size_t start = cur.pos;
    if (cur.eof() || cur.peek() < '0' || cur.peek() > '9')
        throw PpmParseError("expected an integer", start);
    long v = 0;
    while (!cur.eof() && cur.peek() >= '0' && cur.peek() <= '9') {
        v = v * 10 + (cur.take() - '0');
        if (v > 1000000) throw PpmParseError("integer out of range", start);
    }
    return v;
}

std::vector<std::uint8_t> slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint8_t quantize(double v) {
    double c = std::min(1.0, std::max(0.0, v));
    return static_cast<std::uint8_t>(std::floor(c * 255.0 + 0.5));
}

} // namespace

ImageTensor read_ppm(const std::string& path) {
    auto buf = slurp(path);
    Cursor cur{buf};

    if (buf.size() < 2 || buf[0] != 'P' || buf[1] != '6') {
        std::string magic = buf.size() >= 2
                                ? std::string(1, static_cast<char>(buf[0])) +
                                      static_cast<char>(buf[1])
                                : std::string("<short file>");
        throw PpmParseError("unsupported magic '" + magic + "' (expected P6)", 0);
    }
    cur.pos = 2;

    long w = parse_int(cur);
    long h = parse_int(cur);
    long maxval = parse_int(cur);
    if (w < 1 || h < 1) throw PpmParseError("invalid dimensions", cur.pos);
    if (maxval != 255)
        throw PpmParseError("unsupported maxval " + std::to_string(maxval) + " (expected 255)",
                            cur.pos);
    if (cur.eof() || !is_space(cur.peek()))
        throw PpmParseError("expected single whitespace after maxval", cur.pos);
    cur.take();

    std::size_t need = static_cast<std::size_t>(3) * w * h;
    if (buf.size() - cur.pos < need)
        throw PpmParseError("truncated payload: expected " + std::to_string(need) +
                                " bytes, found " + std::to_string(buf.size() - cur.pos),
                            cur.pos);

    ImageTensor img = ImageTensor::zero(h, w);
    std::size_t p = cur.pos;
    for (long i = 0; i < h; ++i)
        for (long j = 0; j < w; ++j)
            for (int c = 0; c < 3; ++c) img.channel[c](i, j) = buf[p++] / 255.0;
    return img;
}

void write_ppm(const std::string& path, const ImageTensor& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "P6\n" << image.cols() << " " << image.rows() << "\n255\n";
    for (Eigen::Index i = 0; i < image.rows(); ++i)
        for (Eigen::Index j = 0; j < image.cols(); ++j)
            for (int c = 0; c < 3; ++c)
                out.put(static_cast<char>(quantize(image.channel[c](i, j))));
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void write_pgm(const std::string& path, const Mask& mask) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << "P5\n" << mask.cols() << " " << mask.rows() << "\n255\n";
    for (Eigen::Index i = 0; i < mask.rows(); ++i)
        for (Eigen::Index j = 0; j < mask.cols(); ++j)
            out.put(mask.omega(i, j) ? static_cast<char>(255) : static_cast<char>(0));
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

} // namespace kmit
