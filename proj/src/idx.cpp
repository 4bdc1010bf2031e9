#include "geonet/idx.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <vector>

#include "geonet/error.hpp"

namespace geonet {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803; // rank-3 unsigned bytes
constexpr std::uint32_t kLabelMagic = 0x00000801; // rank-1 unsigned bytes

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::io_error, "cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return bytes;
}

std::uint32_t be32(const std::vector<std::uint8_t>& b, std::size_t off, const std::string& path) {
    if (off + 4 > b.size()) fail(errc::truncated_file, path + ": truncated header");
    return (std::uint32_t(b[off]) << 24) | (std::uint32_t(b[off + 1]) << 16) |
           (std::uint32_t(b[off + 2]) << 8) | std::uint32_t(b[off + 3]);
}

void put_be32(std::ofstream& out, std::uint32_t v) {
    const char bytes[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                           static_cast<char>(v >> 8), static_cast<char>(v)};
    out.write(bytes, 4);
}

} // namespace

Dataset load_idx(const std::string& images_path, const std::string& labels_path,
                 std::size_t max_items) {
    const auto img = read_file(images_path);
    const auto lab = read_file(labels_path);

    if (be32(img, 0, images_path) != kImageMagic) {
        fail(errc::bad_magic, images_path + ": not an IDX image file");
    }
    if (be32(lab, 0, labels_path) != kLabelMagic) {
        fail(errc::bad_magic, labels_path + ": not an IDX label file");
    }

    const std::size_t n_img = be32(img, 4, images_path);
    const std::size_t rows = be32(img, 8, images_path);
    const std::size_t cols = be32(img, 12, images_path);
    const std::size_t n_lab = be32(lab, 4, labels_path);
    if (n_img != n_lab) {
        fail(errc::count_mismatch, "image count " + std::to_string(n_img) +
                                       " != label count " + std::to_string(n_lab));
    }
    const std::size_t pixels = rows * cols;
    if (img.size() < 16 + n_img * pixels) {
        fail(errc::truncated_file, images_path + ": fewer pixel bytes than the header promises");
    }
    if (img.size() > 16 + n_img * pixels) {
        fail(errc::parse_error, images_path + ": trailing bytes after pixel data");
    }
    if (lab.size() < 8 + n_lab) {
        fail(errc::truncated_file, labels_path + ": fewer label bytes than the header promises");
    }
    if (lab.size() > 8 + n_lab) {
        fail(errc::parse_error, labels_path + ": trailing bytes after label data");
    }

    const std::size_t n = (max_items > 0 && max_items < n_img) ? max_items : n_img;
    Dataset d;
    d.name = "idx";
    d.features = Matrix(n, pixels);
    d.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint8_t* px = img.data() + 16 + i * pixels;
        for (std::size_t j = 0; j < pixels; ++j) {
            d.features(i, j) = static_cast<double>(px[j]) / 255.0;
        }
        d.labels[i] = lab[8 + i];
    }
    return d;
}

void save_idx(const Matrix& features, const std::vector<int>& labels, std::size_t rows,
              std::size_t cols, const std::string& images_path,
              const std::string& labels_path) {
    if (features.rows() != labels.size()) {
        fail(errc::count_mismatch, "feature rows != label count");
    }
    if (features.cols() != rows * cols) {
        fail(errc::dimension_mismatch, "feature width != rows * cols");
    }
    for (int l : labels) {
        if (l < 0 || l > 255) fail(errc::label_out_of_range, "label " + std::to_string(l));
    }

    std::ofstream img(images_path, std::ios::binary);
    if (!img) fail(errc::io_error, "cannot open for writing: " + images_path);
    put_be32(img, kImageMagic);
    put_be32(img, static_cast<std::uint32_t>(features.rows()));
    put_be32(img, static_cast<std::uint32_t>(rows));
    put_be32(img, static_cast<std::uint32_t>(cols));
    for (std::size_t i = 0; i < features.rows(); ++i) {
        for (std::size_t j = 0; j < features.cols(); ++j) {
            const double v = features(i, j) * 255.0;
            if (v < -0.5 || v > 255.5) {
                fail(errc::invalid_argument, "pixel value outside [0,1]");
            }
            img.put(static_cast<char>(static_cast<std::uint8_t>(std::lround(v))));
        }
    }
    if (!img) fail(errc::io_error, "write failed: " + images_path);

    std::ofstream lab(labels_path, std::ios::binary);
    if (!lab) fail(errc::io_error, "cannot open for writing: " + labels_path);
    put_be32(lab, kLabelMagic);
    put_be32(lab, static_cast<std::uint32_t>(labels.size()));
    for (int l : labels) lab.put(static_cast<char>(static_cast<std::uint8_t>(l)));
    if (!lab) fail(errc::io_error, "write failed: " + labels_path);
}

} // namespace geonet
