#pragma once

#include <string>

#include "geonet/dataset.hpp"

namespace geonet {

/// Loads a paired IDX image/label file set (the MNIST container format:
/// big-endian magic + dimension sizes, then raw bytes). Pixels are scaled to
/// [0,1] by dividing by 255; images are flattened row-major. Image and label
/// counts must agree. max_items > 0 keeps only the first max_items samples
/// (file headers are still validated in full).
Dataset load_idx(const std::string& images_path, const std::string& labels_path,
                 std::size_t max_items = 0);

/// Writes features (values in [0,1], rows*cols wide) and labels as an IDX
/// pair. load followed by save reproduces a valid input byte-for-byte.
void save_idx(const Matrix& features, const std::vector<int>& labels, std::size_t rows,
              std::size_t cols, const std::string& images_path,
              const std::string& labels_path);

} // namespace geonet
