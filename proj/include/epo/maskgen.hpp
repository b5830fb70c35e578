#ifndef EPO_MASKGEN_HPP
#define EPO_MASKGEN_HPP

#include <utility>
#include <vector>

#include "epo/image.hpp"

namespace epo {

class BinaryMask {
public:
    BinaryMask() = default;
    BinaryMask(int width, int height, bool fill = false);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return data_.size(); }

    bool at(int x, int y) const { return data_[idx(x, y)] != 0; }
    bool operator[](std::size_t i) const { return data_[i] != 0; }
    void set(int x, int y, bool v) { data_[idx(x, y)] = v ? 1 : 0; }
    void set(std::size_t i, bool v) { data_[i] = v ? 1 : 0; }

    std::size_t count() const;
    bool same_size(const BinaryMask& o) const {
        return width_ == o.width_ && height_ == o.height_;
    }
    bool operator==(const BinaryMask& o) const {
        return width_ == o.width_ && height_ == o.height_ && data_ == o.data_;
    }

private:
    std::size_t idx(int x, int y) const {
        return static_cast<std::size_t>(y) * width_ + x;
    }
    int width_ = 0;
    int height_ = 0;
    std::vector<unsigned char> data_;
};

// Per-pixel component label, 0 = background, components numbered 1..count in
// raster-scan first-touch order.
struct LabeledMask {
    int width = 0;
    int height = 0;
    std::vector<int> labels;
    int component_count = 0;

    int at(int x, int y) const {
        return labels[static_cast<std::size_t>(y) * width + x];
    }
};

struct Contour {
    std::vector<std::pair<int, int>> vertices;  // closure implicit
    bool closed = true;
};

// mask[p] = luma[p] >= threshold; threshold must lie in (0,1).
BinaryMask detect_overexposed(const ImagePlane& luma, double threshold);

// 4-connectivity labeling, deterministic raster-scan order.
LabeledMask connected_components(const BinaryMask& mask);

// One clockwise outer contour per 4-connected component (Moore-neighbor
// tracing, Jacob's stopping criterion). Holes are ignored.
std::vector<Contour> trace_contours(const BinaryMask& mask);

// Filled rasterization of closed contours. Exact inverse of trace_contours
// for hole-free components.
BinaryMask rasterize_contours(const std::vector<Contour>& contours, int width,
                              int height);

// Infrared replicated to RGB with contour pixels painted a highlight color.
RgbImage overlay_contours(const ImagePlane& ir,
                          const std::vector<Contour>& contours);

constexpr double kDefaultOverexposureThreshold = 235.0 / 255.0;

}  // namespace epo

#endif
