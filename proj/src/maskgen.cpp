#include "epo/maskgen.hpp"

#include <numeric>
#include <stdexcept>

namespace epo {

BinaryMask::BinaryMask(int width, int height, bool fill)
    : width_(width), height_(height),
      data_(static_cast<std::size_t>(width) * height, fill ? 1 : 0) {
    if (width <= 0 || height <= 0)
        throw std::invalid_argument("mask dimensions must be positive");
}

std::size_t BinaryMask::count() const {
    return std::accumulate(data_.begin(), data_.end(), std::size_t{0});
}

BinaryMask detect_overexposed(const ImagePlane& luma, double threshold) {
    if (threshold <= 0.0 || threshold >= 1.0)
        throw std::invalid_argument("detect_overexposed: threshold must be in (0,1)");
    BinaryMask mask(luma.width(), luma.height());
    for (std::size_t i = 0; i < luma.size(); ++i)
        mask.set(i, luma[i] >= threshold);
    return mask;
}

LabeledMask connected_components(const BinaryMask& mask) {
    const int w = mask.width(), h = mask.height();
    LabeledMask out;
    out.width = w;
    out.height = h;
    out.labels.assign(static_cast<std::size_t>(w) * h, 0);

    std::vector<std::pair<int, int>> stack;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!mask.at(x, y) || out.at(x, y) != 0) continue;
            const int label = ++out.component_count;
            stack.push_back({x, y});
            out.labels[static_cast<std::size_t>(y) * w + x] = label;
            while (!stack.empty()) {
                auto [cx, cy] = stack.back();
                stack.pop_back();
                const int nx[4] = {cx + 1, cx - 1, cx, cx};
                const int ny[4] = {cy, cy, cy + 1, cy - 1};
                for (int k = 0; k < 4; ++k) {
                    if (nx[k] < 0 || nx[k] >= w || ny[k] < 0 || ny[k] >= h) continue;
                    std::size_t ni = static_cast<std::size_t>(ny[k]) * w + nx[k];
                    if (mask[ni] && out.labels[ni] == 0) {
                        out.labels[ni] = label;
                        stack.push_back({nx[k], ny[k]});
                    }
                }
            }
        }
    }
    return out;
}

namespace {

// Clockwise in raster coordinates (y grows downward), starting east.
constexpr int kDx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kDy[8] = {0, 1, 1, 1, 0, -1, -1, -1};

Contour traceComponent(const LabeledMask& labels, int label, int sx, int sy) {
    const int w = labels.width, h = labels.height;
    auto inside = [&](int x, int y) {
        return x >= 0 && x < w && y >= 0 && y < h && labels.at(x, y) == label;
    };

    Contour c;
    c.vertices.push_back({sx, sy});

    // Backtrack starts west of the start pixel (outside: the start is the
    // raster-scan first touch, so nothing of this component lies to its left).
    int cx = sx, cy = sy;
    int back = 4;  // direction from current pixel toward the backtrack cell
    const int startBack = back;
    const std::size_t guard = 8 * labels.labels.size() + 8;

    for (std::size_t iter = 0; iter < guard; ++iter) {
        // Scan clockwise from the neighbor after the backtrack cell.
        int found = -1;
        for (int k = 1; k <= 8; ++k) {
            int dir = (back + k) % 8;
            if (inside(cx + kDx[dir], cy + kDy[dir])) {
                found = dir;
                break;
            }
        }
        if (found < 0) break;  // isolated pixel

        // The new backtrack cell is the empty neighbor checked just before
        // the entry direction, expressed relative to the new current pixel.
        int prevDir = (found + 7) % 8;
        int px = cx, py = cy;
        cx += kDx[found];
        cy += kDy[found];
        int bx = px + kDx[prevDir], by = py + kDy[prevDir];
        int ddx = bx - cx, ddy = by - cy;
        int newBack = (found + 4) % 8;  // fallback: straight back
        for (int d = 0; d < 8; ++d)
            if (kDx[d] == ddx && kDy[d] == ddy) {
                newBack = d;
                break;
            }
        back = newBack;

        if (cx == sx && cy == sy && back == startBack) break;  // Jacob's criterion
        c.vertices.push_back({cx, cy});
    }
    return c;
}

}  // namespace

std::vector<Contour> trace_contours(const BinaryMask& mask) {
    LabeledMask labels = connected_components(mask);
    std::vector<Contour> contours;
    contours.reserve(labels.component_count);
    std::vector<bool> seen(labels.component_count + 1, false);
    for (int y = 0; y < labels.height; ++y)
        for (int x = 0; x < labels.width; ++x) {
            int l = labels.at(x, y);
            if (l != 0 && !seen[l]) {
                seen[l] = true;
                contours.push_back(traceComponent(labels, l, x, y));
            }
        }
    return contours;
}

BinaryMask rasterize_contours(const std::vector<Contour>& contours, int width,
                              int height) {
    BinaryMask boundary(width, height);
    for (const Contour& c : contours)
        for (auto [x, y] : c.vertices) {
            if (x < 0 || x >= width || y < 0 || y >= height)
                throw std::invalid_argument("rasterize_contours: vertex out of bounds");
            boundary.set(x, y, true);
        }

    // Fill = everything not 4-connected to the image border through
    // non-boundary cells. The flood must not cross diagonal joints of the
    // 8-connected contour curve, hence 4-connectivity here. Equivalent to the
    // even-odd fill of each outer contour over the pixel lattice, and exact
    // for traced hole-free blobs.
    BinaryMask exterior(width, height);
    std::vector<std::pair<int, int>> stack;
    auto seed = [&](int x, int y) {
        if (!boundary.at(x, y) && !exterior.at(x, y)) {
            exterior.set(x, y, true);
            stack.push_back({x, y});
        }
    };
    for (int x = 0; x < width; ++x) {
        seed(x, 0);
        seed(x, height - 1);
    }
    for (int y = 0; y < height; ++y) {
        seed(0, y);
        seed(width - 1, y);
    }
    while (!stack.empty()) {
        auto [cx, cy] = stack.back();
        stack.pop_back();
        for (int d = 0; d < 8; d += 2) {
            int nx = cx + kDx[d], ny = cy + kDy[d];
            if (nx >= 0 && nx < width && ny >= 0 && ny < height) seed(nx, ny);
        }
    }

    BinaryMask out(width, height);
    for (std::size_t i = 0; i < out.size(); ++i) out.set(i, !exterior[i]);
    return out;
}

RgbImage overlay_contours(const ImagePlane& ir,
                          const std::vector<Contour>& contours) {
    RgbImage out(ir.width(), ir.height());
    for (std::size_t i = 0; i < ir.size(); ++i)
        out.set(i, {ir[i], ir[i], ir[i]});
    const RgbPixel highlight{1.0, 0.1, 0.1};
    for (const Contour& c : contours)
        for (auto [x, y] : c.vertices) {
            if (x < 0 || x >= ir.width() || y < 0 || y >= ir.height())
                throw std::invalid_argument("overlay_contours: vertex out of bounds");
            out.set(x, y, highlight);
        }
    return out;
}

}  // namespace epo
