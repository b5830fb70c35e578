#include "epo/image.hpp"

#include <cmath>

namespace epo {

namespace {

void checkDims(int width, int height) {
    if (width <= 0 || height <= 0)
        throw std::invalid_argument("image dimensions must be positive");
}

}  // namespace

ImagePlane::ImagePlane(int width, int height, double fill)
    : width_(width), height_(height),
      data_(static_cast<std::size_t>(width) * height, clamp01(fill)) {
    checkDims(width, height);
}

ImagePlane::ImagePlane(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
    checkDims(width, height);
    if (data_.size() != static_cast<std::size_t>(width) * height)
        throw std::invalid_argument("data length does not match dimensions");
    for (double& v : data_) v = clamp01(v);
}

FeaturePlane::FeaturePlane(int width, int height, double fill)
    : width_(width), height_(height),
      data_(static_cast<std::size_t>(width) * height, fill) {
    checkDims(width, height);
}

FeaturePlane::FeaturePlane(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
    checkDims(width, height);
    if (data_.size() != static_cast<std::size_t>(width) * height)
        throw std::invalid_argument("data length does not match dimensions");
}

FeaturePlane::FeaturePlane(const ImagePlane& p)
    : width_(p.width()), height_(p.height()), data_(p.data()) {}

ImagePlane FeaturePlane::to_image() const {
    return ImagePlane(width_, height_, data_);
}

RgbImage::RgbImage(int width, int height, RgbPixel fill)
    : width_(width), height_(height),
      pixels_(static_cast<std::size_t>(width) * height, clampPixel(fill)) {
    checkDims(width, height);
}

YCbCrImage rgb_to_ycbcr(const RgbImage& img) {
    ImagePlane y(img.width(), img.height());
    ImagePlane cb(img.width(), img.height());
    ImagePlane cr(img.width(), img.height());
    for (std::size_t i = 0; i < img.size(); ++i) {
        const RgbPixel& p = img[i];
        y.set(i, 0.299 * p.r + 0.587 * p.g + 0.114 * p.b);
        cb.set(i, -0.168736 * p.r - 0.331264 * p.g + 0.5 * p.b + 0.5);
        cr.set(i, 0.5 * p.r - 0.418688 * p.g - 0.081312 * p.b + 0.5);
    }
    return {std::move(y), std::move(cb), std::move(cr)};
}

RgbImage ycbcr_to_rgb(const YCbCrImage& img) {
    if (!img.y.same_size(img.cb) || !img.y.same_size(img.cr))
        throw std::invalid_argument("YCbCr planes must share dimensions");
    RgbImage out(img.y.width(), img.y.height());
    for (std::size_t i = 0; i < img.y.size(); ++i) {
        double y = img.y[i];
        double cb = img.cb[i] - 0.5;
        double cr = img.cr[i] - 0.5;
        out.set(i, {y + 1.402 * cr,
                    y - 0.344136 * cb - 0.714136 * cr,
                    y + 1.772 * cb});
    }
    return out;
}

ImagePlane sobel_magnitude(const ImagePlane& p) {
    const int w = p.width(), h = p.height();
    ImagePlane out(w, h);
    const double norm = 1.0 / (4.0 * std::sqrt(2.0));
    auto sample = [&](int x, int y) {
        x = std::clamp(x, 0, w - 1);
        y = std::clamp(y, 0, h - 1);
        return p.at(x, y);
    };
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double tl = sample(x - 1, y - 1), tc = sample(x, y - 1), tr = sample(x + 1, y - 1);
            double ml = sample(x - 1, y), mr = sample(x + 1, y);
            double bl = sample(x - 1, y + 1), bc = sample(x, y + 1), br = sample(x + 1, y + 1);
            double gx = (tr + 2.0 * mr + br) - (tl + 2.0 * ml + bl);
            double gy = (bl + 2.0 * bc + br) - (tl + 2.0 * tc + tr);
            out.set(x, y, std::sqrt(gx * gx + gy * gy) * norm);
        }
    }
    return out;
}

double gaussian_weight(double dx, double dy, double sigma) {
    if (sigma <= 0.0)
        throw std::invalid_argument("gaussian_weight: sigma must be positive");
    return std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
}

ImagePlane downsample(const ImagePlane& p, int factor) {
    if (factor < 1)
        throw std::invalid_argument("downsample: factor must be >= 1");
    if (factor == 1) return p;
    const int ow = (p.width() + factor - 1) / factor;
    const int oh = (p.height() + factor - 1) / factor;
    ImagePlane out(ow, oh);
    for (int oy = 0; oy < oh; ++oy) {
        for (int ox = 0; ox < ow; ++ox) {
            double sum = 0.0;
            int n = 0;
            for (int y = oy * factor; y < std::min((oy + 1) * factor, p.height()); ++y)
                for (int x = ox * factor; x < std::min((ox + 1) * factor, p.width()); ++x) {
                    sum += p.at(x, y);
                    ++n;
                }
            out.set(ox, oy, sum / n);
        }
    }
    return out;
}

Histogram histogram(const ImagePlane& p, int bins) {
    if (bins < 2)
        throw std::invalid_argument("histogram: need at least 2 bins");
    Histogram h;
    h.bin_count = bins;
    h.bins.assign(bins, 0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        int b = std::min(static_cast<int>(p[i] * bins), bins - 1);
        ++h.bins[b];
    }
    return h;
}

ImagePlane gaussian_blur(const ImagePlane& p, double sigma) {
    if (sigma <= 0.0) return p;
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        kernel[i + radius] = std::exp(-(i * i) / (2.0 * sigma * sigma));
        sum += kernel[i + radius];
    }
    for (double& k : kernel) k /= sum;

    const int w = p.width(), h = p.height();
    std::vector<double> tmp(p.size());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += kernel[i + radius] * p.at(std::clamp(x + i, 0, w - 1), y);
            tmp[static_cast<std::size_t>(y) * w + x] = acc;
        }
    ImagePlane out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += kernel[i + radius] *
                       tmp[static_cast<std::size_t>(std::clamp(y + i, 0, h - 1)) * w + x];
            out.set(x, y, acc);
        }
    return out;
}

}  // namespace epo
