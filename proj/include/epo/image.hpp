#ifndef EPO_IMAGE_HPP
#define EPO_IMAGE_HPP

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace epo {

inline double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

// Single-channel raster with intensities kept in [0,1]. All mutating entry
// points clamp on write, so any chain of operations stays in range.
class ImagePlane {
public:
    ImagePlane() = default;
    ImagePlane(int width, int height, double fill = 0.0);
    ImagePlane(int width, int height, std::vector<double> data);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return data_.size(); }

    double at(int x, int y) const { return data_[idx(x, y)]; }
    double operator[](std::size_t i) const { return data_[i]; }
    void set(int x, int y, double v) { data_[idx(x, y)] = clamp01(v); }
    void set(std::size_t i, double v) { data_[i] = clamp01(v); }

    const std::vector<double>& data() const { return data_; }

    bool same_size(const ImagePlane& o) const {
        return width_ == o.width_ && height_ == o.height_;
    }

private:
    std::size_t idx(int x, int y) const {
        return static_cast<std::size_t>(y) * width_ + x;
    }
    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

// Unclamped variant used for noised diffusion features, which legitimately
// leave [0,1]. Kept separate so ImagePlane's clamp invariant stays airtight.
class FeaturePlane {
public:
    FeaturePlane() = default;
    FeaturePlane(int width, int height, double fill = 0.0);
    FeaturePlane(int width, int height, std::vector<double> data);
    explicit FeaturePlane(const ImagePlane& p);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return data_.size(); }

    double operator[](std::size_t i) const { return data_[i]; }
    double& operator[](std::size_t i) { return data_[i]; }
    double at(int x, int y) const {
        return data_[static_cast<std::size_t>(y) * width_ + x];
    }

    bool same_size(const FeaturePlane& o) const {
        return width_ == o.width_ && height_ == o.height_;
    }

    // Clamps into [0,1].
    ImagePlane to_image() const;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

struct RgbPixel {
    double r = 0.0, g = 0.0, b = 0.0;
};

class RgbImage {
public:
    RgbImage() = default;
    RgbImage(int width, int height, RgbPixel fill = {});

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return pixels_.size(); }

    const RgbPixel& at(int x, int y) const { return pixels_[idx(x, y)]; }
    const RgbPixel& operator[](std::size_t i) const { return pixels_[i]; }
    void set(int x, int y, RgbPixel p) { pixels_[idx(x, y)] = clampPixel(p); }
    void set(std::size_t i, RgbPixel p) { pixels_[i] = clampPixel(p); }

    bool same_size(const RgbImage& o) const {
        return width_ == o.width_ && height_ == o.height_;
    }

private:
    static RgbPixel clampPixel(RgbPixel p) {
        return {clamp01(p.r), clamp01(p.g), clamp01(p.b)};
    }
    std::size_t idx(int x, int y) const {
        return static_cast<std::size_t>(y) * width_ + x;
    }
    int width_ = 0;
    int height_ = 0;
    std::vector<RgbPixel> pixels_;
};

// Chroma planes are offset-binary: 0.5 is neutral gray.
struct YCbCrImage {
    ImagePlane y;
    ImagePlane cb;
    ImagePlane cr;
};

struct Histogram {
    std::vector<std::size_t> bins;
    int bin_count = 0;
};

// Full-range BT.601. White/black map to Y=1/0 with Cb=Cr=0.5.
YCbCrImage rgb_to_ycbcr(const RgbImage& img);
RgbImage ycbcr_to_rgb(const YCbCrImage& img);

// sqrt(Gx^2+Gy^2) with the standard 3x3 kernels, replicate padding, and the
// result divided by 4*sqrt(2) (the maximum magnitude on [0,1] inputs) so the
// output plane stays in range.
ImagePlane sobel_magnitude(const ImagePlane& p);

// Unnormalized: peak value 1 at (0,0), so a spot's peak equals its gain.
double gaussian_weight(double dx, double dy, double sigma);

// Block-average pooling; ceiling output dimensions, partial edge blocks
// average over their valid pixels only. factor 1 is the identity.
ImagePlane downsample(const ImagePlane& p, int factor);

// Uniform quantization of [0,1]; v=1 lands in the top bin.
Histogram histogram(const ImagePlane& p, int bins);

// Separable Gaussian blur with replicate borders, kernel radius ceil(3*sigma).
// sigma <= 0 returns the input unchanged.
ImagePlane gaussian_blur(const ImagePlane& p, double sigma);

}  // namespace epo

#endif
