#include "epo/fusion.hpp"

#include <algorithm>
#include <stdexcept>

#include "epo/losses.hpp"

namespace epo {

namespace {

void requireSameSize(const ImagePlane& a, const ImagePlane& b, const char* op) {
    if (!a.same_size(b))
        throw std::invalid_argument(std::string(op) + ": dimension mismatch");
}

}  // namespace

ImagePlane pseudo_fuse(const ImagePlane& vi, const ImagePlane& ir) {
    requireSameSize(vi, ir, "pseudo_fuse");
    ImagePlane out(vi.width(), vi.height());
    for (std::size_t i = 0; i < vi.size(); ++i) out.set(i, 0.5 * vi[i] + 0.5 * ir[i]);
    return out;
}

ImagePlane max_fuse(const ImagePlane& vi, const ImagePlane& ir) {
    requireSameSize(vi, ir, "max_fuse");
    ImagePlane out(vi.width(), vi.height());
    for (std::size_t i = 0; i < vi.size(); ++i) out.set(i, std::max(vi[i], ir[i]));
    return out;
}

ImagePlane exposure_aware_fuse(const ImagePlane& vi, const ImagePlane& ir,
                               const BinaryMask& oe, double feather) {
    requireSameSize(vi, ir, "exposure_aware_fuse");
    if (oe.width() != vi.width() || oe.height() != vi.height())
        throw std::invalid_argument("exposure_aware_fuse: mask dimension mismatch");
    if (feather < 0.0)
        throw std::invalid_argument("exposure_aware_fuse: feather must be >= 0");
    ImagePlane weight = region_masks(oe).first;
    if (feather > 0.0) weight = gaussian_blur(weight, feather);
    ImagePlane out(vi.width(), vi.height());
    for (std::size_t i = 0; i < vi.size(); ++i) {
        double w = weight[i];
        out.set(i, w * ir[i] + (1.0 - w) * std::max(vi[i], ir[i]));
    }
    return out;
}

RgbImage assemble_color(const ImagePlane& fused_y, const RgbImage& source) {
    if (fused_y.width() != source.width() || fused_y.height() != source.height())
        throw std::invalid_argument("assemble_color: dimension mismatch");
    YCbCrImage ycc = rgb_to_ycbcr(source);
    ycc.y = fused_y;
    return ycbcr_to_rgb(ycc);
}

}  // namespace epo
