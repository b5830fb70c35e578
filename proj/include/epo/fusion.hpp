#ifndef EPO_FUSION_HPP
#define EPO_FUSION_HPP

#include "epo/image.hpp"
#include "epo/maskgen.hpp"

namespace epo {

// 0.5 * vi + 0.5 * ir pointwise — the pseudo ground truth.
ImagePlane pseudo_fuse(const ImagePlane& vi, const ImagePlane& ir);

// Pointwise maximum.
ImagePlane max_fuse(const ImagePlane& vi, const ImagePlane& ir);

// f = w * ir + (1 - w) * max(vi, ir), where w is the overexposure mask
// softened by a Gaussian feather of the given radius. feather 0 keeps the
// hard mask, so inside the mask f equals ir exactly.
ImagePlane exposure_aware_fuse(const ImagePlane& vi, const ImagePlane& ir,
                               const BinaryMask& oe, double feather);

// Replace the source's Y channel with fused_y and invert back to RGB.
RgbImage assemble_color(const ImagePlane& fused_y, const RgbImage& source);

}  // namespace epo

#endif
