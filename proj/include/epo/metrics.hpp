#ifndef EPO_METRICS_HPP
#define EPO_METRICS_HPP

#include <optional>

#include "epo/image.hpp"
#include "epo/maskgen.hpp"

namespace epo {

enum class VifAggregation { Mean, Sum };

struct MetricParams {
    int histogram_bins = 256;
    int ssim_window = 11;
    double ssim_sigma = 1.5;
    int vif_scales = 4;
    VifAggregation vif_aggregation = VifAggregation::Mean;
};

struct MetricReport {
    double en = 0.0;
    double mi = 0.0;
    double vif = 0.0;
    double qabf = 0.0;
    double ssim = 0.0;
    MetricParams params;
};

// Shannon entropy in bits of the 256-bin intensity histogram.
double entropy(const ImagePlane& p, int bins = 256);

// Mutual information in bits from the joint histogram.
double mutual_information(const ImagePlane& a, const ImagePlane& b,
                          int bins = 256);

// Mean SSIM over Gaussian windows (default 11x11, sigma 1.5), K1=0.01,
// K2=0.03, dynamic range 1.
double ssim(const ImagePlane& a, const ImagePlane& b, int window = 11,
            double sigma = 1.5);

// Xydeas-Petrovic edge preservation measure. The per-pixel sigmoid scores are
// normalized by their value at perfect preservation so qabf(x,x,x) = 1, and a
// zero fused edge scores 0. Result in [0,1].
double qabf(const ImagePlane& a, const ImagePlane& b, const ImagePlane& f);

// Same measure with the pixel sums restricted to the given region.
double qabf_masked(const ImagePlane& a, const ImagePlane& b,
                   const ImagePlane& f, const BinaryMask& region);

// Pixel-domain multi-scale VIF of one distorted image against a reference.
// Intensities are mapped to the classic 0..255 operating range internally
// (the GSM noise variance sigma_n^2 = 2 is calibrated for 8-bit data).
double vif(const ImagePlane& reference, const ImagePlane& distorted,
           int scales = 4);

// Fusion VIF: per-source VIF against f, aggregated per `agg`.
double vif_fusion(const ImagePlane& a, const ImagePlane& b, const ImagePlane& f,
                  VifAggregation agg = VifAggregation::Mean, int scales = 4);

// Full five-metric report with the reporting conventions used throughout:
// MI as the two-source sum, SSIM as the two-source mean.
MetricReport evaluate_all(const ImagePlane& vi, const ImagePlane& ir,
                          const ImagePlane& f, const MetricParams& params = {});

}  // namespace epo

#endif
