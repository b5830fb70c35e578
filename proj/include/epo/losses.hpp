#ifndef EPO_LOSSES_HPP
#define EPO_LOSSES_HPP

#include <utility>
#include <vector>

#include "epo/image.hpp"
#include "epo/maskgen.hpp"

namespace epo {

struct LossWeights {
    double zeta = 1.0;   // fusion loss weight
    double phi = 1.0;    // segmentation loss weight
    double delta = 1.0;  // intensity-vs-gradient balance
    double gamma = 2.0;  // infrared gradient amplification in masked regions
    double tau = 0.05;   // dominance classification threshold
};

struct LossBreakdown {
    double in_normal = 0.0;
    double in_mask = 0.0;
    double grad_normal = 0.0;
    double grad_mask = 0.0;
    double fusion = 0.0;
    double seg = 0.0;
    double diff = 0.0;
    double total = 0.0;
};

enum class DominanceLabel { IntensityDominated, TextureDominated, Neither };

// L1 norms are mean-normalized by pixel count by default so weights stay
// resolution-independent; Raw reproduces the plain sum.
enum class NormMode { MeanPerPixel, Raw };

// Float indicator planes (oe, normal); pointwise partition, oe + normal = 1.
std::pair<ImagePlane, ImagePlane> region_masks(const BinaryMask& m);

// in_normal = ||normal * (f - max(vi, ir))||_1 / N
// in_mask   = ||oe * (f - pseudo)||_1 / N
std::pair<double, double> intensity_loss(const ImagePlane& f, const ImagePlane& vi,
                                         const ImagePlane& ir,
                                         const ImagePlane& pseudo,
                                         const ImagePlane& oe,
                                         const ImagePlane& normal,
                                         NormMode norm = NormMode::MeanPerPixel);

// grad_normal = ||normal * (Df - max(Dvi, Dir))||_1 / N
// grad_mask   = ||oe * (Df - gamma * Dir)||_1 / N, D = sobel_magnitude
std::pair<double, double> gradient_loss(const ImagePlane& f, const ImagePlane& vi,
                                        const ImagePlane& ir, const ImagePlane& oe,
                                        const ImagePlane& normal, double gamma,
                                        NormMode norm = NormMode::MeanPerPixel);

double fusion_loss(double in_normal, double in_mask, double grad_normal,
                   double grad_mask, double delta);

double total_loss(double fusion, double seg, double diff, double zeta, double phi);

// Mean per-pixel -log p(target class), natural log. pred holds one
// probability plane per class; probabilities must be positive and sum to 1
// within 1e-6 at every pixel.
double seg_cross_entropy(const std::vector<FeaturePlane>& pred,
                         const std::vector<int>& target);

// Mean absolute difference between true and predicted noise.
double diffusion_loss(const FeaturePlane& eps_true, const FeaturePlane& eps_pred,
                      NormMode norm = NormMode::MeanPerPixel);

// Failure-mode predicates over the overexposed region: intensity-dominated
// when f tracks vi there, texture-dominated when the gradients track vi while
// the intensities stay far from ir.
DominanceLabel dominance_classify(const ImagePlane& f, const ImagePlane& vi,
                                  const ImagePlane& ir, const BinaryMask& oe,
                                  double tau);

// Convenience: full breakdown for one image set.
LossBreakdown compute_losses(const ImagePlane& f, const ImagePlane& vi,
                             const ImagePlane& ir, const ImagePlane& pseudo,
                             const BinaryMask& oe, const LossWeights& w,
                             double seg = 0.0, double diff = 0.0,
                             NormMode norm = NormMode::MeanPerPixel);

}  // namespace epo

#endif
