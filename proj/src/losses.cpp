#include "epo/losses.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>

namespace epo {

namespace {

void requireSameSize(const ImagePlane& a, const ImagePlane& b, const char* op) {
    if (!a.same_size(b))
        throw std::invalid_argument(std::string(op) + ": dimension mismatch");
}

double normalize(double sum, std::size_t n, NormMode norm) {
    return norm == NormMode::MeanPerPixel ? sum / static_cast<double>(n) : sum;
}

}  // namespace

std::pair<ImagePlane, ImagePlane> region_masks(const BinaryMask& m) {
    ImagePlane oe(m.width(), m.height());
    ImagePlane normal(m.width(), m.height());
    for (std::size_t i = 0; i < m.size(); ++i) {
        oe.set(i, m[i] ? 1.0 : 0.0);
        normal.set(i, m[i] ? 0.0 : 1.0);
    }
    return {std::move(oe), std::move(normal)};
}

std::pair<double, double> intensity_loss(const ImagePlane& f, const ImagePlane& vi,
                                         const ImagePlane& ir,
                                         const ImagePlane& pseudo,
                                         const ImagePlane& oe,
                                         const ImagePlane& normal, NormMode norm) {
    requireSameSize(f, vi, "intensity_loss");
    requireSameSize(f, ir, "intensity_loss");
    requireSameSize(f, pseudo, "intensity_loss");
    requireSameSize(f, oe, "intensity_loss");
    requireSameSize(f, normal, "intensity_loss");
    double accNormal = 0.0, accMask = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        accNormal += normal[i] * std::abs(f[i] - std::max(vi[i], ir[i]));
        accMask += oe[i] * std::abs(f[i] - pseudo[i]);
    }
    return {normalize(accNormal, f.size(), norm), normalize(accMask, f.size(), norm)};
}

std::pair<double, double> gradient_loss(const ImagePlane& f, const ImagePlane& vi,
                                        const ImagePlane& ir, const ImagePlane& oe,
                                        const ImagePlane& normal, double gamma,
                                        NormMode norm) {
    requireSameSize(f, vi, "gradient_loss");
    requireSameSize(f, ir, "gradient_loss");
    requireSameSize(f, oe, "gradient_loss");
    requireSameSize(f, normal, "gradient_loss");
    ImagePlane gf = sobel_magnitude(f);
    ImagePlane gvi = sobel_magnitude(vi);
    ImagePlane gir = sobel_magnitude(ir);
    double accNormal = 0.0, accMask = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        accNormal += normal[i] * std::abs(gf[i] - std::max(gvi[i], gir[i]));
        accMask += oe[i] * std::abs(gf[i] - gamma * gir[i]);
    }
    return {normalize(accNormal, f.size(), norm), normalize(accMask, f.size(), norm)};
}

double fusion_loss(double in_normal, double in_mask, double grad_normal,
                   double grad_mask, double delta) {
    if (in_normal < 0 || in_mask < 0 || grad_normal < 0 || grad_mask < 0 || delta < 0)
        throw std::invalid_argument("fusion_loss: negative input");
    return delta * (in_normal + in_mask) + grad_normal + grad_mask;
}

double total_loss(double fusion, double seg, double diff, double zeta, double phi) {
    if (fusion < 0 || seg < 0 || diff < 0 || zeta < 0 || phi < 0)
        throw std::invalid_argument("total_loss: negative input");
    return zeta * fusion + phi * seg + diff;
}

double seg_cross_entropy(const std::vector<FeaturePlane>& pred,
                         const std::vector<int>& target) {
    if (pred.size() < 2)
        throw std::invalid_argument("seg_cross_entropy: need at least 2 classes");
    const std::size_t n = pred[0].size();
    for (const FeaturePlane& p : pred)
        if (p.size() != n)
            throw std::invalid_argument("seg_cross_entropy: class plane size mismatch");
    if (target.size() != n)
        throw std::invalid_argument("seg_cross_entropy: target size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (const FeaturePlane& p : pred) {
            if (p[i] < 0.0)
                throw std::invalid_argument("seg_cross_entropy: negative probability");
            sum += p[i];
        }
        if (std::abs(sum - 1.0) > 1e-6)
            throw std::invalid_argument("seg_cross_entropy: probabilities do not sum to 1");
        int cls = target[i];
        if (cls < 0 || cls >= static_cast<int>(pred.size()))
            throw std::invalid_argument("seg_cross_entropy: class index out of range");
        if (pred[cls][i] <= 0.0)
            throw std::invalid_argument("seg_cross_entropy: zero target-class probability");
        acc -= std::log(pred[cls][i]);
    }
    return acc / static_cast<double>(n);
}

double diffusion_loss(const FeaturePlane& eps_true, const FeaturePlane& eps_pred,
                      NormMode norm) {
    if (!eps_true.same_size(eps_pred))
        throw std::invalid_argument("diffusion_loss: dimension mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < eps_true.size(); ++i)
        acc += std::abs(eps_true[i] - eps_pred[i]);
    return normalize(acc, eps_true.size(), norm);
}

DominanceLabel dominance_classify(const ImagePlane& f, const ImagePlane& vi,
                                  const ImagePlane& ir, const BinaryMask& oe,
                                  double tau) {
    requireSameSize(f, vi, "dominance_classify");
    requireSameSize(f, ir, "dominance_classify");
    if (oe.width() != f.width() || oe.height() != f.height())
        throw std::invalid_argument("dominance_classify: dimension mismatch");
    if (oe.count() == 0)
        throw std::invalid_argument("dominance_classify: empty overexposure mask");
    ImagePlane gf = sobel_magnitude(f);
    ImagePlane gvi = sobel_magnitude(vi);
    double dInt = 0.0, dGrad = 0.0, dIr = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!oe[i]) continue;
        dInt += std::abs(f[i] - vi[i]);
        dGrad += std::abs(gf[i] - gvi[i]);
        dIr += std::abs(f[i] - ir[i]);
        ++n;
    }
    dInt /= n;
    dGrad /= n;
    dIr /= n;
    if (dInt < tau) return DominanceLabel::IntensityDominated;
    if (dGrad < tau && dIr >= tau) return DominanceLabel::TextureDominated;
    return DominanceLabel::Neither;
}

LossBreakdown compute_losses(const ImagePlane& f, const ImagePlane& vi,
                             const ImagePlane& ir, const ImagePlane& pseudo,
                             const BinaryMask& oe, const LossWeights& w,
                             double seg, double diff, NormMode norm) {
    auto [oePlane, normalPlane] = region_masks(oe);
    LossBreakdown b;
    std::tie(b.in_normal, b.in_mask) =
        intensity_loss(f, vi, ir, pseudo, oePlane, normalPlane, norm);
    std::tie(b.grad_normal, b.grad_mask) =
        gradient_loss(f, vi, ir, oePlane, normalPlane, w.gamma, norm);
    b.seg = seg;
    b.diff = diff;
    b.fusion = fusion_loss(b.in_normal, b.in_mask, b.grad_normal, b.grad_mask, w.delta);
    b.total = total_loss(b.fusion, b.seg, b.diff, w.zeta, w.phi);
    return b;
}

}  // namespace epo
