#include "epo/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace epo {

namespace {

void requireSameSize(const ImagePlane& a, const ImagePlane& b, const char* op) {
    if (!a.same_size(b))
        throw std::invalid_argument(std::string(op) + ": dimension mismatch");
}

int quantize(double v, int bins) {
    return std::min(static_cast<int>(v * bins), bins - 1);
}

// Minimal matrix-of-doubles helper for the windowed metrics.
struct Grid {
    int w = 0, h = 0;
    std::vector<double> v;
    Grid() = default;
    Grid(int w_, int h_) : w(w_), h(h_), v(static_cast<std::size_t>(w_) * h_, 0.0) {}
    explicit Grid(const ImagePlane& p) : w(p.width()), h(p.height()), v(p.data()) {}
    double at(int x, int y) const { return v[static_cast<std::size_t>(y) * w + x]; }
    double& at(int x, int y) { return v[static_cast<std::size_t>(y) * w + x]; }
};

std::vector<double> gaussianKernel1d(int size, double sigma) {
    std::vector<double> k(size);
    double sum = 0.0;
    double c = (size - 1) / 2.0;
    for (int i = 0; i < size; ++i) {
        double d = i - c;
        k[i] = std::exp(-d * d / (2.0 * sigma * sigma));
        sum += k[i];
    }
    for (double& x : k) x /= sum;
    return k;
}

// Valid-mode separable filtering: output is (w-size+1) x (h-size+1).
Grid filterValid(const Grid& g, const std::vector<double>& k) {
    const int size = static_cast<int>(k.size());
    Grid horiz(g.w - size + 1, g.h);
    for (int y = 0; y < g.h; ++y)
        for (int x = 0; x < horiz.w; ++x) {
            double acc = 0.0;
            for (int i = 0; i < size; ++i) acc += k[i] * g.at(x + i, y);
            horiz.at(x, y) = acc;
        }
    Grid out(horiz.w, g.h - size + 1);
    for (int y = 0; y < out.h; ++y)
        for (int x = 0; x < out.w; ++x) {
            double acc = 0.0;
            for (int i = 0; i < size; ++i) acc += k[i] * horiz.at(x, y + i);
            out.at(x, y) = acc;
        }
    return out;
}

Grid elementwiseProduct(const Grid& a, const Grid& b) {
    Grid out(a.w, a.h);
    for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] = a.v[i] * b.v[i];
    return out;
}

Grid decimate2(const Grid& g) {
    Grid out((g.w + 1) / 2, (g.h + 1) / 2);
    for (int y = 0; y < out.h; ++y)
        for (int x = 0; x < out.w; ++x) out.at(x, y) = g.at(2 * x, 2 * y);
    return out;
}

struct SobelField {
    Grid gx, gy;
};

SobelField sobelField(const ImagePlane& p) {
    const int w = p.width(), h = p.height();
    SobelField f{Grid(w, h), Grid(w, h)};
    auto sample = [&](int x, int y) {
        return p.at(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1));
    };
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double tl = sample(x - 1, y - 1), tc = sample(x, y - 1), tr = sample(x + 1, y - 1);
            double ml = sample(x - 1, y), mr = sample(x + 1, y);
            double bl = sample(x - 1, y + 1), bc = sample(x, y + 1), br = sample(x + 1, y + 1);
            f.gx.at(x, y) = (tr + 2.0 * mr + br) - (tl + 2.0 * ml + bl);
            f.gy.at(x, y) = (bl + 2.0 * bc + br) - (tl + 2.0 * tc + tr);
        }
    return f;
}

// Xydeas-Petrovic sigmoid constants.
constexpr double kGammaG = 0.9994, kKappaG = -15.0, kSigmaG = 0.5;
constexpr double kGammaA = 0.9879, kKappaA = -22.0, kSigmaA = 0.8;

double sigmoidG(double g) {
    return kGammaG / (1.0 + std::exp(kKappaG * (g - kSigmaG)));
}
double sigmoidA(double a) {
    return kGammaA / (1.0 + std::exp(kKappaA * (a - kSigmaA)));
}

double orientation(double gx, double gy) {
    if (gx == 0.0) return M_PI / 2.0;
    return std::atan(gy / gx);
}

// Preservation of one source's edge at one pixel, scaled so that an
// identically preserved edge scores exactly 1.
double edgePreservation(double gsrc, double asrc, double gfus, double afus) {
    if (gfus == 0.0) return 0.0;  // the fused image dropped the edge entirely
    double strengthRatio =
        gsrc > gfus ? gfus / gsrc : (gfus > gsrc ? gsrc / gfus : 1.0);
    double orientationMatch = 1.0 - std::abs(asrc - afus) / (M_PI / 2.0);
    static const double perfect = sigmoidG(1.0) * sigmoidA(1.0);
    return sigmoidG(strengthRatio) * sigmoidA(orientationMatch) / perfect;
}

double qabfImpl(const ImagePlane& a, const ImagePlane& b, const ImagePlane& f,
                const BinaryMask* region) {
    requireSameSize(a, b, "qabf");
    requireSameSize(a, f, "qabf");
    SobelField fa = sobelField(a), fb = sobelField(b), ff = sobelField(f);
    double num = 0.0, den = 0.0;
    for (int y = 0; y < a.height(); ++y)
        for (int x = 0; x < a.width(); ++x) {
            if (region && !region->at(x, y)) continue;
            double gA = std::hypot(fa.gx.at(x, y), fa.gy.at(x, y));
            double gB = std::hypot(fb.gx.at(x, y), fb.gy.at(x, y));
            double gF = std::hypot(ff.gx.at(x, y), ff.gy.at(x, y));
            double aA = orientation(fa.gx.at(x, y), fa.gy.at(x, y));
            double aB = orientation(fb.gx.at(x, y), fb.gy.at(x, y));
            double aF = orientation(ff.gx.at(x, y), ff.gy.at(x, y));
            if (gA > 0.0) num += edgePreservation(gA, aA, gF, aF) * gA;
            if (gB > 0.0) num += edgePreservation(gB, aB, gF, aF) * gB;
            den += gA + gB;
        }
    return den > 0.0 ? num / den : 0.0;
}

}  // namespace

double entropy(const ImagePlane& p, int bins) {
    Histogram h = histogram(p, bins);
    const double n = static_cast<double>(p.size());
    double en = 0.0;
    for (std::size_t c : h.bins)
        if (c > 0) {
            double q = c / n;
            en -= q * std::log2(q);
        }
    return en;
}

double mutual_information(const ImagePlane& a, const ImagePlane& b, int bins) {
    requireSameSize(a, b, "mutual_information");
    std::vector<double> joint(static_cast<std::size_t>(bins) * bins, 0.0);
    std::vector<double> pa(bins, 0.0), pb(bins, 0.0);
    const double inv = 1.0 / static_cast<double>(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        int ia = quantize(a[i], bins), ib = quantize(b[i], bins);
        joint[static_cast<std::size_t>(ia) * bins + ib] += inv;
        pa[ia] += inv;
        pb[ib] += inv;
    }
    double mi = 0.0;
    for (int ia = 0; ia < bins; ++ia)
        for (int ib = 0; ib < bins; ++ib) {
            double j = joint[static_cast<std::size_t>(ia) * bins + ib];
            if (j > 0.0) mi += j * std::log2(j / (pa[ia] * pb[ib]));
        }
    return mi;
}

double ssim(const ImagePlane& a, const ImagePlane& b, int window, double sigma) {
    requireSameSize(a, b, "ssim");
    if (a.width() < window || a.height() < window)
        throw std::invalid_argument("ssim: image smaller than the window");
    const double c1 = 0.01 * 0.01, c2 = 0.03 * 0.03;
    std::vector<double> k = gaussianKernel1d(window, sigma);
    Grid ga(a), gb(b);
    Grid mu1 = filterValid(ga, k), mu2 = filterValid(gb, k);
    Grid s11 = filterValid(elementwiseProduct(ga, ga), k);
    Grid s22 = filterValid(elementwiseProduct(gb, gb), k);
    Grid s12 = filterValid(elementwiseProduct(ga, gb), k);
    double acc = 0.0;
    for (std::size_t i = 0; i < mu1.v.size(); ++i) {
        double m1 = mu1.v[i], m2 = mu2.v[i];
        double v1 = s11.v[i] - m1 * m1;
        double v2 = s22.v[i] - m2 * m2;
        double cov = s12.v[i] - m1 * m2;
        acc += ((2.0 * m1 * m2 + c1) * (2.0 * cov + c2)) /
               ((m1 * m1 + m2 * m2 + c1) * (v1 + v2 + c2));
    }
    return acc / static_cast<double>(mu1.v.size());
}

double qabf(const ImagePlane& a, const ImagePlane& b, const ImagePlane& f) {
    return qabfImpl(a, b, f, nullptr);
}

double qabf_masked(const ImagePlane& a, const ImagePlane& b, const ImagePlane& f,
                   const BinaryMask& region) {
    if (region.width() != a.width() || region.height() != a.height())
        throw std::invalid_argument("qabf_masked: dimension mismatch");
    return qabfImpl(a, b, f, &region);
}

double vif(const ImagePlane& reference, const ImagePlane& distorted, int scales) {
    requireSameSize(reference, distorted, "vif");
    const double sigmaNsq = 2.0;
    Grid ref(reference), dist(distorted);
    for (double& v : ref.v) v *= 255.0;
    for (double& v : dist.v) v *= 255.0;

    double num = 0.0, den = 0.0;
    for (int scale = 1; scale <= scales; ++scale) {
        const int n = (1 << (scales - scale + 1)) + 1;
        std::vector<double> win = gaussianKernel1d(n, n / 5.0);
        if (scale > 1) {
            if (ref.w < n || ref.h < n)
                throw std::invalid_argument("vif: image too small for the scale pyramid");
            ref = decimate2(filterValid(ref, win));
            dist = decimate2(filterValid(dist, win));
        }
        if (ref.w < n || ref.h < n)
            throw std::invalid_argument("vif: image too small for the scale pyramid");
        Grid mu1 = filterValid(ref, win), mu2 = filterValid(dist, win);
        Grid s11 = filterValid(elementwiseProduct(ref, ref), win);
        Grid s22 = filterValid(elementwiseProduct(dist, dist), win);
        Grid s12 = filterValid(elementwiseProduct(ref, dist), win);
        for (std::size_t i = 0; i < mu1.v.size(); ++i) {
            double v1 = std::max(0.0, s11.v[i] - mu1.v[i] * mu1.v[i]);
            double v2 = std::max(0.0, s22.v[i] - mu2.v[i] * mu2.v[i]);
            double cov = s12.v[i] - mu1.v[i] * mu2.v[i];
            double g = v1 > 1e-10 ? cov / v1 : 0.0;
            double sv = v2 - g * cov;
            if (v1 <= 1e-10) {
                g = 0.0;
                sv = v2;
            }
            if (v2 <= 1e-10) {
                g = 0.0;
                sv = 0.0;
            }
            if (g < 0.0) {
                sv = v2;
                g = 0.0;
            }
            sv = std::max(sv, 1e-10);
            num += std::log10(1.0 + g * g * v1 / (sv + sigmaNsq));
            den += std::log10(1.0 + v1 / sigmaNsq);
        }
    }
    if (den == 0.0) return 1.0;  // constant reference carries no information
    return num / den;
}

double vif_fusion(const ImagePlane& a, const ImagePlane& b, const ImagePlane& f,
                  VifAggregation agg, int scales) {
    double va = vif(a, f, scales);
    double vb = vif(b, f, scales);
    return agg == VifAggregation::Mean ? 0.5 * (va + vb) : va + vb;
}

MetricReport evaluate_all(const ImagePlane& vi, const ImagePlane& ir,
                          const ImagePlane& f, const MetricParams& params) {
    requireSameSize(vi, ir, "evaluate_all");
    requireSameSize(vi, f, "evaluate_all");
    MetricReport r;
    r.params = params;
    r.en = entropy(f, params.histogram_bins);
    r.mi = mutual_information(vi, f, params.histogram_bins) +
           mutual_information(ir, f, params.histogram_bins);
    r.ssim = 0.5 * (ssim(vi, f, params.ssim_window, params.ssim_sigma) +
                    ssim(ir, f, params.ssim_window, params.ssim_sigma));
    r.qabf = qabf(vi, ir, f);
    r.vif = vif_fusion(vi, ir, f, params.vif_aggregation, params.vif_scales);
    return r;
}

}  // namespace epo
