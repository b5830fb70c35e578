#include "epo/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace epo {

void SynthesisConfig::validate() const {
    if (spots_min < 0 || spots_max < spots_min)
        throw std::invalid_argument("SynthesisConfig: bad spot count range");
    if (sigma_min <= 0.0 || sigma_max < sigma_min)
        throw std::invalid_argument("SynthesisConfig: bad sigma range");
    if (gain_min < 1.0 || gain_max > 1.6 || gain_max < gain_min)
        throw std::invalid_argument("SynthesisConfig: gain range must lie in [1.0, 1.6]");
    if (white_probability < 0.0 || white_probability > 1.0)
        throw std::invalid_argument("SynthesisConfig: bad tone probability");
}

RgbPixel tone_color(SpotTone tone) {
    return tone == SpotTone::White ? RgbPixel{1.0, 1.0, 1.0}
                                   : RgbPixel{1.0, 0.90, 0.65};
}

namespace {

void validateSpec(const ExposureSpec& spec, int width, int height) {
    if (spec.center_x < 0 || spec.center_x >= width || spec.center_y < 0 ||
        spec.center_y >= height)
        throw std::invalid_argument("ExposureSpec: center outside image bounds");
    if (spec.sigma <= 0.0)
        throw std::invalid_argument("ExposureSpec: sigma must be positive");
    if (spec.gain < 1.0 || spec.gain > 1.6)
        throw std::invalid_argument("ExposureSpec: gain must lie in [1.0, 1.6]");
}

}  // namespace

RgbImage apply_light_spot(const RgbImage& img, const ExposureSpec& spec) {
    validateSpec(spec, img.width(), img.height());
    const RgbPixel tone = tone_color(spec.tone);
    RgbImage out = img;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            double g = gaussian_weight(x - spec.center_x, y - spec.center_y, spec.sigma);
            const RgbPixel& p = img.at(x, y);
            out.set(x, y, {p.r + spec.gain * tone.r * g,
                           p.g + spec.gain * tone.g * g,
                           p.b + spec.gain * tone.b * g});
        }
    return out;
}

std::vector<ExposureSpec> sample_specs(const LabeledMask& objects,
                                       const SynthesisConfig& cfg, Rng& rng) {
    cfg.validate();
    std::uniform_real_distribution<double> sigmaDist(cfg.sigma_min, cfg.sigma_max);
    std::uniform_real_distribution<double> gainDist(cfg.gain_min, cfg.gain_max);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto sampleTone = [&] {
        return unit(rng) < cfg.white_probability ? SpotTone::White
                                                 : SpotTone::Yellowish;
    };

    std::vector<ExposureSpec> specs;
    if (objects.component_count == 0) {
        // No objects: one global spot, uniform placement.
        ExposureSpec spec;
        spec.center_x = unit(rng) * (objects.width - 1);
        spec.center_y = unit(rng) * (objects.height - 1);
        spec.sigma = sigmaDist(rng);
        spec.gain = gainDist(rng);
        spec.tone = sampleTone();
        specs.push_back(spec);
        return specs;
    }

    struct ObjectStats {
        long long sx = 0, sy = 0, n = 0;
        int minx, miny, maxx, maxy;
        bool seen = false;
    };
    std::vector<ObjectStats> stats(objects.component_count + 1);
    for (int y = 0; y < objects.height; ++y)
        for (int x = 0; x < objects.width; ++x) {
            int l = objects.at(x, y);
            if (l == 0) continue;
            ObjectStats& s = stats[l];
            if (!s.seen) {
                s.minx = s.maxx = x;
                s.miny = s.maxy = y;
                s.seen = true;
            }
            s.minx = std::min(s.minx, x);
            s.maxx = std::max(s.maxx, x);
            s.miny = std::min(s.miny, y);
            s.maxy = std::max(s.maxy, y);
            s.sx += x;
            s.sy += y;
            ++s.n;
        }

    std::uniform_int_distribution<int> countDist(cfg.spots_min, cfg.spots_max);
    int count = std::min(countDist(rng), objects.component_count);
    std::vector<int> order(objects.component_count);
    for (int i = 0; i < objects.component_count; ++i) order[i] = i + 1;
    std::shuffle(order.begin(), order.end(), rng);

    for (int i = 0; i < count; ++i) {
        const ObjectStats& s = stats[order[i]];
        double cx = static_cast<double>(s.sx) / s.n;
        double cy = static_cast<double>(s.sy) / s.n;
        // Jitter around the centroid but never outside the bounding box.
        double jx = (unit(rng) - 0.5) * (s.maxx - s.minx);
        double jy = (unit(rng) - 0.5) * (s.maxy - s.miny);
        ExposureSpec spec;
        spec.center_x = std::clamp(cx + jx, static_cast<double>(s.minx),
                                   static_cast<double>(s.maxx));
        spec.center_y = std::clamp(cy + jy, static_cast<double>(s.miny),
                                   static_cast<double>(s.maxy));
        spec.sigma = sigmaDist(rng);
        spec.gain = gainDist(rng);
        spec.tone = sampleTone();
        specs.push_back(spec);
    }
    return specs;
}

std::pair<RgbImage, ImagePlane> synthesize_pair(
    const RgbImage& vi, const ImagePlane& ir,
    const std::vector<ExposureSpec>& specs) {
    if (vi.width() != ir.width() || vi.height() != ir.height())
        throw std::invalid_argument("synthesize_pair: visible/infrared dimension mismatch");
    RgbImage out = vi;
    for (const ExposureSpec& spec : specs) out = apply_light_spot(out, spec);
    return {std::move(out), ir};
}

std::uint64_t derive_seed(std::uint64_t base, const std::string& id) {
    std::uint64_t h = base ^ 0x9e3779b97f4a7c15ULL;
    for (unsigned char c : id) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    // splitmix64 finalizer
    h += 0x9e3779b97f4a7c15ULL;
    h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
    h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
    return h ^ (h >> 31);
}

}  // namespace epo
