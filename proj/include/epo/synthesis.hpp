#ifndef EPO_SYNTHESIS_HPP
#define EPO_SYNTHESIS_HPP

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "epo/image.hpp"
#include "epo/maskgen.hpp"

namespace epo {

enum class SpotTone { White, Yellowish };

struct ExposureSpec {
    double center_x = 0.0;
    double center_y = 0.0;
    double sigma = 1.0;          // pixels, > 0
    double gain = 1.0;           // peak added luminance, in [1.0, 1.6]
    SpotTone tone = SpotTone::White;
};

struct SynthesisConfig {
    int spots_min = 1;
    int spots_max = 3;
    double sigma_min = 4.0;
    double sigma_max = 16.0;
    double gain_min = 1.0;
    double gain_max = 1.6;
    double white_probability = 0.5;
    std::uint64_t seed = 0;

    void validate() const;
};

using Rng = std::mt19937_64;

// Per-channel multipliers for the glare tone.
RgbPixel tone_color(SpotTone tone);

// Additive screen bloom: v' = clamp(v + gain * tone_c * G(dx, dy, sigma)).
// With gain >= 1 the spot center always saturates every tone channel at 1.
RgbImage apply_light_spot(const RgbImage& img, const ExposureSpec& spec);

// One spec per sampled object, centered on the object centroid jittered
// within its bounding box. An empty mask yields a single global spot at a
// uniform random location.
std::vector<ExposureSpec> sample_specs(const LabeledMask& objects,
                                       const SynthesisConfig& cfg, Rng& rng);

// Spots hit the visible image only; the infrared plane passes through
// untouched (optical glare does not reach the thermal sensor).
std::pair<RgbImage, ImagePlane> synthesize_pair(
    const RgbImage& vi, const ImagePlane& ir,
    const std::vector<ExposureSpec>& specs);

// Stable per-image seed derivation (splitmix64 over seed ^ hash(id)).
std::uint64_t derive_seed(std::uint64_t base, const std::string& id);

}  // namespace epo

#endif
