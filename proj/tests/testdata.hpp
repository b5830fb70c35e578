// Shared generators for the test suites: seeded random planes and the
// procedural two-pair mini dataset used by the workflow tests.
#ifndef EPO_TESTS_TESTDATA_HPP
#define EPO_TESTS_TESTDATA_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "epo/image.hpp"
#include "epo/maskgen.hpp"

namespace testdata {

inline epo::ImagePlane random_plane(int w, int h, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    epo::ImagePlane p(w, h);
    for (std::size_t i = 0; i < p.size(); ++i) p.set(i, unit(rng));
    return p;
}

inline epo::RgbImage random_rgb(int w, int h, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    epo::RgbImage img(w, h);
    for (std::size_t i = 0; i < img.size(); ++i)
        img.set(i, {unit(rng), unit(rng), unit(rng)});
    return img;
}

inline epo::BinaryMask random_mask(int w, int h, std::uint64_t seed,
                                   double density = 0.4) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    epo::BinaryMask m(w, h);
    for (std::size_t i = 0; i < m.size(); ++i) m.set(i, unit(rng) < density);
    return m;
}

struct MiniPair {
    epo::RgbImage visible;
    epo::ImagePlane infrared;
};

// Deterministic 64x64 street-like scene: smooth visible gradients with a
// bright patch, textured infrared with a warm blob.
inline MiniPair mini_pair(int variant) {
    const int n = 64;
    epo::RgbImage vi(n, n);
    epo::ImagePlane ir(n, n);
    const double phase = variant * 1.7;
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            double base = 0.25 + 0.2 * std::sin(0.21 * x + phase) +
                          0.15 * std::cos(0.17 * y - phase);
            double stripes = 0.08 * std::sin(0.9 * (x + y) + phase);
            vi.set(x, y, {base + stripes, base + 0.5 * stripes, base - 0.3 * stripes});
            double dx = x - (20 + 8 * variant), dy = y - 40;
            double blob = 0.75 * std::exp(-(dx * dx + dy * dy) / 180.0);
            double texture = 0.1 * std::sin(0.6 * x + phase) * std::cos(0.5 * y);
            ir.set(x, y, 0.2 + blob + texture);
        }
    return {vi, ir};
}

}  // namespace testdata

#endif
