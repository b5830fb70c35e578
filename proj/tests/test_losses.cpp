#include <doctest.h>

#include <cmath>
#include <random>

#include "epo/fusion.hpp"
#include "epo/losses.hpp"
#include "oracles.hpp"
#include "testdata.hpp"

using namespace epo;

TEST_CASE("region_masks partition") {
    SUBCASE("empty and full masks") {
        auto [oe0, n0] = region_masks(BinaryMask(4, 4, false));
        auto [oe1, n1] = region_masks(BinaryMask(4, 4, true));
        for (std::size_t i = 0; i < oe0.size(); ++i) {
            CHECK(oe0[i] == 0.0);
            CHECK(n0[i] == 1.0);
            CHECK(oe1[i] == 1.0);
            CHECK(n1[i] == 0.0);
        }
    }
    SUBCASE("pointwise sum is 1 for random masks") {
        BinaryMask m = testdata::random_mask(8, 8, 3);
        auto [oe, normal] = region_masks(m);
        for (std::size_t i = 0; i < oe.size(); ++i) CHECK(oe[i] + normal[i] == 1.0);
    }
}

TEST_CASE("intensity_loss") {
    SUBCASE("zero at the targets") {
        ImagePlane vi = testdata::random_plane(8, 8, 11);
        ImagePlane ir = testdata::random_plane(8, 8, 12);
        ImagePlane pseudo = pseudo_fuse(vi, ir);
        ImagePlane fmax = max_fuse(vi, ir);
        auto [oeEmpty, normalFull] = region_masks(BinaryMask(8, 8, false));
        auto r1 = intensity_loss(fmax, vi, ir, pseudo, oeEmpty, normalFull);
        CHECK(r1.first == 0.0);
        CHECK(r1.second == 0.0);
        auto [oeFull, normalEmpty] = region_masks(BinaryMask(8, 8, true));
        auto r2 = intensity_loss(pseudo, vi, ir, pseudo, oeFull, normalEmpty);
        CHECK(r2.first == 0.0);
        CHECK(r2.second == 0.0);
    }
    SUBCASE("closed form on constants with a half mask") {
        const int n = 8;
        ImagePlane vi(n, n, 0.2), ir(n, n, 0.6), f(n, n, 0.5);
        ImagePlane pseudo = pseudo_fuse(vi, ir);  // 0.4
        BinaryMask m(n, n);
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n / 2; ++x) m.set(x, y, true);
        auto [oe, normal] = region_masks(m);
        auto [inNormal, inMask] = intensity_loss(f, vi, ir, pseudo, oe, normal);
        CHECK(inNormal == doctest::Approx(0.05).epsilon(1e-12));
        CHECK(inMask == doctest::Approx(0.05).epsilon(1e-12));
    }
    SUBCASE("raw mode is the plain sum") {
        ImagePlane vi(4, 4, 0.2), ir(4, 4, 0.6), f(4, 4, 0.5);
        ImagePlane pseudo = pseudo_fuse(vi, ir);
        auto [oe, normal] = region_masks(BinaryMask(4, 4, false));
        auto [meanN, meanM] =
            intensity_loss(f, vi, ir, pseudo, oe, normal, NormMode::MeanPerPixel);
        auto [rawN, rawM] =
            intensity_loss(f, vi, ir, pseudo, oe, normal, NormMode::Raw);
        CHECK(rawN == doctest::Approx(16.0 * meanN).epsilon(1e-12));
        CHECK(rawM == doctest::Approx(16.0 * meanM).epsilon(1e-12));
    }
    SUBCASE("dimension mismatch rejected") {
        ImagePlane p(4, 4), q(3, 3);
        CHECK_THROWS_AS(intensity_loss(p, q, p, p, p, p), std::invalid_argument);
    }
}

TEST_CASE("gradient_loss") {
    SUBCASE("all-constant planes are free") {
        ImagePlane c(8, 8, 0.3);
        auto [oe, normal] = region_masks(testdata::random_mask(8, 8, 4));
        auto [gn, gm] = gradient_loss(c, c, c, oe, normal, 2.0);
        CHECK(gn == 0.0);
        CHECK(gm == 0.0);
    }
    SUBCASE("gamma 0 with constant f collapses the masked term") {
        ImagePlane c(8, 8, 0.3);
        ImagePlane ir = testdata::random_plane(8, 8, 5);
        auto [oe, normal] = region_masks(BinaryMask(8, 8, true));
        auto [gn, gm] = gradient_loss(c, c, ir, oe, normal, 0.0);
        CHECK(gm == 0.0);
    }
    SUBCASE("matches the direct per-pixel reference") {
        ImagePlane f = testdata::random_plane(8, 8, 6);
        ImagePlane vi = testdata::random_plane(8, 8, 7);
        ImagePlane ir = testdata::random_plane(8, 8, 8);
        BinaryMask m = testdata::random_mask(8, 8, 9);
        auto [oe, normal] = region_masks(m);
        const double gamma = 2.0;
        double refN = 0.0, refM = 0.0;
        for (int y = 0; y < 8; ++y)
            for (int x = 0; x < 8; ++x) {
                double gf = oracle::sobel_magnitude_at(f, x, y);
                double gvi = oracle::sobel_magnitude_at(vi, x, y);
                double gir = oracle::sobel_magnitude_at(ir, x, y);
                if (m.at(x, y))
                    refM += std::abs(gf - gamma * gir);
                else
                    refN += std::abs(gf - std::max(gvi, gir));
            }
        auto [gn, gm] = gradient_loss(f, vi, ir, oe, normal, gamma);
        CHECK(gn == doctest::Approx(refN / 64.0).epsilon(1e-12));
        CHECK(gm == doctest::Approx(refM / 64.0).epsilon(1e-12));
    }
}

TEST_CASE("fusion_loss and total_loss") {
    CHECK(fusion_loss(0, 0, 0, 0, 1.0) == 0.0);
    CHECK(total_loss(0, 0, 0, 1.0, 1.0) == 0.0);
    CHECK(fusion_loss(0.1, 0.05, 0.2, 0.0, 1.0) == doctest::Approx(0.35));
    CHECK(total_loss(0.35, 0.3, 0.4, 1.0, 1.0) == doctest::Approx(1.05));
    SUBCASE("linearity in the weights") {
        CHECK(fusion_loss(0.1, 0.05, 0.0, 0.0, 2.0) ==
              doctest::Approx(2.0 * fusion_loss(0.1, 0.05, 0.0, 0.0, 1.0)));
        CHECK(total_loss(0.5, 0.0, 0.0, 3.0, 1.0) ==
              doctest::Approx(3.0 * total_loss(0.5, 0.0, 0.0, 1.0, 1.0)));
        CHECK(total_loss(0.0, 0.5, 0.0, 1.0, 3.0) ==
              doctest::Approx(3.0 * total_loss(0.0, 0.5, 0.0, 1.0, 1.0)));
    }
    SUBCASE("negative inputs rejected") {
        CHECK_THROWS_AS(fusion_loss(-0.1, 0, 0, 0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(total_loss(0, -0.1, 0, 1.0, 1.0), std::invalid_argument);
    }
}

TEST_CASE("seg_cross_entropy") {
    SUBCASE("matching one-hot prediction is free") {
        std::vector<FeaturePlane> pred{FeaturePlane(2, 2, 1.0), FeaturePlane(2, 2, 0.0)};
        std::vector<int> target(4, 0);
        CHECK(seg_cross_entropy(pred, target) == 0.0);
    }
    SUBCASE("uniform 4-class prediction costs ln 4") {
        std::vector<FeaturePlane> pred(4, FeaturePlane(3, 3, 0.25));
        std::vector<int> target(9, 2);
        CHECK(seg_cross_entropy(pred, target) ==
              doctest::Approx(std::log(4.0)).epsilon(1e-12));
    }
    SUBCASE("random normalized field matches the direct sum") {
        std::mt19937_64 rng(13);
        std::uniform_real_distribution<double> unit(0.05, 1.0);
        const int n = 16;
        std::vector<FeaturePlane> pred(4, FeaturePlane(4, 4));
        std::vector<int> target(n);
        double ref = 0.0;
        for (int i = 0; i < n; ++i) {
            double v[4], sum = 0.0;
            for (double& x : v) {
                x = unit(rng);
                sum += x;
            }
            for (int c = 0; c < 4; ++c) pred[c][i] = v[c] / sum;
            target[i] = static_cast<int>(rng() % 4);
            ref -= std::log(v[target[i]] / sum);
        }
        CHECK(seg_cross_entropy(pred, target) ==
              doctest::Approx(ref / n).epsilon(1e-12));
    }
    SUBCASE("validation errors") {
        std::vector<FeaturePlane> bad{FeaturePlane(2, 2, 0.7), FeaturePlane(2, 2, 0.7)};
        CHECK_THROWS_AS(seg_cross_entropy(bad, std::vector<int>(4, 0)),
                        std::invalid_argument);
        std::vector<FeaturePlane> neg{FeaturePlane(2, 2, 1.2), FeaturePlane(2, 2, -0.2)};
        CHECK_THROWS_AS(seg_cross_entropy(neg, std::vector<int>(4, 0)),
                        std::invalid_argument);
        std::vector<FeaturePlane> one{FeaturePlane(2, 2, 1.0)};
        CHECK_THROWS_AS(seg_cross_entropy(one, std::vector<int>(4, 0)),
                        std::invalid_argument);
        std::vector<FeaturePlane> ok{FeaturePlane(2, 2, 1.0), FeaturePlane(2, 2, 0.0)};
        CHECK_THROWS_AS(seg_cross_entropy(ok, std::vector<int>(4, 1)),
                        std::invalid_argument);  // zero target-class probability
        CHECK_THROWS_AS(seg_cross_entropy(ok, std::vector<int>(4, 5)),
                        std::invalid_argument);
    }
}

TEST_CASE("diffusion_loss") {
    FeaturePlane a(4, 4, 0.3);
    CHECK(diffusion_loss(a, a) == 0.0);
    FeaturePlane b(4, 4, 0.55);
    CHECK(diffusion_loss(a, b) == doctest::Approx(0.25).epsilon(1e-12));
    SUBCASE("random pair matches the mean absolute difference") {
        std::mt19937_64 rng(19);
        std::normal_distribution<double> normal(0.0, 1.0);
        FeaturePlane x(8, 8), y(8, 8);
        double ref = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = normal(rng);
            y[i] = normal(rng);
            ref += std::abs(x[i] - y[i]);
        }
        CHECK(diffusion_loss(x, y) == doctest::Approx(ref / 64.0).epsilon(1e-12));
        CHECK(diffusion_loss(x, y, NormMode::Raw) ==
              doctest::Approx(ref).epsilon(1e-12));
    }
    CHECK_THROWS_AS(diffusion_loss(a, FeaturePlane(2, 2)), std::invalid_argument);
}

TEST_CASE("dominance_classify") {
    testdata::MiniPair pair = testdata::mini_pair(0);
    ImagePlane viY = rgb_to_ycbcr(pair.visible).y;
    BinaryMask oe(64, 64);
    for (int y = 8; y < 24; ++y)
        for (int x = 8; x < 24; ++x) oe.set(x, y, true);
    const double tau = 0.05;
    SUBCASE("f = vi is intensity dominated") {
        CHECK(dominance_classify(viY, viY, pair.infrared, oe, tau) ==
              DominanceLabel::IntensityDominated);
    }
    SUBCASE("flat f far from ir with flat vi is texture dominated") {
        ImagePlane f(64, 64, 0.9), viFlat(64, 64, 0.2), irDark(64, 64, 0.1);
        CHECK(dominance_classify(f, viFlat, irDark, oe, tau) ==
              DominanceLabel::TextureDominated);
    }
    SUBCASE("infrared content inside the mask is neither failure mode") {
        ImagePlane f = viY;
        for (int y = 0; y < 64; ++y)
            for (int x = 0; x < 64; ++x)
                if (oe.at(x, y)) f.set(x, y, pair.infrared.at(x, y));
        CHECK(dominance_classify(f, viY, pair.infrared, oe, tau) ==
              DominanceLabel::Neither);
    }
    SUBCASE("label ignores content outside the mask") {
        ImagePlane f(64, 64, 0.9), viFlat(64, 64, 0.2), irDark(64, 64, 0.1);
        DominanceLabel before = dominance_classify(f, viFlat, irDark, oe, tau);
        ImagePlane f2 = f, vi2 = viFlat, ir2 = irDark;
        // Dilate the untouched zone by the Sobel support: perturb only pixels
        // at least 2 away from the mask.
        for (int y = 0; y < 64; ++y)
            for (int x = 0; x < 64; ++x) {
                bool nearMask = false;
                for (int dy = -2; dy <= 2 && !nearMask; ++dy)
                    for (int dx = -2; dx <= 2 && !nearMask; ++dx) {
                        int nx = x + dx, ny = y + dy;
                        if (nx >= 0 && nx < 64 && ny >= 0 && ny < 64 && oe.at(nx, ny))
                            nearMask = true;
                    }
                if (!nearMask) {
                    f2.set(x, y, 1.0 - f.at(x, y));
                    vi2.set(x, y, 0.77);
                    ir2.set(x, y, 0.33);
                }
            }
        CHECK(dominance_classify(f2, vi2, ir2, oe, tau) == before);
    }
    SUBCASE("empty mask rejected") {
        CHECK_THROWS_AS(
            dominance_classify(viY, viY, pair.infrared, BinaryMask(64, 64), tau),
            std::invalid_argument);
    }
}

TEST_CASE("compute_losses composition identities on random draws") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        ImagePlane f = testdata::random_plane(8, 8, 2000 + trial);
        ImagePlane vi = testdata::random_plane(8, 8, 3000 + trial);
        ImagePlane ir = testdata::random_plane(8, 8, 4000 + trial);
        ImagePlane pseudo = pseudo_fuse(vi, ir);
        BinaryMask oe = testdata::random_mask(8, 8, 5000 + trial);
        LossWeights w;
        w.zeta = unit(rng) * 3.0;
        w.phi = unit(rng) * 3.0;
        w.delta = unit(rng) * 3.0;
        w.gamma = unit(rng) * 3.0;
        double seg = unit(rng), diff = unit(rng);
        LossBreakdown b = compute_losses(f, vi, ir, pseudo, oe, w, seg, diff);
        CHECK(b.fusion ==
              doctest::Approx(w.delta * (b.in_normal + b.in_mask) + b.grad_normal +
                              b.grad_mask)
                  .epsilon(1e-9));
        CHECK(b.total == doctest::Approx(w.zeta * b.fusion + w.phi * b.seg + b.diff)
                             .epsilon(1e-9));
        CHECK(b.in_normal >= 0.0);
        CHECK(b.in_mask >= 0.0);
        CHECK(b.grad_normal >= 0.0);
        CHECK(b.grad_mask >= 0.0);
    }
}
