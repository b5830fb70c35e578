#include "epo/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "epo/fusion.hpp"
#include "epo/maskgen.hpp"

namespace epo {

namespace {

using nlohmann::json;

std::filesystem::path resolveRelative(const std::filesystem::path& base,
                                      const std::string& p) {
    std::filesystem::path path(p);
    if (path.is_absolute()) return path;
    return base.parent_path() / path;
}

void writeContoursJson(const std::filesystem::path& path,
                       const std::vector<Contour>& contours) {
    json doc = json::array();
    for (const Contour& c : contours) {
        json jc = json::array();
        for (auto [x, y] : c.vertices) jc.push_back(json::array({x, y}));
        doc.push_back(jc);
    }
    std::ofstream out(path);
    if (!out) throw IoError(IoError::Kind::WriteFailure, "cannot write " + path.string());
    out << doc.dump() << "\n";
}

LabeledMask objectsFromLabelImage(const std::filesystem::path& path, int width,
                                  int height) {
    if (path.empty()) {
        LabeledMask empty;
        empty.width = width;
        empty.height = height;
        empty.labels.assign(static_cast<std::size_t>(width) * height, 0);
        return empty;
    }
    ImagePlane plane = read_plane(path);
    BinaryMask fg(plane.width(), plane.height());
    for (std::size_t i = 0; i < plane.size(); ++i) fg.set(i, plane[i] > 0.0);
    return connected_components(fg);
}

}  // namespace

void run_synth(const SynthOptions& opt) {
    opt.config.validate();
    DatasetManifest manifest = load_manifest(opt.manifest);
    std::filesystem::create_directories(opt.out_dir);
    for (const ManifestEntry& entry : manifest.entries) {
        try {
            RgbImage vi = read_rgb(resolveRelative(opt.manifest, entry.visible_path));
            ImagePlane ir = read_plane(resolveRelative(opt.manifest, entry.infrared_path));
            LabeledMask objects = objectsFromLabelImage(
                entry.label_path.empty()
                    ? std::filesystem::path()
                    : resolveRelative(opt.manifest, entry.label_path),
                vi.width(), vi.height());

            Rng rng(derive_seed(opt.config.seed, entry.id));
            std::vector<ExposureSpec> specs = sample_specs(objects, opt.config, rng);
            auto [viOe, irOut] = synthesize_pair(vi, ir, specs);

            ImagePlane luma = rgb_to_ycbcr(viOe).y;
            BinaryMask oe = detect_overexposed(luma, opt.threshold);
            std::vector<Contour> contours = trace_contours(oe);

            const std::filesystem::path base = opt.out_dir / entry.id;
            write_image(base.string() + "_vi_oe.png", viOe);
            write_image(base.string() + "_ir.png", irOut);
            write_mask(base.string() + "_oe_mask.png", oe);
            writeContoursJson(base.string() + "_contours.json", contours);
            write_image(base.string() + "_ir_overlay.png",
                        overlay_contours(irOut, contours));
        } catch (const std::exception& e) {
            throw std::runtime_error("synth failed for entry \"" + entry.id +
                                     "\": " + e.what());
        }
    }
}

void run_fuse(const FuseOptions& opt) {
    RgbImage viRgb = read_rgb(opt.visible);
    ImagePlane ir = read_plane(opt.infrared);
    ImagePlane viY = rgb_to_ycbcr(viRgb).y;

    ImagePlane fused;
    switch (opt.method) {
        case FuseMethod::Pseudo:
            fused = pseudo_fuse(viY, ir);
            break;
        case FuseMethod::Max:
            fused = max_fuse(viY, ir);
            break;
        case FuseMethod::ExposureAware: {
            BinaryMask oe = opt.mask.empty()
                                ? detect_overexposed(viY, opt.threshold)
                                : read_mask(opt.mask);
            fused = exposure_aware_fuse(viY, ir, oe, opt.feather);
            break;
        }
    }
    if (!opt.out_y.empty()) write_image(opt.out_y, fused);
    if (!opt.out_rgb.empty()) write_image(opt.out_rgb, assemble_color(fused, viRgb));
}

std::vector<ReportRow> run_eval(const EvalOptions& opt) {
    DatasetManifest manifest = load_manifest(opt.manifest);
    std::vector<ReportRow> rows;
    for (const ManifestEntry& entry : manifest.entries) {
        try {
            ImagePlane vi = read_plane(resolveRelative(opt.manifest, entry.visible_path));
            ImagePlane ir = read_plane(resolveRelative(opt.manifest, entry.infrared_path));
            ImagePlane fused = read_plane(opt.fused_dir / (entry.id + "_fused_y.png"));
            MetricReport r = evaluate_all(vi, ir, fused, opt.params);
            rows.push_back({entry.id,
                            {{"EN", r.en},
                             {"MI", r.mi},
                             {"VIF", r.vif},
                             {"Qabf", r.qabf},
                             {"SSIM", r.ssim}}});
        } catch (const std::exception& e) {
            throw std::runtime_error("eval failed for entry \"" + entry.id +
                                     "\": " + e.what());
        }
    }
    if (!opt.out_report.empty()) write_report(opt.out_report, rows, opt.format);
    return rows;
}

LossResult run_loss(const LossOptions& opt) {
    ImagePlane vi = read_plane(opt.visible);
    ImagePlane ir = read_plane(opt.infrared);
    ImagePlane fused = read_plane(opt.fused);
    BinaryMask oe = read_mask(opt.mask);
    ImagePlane pseudo = pseudo_fuse(vi, ir);

    LossResult result;
    result.breakdown =
        compute_losses(fused, vi, ir, pseudo, oe, opt.weights, 0.0, 0.0, opt.norm);
    result.label = oe.count() > 0
                       ? dominance_classify(fused, vi, ir, oe, opt.weights.tau)
                       : DominanceLabel::Neither;

    if (!opt.out_json.empty()) {
        const LossBreakdown& b = result.breakdown;
        json doc{{"in_normal", b.in_normal},
                 {"in_mask", b.in_mask},
                 {"grad_normal", b.grad_normal},
                 {"grad_mask", b.grad_mask},
                 {"fusion", b.fusion},
                 {"seg", b.seg},
                 {"diff", b.diff},
                 {"total", b.total},
                 {"dominance", to_string(result.label)},
                 {"weights",
                  {{"zeta", opt.weights.zeta},
                   {"phi", opt.weights.phi},
                   {"delta", opt.weights.delta},
                   {"gamma", opt.weights.gamma},
                   {"tau", opt.weights.tau}}}};
        std::ofstream out(opt.out_json);
        if (!out)
            throw IoError(IoError::Kind::WriteFailure,
                          "cannot write " + opt.out_json.string());
        out << doc.dump(2) << "\n";
    }
    return result;
}

ScheduleCheckResult run_schedule_check(const ScheduleCheckOptions& opt) {
    NoiseSchedule sched = make_schedule(opt.training_steps, opt.kind);
    ScheduleCheckResult result;
    result.steps = make_step_list(sched, opt.sample_steps);
    for (auto [tNow, tNext] : result.steps) {
        StepCoeffs c = cal(tNow, tNext, sched);
        result.variance_violation = std::max(
            result.variance_violation,
            std::max(std::abs(c.alpha_now * c.alpha_now + c.beta_now * c.beta_now - 1.0),
                     std::abs(c.alpha_next * c.alpha_next + c.beta_next * c.beta_next -
                              1.0)));
        result.coeffs.push_back(c);
    }

    // Closed loop: a denoiser that already knows the clean plane must be a
    // fixed point of the sampler.
    const int n = 16;
    ImagePlane clean(n, n);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x)
            clean.set(x, y, 0.5 + 0.5 * std::sin(0.7 * x) * std::cos(0.9 * y));
    DenoiserFn oracle = [&](const FeaturePlane&, const ImagePlane&, int) {
        return clean;
    };
    ImagePlane recovered =
        sample_loop(clean, oracle, result.steps, sched, opt.seed);
    for (std::size_t i = 0; i < clean.size(); ++i)
        result.recovery_error =
            std::max(result.recovery_error, std::abs(recovered[i] - clean[i]));

    // Noising round trip at every sampled t.
    FeaturePlane eps = gaussian_noise(n, n, opt.seed + 1);
    for (auto [tNow, tNext] : result.steps) {
        StepCoeffs c = cal(tNow, tNext, sched);
        FeaturePlane noised = add_noise(clean, eps, c);
        for (std::size_t i = 0; i < noised.size(); ++i) {
            double predNoise = (noised[i] - c.alpha_now * clean[i]) / c.beta_now;
            result.inversion_error =
                std::max(result.inversion_error, std::abs(predNoise - eps[i]));
        }
    }

    result.pass = result.recovery_error <= 1e-6 && result.inversion_error <= 1e-9 &&
                  result.variance_violation <= 1e-12;
    return result;
}

const char* to_string(DominanceLabel label) {
    switch (label) {
        case DominanceLabel::IntensityDominated:
            return "IntensityDominated";
        case DominanceLabel::TextureDominated:
            return "TextureDominated";
        default:
            return "Neither";
    }
}

}  // namespace epo
