// epofuse: batch front end for overexposure synthesis, masking, fusion,
// evaluation, loss auditing and sampling-schedule checks.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "epo/fusion.hpp"
#include "epo/maskgen.hpp"
#include "epo/pipeline.hpp"

namespace {

using nlohmann::json;

// Single JSON config document with one section per subcommand; explicit
// command-line flags win over config values.
json loadConfig(int argc, char** argv) {
    std::string path;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") path = argv[i + 1];
    if (path.empty())
        if (const char* env = std::getenv("EPOFUSE_CONFIG")) path = env;
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json doc;
    in >> doc;
    return doc;
}

template <typename T>
void fromConfig(const json& cfg, const char* section, const char* key, T& out) {
    if (cfg.contains(section) && cfg[section].contains(key))
        out = cfg[section][key].get<T>();
}

int runMask(const std::string& imagePath, double threshold,
            const std::string& outMask, const std::string& outContours) {
    epo::ImagePlane luma = epo::read_plane(imagePath);
    epo::BinaryMask mask = epo::detect_overexposed(luma, threshold);
    std::vector<epo::Contour> contours = epo::trace_contours(mask);
    if (!outMask.empty()) epo::write_mask(outMask, mask);
    if (!outContours.empty()) {
        json doc = json::array();
        for (const epo::Contour& c : contours) {
            json jc = json::array();
            for (auto [x, y] : c.vertices) jc.push_back(json::array({x, y}));
            doc.push_back(jc);
        }
        std::ofstream out(outContours);
        out << doc.dump() << "\n";
    }
    std::printf("mask: %zu overexposed pixels, %zu contours\n", mask.count(),
                contours.size());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exposure-aware infrared/visible fusion toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string configPath;
    app.add_option("--config", configPath, "JSON config file (flags override)");

    json cfg;
    try {
        cfg = loadConfig(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    // synth
    epo::SynthOptions synth;
    std::string synthManifest, synthOut;
    fromConfig(cfg, "synth", "spots_min", synth.config.spots_min);
    fromConfig(cfg, "synth", "spots_max", synth.config.spots_max);
    fromConfig(cfg, "synth", "sigma_min", synth.config.sigma_min);
    fromConfig(cfg, "synth", "sigma_max", synth.config.sigma_max);
    fromConfig(cfg, "synth", "gain_min", synth.config.gain_min);
    fromConfig(cfg, "synth", "gain_max", synth.config.gain_max);
    fromConfig(cfg, "synth", "white_probability", synth.config.white_probability);
    fromConfig(cfg, "synth", "seed", synth.config.seed);
    fromConfig(cfg, "synth", "threshold", synth.threshold);
    CLI::App* synthCmd = app.add_subcommand("synth", "Synthesize overexposed pairs");
    synthCmd->add_option("manifest", synthManifest, "dataset manifest JSON")->required();
    synthCmd->add_option("--out", synthOut, "output directory")->required();
    synthCmd->add_option("--seed", synth.config.seed, "RNG seed");
    synthCmd->add_option("--spots-min", synth.config.spots_min);
    synthCmd->add_option("--spots-max", synth.config.spots_max);
    synthCmd->add_option("--sigma-min", synth.config.sigma_min);
    synthCmd->add_option("--sigma-max", synth.config.sigma_max);
    synthCmd->add_option("--gain-min", synth.config.gain_min);
    synthCmd->add_option("--gain-max", synth.config.gain_max);
    synthCmd->add_option("--white-probability", synth.config.white_probability);
    synthCmd->add_option("--threshold", synth.threshold, "overexposure threshold");

    // mask
    std::string maskImage, maskOut, maskContoursOut;
    double maskThreshold = epo::kDefaultOverexposureThreshold;
    fromConfig(cfg, "mask", "threshold", maskThreshold);
    CLI::App* maskCmd = app.add_subcommand("mask", "Detect overexposed regions");
    maskCmd->add_option("image", maskImage, "input image")->required();
    maskCmd->add_option("--threshold", maskThreshold);
    maskCmd->add_option("--out-mask", maskOut, "mask PNG output");
    maskCmd->add_option("--out-contours", maskContoursOut, "contour JSON output");

    // fuse
    epo::FuseOptions fuse;
    std::string fuseMethod = "max";
    std::string fuseVi, fuseIr, fuseMask, fuseOutRgb, fuseOutY;
    fromConfig(cfg, "fuse", "feather", fuse.feather);
    fromConfig(cfg, "fuse", "threshold", fuse.threshold);
    fromConfig(cfg, "fuse", "method", fuseMethod);
    CLI::App* fuseCmd = app.add_subcommand("fuse", "Fuse a visible/infrared pair");
    fuseCmd->add_option("visible", fuseVi)->required();
    fuseCmd->add_option("infrared", fuseIr)->required();
    fuseCmd->add_option("--method", fuseMethod, "pseudo|max|exposure-aware");
    fuseCmd->add_option("--mask", fuseMask, "overexposure mask (exposure-aware)");
    fuseCmd->add_option("--feather", fuse.feather, "mask feather radius, pixels");
    fuseCmd->add_option("--threshold", fuse.threshold);
    fuseCmd->add_option("--out-rgb", fuseOutRgb, "fused RGB output");
    fuseCmd->add_option("--out-y", fuseOutY, "fused Y-channel output");

    // eval
    epo::EvalOptions eval;
    std::string evalManifest, evalFusedDir, evalOut, evalFormat = "csv";
    std::string vifAgg = "mean";
    fromConfig(cfg, "eval", "format", evalFormat);
    fromConfig(cfg, "eval", "vif_aggregation", vifAgg);
    CLI::App* evalCmd = app.add_subcommand("eval", "Five-metric fusion evaluation");
    evalCmd->add_option("manifest", evalManifest)->required();
    evalCmd->add_option("fused_dir", evalFusedDir)->required();
    evalCmd->add_option("--out", evalOut, "report path")->required();
    evalCmd->add_option("--format", evalFormat, "csv|json");
    evalCmd->add_option("--vif-aggregation", vifAgg, "mean|sum");

    // loss
    epo::LossOptions loss;
    std::string lossVi, lossIr, lossFused, lossMask, lossOut;
    fromConfig(cfg, "loss", "zeta", loss.weights.zeta);
    fromConfig(cfg, "loss", "phi", loss.weights.phi);
    fromConfig(cfg, "loss", "delta", loss.weights.delta);
    fromConfig(cfg, "loss", "gamma", loss.weights.gamma);
    fromConfig(cfg, "loss", "tau", loss.weights.tau);
    CLI::App* lossCmd = app.add_subcommand("loss", "Loss breakdown and dominance label");
    lossCmd->add_option("visible", lossVi)->required();
    lossCmd->add_option("infrared", lossIr)->required();
    lossCmd->add_option("fused", lossFused)->required();
    lossCmd->add_option("mask", lossMask)->required();
    lossCmd->add_option("--zeta", loss.weights.zeta);
    lossCmd->add_option("--phi", loss.weights.phi);
    lossCmd->add_option("--delta", loss.weights.delta);
    lossCmd->add_option("--gamma", loss.weights.gamma);
    lossCmd->add_option("--tau", loss.weights.tau);
    lossCmd->add_option("--out", lossOut, "JSON output path");

    // schedule-check
    epo::ScheduleCheckOptions sc;
    std::string scKind = "linear";
    fromConfig(cfg, "schedule", "T", sc.training_steps);
    fromConfig(cfg, "schedule", "kind", scKind);
    fromConfig(cfg, "schedule", "steps", sc.sample_steps);
    CLI::App* scCmd = app.add_subcommand("schedule-check",
                                         "Print sampling coefficients and run the "
                                         "closed-loop recovery check");
    scCmd->add_option("--T", sc.training_steps, "training step count");
    scCmd->add_option("--kind", scKind, "linear|cosine");
    scCmd->add_option("--steps", sc.sample_steps, "sampling step count");
    scCmd->add_option("--seed", sc.seed);

    CLI11_PARSE(app, argc, argv);

    try {
        if (synthCmd->parsed()) {
            synth.manifest = synthManifest;
            synth.out_dir = synthOut;
            epo::run_synth(synth);
            std::printf("synth: wrote outputs for manifest %s to %s\n",
                        synthManifest.c_str(), synthOut.c_str());
        } else if (maskCmd->parsed()) {
            return runMask(maskImage, maskThreshold, maskOut, maskContoursOut);
        } else if (fuseCmd->parsed()) {
            if (fuseMethod == "pseudo")
                fuse.method = epo::FuseMethod::Pseudo;
            else if (fuseMethod == "max")
                fuse.method = epo::FuseMethod::Max;
            else if (fuseMethod == "exposure-aware")
                fuse.method = epo::FuseMethod::ExposureAware;
            else
                throw std::runtime_error("unknown fuse method: " + fuseMethod);
            fuse.visible = fuseVi;
            fuse.infrared = fuseIr;
            fuse.mask = fuseMask;
            fuse.out_rgb = fuseOutRgb;
            fuse.out_y = fuseOutY;
            epo::run_fuse(fuse);
        } else if (evalCmd->parsed()) {
            eval.manifest = evalManifest;
            eval.fused_dir = evalFusedDir;
            eval.out_report = evalOut;
            eval.format = evalFormat == "json" ? epo::ReportFormat::Json
                                               : epo::ReportFormat::Csv;
            eval.params.vif_aggregation = vifAgg == "sum"
                                              ? epo::VifAggregation::Sum
                                              : epo::VifAggregation::Mean;
            std::vector<epo::ReportRow> rows = epo::run_eval(eval);
            std::printf("eval: %zu rows written to %s\n", rows.size(), evalOut.c_str());
        } else if (lossCmd->parsed()) {
            loss.visible = lossVi;
            loss.infrared = lossIr;
            loss.fused = lossFused;
            loss.mask = lossMask;
            loss.out_json = lossOut;
            epo::LossResult r = epo::run_loss(loss);
            std::printf(
                "loss: in_normal=%.6g in_mask=%.6g grad_normal=%.6g grad_mask=%.6g "
                "fusion=%.6g total=%.6g dominance=%s\n",
                r.breakdown.in_normal, r.breakdown.in_mask, r.breakdown.grad_normal,
                r.breakdown.grad_mask, r.breakdown.fusion, r.breakdown.total,
                epo::to_string(r.label));
        } else if (scCmd->parsed()) {
            sc.kind = scKind == "cosine" ? epo::ScheduleKind::Cosine
                                         : epo::ScheduleKind::Linear;
            epo::ScheduleCheckResult r = epo::run_schedule_check(sc);
            std::printf("%8s %8s %12s %12s %12s %12s\n", "t_now", "t_next", "alpha_now",
                        "beta_now", "alpha_next", "beta_next");
            for (std::size_t i = 0; i < r.steps.size(); ++i)
                std::printf("%8d %8d %12.8f %12.8f %12.8f %12.8f\n", r.steps[i].first,
                            r.steps[i].second, r.coeffs[i].alpha_now,
                            r.coeffs[i].beta_now, r.coeffs[i].alpha_next,
                            r.coeffs[i].beta_next);
            std::printf("recovery error: %.3g  inversion error: %.3g  "
                        "variance violation: %.3g\n",
                        r.recovery_error, r.inversion_error, r.variance_violation);
            std::printf("%s recovery <= 1e-6\n", r.pass ? "PASS" : "FAIL");
            return r.pass ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
