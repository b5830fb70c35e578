#ifndef EPO_PIPELINE_HPP
#define EPO_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "epo/io.hpp"
#include "epo/losses.hpp"
#include "epo/metrics.hpp"
#include "epo/schedule.hpp"
#include "epo/synthesis.hpp"

namespace epo {

// Batch workflows behind the CLI subcommands. Each run_* call is
// deterministic for fixed inputs and seed, and throws with the failing entry
// id in the message on the first error.

struct SynthOptions {
    std::filesystem::path manifest;
    std::filesystem::path out_dir;
    SynthesisConfig config;
    double threshold = kDefaultOverexposureThreshold;
};

// Per entry writes: overexposed visible, pass-through infrared, detected OE
// mask, contour JSON, and the contour overlay on infrared.
void run_synth(const SynthOptions& opt);

enum class FuseMethod { Pseudo, Max, ExposureAware };

struct FuseOptions {
    std::filesystem::path visible;
    std::filesystem::path infrared;
    std::filesystem::path mask;  // empty: derive by thresholding the visible luma
    FuseMethod method = FuseMethod::Max;
    double feather = 2.0;
    double threshold = kDefaultOverexposureThreshold;
    std::filesystem::path out_rgb;
    std::filesystem::path out_y;
};

void run_fuse(const FuseOptions& opt);

struct EvalOptions {
    std::filesystem::path manifest;
    std::filesystem::path fused_dir;  // expects <id>_fused_y.png per entry
    std::filesystem::path out_report;
    ReportFormat format = ReportFormat::Csv;
    MetricParams params;
};

std::vector<ReportRow> run_eval(const EvalOptions& opt);

struct LossOptions {
    std::filesystem::path visible;
    std::filesystem::path infrared;
    std::filesystem::path fused;
    std::filesystem::path mask;
    LossWeights weights;
    NormMode norm = NormMode::MeanPerPixel;
    std::filesystem::path out_json;  // empty: stdout only
};

struct LossResult {
    LossBreakdown breakdown;
    DominanceLabel label = DominanceLabel::Neither;
};

LossResult run_loss(const LossOptions& opt);

struct ScheduleCheckOptions {
    int training_steps = 1000;
    ScheduleKind kind = ScheduleKind::Linear;
    int sample_steps = 3;
    std::uint64_t seed = 0;
};

struct ScheduleCheckResult {
    std::vector<std::pair<int, int>> steps;
    std::vector<StepCoeffs> coeffs;
    double recovery_error = 0.0;       // closed loop with an oracle denoiser
    double inversion_error = 0.0;      // add_noise / noise-estimate round trip
    double variance_violation = 0.0;   // max |alpha^2 + beta^2 - 1|
    bool pass = false;
};

ScheduleCheckResult run_schedule_check(const ScheduleCheckOptions& opt);

const char* to_string(DominanceLabel label);

}  // namespace epo

#endif
