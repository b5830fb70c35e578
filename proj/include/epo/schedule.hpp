#ifndef EPO_SCHEDULE_HPP
#define EPO_SCHEDULE_HPP

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "epo/image.hpp"

namespace epo {

enum class ScheduleKind { Linear, Cosine };

// Cumulative signal levels alpha_bar_t in (0,1], strictly decreasing in t.
struct NoiseSchedule {
    int training_steps = 0;
    ScheduleKind kind = ScheduleKind::Linear;
    std::vector<double> alpha_bar;
};

// Variance-preserving pair for the current and next sampling step:
// alpha = sqrt(alpha_bar), beta = sqrt(1 - alpha_bar).
struct StepCoeffs {
    double alpha_now = 1.0;
    double beta_now = 0.0;
    double alpha_next = 1.0;
    double beta_next = 0.0;
};

// Caller-supplied denoiser: (noisy feature, condition, step index) -> clean
// prediction of identical dimensions with values in [0,1].
using DenoiserFn =
    std::function<ImagePlane(const FeaturePlane& noisy, const ImagePlane& condition,
                             int step)>;

inline constexpr int kFinalStepSentinel = -1;

// Linear: per-step variances linearly spaced in [1e-4, 0.02].
// Cosine: squared-cosine alpha_bar with the usual 0.008 offset.
NoiseSchedule make_schedule(int training_steps, ScheduleKind kind);

// t_next may be kFinalStepSentinel, which yields (alpha, beta) = (1, 0).
StepCoeffs cal(int t_now, int t_next, const NoiseSchedule& sched);

// alpha_now * clean + beta_now * eps, unclamped.
FeaturePlane add_noise(const ImagePlane& clean, const FeaturePlane& eps,
                       const StepCoeffs& coeffs);

// One sampling update: estimate the noise from the current decoded
// prediction, then re-inject it at the next level. The noise estimate
// (noisy - alpha_now * decoded) / beta_now inverts add_noise exactly; the
// update keeps the estimate under alpha_next and the decoded plane under
// beta_next.
FeaturePlane ddim_step(const FeaturePlane& noisy, const ImagePlane& decoded,
                       const StepCoeffs& coeffs);

// Full loop: start from seeded standard normal noise, run denoiser +
// ddim_step over the given (t_now, t_next) list, return the final decoded
// plane clamped to [0,1]. Deterministic given the seed.
ImagePlane sample_loop(const ImagePlane& condition, const DenoiserFn& denoiser,
                       const std::vector<std::pair<int, int>>& steps,
                       const NoiseSchedule& sched, std::uint64_t seed);

// Evenly spaced sampling step list (t_now, t_next) ending at the sentinel,
// e.g. count=3 on T=1000 gives (999,666),(666,333),(333,-1).
std::vector<std::pair<int, int>> make_step_list(const NoiseSchedule& sched,
                                                int count);

// Deterministic standard normal plane for noise injection.
FeaturePlane gaussian_noise(int width, int height, std::uint64_t seed);

}  // namespace epo

#endif
