#include "epo/schedule.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace epo {

NoiseSchedule make_schedule(int training_steps, ScheduleKind kind) {
    if (training_steps < 1)
        throw std::invalid_argument("make_schedule: need at least one step");
    NoiseSchedule sched;
    sched.training_steps = training_steps;
    sched.kind = kind;
    sched.alpha_bar.resize(training_steps);
    if (kind == ScheduleKind::Linear) {
        double prod = 1.0;
        for (int t = 0; t < training_steps; ++t) {
            double variance =
                training_steps == 1
                    ? 1e-4
                    : 1e-4 + (0.02 - 1e-4) * t / (training_steps - 1.0);
            prod *= 1.0 - variance;
            sched.alpha_bar[t] = prod;
        }
    } else {
        const double s = 0.008;
        auto f = [&](double t) {
            double v = std::cos((t / training_steps + s) / (1.0 + s) * M_PI / 2.0);
            return v * v;
        };
        const double f0 = f(0.0);
        for (int t = 0; t < training_steps; ++t)
            sched.alpha_bar[t] = std::min(1.0, std::max(1e-8, f(t + 1.0) / f0));
    }
    return sched;
}

StepCoeffs cal(int t_now, int t_next, const NoiseSchedule& sched) {
    if (t_now < 0 || t_now >= sched.training_steps)
        throw std::invalid_argument("cal: t_now out of range");
    if (t_next != kFinalStepSentinel && (t_next < 0 || t_next >= t_now))
        throw std::invalid_argument("cal: need t_next < t_now or the sentinel");
    StepCoeffs c;
    c.alpha_now = std::sqrt(sched.alpha_bar[t_now]);
    c.beta_now = std::sqrt(1.0 - sched.alpha_bar[t_now]);
    if (t_next == kFinalStepSentinel) {
        c.alpha_next = 1.0;
        c.beta_next = 0.0;
    } else {
        c.alpha_next = std::sqrt(sched.alpha_bar[t_next]);
        c.beta_next = std::sqrt(1.0 - sched.alpha_bar[t_next]);
    }
    return c;
}

FeaturePlane add_noise(const ImagePlane& clean, const FeaturePlane& eps,
                       const StepCoeffs& coeffs) {
    if (clean.width() != eps.width() || clean.height() != eps.height())
        throw std::invalid_argument("add_noise: dimension mismatch");
    FeaturePlane out(clean.width(), clean.height());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = coeffs.alpha_now * clean[i] + coeffs.beta_now * eps[i];
    return out;
}

FeaturePlane ddim_step(const FeaturePlane& noisy, const ImagePlane& decoded,
                       const StepCoeffs& coeffs) {
    if (noisy.width() != decoded.width() || noisy.height() != decoded.height())
        throw std::invalid_argument("ddim_step: dimension mismatch");
    if (coeffs.alpha_now <= 0.0 || coeffs.beta_now <= 0.0)
        throw std::domain_error("ddim_step: singular step coefficients");
    FeaturePlane out(noisy.width(), noisy.height());
    for (std::size_t i = 0; i < out.size(); ++i) {
        double pred_noise = (noisy[i] - coeffs.alpha_now * decoded[i]) / coeffs.beta_now;
        out[i] = coeffs.alpha_next * pred_noise + coeffs.beta_next * decoded[i];
    }
    return out;
}

FeaturePlane gaussian_noise(int width, int height, std::uint64_t seed) {
    FeaturePlane out(width, height);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = normal(rng);
    return out;
}

ImagePlane sample_loop(const ImagePlane& condition, const DenoiserFn& denoiser,
                       const std::vector<std::pair<int, int>>& steps,
                       const NoiseSchedule& sched, std::uint64_t seed) {
    if (steps.empty())
        throw std::invalid_argument("sample_loop: empty step list");
    if (steps.back().second != kFinalStepSentinel)
        throw std::invalid_argument("sample_loop: last step must end at the sentinel");
    for (std::size_t i = 1; i < steps.size(); ++i)
        if (steps[i].first != steps[i - 1].second)
            throw std::invalid_argument("sample_loop: step list is not a chain");

    FeaturePlane mask = gaussian_noise(condition.width(), condition.height(), seed);
    ImagePlane decoded;
    for (auto [t_now, t_next] : steps) {
        decoded = denoiser(mask, condition, t_now);
        if (decoded.width() != condition.width() ||
            decoded.height() != condition.height())
            throw std::runtime_error("sample_loop: denoiser violated dimension contract");
        mask = ddim_step(mask, decoded, cal(t_now, t_next, sched));
    }
    return decoded;  // already clamped: ImagePlane storage is [0,1]
}

std::vector<std::pair<int, int>> make_step_list(const NoiseSchedule& sched,
                                                int count) {
    if (count < 1) throw std::invalid_argument("make_step_list: count must be >= 1");
    if (count > sched.training_steps)
        throw std::invalid_argument("make_step_list: more steps than the schedule has");
    std::vector<int> ts(count);
    for (int i = 0; i < count; ++i) {
        // Evenly spaced from T-1 down toward 0.
        ts[i] = static_cast<int>(
            std::llround((sched.training_steps - 1) *
                         (1.0 - static_cast<double>(i) / count)));
    }
    std::vector<std::pair<int, int>> steps;
    for (int i = 0; i < count; ++i) {
        int next = (i + 1 < count) ? ts[i + 1] : kFinalStepSentinel;
        if (next != kFinalStepSentinel && next >= ts[i]) next = ts[i] - 1;
        steps.push_back({ts[i], next});
    }
    return steps;
}

}  // namespace epo
