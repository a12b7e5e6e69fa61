#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "flamefront/error.hpp"
#include "flamefront/record.hpp"

namespace flamefront {

ExtinctionEstimate estimate_extinction(std::span<const SeriesSample> series, double threshold,
                                       std::optional<double> fit_floor);

namespace detail {

template <class Field>
double min_value(const Field& f) {
    const auto v = f.values();
    return v.empty() ? 0.0 : *std::min_element(v.begin(), v.end());
}

/// Accumulates a BasicRunRecord while a caller advances the field. The caller
/// asks done() before each step and reports every new state to after_step().
template <class Field>
class Recorder {
public:
    Recorder(const SolverParams& params, double dt) : params_(params), requests_(params.record_times) {
        if (!(params.series_stride >= 1)) throw ConfigError("series_stride must be at least 1");
        if (params.max_steps < 0) throw ConfigError("max_steps must be nonnegative");
        rec_.threshold = params.threshold();
        if (!(rec_.threshold > 0.0)) throw ConfigError("extinction_threshold must be positive");
        rec_.dt = dt;
        std::sort(requests_.begin(), requests_.end());
    }

    template <class Observer>
    void begin(const Field& field, Observer&& observe) {
        t0_ = field.time();
        max_ = field.max_value();
        rec_.min_value = min_value(field);
        sample(field, observe);
        capture(field);
        if (max_ < rec_.threshold) finish();
    }

    bool done() const { return finished_; }
    long steps() const { return rec_.steps_taken; }

    /// Time of the next state given the step count.
    double next_time() const { return t0_ + static_cast<double>(rec_.steps_taken + 1) * rec_.dt; }

    template <class Observer>
    void after_step(const Field& field, Observer&& observe) {
        ++rec_.steps_taken;
        const double new_max = field.max_value();
        rec_.max_increase = std::max(rec_.max_increase, new_max - max_);
        rec_.min_value = std::min(rec_.min_value, min_value(field));
        max_ = new_max;
        const bool extinct = max_ < rec_.threshold;
        const bool out_of_steps = rec_.steps_taken >= params_.max_steps;
        if (extinct || out_of_steps || rec_.steps_taken % params_.series_stride == 0) sample(field, observe);
        capture(field);
        if (extinct || out_of_steps) finish();
    }

    /// Stops recording when the caller abandons the run early.
    void finish() {
        if (finished_) return;
        finished_ = true;
        rec_.extinct = max_ < rec_.threshold;
        if (!rec_.extinct) return;
        if (rec_.steps_taken == 0) {
            rec_.extinction = ExtinctionEstimate{t0_, ExtinctionMethod::ThresholdCrossing, t0_, t0_, 0.0, 0};
        } else {
            rec_.extinction = estimate_extinction(rec_.series, rec_.threshold, params_.eps);
        }
    }

    BasicRunRecord<Field> take() && { return std::move(rec_); }

private:
    template <class Observer>
    void sample(const Field& field, Observer& observe) {
        SeriesSample s{field.time(), max_, field.mass()};
        rec_.series.push_back(s);
        observe(field, s);
    }

    void capture(const Field& field) {
        while (next_request_ < requests_.size() && field.time() >= requests_[next_request_]) {
            rec_.snapshots.push_back(field);
            ++next_request_;
        }
    }

    const SolverParams& params_;
    std::vector<double> requests_;
    std::size_t next_request_ = 0;
    BasicRunRecord<Field> rec_;
    double t0_ = 0.0;
    double max_ = 0.0;
    bool finished_ = false;
};

/// Shared driver for the Cartesian and radial integrators. step(in, out, dt)
/// advances one step; observe(field, sample) sees every series sample.
template <class Field, class Stepper, class Observer>
BasicRunRecord<Field> run_loop(const Field& initial, const SolverParams& params, double dt, Stepper&& step,
                               Observer&& observe) {
    Recorder<Field> recorder(params, dt);
    Field current = initial;
    Field scratch = initial;
    recorder.begin(current, observe);
    while (!recorder.done()) {
        step(current, scratch, dt);
        std::swap(current, scratch);
        current.set_time(recorder.next_time());
        recorder.after_step(current, observe);
    }
    return std::move(recorder).take();
}

}  // namespace detail
}  // namespace flamefront
