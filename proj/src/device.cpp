#include "rsnet/device.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rsnet/error.hpp"

namespace rsnet {

namespace {

// Below this |V| the series expansions are exact to double precision for the
// parameter magnitudes we accept.
constexpr double kSmallVolts = 1e-6;

void require(bool ok, const char* what) {
    if (!ok) throw ParameterError(std::string("invalid device parameter: ") + what);
}

void require_interval(const Interval& iv, const char* name) {
    if (!(iv.min <= iv.max) || !std::isfinite(iv.min) || !std::isfinite(iv.max))
        throw ParameterError(std::string("invalid range for ") + name);
}

// (1 - exp(-x)) / x for x >= 0
double off_kernel(double x) {
    if (x < kSmallVolts) return 1.0 - x / 2.0 + x * x / 6.0;
    return -std::expm1(-x) / x;
}

// sinh(x) / x for x >= 0
double on_kernel(double x) {
    if (x < kSmallVolts) return 1.0 + x * x / 6.0;
    return std::sinh(x) / x;
}

}  // namespace

ParamRanges ParamRanges::around(const DeviceParams& c, double fraction) {
    if (!(fraction >= 0.0 && fraction < 1.0))
        throw ParameterError("variation fraction must lie in [0, 1)");
    auto span = [fraction](double v) { return Interval{v * (1.0 - fraction), v * (1.0 + fraction)}; };
    ParamRanges r;
    r.epsilon = span(c.epsilon);
    r.theta = span(c.theta);
    r.gamma = span(c.gamma);
    r.delta = span(c.delta);
    r.lambda = span(c.lambda);
    r.eta = span(c.eta);
    r.tau = span(c.tau);
    r.th_low = {c.th_low, c.th_low};
    r.th_high = {c.th_high, c.th_high};
    r.g_floor = {c.g_floor, c.g_floor};
    return r;
}

ParamRanges ParamRanges::fixed(const DeviceParams& p) {
    return {{p.epsilon, p.epsilon}, {p.theta, p.theta}, {p.gamma, p.gamma},
            {p.delta, p.delta},     {p.lambda, p.lambda}, {p.eta, p.eta},
            {p.tau, p.tau},         {p.th_low, p.th_low}, {p.th_high, p.th_high},
            {p.g_floor, p.g_floor}};
}

void validate(const DeviceParams& p) {
    require(std::isfinite(p.epsilon) && p.epsilon > 0, "epsilon > 0");
    require(std::isfinite(p.theta) && p.theta > 0, "theta > 0");
    require(std::isfinite(p.gamma) && p.gamma > 0, "gamma > 0");
    require(std::isfinite(p.delta) && p.delta > 0, "delta > 0");
    require(std::isfinite(p.lambda) && p.lambda >= 0, "lambda >= 0");
    require(std::isfinite(p.eta) && p.eta > 0, "eta > 0");
    require(std::isfinite(p.tau) && p.tau > 0, "tau > 0");
    require(p.th_low > 0 && p.th_low < p.th_high && p.th_high < 1, "0 < th_low < th_high < 1");
    require(std::isfinite(p.g_floor) && p.g_floor > 0, "g_floor > 0");
}

void validate(const ParamRanges& r) {
    require_interval(r.epsilon, "epsilon");
    require_interval(r.theta, "theta");
    require_interval(r.gamma, "gamma");
    require_interval(r.delta, "delta");
    require_interval(r.lambda, "lambda");
    require_interval(r.eta, "eta");
    require_interval(r.tau, "tau");
    require_interval(r.th_low, "th_low");
    require_interval(r.th_high, "th_high");
    require_interval(r.g_floor, "g_floor");
    // Endpoints must be valid parameters; thresholds are checked pairwise at
    // their extremes so that every draw satisfies th_low < th_high.
    DeviceParams lo{r.epsilon.min, r.theta.min, r.gamma.min, r.delta.min, r.lambda.min,
                    r.eta.min,     r.tau.min,   r.th_low.min, r.th_high.min, r.g_floor.min};
    DeviceParams hi{r.epsilon.max, r.theta.max, r.gamma.max, r.delta.max, r.lambda.max,
                    r.eta.max,     r.tau.max,   r.th_low.max, r.th_high.max, r.g_floor.max};
    validate(lo);
    validate(hi);
    require(r.th_low.max < r.th_high.min, "th_low range must lie below th_high range");
}

double conductance(int w, double volts, const DeviceParams& p) {
    if (!std::isfinite(volts)) throw ParameterError("conductance: non-finite voltage");
    const double v = std::abs(volts);
    const double g = w ? p.gamma * p.delta * on_kernel(p.delta * v)
                       : p.epsilon * p.theta * off_kernel(p.theta * v);
    return std::max(g, p.g_floor);
}

DeviceState step_internal_state(DeviceState s, double volts, double dt, const DeviceParams& p,
                                DecayMode mode) {
    if (!(dt > 0)) throw ParameterError("step_internal_state: dt must be positive");
    const double growth = p.lambda * std::sinh(p.eta * volts);
    const double decay = mode == DecayMode::StateDependent
                             ? (s.w_prime / p.tau) * (1.0 - s.w_prime)
                             : s.w_prime / p.tau;
    const double next = s.w_prime + dt * (growth - decay);
    s.w_prime = std::isnan(next) ? s.w_prime : std::clamp(next, 0.0, 1.0);
    return s;
}

DeviceState apply_hysteresis(DeviceState s, const DeviceParams& p) {
    if (s.w_prime >= p.th_high)
        s.w = 1;
    else if (s.w_prime <= p.th_low)
        s.w = 0;
    return s;
}

DeviceParams sample_device_params(const ParamRanges& r, Rng& rng) {
    validate(r);
    DeviceParams p;
    p.epsilon = uniform(rng, r.epsilon.min, r.epsilon.max);
    p.theta = uniform(rng, r.theta.min, r.theta.max);
    p.gamma = uniform(rng, r.gamma.min, r.gamma.max);
    p.delta = uniform(rng, r.delta.min, r.delta.max);
    p.lambda = uniform(rng, r.lambda.min, r.lambda.max);
    p.eta = uniform(rng, r.eta.min, r.eta.max);
    p.tau = uniform(rng, r.tau.min, r.tau.max);
    p.th_low = uniform(rng, r.th_low.min, r.th_low.max);
    p.th_high = uniform(rng, r.th_high.min, r.th_high.max);
    p.g_floor = uniform(rng, r.g_floor.min, r.g_floor.max);
    return p;
}

}  // namespace rsnet
