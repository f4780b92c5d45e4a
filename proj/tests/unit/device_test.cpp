#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "rsnet/device.hpp"
#include "rsnet/error.hpp"

using namespace rsnet;

namespace {

DeviceParams unit_params() {
    DeviceParams p;
    p.epsilon = p.theta = p.gamma = p.delta = 1.0;
    return p;
}

}  // namespace

TEST(Conductance, ZeroVoltageLimits) {
    const auto p = unit_params();
    EXPECT_DOUBLE_EQ(conductance(1, 0.0, p), 1.0);
    EXPECT_DOUBLE_EQ(conductance(0, 0.0, p), 1.0);

    const DeviceParams d;
    // Leading series terms: (1 - e^-x)/x ~ 1 - x/2, sinh(x)/x ~ 1 + x^2/6.
    const double v = 1e-8;
    EXPECT_NEAR(conductance(0, v, d) / (d.epsilon * d.theta), 1 - d.theta * v / 2, 1e-14);
    EXPECT_NEAR(conductance(0, -v, d) / (d.epsilon * d.theta), 1 - d.theta * v / 2, 1e-14);
    EXPECT_NEAR(conductance(1, v, d) / (d.gamma * d.delta), 1.0, 1e-14);
    EXPECT_NEAR(conductance(1, -v, d) / (d.gamma * d.delta), 1.0, 1e-14);
}

TEST(Conductance, OnBranchAtOneVolt) {
    // sinh(1) / 1
    EXPECT_NEAR(conductance(1, 1.0, unit_params()), 1.1752011936438014, 1e-12);
}

TEST(Conductance, OffBranchMatchesDirectFormula) {
    const DeviceParams p;
    for (double v : {0.01, 0.3, 1.0, 4.0, 8.0})
        EXPECT_NEAR(conductance(0, v, p), p.epsilon * (1 - std::exp(-p.theta * v)) / v, 1e-15);
}

TEST(Conductance, CurrentIsOddInVoltage) {
    const DeviceParams p;
    for (int w : {0, 1})
        for (double v = -9.0; v <= 9.0; v += 0.37) EXPECT_EQ(current(w, -v, p), -current(w, v, p));
}

TEST(Conductance, NeverBelowFloor) {
    DeviceParams p;
    p.g_floor = 1e-3;
    EXPECT_GE(conductance(0, 50.0, p), 1e-3);
}

TEST(Conductance, RejectsNonFiniteVoltage) {
    EXPECT_THROW((void)conductance(0, std::nan(""), DeviceParams{}), ParameterError);
    EXPECT_THROW((void)conductance(1, INFINITY, DeviceParams{}), ParameterError);
}

TEST(StepInternalState, FixedPointsAtZeroBias) {
    const DeviceParams p;
    EXPECT_EQ(step_internal_state({0.0, 0}, 0.0, 1e-3, p).w_prime, 0.0);
    EXPECT_EQ(step_internal_state({1.0, 1}, 0.0, 1e-3, p).w_prime, 1.0);
}

TEST(StepInternalState, SingleEulerStep) {
    DeviceParams p;
    p.tau = 1.0;
    // 0.5 - 0.1 * (0.5 * 0.5)
    EXPECT_NEAR(step_internal_state({0.5, 0}, 0.0, 0.1, p).w_prime, 0.475, 1e-15);
}

TEST(StepInternalState, PlainDecayMode) {
    DeviceParams p;
    p.tau = 1.0;
    // 0.5 - 0.1 * 0.5
    EXPECT_NEAR(step_internal_state({0.5, 0}, 0.0, 0.1, p, DecayMode::Plain).w_prime, 0.45, 1e-15);
    EXPECT_LT(step_internal_state({1.0, 1}, 0.0, 0.1, p, DecayMode::Plain).w_prime, 1.0);
}

TEST(StepInternalState, LeavesBinaryStateAlone) {
    const auto s = step_internal_state({0.9, 0}, 5.0, 0.1, DeviceParams{});
    EXPECT_EQ(s.w, 0);
    EXPECT_EQ(s.w_prime, 1.0);
}

TEST(StepInternalState, MonotoneDecayWithoutBias) {
    const DeviceParams p;
    for (double w = 0.05; w < 1.0; w += 0.05) EXPECT_LT(step_internal_state({w, 0}, 0.0, 1e-3, p).w_prime, w);
}

TEST(StepInternalState, ClampedUnderArbitraryDrive) {
    Rng rng(3);
    const DeviceParams p;
    DeviceState s;
    for (int k = 0; k < 20000; ++k) {
        s = step_internal_state(s, uniform(rng, -12.0, 12.0), uniform(rng, 1e-4, 0.05), p);
        ASSERT_GE(s.w_prime, 0.0);
        ASSERT_LE(s.w_prime, 1.0);
    }
}

TEST(StepInternalState, RejectsNonPositiveDt) {
    EXPECT_THROW((void)step_internal_state({}, 0.0, 0.0, DeviceParams{}), ParameterError);
}

TEST(Hysteresis, Thresholds) {
    DeviceParams p;
    p.th_low = 0.4;
    p.th_high = 0.6;
    EXPECT_EQ(apply_hysteresis({0.7, 0}, p).w, 1);
    EXPECT_EQ(apply_hysteresis({0.5, 1}, p).w, 1);
    EXPECT_EQ(apply_hysteresis({0.5, 0}, p).w, 0);
    EXPECT_EQ(apply_hysteresis({0.3, 1}, p).w, 0);
}

TEST(Hysteresis, OneTransitionEachWayOverASweep) {
    const DeviceParams p;
    DeviceState s;
    int up = 0, down = 0;
    std::vector<double> path;
    for (int i = 0; i <= 1000; ++i) path.push_back(i / 1000.0);
    for (int i = 999; i >= 0; --i) path.push_back(i / 1000.0);
    for (double w : path) {
        s.w_prime = w;
        const int before = s.w;
        s = apply_hysteresis(s, p);
        if (before == 0 && s.w == 1) {
            ++up;
            EXPECT_NEAR(w, p.th_high, 1e-3);
        }
        if (before == 1 && s.w == 0) {
            ++down;
            EXPECT_NEAR(w, p.th_low, 1e-3);
        }
    }
    EXPECT_EQ(up, 1);
    EXPECT_EQ(down, 1);
}

TEST(SampleDeviceParams, DegenerateRangesAreExact) {
    DeviceParams a;
    a.tau = 0.37;
    Rng rng(1);
    EXPECT_EQ(sample_device_params(ParamRanges::fixed(a), rng), a);
}

TEST(SampleDeviceParams, UniformMean) {
    auto r = ParamRanges::around(DeviceParams{});
    r.tau = {0.5, 1.5};
    Rng rng(42);
    std::vector<double> taus;
    for (int i = 0; i < 10000; ++i) taus.push_back(sample_device_params(r, rng).tau);
    EXPECT_NEAR(oracle::mean(taus), 1.0, 0.02);
    for (double t : taus) {
        EXPECT_GE(t, 0.5);
        EXPECT_LE(t, 1.5);
    }
}

TEST(SampleDeviceParams, DeterministicForSeed) {
    const auto r = ParamRanges::around(DeviceParams{});
    Rng a(9), b(9);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_device_params(r, a), sample_device_params(r, b));
}

TEST(SampleDeviceParams, InvalidRangesRejected) {
    auto r = ParamRanges::around(DeviceParams{});
    r.tau = {2.0, 1.0};
    Rng rng(1);
    EXPECT_THROW((void)sample_device_params(r, rng), ParameterError);
    r = ParamRanges::around(DeviceParams{});
    r.tau = {-1.0, 1.0};
    EXPECT_THROW(validate(r), ParameterError);
    r = ParamRanges::around(DeviceParams{});
    r.th_low = {0.5, 0.7};
    EXPECT_THROW(validate(r), ParameterError);
}

TEST(DeviceParams, Validation) {
    EXPECT_NO_THROW(validate(DeviceParams{}));
    DeviceParams p;
    p.th_low = 0.7;
    EXPECT_THROW(validate(p), ParameterError);
    p = {};
    p.tau = 0;
    EXPECT_THROW(validate(p), ParameterError);
    p = {};
    p.g_floor = 0;
    EXPECT_THROW(validate(p), ParameterError);
}
