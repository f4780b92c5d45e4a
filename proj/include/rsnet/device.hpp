#pragma once

// Binary resistive-switch model: voltage-dependent conductance with an
// off branch  eps * (1 - exp(-theta V)) / V  and an on branch
// gamma * sinh(delta V) / V, selected by a binary state w. The binary state
// follows a hidden state w' through a hysteresis function, and w' integrates
//
//     dw'/dt = lambda * sinh(eta V) - (w' / tau) * (1 - w')     (state-dependent)
//     dw'/dt = lambda * sinh(eta V) -  w' / tau                 (plain decay)

#include <cstdint>

#include "rsnet/random.hpp"

namespace rsnet {

enum class DecayMode : std::uint8_t {
    Plain,          ///< w'/tau
    StateDependent  ///< (w'/tau)(1 - w'), the default
};

struct DeviceParams {
    double epsilon = 1e-4;  ///< off-branch conductance scale [S V]
    double theta = 4.0;     ///< off-branch exponent [1/V]
    double gamma = 4e-4;    ///< on-branch scale [S V]
    double delta = 2.0;     ///< on-branch sinh argument [1/V]
    double lambda = 1.0;    ///< state growth rate [1/s]
    double eta = 4.0;       ///< state sinh argument [1/V]
    double tau = 0.2;       ///< decay time constant [s]
    double th_low = 0.4;
    double th_high = 0.6;
    double g_floor = 1e-9;  ///< lower bound on any device conductance [S]

    friend bool operator==(const DeviceParams&, const DeviceParams&) = default;
};

struct DeviceState {
    double w_prime = 0.0;
    int w = 0;

    friend bool operator==(const DeviceState&, const DeviceState&) = default;
};

struct Interval {
    double min = 0.0;
    double max = 0.0;

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Closed sampling interval for every DeviceParams field.
struct ParamRanges {
    Interval epsilon, theta, gamma, delta, lambda, eta, tau, th_low, th_high, g_floor;

    /// Ranges of +/- `fraction` (relative) around `center`, thresholds and
    /// g_floor kept fixed.
    static ParamRanges around(const DeviceParams& center, double fraction = 0.5);
    /// Degenerate ranges that always sample `p`.
    static ParamRanges fixed(const DeviceParams& p);

    friend bool operator==(const ParamRanges&, const ParamRanges&) = default;
};

/// Throws ParameterError naming the first violated constraint.
void validate(const DeviceParams& p);
void validate(const ParamRanges& r);

/// Conductance G(w, V). Evaluated at |V| so that I(-V) = -I(V); the V -> 0
/// limits (eps*theta, gamma*delta) are used for tiny |V|. Never below g_floor.
[[nodiscard]] double conductance(int w, double volts, const DeviceParams& p);

/// Device current G(w, V) * V.
[[nodiscard]] inline double current(int w, double volts, const DeviceParams& p) {
    return conductance(w, volts, p) * volts;
}

/// One explicit Euler step of the hidden-state equation, clamped to [0, 1].
/// The binary state is left untouched.
[[nodiscard]] DeviceState step_internal_state(DeviceState s, double volts, double dt,
                                              const DeviceParams& p,
                                              DecayMode mode = DecayMode::StateDependent);

/// Hysteresis thresholding of w' into w.
[[nodiscard]] DeviceState apply_hysteresis(DeviceState s, const DeviceParams& p);

/// Independent uniform draw of every field, in declaration order.
[[nodiscard]] DeviceParams sample_device_params(const ParamRanges& r, Rng& rng);

}  // namespace rsnet
