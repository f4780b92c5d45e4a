#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "rsnet/solver.hpp"

namespace rsnet {

/// Evenness of the principal-component spectrum of a signal matrix.
struct EntropyResult {
    std::vector<double> spectrum;  ///< normalized eigenvalues, descending, summing to 1
    double entropy_bits = 0.0;
    std::size_t n_signals = 0;
    bool degenerate = false;  ///< all-zero input: spectrum is empty and H = 0
};

struct EnergyResult {
    double energy_joules = 0.0;
    double duration = 0.0;
    double mean_power = 0.0;
};

/// Entropy H = -sum(l_i log2 l_i) of the normalized eigenvalues of X^T X for a
/// steps x signals matrix X. With `center`, column means are removed first.
/// Eigenvalues below 1e-12 of the largest count as zero.
[[nodiscard]] EntropyResult entropy(const Eigen::MatrixXd& signals, bool center = true);

/// Left Riemann sum of v_in * i_src over the trace.
[[nodiscard]] EnergyResult energy(const SimulationTrace& trace);

/// v_a(t) - v_b(t) for two interface posts (0-based interface indices).
[[nodiscard]] Eigen::VectorXd differential_readout(const SimulationTrace& trace, std::size_t node_a,
                                                   std::size_t node_b);

}  // namespace rsnet
