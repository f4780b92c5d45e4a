#include "rsnet/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "rsnet/error.hpp"

namespace rsnet {

EntropyResult entropy(const Eigen::MatrixXd& signals, bool center) {
    if (signals.rows() < 2 || signals.cols() < 1)
        throw DataError("entropy: need at least 2 samples and 1 signal");
    if (!signals.allFinite()) throw DataError("entropy: non-finite signal values");

    EntropyResult out;
    out.n_signals = static_cast<std::size_t>(signals.cols());

    Eigen::MatrixXd x = signals;
    if (center) x.rowwise() -= x.colwise().mean();
    const Eigen::MatrixXd cov = x.transpose() * x;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) throw NumericalError("entropy: eigendecomposition failed");

    std::vector<double> ev(eig.eigenvalues().data(), eig.eigenvalues().data() + eig.eigenvalues().size());
    std::sort(ev.begin(), ev.end(), std::greater<>());
    const double top = ev.empty() ? 0.0 : ev.front();
    if (!(top > 0.0)) {
        out.degenerate = true;
        out.spectrum.assign(ev.size(), 0.0);
        return out;
    }
    const double floor = 1e-12 * top;
    double total = 0.0;
    for (auto& e : ev) {
        if (e < floor) e = 0.0;
        total += e;
    }
    double h = 0.0;
    for (auto& e : ev) {
        e /= total;
        if (e > 0.0) h -= e * std::log2(e);
    }
    out.spectrum = std::move(ev);
    out.entropy_bits = std::max(h, 0.0);
    return out;
}

EnergyResult energy(const SimulationTrace& trace) {
    if (trace.applied_voltage.size() != trace.source_current.size() ||
        trace.times.size() != trace.source_current.size())
        throw DataError("energy: trace vectors have mismatched lengths");
    double e = 0.0;
    for (std::size_t k = 0; k < trace.source_current.size(); ++k)
        e += trace.applied_voltage[k] * trace.source_current[k];
    EnergyResult out;
    out.duration = trace.dt * static_cast<double>(trace.source_current.size());
    out.energy_joules = e * trace.dt;
    out.mean_power = out.duration > 0 ? out.energy_joules / out.duration : 0.0;
    return out;
}

Eigen::VectorXd differential_readout(const SimulationTrace& trace, std::size_t a, std::size_t b) {
    const auto cols = static_cast<std::size_t>(trace.interface_voltages.cols());
    if (a >= cols || b >= cols) throw ParameterError("differential_readout: interface index out of range");
    if (a == b) throw ParameterError("differential_readout: nodes must differ");
    return trace.interface_voltages.col(static_cast<long>(a)) - trace.interface_voltages.col(static_cast<long>(b));
}

}  // namespace rsnet
