#include "rsnet/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "rsnet/error.hpp"

namespace rsnet {

void validate(const ExperimentSettings& s) {
    if (s.interface_dim < 2) throw ParameterError("settings: interface_dim must be >= 2");
    validate(s.ranges);
    validate(s.solver);
    if (!(s.frequency >= 0 && std::isfinite(s.frequency))) throw ParameterError("settings: frequency must be >= 0");
}

void validate(const HierarchyConfig& h, std::size_t interface_count) {
    if (h.networks < 1) throw ParameterError("hierarchy: need at least one network");
    if (h.readout_a >= interface_count || h.readout_b >= interface_count)
        throw ParameterError("hierarchy: readout post out of range");
    if (h.readout_a == h.readout_b) throw ParameterError("hierarchy: readout posts must differ");
}

std::uint64_t member_seed(std::uint64_t seed, std::size_t m) {
    return m == 0 ? seed : derive_seed(seed, {static_cast<std::uint64_t>(m)});
}

namespace {

GenerateOptions generate_options(const ExperimentSettings& s, const Cell& cell) {
    GenerateOptions g;
    g.shape = {cell.alpha, cell.beta};
    g.xi = cell.xi;
    g.edge_count = s.edge_count;
    g.input = s.input;
    g.ground = s.ground;
    g.ranges = s.ranges;
    return g;
}

SweepRecord blank_record(const Cell& cell, std::uint64_t seed) {
    SweepRecord r;
    r.alpha = cell.alpha;
    r.beta = cell.beta;
    r.xi = cell.xi;
    r.v = cell.amplitude;
    r.seed = seed;
    return r;
}

}  // namespace

SingleRun simulate_cell(const ExperimentSettings& s, const Cell& cell, std::uint64_t seed) {
    validate(s);
    const Grid grid = build_grid(s.interface_dim, s.subdivision);
    SingleRun run;
    run.topology = generate_network(grid, generate_options(s, cell), seed);
    const WaveformSpec drive{s.waveform, cell.amplitude, s.frequency};
    run.trace = simulate(run.topology, drive.function(), s.solver);
    return run;
}

SweepRecord run_single(const ExperimentSettings& s, const Cell& cell, std::uint64_t seed) {
    const auto run = simulate_cell(s, cell, seed);
    SweepRecord r = blank_record(cell, seed);
    const auto h = entropy(run.trace.interface_voltages, s.center);
    r.entropy_bits = h.entropy_bits;
    r.degenerate = h.degenerate;
    r.energy_joules = energy(run.trace).energy_joules;
    r.switching_events = run.trace.switching_events;
    r.edge_count = run.topology.edges.size();
    return r;
}

SweepRecord run_hierarchy(const ExperimentSettings& s, const HierarchyConfig& h, const Cell& cell,
                          std::uint64_t seed, unsigned workers) {
    validate(h, s.interface_dim * s.interface_dim);
    struct Member {
        Eigen::VectorXd readout;
        double energy = 0;
        std::size_t events = 0, edges = 0;
        std::string error;
    };
    std::vector<Member> members(h.networks);
    parallel_for(h.networks, workers, [&](std::size_t m) {
        try {
            const auto run = simulate_cell(s, cell, member_seed(seed, m));
            members[m].readout = differential_readout(run.trace, h.readout_a, h.readout_b);
            members[m].energy = energy(run.trace).energy_joules;
            members[m].events = run.trace.switching_events;
            members[m].edges = run.topology.edges.size();
        } catch (const std::exception& e) {
            members[m].error = e.what();
        }
    });

    for (std::size_t m = 0; m < members.size(); ++m)
        if (!members[m].error.empty())
            throw Error("hierarchy member " + std::to_string(m) + " (seed " +
                        std::to_string(member_seed(seed, m)) + "): " + members[m].error);

    SweepRecord r = blank_record(cell, seed);
    Eigen::MatrixXd x(members.front().readout.size(), static_cast<long>(members.size()));
    for (std::size_t m = 0; m < members.size(); ++m) {
        x.col(static_cast<long>(m)) = members[m].readout;
        r.energy_joules += members[m].energy;
        r.switching_events += members[m].events;
        r.edge_count += members[m].edges;
    }
    const auto ent = entropy(x, s.center);
    r.entropy_bits = ent.entropy_bits;
    r.degenerate = ent.degenerate;
    return r;
}

void validate(const SweepConfig& cfg) {
    if (cfg.alphas.empty() || cfg.betas.empty() || cfg.xis.empty() || cfg.amplitudes.empty())
        throw ParameterError("sweep: every axis needs at least one value");
    if (cfg.trials < 1) throw ParameterError("sweep: trials must be >= 1");
    for (double a : cfg.alphas) validate(BetaShape{a, 1.0});
    for (double b : cfg.betas) validate(BetaShape{1.0, b});
    for (double x : cfg.xis)
        if (!(x >= 1.0)) throw ParameterError("sweep: xi must be >= 1");
    for (double v : cfg.amplitudes)
        if (!std::isfinite(v)) throw ParameterError("sweep: amplitude must be finite");
    validate(cfg.settings);
    if (cfg.hierarchy) validate(*cfg.hierarchy, cfg.settings.interface_dim * cfg.settings.interface_dim);
}

std::uint64_t cell_seed(std::uint64_t base, std::size_t ai, std::size_t bi, std::size_t xi, std::size_t vi,
                        std::size_t trial) {
    return derive_seed(base, {ai, bi, xi, vi, trial});
}

SweepResult run_sweep(const SweepConfig& cfg) {
    validate(cfg);
    const std::size_t na = cfg.alphas.size(), nb = cfg.betas.size(), nx = cfg.xis.size(),
                      nv = cfg.amplitudes.size(), nt = cfg.trials;
    const std::size_t total = na * nb * nx * nv * nt;

    SweepResult out;
    out.records.resize(total);
    parallel_for(total, cfg.workers, [&](std::size_t idx) {
        std::size_t rest = idx;
        const std::size_t t = rest % nt; rest /= nt;
        const std::size_t vi = rest % nv; rest /= nv;
        const std::size_t xi = rest % nx; rest /= nx;
        const std::size_t bi = rest % nb; rest /= nb;
        const std::size_t ai = rest;
        const Cell cell{cfg.alphas[ai], cfg.betas[bi], cfg.xis[xi], cfg.amplitudes[vi]};
        const std::uint64_t seed = cell_seed(cfg.base_seed, ai, bi, xi, vi, t);
        SweepRecord r;
        try {
            r = cfg.hierarchy ? run_hierarchy(cfg.settings, *cfg.hierarchy, cell, seed)
                              : run_single(cfg.settings, cell, seed);
        } catch (const std::exception& e) {
            r = blank_record(cell, seed);
            std::ostringstream msg;
            msg << "cell(alpha=" << cell.alpha << ",beta=" << cell.beta << ",xi=" << cell.xi
                << ",v=" << cell.amplitude << ",trial=" << t << "): " << e.what();
            r.error = msg.str();
        }
        r.trial = t;
        out.records[idx] = std::move(r);
    });
    out.aggregates = aggregate(out.records);
    return out;
}

std::vector<CellAggregate> aggregate(const std::vector<SweepRecord>& records) {
    // Cells keep the order of their first record.
    std::vector<CellAggregate> cells;
    std::map<std::tuple<double, double, double, double>, std::size_t> index;
    std::vector<std::vector<const SweepRecord*>> members;
    for (const auto& r : records) {
        const auto key = std::make_tuple(r.alpha, r.beta, r.xi, r.v);
        auto [it, inserted] = index.try_emplace(key, cells.size());
        if (inserted) {
            cells.push_back({r.alpha, r.beta, r.xi, r.v});
            members.emplace_back();
        }
        members[it->second].push_back(&r);
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
        auto& agg = cells[c];
        double sh = 0, se = 0;
        for (const auto* r : members[c]) {
            if (!r->ok()) {
                ++agg.trials_failed;
                continue;
            }
            ++agg.trials_ok;
            sh += r->entropy_bits;
            se += r->energy_joules;
        }
        if (agg.trials_ok == 0) continue;
        const double n = static_cast<double>(agg.trials_ok);
        agg.mean_entropy = sh / n;
        agg.mean_energy = se / n;
        if (agg.trials_ok > 1) {
            double vh = 0, ve = 0;
            for (const auto* r : members[c]) {
                if (!r->ok()) continue;
                vh += (r->entropy_bits - agg.mean_entropy) * (r->entropy_bits - agg.mean_entropy);
                ve += (r->energy_joules - agg.mean_energy) * (r->energy_joules - agg.mean_energy);
            }
            agg.sd_entropy = std::sqrt(vh / (n - 1));
            agg.sd_energy = std::sqrt(ve / (n - 1));
        }
    }
    return cells;
}

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn) {
    const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace rsnet
