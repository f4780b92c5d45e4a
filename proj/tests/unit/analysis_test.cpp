#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "rsnet/analysis.hpp"
#include "rsnet/error.hpp"

using namespace rsnet;

namespace {

Eigen::MatrixXd random_matrix(long rows, long cols, std::uint64_t seed) {
    Rng rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::MatrixXd x(rows, cols);
    for (long r = 0; r < rows; ++r)
        for (long c = 0; c < cols; ++c) x(r, c) = n(rng);
    return x;
}

SimulationTrace ohmic_trace(double g, double dt, std::size_t steps, const std::function<double(double)>& v) {
    SimulationTrace tr;
    tr.dt = dt;
    tr.interface_voltages = Eigen::MatrixXd::Zero(static_cast<long>(steps), 2);
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        tr.times.push_back(t);
        tr.applied_voltage.push_back(v(t));
        tr.source_current.push_back(g * v(t));
        tr.interface_voltages(static_cast<long>(k), 0) = v(t);
    }
    return tr;
}

}  // namespace

TEST(Entropy, RankOneIsZero) {
    Eigen::MatrixXd x(50, 6);
    for (long r = 0; r < 50; ++r)
        for (long c = 0; c < 6; ++c) x(r, c) = std::sin(0.3 * r) * (c + 1);
    for (bool center : {true, false}) {
        const auto h = entropy(x, center);
        EXPECT_NEAR(h.entropy_bits, 0.0, 1e-9);
        EXPECT_NEAR(h.spectrum.front(), 1.0, 1e-12);
    }
}

TEST(Entropy, OrthogonalEqualNormIsLog2N) {
    // Hadamard columns: orthogonal, equal norm, and (except the first) zero mean.
    Eigen::MatrixXd h(8, 8);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) h(r, c) = (__builtin_popcount(r & c) % 2) ? -1.0 : 1.0;
    const auto res = entropy(h, false);
    EXPECT_NEAR(res.entropy_bits, 3.0, 1e-9);
    for (double l : res.spectrum) EXPECT_NEAR(l, 1.0 / 8, 1e-12);
    EXPECT_NEAR(entropy(h.rightCols(7), true).entropy_bits, std::log2(7.0), 1e-9);
}

TEST(Entropy, TwoByTwoGramOracle) {
    Eigen::MatrixXd x(3, 2);
    x << 1, 1, 1, 0, 0, 1;  // X^T X = [[2, 1], [1, 2]]
    const auto [l1, l2] = oracle::eig2(2, 1, 2);
    const double p1 = l1 / (l1 + l2), p2 = l2 / (l1 + l2);
    const double expect = -p1 * std::log2(p1) - p2 * std::log2(p2);
    EXPECT_NEAR(expect, 0.8112781244591328, 1e-12);
    const auto h = entropy(x, false);
    EXPECT_NEAR(h.entropy_bits, expect, 1e-12);
    ASSERT_EQ(h.spectrum.size(), 2u);
    EXPECT_NEAR(h.spectrum[0], 0.75, 1e-12);
    EXPECT_NEAR(h.spectrum[1], 0.25, 1e-12);
}

TEST(Entropy, AllZeroIsDegenerate) {
    const auto h = entropy(Eigen::MatrixXd::Zero(10, 4));
    EXPECT_TRUE(h.degenerate);
    EXPECT_EQ(h.entropy_bits, 0.0);
    // A constant offset is degenerate only after centering.
    EXPECT_TRUE(entropy(Eigen::MatrixXd::Constant(10, 4, 2.0), true).degenerate);
    EXPECT_FALSE(entropy(Eigen::MatrixXd::Constant(10, 4, 2.0), false).degenerate);
}

TEST(Entropy, CenteringRemovesOffsets) {
    Eigen::MatrixXd x(200, 2);
    for (long r = 0; r < 200; ++r) {
        x(r, 0) = std::sin(0.1 * r) + 5.0;
        x(r, 1) = 2 * std::sin(0.1 * r) - 3.0;
    }
    EXPECT_NEAR(entropy(x, true).entropy_bits, 0.0, 1e-9);
    EXPECT_GT(entropy(x, false).entropy_bits, 0.1);
}

TEST(Entropy, RejectsBadInput) {
    EXPECT_THROW((void)entropy(Eigen::MatrixXd::Zero(1, 3)), DataError);
    Eigen::MatrixXd x = Eigen::MatrixXd::Ones(4, 2);
    x(1, 1) = std::nan("");
    EXPECT_THROW((void)entropy(x), DataError);
}

TEST(EntropyProperties, BoundsAndNormalization) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const long n = 1 + static_cast<long>(seed % 16);
        const auto x = random_matrix(30 + static_cast<long>(seed), n, seed);
        for (bool center : {true, false}) {
            const auto h = entropy(x, center);
            double sum = 0;
            for (std::size_t i = 0; i < h.spectrum.size(); ++i) {
                ASSERT_GE(h.spectrum[i], 0.0);
                if (i) ASSERT_LE(h.spectrum[i], h.spectrum[i - 1]);
                sum += h.spectrum[i];
            }
            ASSERT_NEAR(sum, 1.0, 1e-9);
            ASSERT_GE(h.entropy_bits, 0.0);
            ASSERT_LE(h.entropy_bits, std::log2(static_cast<double>(n)) + 1e-9);
        }
    }
}

TEST(EntropyProperties, PermutationAndScaleInvariance) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto x = random_matrix(60, 8, seed);
        const double h = entropy(x).entropy_bits;
        Eigen::PermutationMatrix<Eigen::Dynamic> perm(8);
        perm.setIdentity();
        Rng rng(seed);
        std::shuffle(perm.indices().data(), perm.indices().data() + 8, rng);
        ASSERT_NEAR(entropy(x * perm).entropy_bits, h, 1e-9);
        for (double c : {-3.0, 1e-4, 250.0}) ASSERT_NEAR(entropy(c * x).entropy_bits, h, 1e-9);
    }
}

TEST(EntropyProperties, DuplicatedColumnKeepsRank) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto x = random_matrix(80, 5, seed);
        Eigen::MatrixXd y(80, 6);
        y << x, x.col(static_cast<long>(seed % 5));
        const auto hx = entropy(x), hy = entropy(y);
        auto rank = [](const EntropyResult& r) {
            return std::count_if(r.spectrum.begin(), r.spectrum.end(), [](double l) { return l > 0; });
        };
        ASSERT_EQ(rank(hx), rank(hy));
        ASSERT_LE(hy.entropy_bits, std::log2(6.0) + 1e-9);
    }
}

TEST(Energy, ConstantDrive) {
    const double g = 2e-3, v = 3.0, dt = 1e-3;
    const auto tr = ohmic_trace(g, dt, 1000, [&](double) { return v; });
    const auto e = energy(tr);
    EXPECT_NEAR(e.energy_joules, g * v * v * 1.0, 1e-15);
    EXPECT_NEAR(e.duration, 1.0, 1e-12);
    EXPECT_NEAR(e.energy_joules, e.mean_power * e.duration, 1e-9 * e.energy_joules);
}

TEST(Energy, SineOverWholePeriods) {
    const double g = 1e-3, v = 4.0, f = 5.0;
    const auto tr = ohmic_trace(g, 1e-3, 1000, [&](double t) { return v * std::sin(2 * std::numbers::pi * f * t); });
    EXPECT_NEAR(energy(tr).energy_joules, g * v * v * 1.0 / 2, 1e-3 * g * v * v / 2);
}

TEST(Energy, LeftRiemannConvergesLinearly) {
    // Duration that is not a whole number of periods, so the quadrature error
    // is first order.
    const double g = 1e-3, v = 2.0, f = 5.0, T = 0.07, w = 2 * std::numbers::pi * f;
    const double exact = g * v * v * (T / 2 - std::sin(2 * w * T) / (4 * w));
    double prev = 0;
    for (int level = 0; level < 5; ++level) {
        const double dt = 1e-3 / (1 << level);
        const auto tr = ohmic_trace(g, dt, step_count(dt, T), [&](double t) { return v * std::sin(w * t); });
        const double err = std::abs(energy(tr).energy_joules - exact);
        if (level) EXPECT_LE(err, prev / 2) << "dt " << dt;
        prev = err;
    }
}

TEST(Energy, ZeroAndMismatch) {
    auto tr = ohmic_trace(1e-3, 1e-3, 100, [](double) { return 0.0; });
    EXPECT_EQ(energy(tr).energy_joules, 0.0);
    tr.source_current.pop_back();
    EXPECT_THROW((void)energy(tr), DataError);
}

TEST(DifferentialReadout, AntisymmetryAndErrors) {
    SimulationTrace tr;
    tr.interface_voltages = random_matrix(20, 16, 3);
    const auto ab = differential_readout(tr, 1, 8);
    const auto ba = differential_readout(tr, 8, 1);
    EXPECT_TRUE(ab.isApprox(-ba, 0.0));
    for (long k = 0; k < 20; ++k) EXPECT_EQ(ab(k), tr.interface_voltages(k, 1) - tr.interface_voltages(k, 8));
    tr.interface_voltages.col(8) = tr.interface_voltages.col(1);
    EXPECT_EQ(differential_readout(tr, 1, 8).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_THROW((void)differential_readout(tr, 3, 3), ParameterError);
    EXPECT_THROW((void)differential_readout(tr, 3, 16), ParameterError);
}

TEST(DifferentialReadout, DividerClosedForm) {
    // input(0) - a - b - ground(15) with conductances 1, 2, 4 mS.
    NetworkTopology t;
    t.grid = build_grid(4, 0);
    t.input = 0;
    t.ground = 15;
    t.edges = {{0, 1, {}, {}}, {1, 2, {}, {}}, {2, 15, {}, {}}};
    const std::vector<double> g{1e-3, 2e-3, 4e-3};
    const double v = 3.5;
    const auto s = solve_step(MnaAssembler(t).assemble(g, v));
    SimulationTrace tr;
    tr.interface_voltages.resize(1, 16);
    for (int i = 0; i < 16; ++i) tr.interface_voltages(0, i) = s.node_voltages[t.grid.interface_nodes()[i]];
    // Series current I = v / (1/g1 + 1/g2 + 1/g3); V1 - V2 = I / g2.
    const double i = v / (1 / g[0] + 1 / g[1] + 1 / g[2]);
    EXPECT_NEAR(differential_readout(tr, 1, 2)(0), i / g[1], 1e-9);
}
