#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "mixbnd/error.hpp"
#include "mixbnd/mixprod.hpp"
#include "mixbnd/run_builder.hpp"
#include "support.hpp"

using namespace mixbnd;
namespace t = mixbnd::testing;

namespace {

mixbnd::Run central_run(const Dag& g) { return build_generic(g, 3).runs[0]; }

// Reference values of M and pi from the full joint, unpermuted.
OracleOutput brute_output(const MixtureModel& m, const mixbnd::Run& run) {
    OracleOutput out;
    out.rows = static_cast<int>(run.independent.size());
    out.k = m.k();
    out.m.resize(static_cast<std::size_t>(out.rows * out.k));
    const auto mix = t::mixture_table(m);
    const double event = t::table_mass(mix, run.assignment);
    for (int u = 0; u < m.k(); ++u) {
        const auto joint = t::joint_table(m, u);
        out.pi.push_back(m.weights()[u] * t::table_mass(joint, run.assignment) / event);
        for (int i = 0; i < out.rows; ++i) {
            Assignment x(m.n());
            x.set(run.independent[i], 1);
            out.at(i, u) = t::brute_conditional(m, u, x, run.assignment);
        }
    }
    return out;
}

double max_column_gap(const OracleOutput& a, const OracleOutput& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.m.size(); ++i) worst = std::max(worst, std::abs(a.m[i] - b.m[i]));
    for (std::size_t u = 0; u < a.pi.size(); ++u) worst = std::max(worst, std::abs(a.pi[u] - b.pi[u]));
    return worst;
}

std::vector<double> pattern_counts(const SampleSet& s, const std::vector<int>& cols) {
    std::vector<double> counts(std::size_t{1} << cols.size(), 0.0);
    for (std::size_t r = 0; r < s.size(); ++r) {
        std::size_t p = 0;
        for (std::size_t i = 0; i < cols.size(); ++i) p |= static_cast<std::size_t>(s.row(r)[cols[i]]) << i;
        counts[p] += 1.0;
    }
    return counts;
}

}  // namespace

TEST(ExactBackend, ThirteenVertexCentralRunMatchesEnumeration) {
    Dag g = t::thirteen_vertex();
    MixtureModel m = random_separated_model(g, 2, 0.1, 5);
    ExactBackend oracle(m, 77);
    mixbnd::Run run = central_run(g);
    const OracleOutput ref = brute_output(m, run);
    EXPECT_LE(max_column_gap(oracle.truth(run), ref), 1e-12);
    // Permutation honesty: undoing the scramble recovers the reference.
    for (std::size_t idx = 0; idx < 6; ++idx) {
        const OracleOutput raw = oracle.solve(run, idx);
        const std::vector<int> perm = oracle.scramble(idx);
        std::vector<int> inverse(perm.size());
        for (std::size_t c = 0; c < perm.size(); ++c) inverse[perm[c]] = static_cast<int>(c);
        EXPECT_LE(max_column_gap(permute_columns(raw, inverse), ref), 1e-12);
    }
}

TEST(ExactBackend, SingleSourceHasUnitWeight) {
    Dag g = t::chain(8);
    MixtureModel m = random_separated_model(g, 1, 0.0, 2);
    ExactBackend oracle(m, 1);
    mixbnd::Run run = parse_run(g, "0*0*0*--");
    OracleOutput out = oracle.solve(run, 0);
    ASSERT_EQ(out.k, 1);
    EXPECT_NEAR(out.pi[0], 1.0, 1e-15);
    for (int i = 0; i < out.rows; ++i) {
        Assignment x(8);
        x.set(run.independent[i], 1);
        EXPECT_NEAR(out.at(i, 0), t::brute_conditional(m, 0, x, run.assignment), 1e-12);
    }
}

TEST(ExactBackend, MixtureConsistency) {
    Dag g = t::chain(8);
    MixtureModel m = random_separated_model(g, 3, 0.05, 9);
    ExactBackend oracle(m, 4);
    RunCollection coll = build_path(g, 3);
    for (std::size_t r = 0; r < coll.runs.size(); ++r) {
        const mixbnd::Run& run = coll.runs[r];
        OracleOutput out = oracle.solve(run, r);
        double s = 0.0;
        for (double w : out.pi) s += w;
        EXPECT_NEAR(s, 1.0, 1e-9);
        for (int i = 0; i < out.rows; ++i) {
            double mixed = 0.0;
            for (int u = 0; u < out.k; ++u) mixed += out.pi[u] * out.at(i, u);
            Assignment x(8);
            x.set(run.independent[i], 1);
            EXPECT_NEAR(mixed, mixture_conditional(m, x, run.assignment), 1e-9);
        }
    }
}

TEST(ExactBackend, Deterministic) {
    Dag g = t::thirteen_vertex();
    MixtureModel m = random_separated_model(g, 3, 0.05, 5);
    ExactBackend a(m, 13), b(m, 13);
    mixbnd::Run run = central_run(g);
    EXPECT_EQ(a.solve(run, 3).m, b.solve(run, 3).m);
    EXPECT_EQ(a.scramble(3), b.scramble(3));
}

TEST(NoisyBackend, ZeroEpsIsExact) {
    Dag g = t::chain(8);
    MixtureModel m = random_separated_model(g, 2, 0.1, 6);
    NoisyBackend noisy(m, 0.0, 21);
    mixbnd::Run run = parse_run(g, "*0*0-1*-");
    OracleOutput ref = brute_output(m, run);
    OracleOutput out = noisy.solve(run, 2);
    // Columns are scrambled; compare as multisets of columns.
    double best = 1.0;
    for (std::vector<int> perm : {std::vector<int>{0, 1}, std::vector<int>{1, 0}})
        best = std::min(best, max_column_gap(permute_columns(out, perm), ref));
    EXPECT_LE(best, 1e-12);
}

TEST(NoisyBackend, RelativeDeviationWithinEps) {
    Dag g = t::thirteen_vertex();
    MixtureModel m = random_separated_model(g, 2, 0.1, 8);
    const double eps = 1e-6;
    RunCollection coll = build_generic(g, 3);
    NoisyBackend noisy(m, eps, 3);
    ExactBackend exact(m, 0);
    for (std::size_t r = 0; r < coll.runs.size(); ++r) {
        const OracleOutput truth = exact.truth(coll.runs[r]);
        const OracleOutput raw = noisy.solve(coll.runs[r], r);
        double best = 1.0;
        for (std::vector<int> perm : {std::vector<int>{0, 1}, std::vector<int>{1, 0}}) {
            const OracleOutput out = permute_columns(raw, perm);
            double worst = 0.0;
            for (std::size_t i = 0; i < out.m.size(); ++i) {
                worst = std::max(worst, std::abs(out.m[i] - truth.m[i]) / truth.m[i]);
                worst = std::max(worst, std::abs(out.m[i] - truth.m[i]) / (1.0 - truth.m[i]));
            }
            for (std::size_t u = 0; u < out.pi.size(); ++u)
                worst = std::max(worst, std::abs(out.pi[u] - truth.pi[u]) / truth.pi[u]);
            best = std::min(best, worst);
        }
        EXPECT_LE(best, eps * (1 + 1e-9)) << encode_run(coll.runs[r]);
        EXPECT_GT(best, 0.0);
    }
}

TEST(EmFit, SingleComponentIsEmpiricalFrequency) {
    // Patterns over 2 dims: 00 x3, 01 x1, 11 x4 (bit 0 = dim 0).
    std::vector<double> counts = {3, 1, 0, 4};
    EmFit fit = fit_bernoulli_mixture(counts, 2, 1, EmOptions{}, 1);
    EXPECT_NEAR(fit.theta[0], 5.0 / 8, 1e-12);
    EXPECT_NEAR(fit.theta[1], 4.0 / 8, 1e-12);
    EXPECT_NEAR(fit.weights[0], 1.0, 1e-12);
}

TEST(EmFit, LikelihoodIsMonotone) {
    MixtureModel m = random_separated_model(t::empty_graph(4), 3, 0.2, 12);
    SampleSet s = sample(m, 20000, 4);
    EmOptions opts;
    opts.restarts = 4;
    EmFit fit = fit_bernoulli_mixture(pattern_counts(s, {0, 1, 2, 3}), 4, 3, opts, 8);
    ASSERT_GT(fit.trace.size(), 2u);
    for (std::size_t i = 1; i < fit.trace.size(); ++i)
        EXPECT_GE(fit.trace[i], fit.trace[i - 1] - 1e-9 * std::abs(fit.trace[i - 1]));
}

TEST(EmFit, FarSeparatedSourcesAreRecovered) {
    MixtureModel m(t::empty_graph(3), {0.4, 0.6},
                   {{{0.9}, {0.85}, {0.1}}, {{0.15}, {0.2}, {0.8}}});
    SampleSet s = sample(m, 100000, 31);
    EmFit fit = fit_bernoulli_mixture(pattern_counts(s, {0, 1, 2}), 3, 2, EmOptions{}, 2);
    double best = 1.0;
    for (int swap = 0; swap < 2; ++swap) {
        double worst = 0.0;
        for (int u = 0; u < 2; ++u) {
            const int fu = swap ? 1 - u : u;
            for (int i = 0; i < 3; ++i)
                worst = std::max(worst, std::abs(fit.theta[i * 2 + fu] - m.p1(u, VertexId{i}, 0)));
            worst = std::max(worst, std::abs(fit.weights[fu] - m.weights()[u]));
        }
        best = std::min(best, worst);
    }
    EXPECT_LE(best, 0.02);
}

TEST(EmBackend, NoMatchingRowsIsInsufficient) {
    MixtureModel m(t::chain(8), {1.0},
                   {{{0.0}, {0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}}});
    EmBackend em(sample(m, 500, 1), 1, EmOptions{}, 3);
    // Every row has V1 = 0, so "1*0*0*--" matches nothing.
    try {
        em.solve(parse_run(t::chain(8), "1*0*0*--"), 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InsufficientSamples);
        EXPECT_NE(std::string(e.what()).find("1*0*0*--"), std::string::npos);
    }
}

TEST(EmBackend, EventProbabilityIsEmpirical) {
    MixtureModel m = random_separated_model(t::chain(3), 2, 0.1, 4);
    SampleSet s = sample(m, 1000, 2);
    Assignment a(3);
    a.set(VertexId{1}, 1);
    double hits = 0.0;
    for (std::size_t r = 0; r < s.size(); ++r) hits += s.row(r)[1] == 1;
    EmBackend em(s, 2, EmOptions{}, 1);
    EXPECT_DOUBLE_EQ(em.event_probability(a), hits / 1000.0);
}
