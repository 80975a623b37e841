#include "mixbnd/mixprod.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "mixbnd/error.hpp"
#include "mixbnd/seed.hpp"

namespace mixbnd {

OracleOutput permute_columns(const OracleOutput& out, const std::vector<int>& source_of_column) {
    OracleOutput res = out;
    for (int c = 0; c < out.k; ++c) {
        const int s = source_of_column[static_cast<std::size_t>(c)];
        for (int i = 0; i < out.rows; ++i) res.at(i, c) = out.at(i, s);
        res.pi[static_cast<std::size_t>(c)] = out.pi[static_cast<std::size_t>(s)];
    }
    return res;
}

ExactBackend::ExactBackend(MixtureModel model, std::uint64_t scramble_seed)
    : model_(std::move(model)), scramble_seed_(scramble_seed) {}

std::vector<int> ExactBackend::scramble(std::size_t run_index) const {
    std::vector<int> perm(static_cast<std::size_t>(model_.k()));
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(mix_seed(scramble_seed_, run_index));
    std::shuffle(perm.begin(), perm.end(), rng);
    return perm;
}

OracleOutput ExactBackend::truth(const Run& run) const {
    const int k = model_.k();
    OracleOutput out;
    out.rows = static_cast<int>(run.independent.size());
    out.k = k;
    out.m.resize(static_cast<std::size_t>(out.rows * k));
    const std::vector<double> cond = source_probabilities(model_, run.assignment);
    for (int u = 0; u < k; ++u)
        if (!(cond[u] > 0.0))
            throw Error(ErrorCode::ZeroConditioningProbability,
                        "run " + encode_run(run) + " conditions on a null event");
    for (int i = 0; i < out.rows; ++i) {
        Assignment both = run.assignment;
        both.set(run.independent[i], 1);
        const std::vector<double> joint = source_probabilities(model_, both);
        for (int u = 0; u < k; ++u) out.at(i, u) = joint[u] / cond[u];
    }
    out.pi = source_posterior(model_, run.assignment);
    return out;
}

OracleOutput ExactBackend::solve(const Run& run, std::size_t run_index) const {
    return permute_columns(truth(run), scramble(run_index));
}

double ExactBackend::event_probability(const Assignment& cond) const {
    return mixture_probability(model_, cond);
}

NoisyBackend::NoisyBackend(MixtureModel model, double eps, std::uint64_t seed)
    : exact_(std::move(model), mix_seed(seed, streams::scramble)),
      eps_(eps),
      noise_seed_(mix_seed(seed, streams::noise)) {}

OracleOutput NoisyBackend::solve(const Run& run, std::size_t run_index) const {
    OracleOutput out = exact_.truth(run);
    std::mt19937_64 rng(mix_seed(noise_seed_, run_index));
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (double& p : out.m) {
        const double room = std::min(p, 1.0 - p);
        p = std::clamp(p + eps_ * unit(rng) * room, kProbFloor * 0.5, 1.0 - kProbFloor * 0.5);
    }
    // Renormalizing at most doubles a perturbation, so a third of eps keeps
    // each weight within eps.
    double total = 0.0;
    for (double& w : out.pi) {
        w *= 1.0 + eps_ / 3.0 * unit(rng);
        total += w;
    }
    for (double& w : out.pi) w /= total;
    return permute_columns(out, exact_.scramble(run_index));
}

double NoisyBackend::event_probability(const Assignment& cond) const {
    return exact_.event_probability(cond);
}

EmFit fit_bernoulli_mixture(const std::vector<double>& counts, int dims, int k,
                            const EmOptions& opts, std::uint64_t seed) {
    const std::size_t patterns = counts.size();
    const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    if (!(total > 0.0)) throw Error(ErrorCode::InsufficientSamples, "no observations");
    std::vector<std::size_t> seen;
    for (std::size_t p = 0; p < patterns; ++p)
        if (counts[p] > 0.0) seen.push_back(p);
    auto bit = [](std::size_t p, int i) { return static_cast<double>((p >> i) & 1U); };
    auto th = [k](std::vector<double>& t, int i, int u) -> double& {
        return t[static_cast<std::size_t>(i * k + u)];
    };

    EmFit best;
    best.log_likelihood = -std::numeric_limits<double>::infinity();
    const int restarts = k == 1 ? 1 : std::max(1, opts.restarts);
    std::vector<double> resp(static_cast<std::size_t>(k));
    for (int r = 0; r < restarts; ++r) {
        std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(r)));
        std::discrete_distribution<std::size_t> pick(counts.begin(), counts.end());
        std::uniform_real_distribution<double> jitter(-0.1, 0.1);
        EmFit fit;
        fit.theta.assign(static_cast<std::size_t>(dims * k), 0.5);
        fit.weights.assign(static_cast<std::size_t>(k), 1.0 / k);
        // Start each component near a random observed row.
        for (int u = 0; u < k; ++u) {
            const std::size_t p = pick(rng);
            for (int i = 0; i < dims; ++i) th(fit.theta, i, u) = 0.25 + 0.5 * bit(p, i) + jitter(rng);
        }
        double prev = -std::numeric_limits<double>::infinity();
        for (int it = 0; it < opts.max_iters; ++it) {
            std::vector<double> mass(static_cast<std::size_t>(k), 0.0);
            std::vector<double> ones(static_cast<std::size_t>(dims * k), 0.0);
            double ll = 0.0;
            for (std::size_t p : seen) {
                double s = 0.0;
                for (int u = 0; u < k; ++u) {
                    double q = fit.weights[u];
                    for (int i = 0; i < dims; ++i) {
                        const double t = th(fit.theta, i, u);
                        q *= bit(p, i) > 0.0 ? t : 1.0 - t;
                    }
                    resp[u] = q;
                    s += q;
                }
                if (!(s > 0.0)) {
                    ll = -std::numeric_limits<double>::infinity();
                    break;
                }
                ll += counts[p] * std::log(s);
                for (int u = 0; u < k; ++u) {
                    const double w = counts[p] * resp[u] / s;
                    mass[u] += w;
                    for (int i = 0; i < dims; ++i) th(ones, i, u) += w * bit(p, i);
                }
            }
            fit.trace.push_back(ll);
            if (it > 0 && (ll - prev) <= opts.tol * total) {
                fit.converged = true;
                break;
            }
            prev = ll;
            for (int u = 0; u < k; ++u) {
                fit.weights[u] = mass[u] / total;
                if (mass[u] > 0.0)
                    for (int i = 0; i < dims; ++i) th(fit.theta, i, u) = th(ones, i, u) / mass[u];
            }
        }
        fit.log_likelihood = fit.trace.empty() ? prev : fit.trace.back();
        if (fit.log_likelihood > best.log_likelihood) best = std::move(fit);
    }
    return best;
}

EmBackend::EmBackend(SampleSet samples, int k, EmOptions opts, std::uint64_t seed)
    : samples_(std::move(samples)), k_(k), opts_(opts), seed_(seed) {}

namespace {

bool matches(const std::uint8_t* row, const std::vector<std::pair<std::size_t, int>>& cond) {
    for (const auto& [v, b] : cond)
        if (row[v] != b) return false;
    return true;
}

std::vector<std::pair<std::size_t, int>> condition_list(const Assignment& a) {
    std::vector<std::pair<std::size_t, int>> out;
    for (VertexId v : a.keys()) out.emplace_back(ix(v), a.get(v));
    return out;
}

}  // namespace

OracleOutput EmBackend::solve(const Run& run, std::size_t run_index) const {
    const auto cond = condition_list(run.assignment);
    const int dims = static_cast<int>(run.independent.size());
    std::vector<double> counts(std::size_t{1} << dims, 0.0);
    std::size_t kept = 0;
    for (std::size_t r = 0; r < samples_.size(); ++r) {
        const std::uint8_t* row = samples_.row(r);
        if (!matches(row, cond)) continue;
        std::size_t p = 0;
        for (int i = 0; i < dims; ++i)
            if (row[ix(run.independent[i])]) p |= std::size_t{1} << i;
        counts[p] += 1.0;
        ++kept;
    }
    const std::size_t need =
        opts_.min_postselect ? opts_.min_postselect
                             : static_cast<std::size_t>(200 * k_) * static_cast<std::size_t>(dims);
    if (kept < need || kept == 0) {
        throw Error(ErrorCode::InsufficientSamples,
                    "run " + encode_run(run) + ": " + std::to_string(kept) +
                        " post-selected rows, need " + std::to_string(need));
    }
    EmFit fit = fit_bernoulli_mixture(counts, dims, k_, opts_, mix_seed(seed_, run_index));
    OracleOutput out;
    out.rows = dims;
    out.k = k_;
    out.m = fit.theta;
    out.pi = fit.weights;
    out.converged = fit.converged;
    return out;
}

double EmBackend::event_probability(const Assignment& cond) const {
    const auto list = condition_list(cond);
    if (samples_.size() == 0) return 0.0;
    std::size_t hits = 0;
    for (std::size_t r = 0; r < samples_.size(); ++r)
        if (matches(samples_.row(r), list)) ++hits;
    return static_cast<double>(hits) / static_cast<double>(samples_.size());
}

}  // namespace mixbnd
