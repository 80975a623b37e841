#include "mixbnd/alphabet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "mixbnd/error.hpp"

namespace mixbnd {

ReducedGraph clique_reduction(const Dag& g, int d) {
    if (d < 2) throw Error(ErrorCode::ShapeMismatch, "alphabet size must be at least 2");
    AlphabetSpec spec{g.n(), d};
    std::vector<Edge> edges;
    for (int v = 0; v < g.n(); ++v)
        for (int a = 0; a < d; ++a)
            for (int b = a + 1; b < d; ++b)
                edges.push_back({spec.binary(VertexId{v}, a), spec.binary(VertexId{v}, b)});
    for (const Edge& e : g.edges())
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) edges.push_back({spec.binary(e.parent, a), spec.binary(e.child, b)});
    return ReducedGraph{Dag::create(spec.binary_count(), std::move(edges)), spec};
}

Assignment one_hot_encode(const std::vector<int>& values, const AlphabetSpec& spec) {
    if (static_cast<int>(values.size()) != spec.n)
        throw Error(ErrorCode::ShapeMismatch, "expected " + std::to_string(spec.n) + " values");
    Assignment out(spec.binary_count());
    for (int v = 0; v < spec.n; ++v) {
        const int value = values[static_cast<std::size_t>(v)];
        if (value < 0 || value >= spec.d) {
            throw Error(ErrorCode::BadFormat,
                        "value " + std::to_string(value) + " outside [0, " + std::to_string(spec.d) + ")");
        }
        for (int b = 0; b < spec.d; ++b) out.set(spec.binary(VertexId{v}, b), b == value ? 1 : 0);
    }
    return out;
}

std::vector<int> one_hot_decode(const Assignment& bits, const AlphabetSpec& spec) {
    std::vector<int> out(static_cast<std::size_t>(spec.n), -1);
    for (int v = 0; v < spec.n; ++v) {
        int ones = 0;
        for (int b = 0; b < spec.d; ++b) {
            if (bits.get(spec.binary(VertexId{v}, b)) == 1) {
                out[static_cast<std::size_t>(v)] = b;
                ++ones;
            }
        }
        if (ones != 1) throw Error(ErrorCode::BadFormat, "block " + std::to_string(v) + " is not one-hot");
    }
    return out;
}

DaryModel::DaryModel(Dag dag, int d, std::vector<double> weights,
                     std::vector<std::vector<std::vector<std::vector<double>>>> tables)
    : dag_(std::move(dag)), d_(d), weights_(std::move(weights)), tables_(std::move(tables)) {
    if (d_ < 2) throw Error(ErrorCode::ShapeMismatch, "alphabet size must be at least 2");
    if (weights_.empty()) throw Error(ErrorCode::ShapeMismatch, "model needs at least one source");
    double total = 0.0;
    for (double w : weights_) {
        if (!(w > 0.0)) throw Error(ErrorCode::ShapeMismatch, "weights must be positive");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) throw Error(ErrorCode::ShapeMismatch, "weights must sum to 1");
    if (tables_.size() != weights_.size())
        throw Error(ErrorCode::ShapeMismatch, "need one table set per source");
    for (const auto& source : tables_) {
        if (static_cast<int>(source.size()) != dag_.n())
            throw Error(ErrorCode::ShapeMismatch, "need one table per vertex");
        for (int v = 0; v < dag_.n(); ++v) {
            std::size_t expect = 1;
            for (std::size_t i = 0; i < dag_.parents(VertexId{v}).size(); ++i) expect *= static_cast<std::size_t>(d_);
            if (source[static_cast<std::size_t>(v)].size() != expect)
                throw Error(ErrorCode::ShapeMismatch, "vertex " + std::to_string(v) + " has wrong row count");
            for (const auto& row : source[static_cast<std::size_t>(v)]) {
                if (static_cast<int>(row.size()) != d_)
                    throw Error(ErrorCode::ShapeMismatch, "row length must equal d");
                double s = 0.0;
                for (double p : row) {
                    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::ShapeMismatch, "probability out of range");
                    s += p;
                }
                if (std::abs(s - 1.0) > 1e-9) throw Error(ErrorCode::ShapeMismatch, "row must sum to 1");
            }
        }
    }
}

std::size_t DaryModel::config_of(VertexId v, const std::vector<int>& values) const {
    std::size_t config = 0, scale = 1;
    for (VertexId p : dag_.parents(v)) {
        config += scale * static_cast<std::size_t>(values[ix(p)]);
        scale *= static_cast<std::size_t>(d_);
    }
    return config;
}

DaryModel random_dary_model(const Dag& g, int d, int k, std::uint64_t seed, double margin) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> entry(margin, 1.0);
    std::vector<std::vector<std::vector<std::vector<double>>>> tables(
        static_cast<std::size_t>(k), std::vector<std::vector<std::vector<double>>>(g.n()));
    for (int u = 0; u < k; ++u) {
        for (int v = 0; v < g.n(); ++v) {
            std::size_t rows = 1;
            for (std::size_t i = 0; i < g.parents(VertexId{v}).size(); ++i) rows *= static_cast<std::size_t>(d);
            auto& t = tables[u][v];
            t.resize(rows);
            for (auto& row : t) {
                row.resize(static_cast<std::size_t>(d));
                for (double& p : row) p = entry(rng);
                const double s = std::accumulate(row.begin(), row.end(), 0.0);
                for (double& p : row) p /= s;
            }
        }
    }
    std::uniform_real_distribution<double> raw(1.0, 2.0);
    std::vector<double> weights(static_cast<std::size_t>(k));
    for (double& w : weights) w = raw(rng);
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    for (double& w : weights) w /= total;
    weights.back() = 1.0 - std::accumulate(weights.begin(), weights.end() - 1, 0.0);
    return DaryModel(g, d, std::move(weights), std::move(tables));
}

namespace {

// True when every parent block is one-hot; fills the parents' d-ary values.
bool one_hot_parents(const Dag& g, const AlphabetSpec& spec, VertexId v, const Assignment& bits,
                     std::vector<int>& values) {
    for (VertexId p : g.parents(v)) {
        int found = -1, ones = 0;
        for (int a = 0; a < spec.d; ++a) {
            if (bits.get(spec.binary(p, a)) == 1) {
                found = a;
                ++ones;
            }
        }
        if (ones != 1) return false;
        values[ix(p)] = found;
    }
    return true;
}

}  // namespace

MixtureModel induced_binary_model(const DaryModel& m, const ReducedGraph& reduced, double eta) {
    const Dag& bg = reduced.binary;
    const AlphabetSpec& spec = reduced.spec;
    const Dag& g = m.dag();
    std::vector<std::vector<std::vector<double>>> tables(
        static_cast<std::size_t>(m.k()), std::vector<std::vector<double>>(bg.n()));
    std::vector<int> values(static_cast<std::size_t>(g.n()), 0);
    for (int v = 0; v < g.n(); ++v) {
        const VertexId orig{v};
        for (int b = 0; b < spec.d; ++b) {
            const VertexId w = spec.binary(orig, b);
            const VertexSet& pa = bg.parents(w);
            const std::size_t masks = std::size_t{1} << pa.size();
            for (int u = 0; u < m.k(); ++u) tables[u][ix(w)].resize(masks);
            Assignment bits(bg.n());
            for (std::size_t mask = 0; mask < masks; ++mask) {
                for (std::size_t i = 0; i < pa.size(); ++i) bits.set(pa[i], (mask >> i) & 1U);
                bool taken = false;
                for (int a = 0; a < b; ++a) taken = taken || bits.get(spec.binary(orig, a)) == 1;
                const bool parents_ok = one_hot_parents(g, spec, orig, bits, values);
                for (int u = 0; u < m.k(); ++u) {
                    double p;
                    if (taken) {
                        p = 0.0;
                    } else if (!parents_ok) {
                        p = 0.5;
                    } else {
                        const auto& row = m.row(u, orig, m.config_of(orig, values));
                        double rest = 0.0;
                        for (int a = b; a < spec.d; ++a) rest += row[static_cast<std::size_t>(a)];
                        p = b == spec.d - 1 ? 1.0 : row[static_cast<std::size_t>(b)] / rest;
                    }
                    tables[u][ix(w)][mask] = std::clamp(p, eta, 1.0 - eta);
                }
            }
        }
    }
    return MixtureModel(bg, m.weights(), std::move(tables));
}

DaryModel lift_parameters(const MixtureModel& binary, const ReducedGraph& reduced, const Dag& g,
                          double lift_tol) {
    const AlphabetSpec& spec = reduced.spec;
    const int k = binary.k();
    std::vector<std::vector<std::vector<std::vector<double>>>> tables(
        static_cast<std::size_t>(k), std::vector<std::vector<std::vector<double>>>(g.n()));
    Assignment bits(spec.binary_count());
    for (int v = 0; v < g.n(); ++v) {
        const VertexId orig{v};
        const VertexSet& pa = g.parents(orig);
        std::size_t rows = 1;
        for (std::size_t i = 0; i < pa.size(); ++i) rows *= static_cast<std::size_t>(spec.d);
        for (int u = 0; u < k; ++u) tables[u][v].resize(rows);
        for (std::size_t config = 0; config < rows; ++config) {
            std::size_t rest = config;
            for (VertexId p : pa) {
                const int value = static_cast<int>(rest % static_cast<std::size_t>(spec.d));
                rest /= static_cast<std::size_t>(spec.d);
                for (int a = 0; a < spec.d; ++a) bits.set(spec.binary(p, a), a == value ? 1 : 0);
            }
            for (int u = 0; u < k; ++u) {
                std::vector<double> row(static_cast<std::size_t>(spec.d));
                for (int b = 0; b < spec.d; ++b) {
                    double p = 1.0;
                    for (int a = 0; a < spec.d; ++a) bits.set(spec.binary(orig, a), a == b ? 1 : 0);
                    for (int a = 0; a < spec.d; ++a) p *= binary.factor(u, spec.binary(orig, a), bits);
                    row[static_cast<std::size_t>(b)] = p;
                }
                const double mass = std::accumulate(row.begin(), row.end(), 0.0);
                if (1.0 - mass > lift_tol) {
                    throw Error(ErrorCode::NonOneHotSupport,
                                "vertex " + std::to_string(v) + " source " + std::to_string(u) +
                                    " puts " + std::to_string(1.0 - mass) + " on non-one-hot patterns");
                }
                for (double& p : row) p /= mass;
                tables[u][v][config] = std::move(row);
            }
        }
    }
    return DaryModel(g, spec.d, binary.weights(), std::move(tables));
}

DarySamples sample_dary(const DaryModel& m, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    DarySamples out;
    out.n = m.n();
    out.cells.resize(count * static_cast<std::size_t>(m.n()));
    std::vector<int> values(static_cast<std::size_t>(m.n()), 0);
    for (std::size_t r = 0; r < count; ++r) {
        double x = unit(rng);
        int u = 0;
        while (u + 1 < m.k() && x >= m.weights()[u]) {
            x -= m.weights()[u];
            ++u;
        }
        for (VertexId v : m.dag().topo_order()) {
            const auto& row = m.row(u, v, m.config_of(v, values));
            double y = unit(rng);
            int value = 0;
            while (value + 1 < m.d() && y >= row[static_cast<std::size_t>(value)]) {
                y -= row[static_cast<std::size_t>(value)];
                ++value;
            }
            values[ix(v)] = value;
            out.cells[r * static_cast<std::size_t>(m.n()) + ix(v)] = value;
        }
    }
    return out;
}

SampleSet encode_samples(const DarySamples& rows, const AlphabetSpec& spec) {
    SampleSet out;
    out.n = spec.binary_count();
    out.cells.assign(rows.size() * static_cast<std::size_t>(out.n), 0);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (int v = 0; v < spec.n; ++v) {
            const int value = rows.cells[r * static_cast<std::size_t>(spec.n) + static_cast<std::size_t>(v)];
            out.cells[r * static_cast<std::size_t>(out.n) + ix(spec.binary(VertexId{v}, value))] = 1;
        }
    }
    return out;
}

double max_abs_error_up_to_permutation(const DaryModel& truth, const DaryModel& recovered) {
    if (truth.k() != recovered.k() || truth.n() != recovered.n() || truth.d() != recovered.d())
        throw Error(ErrorCode::ShapeMismatch, "d-ary models differ in shape");
    const int k = truth.k();
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double worst = 0.0;
        for (int u = 0; u < k; ++u) {
            worst = std::max(worst, std::abs(truth.weights()[u] - recovered.weights()[perm[u]]));
            for (int v = 0; v < truth.n(); ++v) {
                for (std::size_t c = 0; c < truth.configs(VertexId{v}); ++c) {
                    const auto& a = truth.row(u, VertexId{v}, c);
                    const auto& b = recovered.row(perm[u], VertexId{v}, c);
                    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
                }
            }
        }
        best = std::min(best, worst);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace mixbnd
