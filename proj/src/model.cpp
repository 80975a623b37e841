#include "mixbnd/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "mixbnd/error.hpp"

namespace mixbnd {

VertexSet Assignment::keys() const {
    std::vector<VertexId> out;
    for (std::size_t v = 0; v < values_.size(); ++v)
        if (values_[v] >= 0) out.push_back(VertexId{static_cast<int>(v)});
    return VertexSet(std::move(out));
}

bool Assignment::is_total() const {
    return std::all_of(values_.begin(), values_.end(), [](std::int8_t b) { return b >= 0; });
}

Assignment Assignment::restricted(const VertexSet& s) const {
    Assignment out(n());
    for (VertexId v : s) {
        if (!has(v)) {
            throw Error(ErrorCode::PartialAssignment,
                        "vertex " + std::to_string(v.value) + " unassigned");
        }
        out.set(v, get(v));
    }
    return out;
}

bool Assignment::agrees_on(const Assignment& other, const VertexSet& s) const {
    for (VertexId v : s)
        if (!has(v) || !other.has(v) || get(v) != other.get(v)) return false;
    return true;
}

std::size_t parent_mask(const VertexSet& parents, const Assignment& a) {
    std::size_t mask = 0;
    for (std::size_t i = 0; i < parents.size(); ++i) {
        VertexId p = parents[i];
        if (!a.has(p)) {
            throw Error(ErrorCode::PartialAssignment,
                        "parent " + std::to_string(p.value) + " unassigned");
        }
        if (a.get(p)) mask |= std::size_t{1} << i;
    }
    return mask;
}

MixtureModel::MixtureModel(Dag dag, std::vector<double> weights,
                           std::vector<std::vector<std::vector<double>>> tables)
    : dag_(std::move(dag)), weights_(std::move(weights)) {
    const int k = static_cast<int>(weights_.size());
    if (k < 1) throw Error(ErrorCode::ShapeMismatch, "model needs at least one source");
    double total = 0.0;
    for (double w : weights_) {
        if (!(w > 0.0)) throw Error(ErrorCode::ShapeMismatch, "weights must be positive");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw Error(ErrorCode::ShapeMismatch, "weights must sum to 1");
    if (static_cast<int>(tables.size()) != k)
        throw Error(ErrorCode::ShapeMismatch, "need one table set per source");
    cpts_.resize(k);
    for (int u = 0; u < k; ++u) {
        if (static_cast<int>(tables[u].size()) != dag_.n())
            throw Error(ErrorCode::ShapeMismatch, "need one table per vertex");
        for (int v = 0; v < dag_.n(); ++v) {
            const VertexSet& pa = dag_.parents(VertexId{v});
            auto& t = tables[u][v];
            if (t.size() != (std::size_t{1} << pa.size())) {
                throw Error(ErrorCode::ShapeMismatch,
                            "vertex " + std::to_string(v) + " table needs " +
                                std::to_string(std::size_t{1} << pa.size()) + " entries");
            }
            for (double& p : t) {
                if (!std::isfinite(p))
                    throw Error(ErrorCode::ShapeMismatch, "non-finite probability");
                p = std::clamp(p, kProbFloor, 1.0 - kProbFloor);
            }
            cpts_[u].push_back(Cpt{VertexId{v}, pa, std::move(t)});
        }
    }
}

double MixtureModel::factor(int u, VertexId v, const Assignment& a) const {
    const Cpt& c = cpts_[u][ix(v)];
    double p = c.table[parent_mask(c.parents, a)];
    return a.get(v) ? p : 1.0 - p;
}

double within_source_joint(const MixtureModel& m, int u, const Assignment& a) {
    if (!a.is_total()) throw Error(ErrorCode::PartialAssignment, "joint needs a total assignment");
    double p = 1.0;
    for (int v = 0; v < m.n(); ++v) p *= m.factor(u, VertexId{v}, a);
    return p;
}

// Only the ancestral closure of the keys matters; the rest sums to one.
std::vector<double> source_probabilities(const MixtureModel& m, const Assignment& partial) {
    const Dag& g = m.dag();
    VertexSet keys = partial.keys();
    VertexSet closure = keys.unite(g.ancestors(keys));
    VertexSet free = closure.minus(keys);
    if (static_cast<int>(free.size()) > kMaxFreeVertices) {
        throw Error(ErrorCode::TooManyFreeVertices,
                    std::to_string(free.size()) + " free vertices exceed the enumeration guard");
    }
    std::vector<VertexId> order;
    for (VertexId v : g.topo_order())
        if (closure.contains(v)) order.push_back(v);

    std::vector<double> out(static_cast<std::size_t>(m.k()), 0.0);
    Assignment a = partial;
    const std::size_t combos = std::size_t{1} << free.size();
    for (std::size_t bits = 0; bits < combos; ++bits) {
        for (std::size_t i = 0; i < free.size(); ++i) a.set(free[i], (bits >> i) & 1U);
        for (int u = 0; u < m.k(); ++u) {
            double p = 1.0;
            for (VertexId v : order) p *= m.factor(u, v, a);
            out[static_cast<std::size_t>(u)] += p;
        }
    }
    return out;
}

namespace {

Assignment merged(const Assignment& targets, const Assignment& given) {
    if (targets.n() != given.n())
        throw Error(ErrorCode::PartialAssignment, "assignment sizes differ");
    Assignment both = given;
    for (int v = 0; v < targets.n(); ++v) {
        VertexId id{v};
        if (!targets.has(id)) continue;
        if (given.has(id))
            throw Error(ErrorCode::PartialAssignment, "targets and given overlap");
        both.set(id, targets.get(id));
    }
    return both;
}

}  // namespace

double source_probability(const MixtureModel& m, int u, const Assignment& partial) {
    return source_probabilities(m, partial)[static_cast<std::size_t>(u)];
}

double mixture_probability(const MixtureModel& m, const Assignment& partial) {
    auto per = source_probabilities(m, partial);
    double total = 0.0;
    for (int u = 0; u < m.k(); ++u) total += m.weights()[u] * per[u];
    return total;
}

double conditional(const MixtureModel& m, int u, const Assignment& targets,
                   const Assignment& given) {
    Assignment both = merged(targets, given);
    double denom = source_probability(m, u, given);
    if (!(denom > 0.0))
        throw Error(ErrorCode::ZeroConditioningProbability, "conditioning event has probability 0");
    return source_probability(m, u, both) / denom;
}

double mixture_conditional(const MixtureModel& m, const Assignment& targets,
                           const Assignment& given) {
    Assignment both = merged(targets, given);
    double denom = mixture_probability(m, given);
    if (!(denom > 0.0))
        throw Error(ErrorCode::ZeroConditioningProbability, "conditioning event has probability 0");
    return mixture_probability(m, both) / denom;
}

std::vector<double> source_posterior(const MixtureModel& m, const Assignment& given) {
    auto per = source_probabilities(m, given);
    double total = 0.0;
    for (int u = 0; u < m.k(); ++u) {
        per[u] *= m.weights()[u];
        total += per[u];
    }
    if (!(total > 0.0))
        throw Error(ErrorCode::ZeroConditioningProbability, "conditioning event has probability 0");
    for (double& p : per) p /= total;
    return per;
}

SampleSet sample(const MixtureModel& m, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    SampleSet out;
    out.n = m.n();
    out.cells.resize(count * static_cast<std::size_t>(m.n()));
    out.sources.resize(count);
    Assignment a(m.n());
    for (std::size_t r = 0; r < count; ++r) {
        double x = unit(rng);
        int u = 0;
        while (u + 1 < m.k() && x >= m.weights()[u]) {
            x -= m.weights()[u];
            ++u;
        }
        out.sources[r] = u;
        for (VertexId v : m.dag().topo_order()) {
            const Cpt& c = m.cpt(u, v);
            int bit = unit(rng) < c.table[parent_mask(c.parents, a)] ? 1 : 0;
            a.set(v, bit);
            out.cells[r * static_cast<std::size_t>(m.n()) + ix(v)] = static_cast<std::uint8_t>(bit);
        }
    }
    return out;
}

MixtureModel random_separated_model(const Dag& g, int k, double zeta, std::uint64_t seed,
                                    const GeneratorOptions& opts) {
    if (k < 1) throw Error(ErrorCode::ShapeMismatch, "k must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> entry(opts.margin, 1.0 - opts.margin);
    std::vector<std::vector<std::vector<double>>> tables(
        k, std::vector<std::vector<double>>(g.n()));
    std::vector<double> draw(k);
    for (int v = 0; v < g.n(); ++v) {
        std::size_t masks = std::size_t{1} << g.parents(VertexId{v}).size();
        for (int u = 0; u < k; ++u) tables[u][v].resize(masks);
        for (std::size_t mask = 0; mask < masks; ++mask) {
            bool ok = false;
            for (int attempt = 0; attempt < opts.max_retries && !ok; ++attempt) {
                for (double& p : draw) p = entry(rng);
                ok = true;
                for (int a = 0; a < k && ok; ++a)
                    for (int b = a + 1; b < k && ok; ++b)
                        if (std::abs(draw[a] - draw[b]) < zeta) ok = false;
            }
            if (!ok) {
                throw Error(ErrorCode::GenerationTimeout,
                            "no " + std::to_string(zeta) + "-separated draw for vertex " +
                                std::to_string(v));
            }
            for (int u = 0; u < k; ++u) tables[u][v][mask] = draw[u];
        }
    }
    // Weights in [1, 2] before normalizing, so the smallest is at least 1/(2k-1).
    std::uniform_real_distribution<double> raw(1.0, 2.0);
    std::vector<double> weights(k);
    for (double& w : weights) w = raw(rng);
    double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    for (double& w : weights) w /= total;
    weights.back() = 1.0 - std::accumulate(weights.begin(), weights.end() - 1, 0.0);
    return MixtureModel(g, std::move(weights), std::move(tables));
}

double min_separation(const MixtureModel& m) {
    double gap = 1.0;
    for (int v = 0; v < m.n(); ++v) {
        const std::size_t masks = m.cpt(0, VertexId{v}).table.size();
        for (std::size_t mask = 0; mask < masks; ++mask)
            for (int a = 0; a < m.k(); ++a)
                for (int b = a + 1; b < m.k(); ++b)
                    gap = std::min(gap, std::abs(m.p1(a, VertexId{v}, mask) -
                                                 m.p1(b, VertexId{v}, mask)));
    }
    return gap;
}

}  // namespace mixbnd
