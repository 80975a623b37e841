#ifndef MIXBND_MODEL_HPP
#define MIXBND_MODEL_HPP

#include <cstdint>
#include <vector>

#include "mixbnd/dag.hpp"

namespace mixbnd {

inline constexpr double kProbFloor = 1e-9;
inline constexpr int kMaxFreeVertices = 25;

// Partial map from vertices to bits; unset entries hold -1.
class Assignment {
public:
    Assignment() = default;
    explicit Assignment(int n) : values_(static_cast<std::size_t>(n), -1) {}

    int n() const { return static_cast<int>(values_.size()); }
    bool has(VertexId v) const { return values_[ix(v)] >= 0; }
    int get(VertexId v) const { return values_[ix(v)]; }
    void set(VertexId v, int bit) { values_[ix(v)] = static_cast<std::int8_t>(bit); }
    void clear(VertexId v) { values_[ix(v)] = -1; }

    VertexSet keys() const;
    bool is_total() const;
    // Restriction to s; every member of s must be assigned.
    Assignment restricted(const VertexSet& s) const;
    // True when every vertex of s is assigned here and in other, with equal bits.
    bool agrees_on(const Assignment& other, const VertexSet& s) const;

    bool operator==(const Assignment&) const = default;

private:
    std::vector<std::int8_t> values_;
};

// Bit i of the mask is the value of the i-th parent in ascending order.
std::size_t parent_mask(const VertexSet& parents, const Assignment& a);

struct Cpt {
    VertexId vertex;
    VertexSet parents;
    std::vector<double> table;  // P(v = 1 | mask), 2^|parents| entries
};

class MixtureModel {
public:
    // tables[u][v][mask] = P_u(v = 1 | mask). Entries are clamped into
    // [kProbFloor, 1 - kProbFloor]; weights must sum to 1.
    MixtureModel(Dag dag, std::vector<double> weights,
                 std::vector<std::vector<std::vector<double>>> tables);

    const Dag& dag() const { return dag_; }
    int k() const { return static_cast<int>(weights_.size()); }
    int n() const { return dag_.n(); }
    const std::vector<double>& weights() const { return weights_; }
    const Cpt& cpt(int u, VertexId v) const { return cpts_[u][ix(v)]; }
    double p1(int u, VertexId v, std::size_t mask) const { return cpts_[u][ix(v)].table[mask]; }
    // P_u(v = bit | parents as in a).
    double factor(int u, VertexId v, const Assignment& a) const;

private:
    Dag dag_;
    std::vector<double> weights_;
    std::vector<std::vector<Cpt>> cpts_;
};

struct SampleSet {
    int n = 0;
    std::vector<std::uint8_t> cells;  // row-major, n per row
    std::vector<int> sources;         // hidden labels when known, else empty

    std::size_t size() const { return n == 0 ? 0 : cells.size() / static_cast<std::size_t>(n); }
    const std::uint8_t* row(std::size_t r) const { return cells.data() + r * static_cast<std::size_t>(n); }
};

double within_source_joint(const MixtureModel& m, int u, const Assignment& a);

// P_u(partial) for every source, by enumeration over the unassigned
// ancestors of its keys.
std::vector<double> source_probabilities(const MixtureModel& m, const Assignment& partial);
double source_probability(const MixtureModel& m, int u, const Assignment& partial);
double mixture_probability(const MixtureModel& m, const Assignment& partial);

double conditional(const MixtureModel& m, int u, const Assignment& targets,
                   const Assignment& given);
double mixture_conditional(const MixtureModel& m, const Assignment& targets,
                           const Assignment& given);
// P(u | given) for every source.
std::vector<double> source_posterior(const MixtureModel& m, const Assignment& given);

SampleSet sample(const MixtureModel& m, std::size_t count, std::uint64_t seed);

struct GeneratorOptions {
    double margin = 0.05;
    int max_retries = 10000;
};

MixtureModel random_separated_model(const Dag& g, int k, double zeta, std::uint64_t seed,
                                    const GeneratorOptions& opts = {});

// Smallest |P_ui(v=1|pa) - P_uj(v=1|pa)| over all vertices, masks and source pairs.
double min_separation(const MixtureModel& m);

}  // namespace mixbnd

#endif
