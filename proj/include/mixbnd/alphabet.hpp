#ifndef MIXBND_ALPHABET_HPP
#define MIXBND_ALPHABET_HPP

#include <cstdint>
#include <vector>

#include "mixbnd/dag.hpp"
#include "mixbnd/model.hpp"

namespace mixbnd {

// Vertex v with value b maps to binary vertex v * d + b.
struct AlphabetSpec {
    int n = 0;
    int d = 2;

    VertexId binary(VertexId v, int value) const { return VertexId{v.value * d + value}; }
    int binary_count() const { return n * d; }
};

struct ReducedGraph {
    Dag binary;
    AlphabetSpec spec;
};

// Each block is a directed clique in value order; every original edge becomes
// a complete bipartite set of block-to-block edges.
ReducedGraph clique_reduction(const Dag& g, int d);

Assignment one_hot_encode(const std::vector<int>& values, const AlphabetSpec& spec);
std::vector<int> one_hot_decode(const Assignment& bits, const AlphabetSpec& spec);

// d-ary mixture. Parent configurations are indexed in mixed radix d with the
// first (smallest) parent as the least significant digit.
class DaryModel {
public:
    // tables[u][v][config][value]; each row must sum to 1 within 1e-9.
    DaryModel(Dag dag, int d, std::vector<double> weights,
              std::vector<std::vector<std::vector<std::vector<double>>>> tables);

    const Dag& dag() const { return dag_; }
    int d() const { return d_; }
    int k() const { return static_cast<int>(weights_.size()); }
    int n() const { return dag_.n(); }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<double>& row(int u, VertexId v, std::size_t config) const {
        return tables_[u][ix(v)][config];
    }
    std::size_t configs(VertexId v) const { return tables_[0][ix(v)].size(); }
    std::size_t config_of(VertexId v, const std::vector<int>& values) const;

private:
    Dag dag_;
    int d_;
    std::vector<double> weights_;
    std::vector<std::vector<std::vector<std::vector<double>>>> tables_;
};

// Rows drawn uniformly from [margin, 1] and normalized; weights as in the
// binary generator.
DaryModel random_dary_model(const Dag& g, int d, int k, std::uint64_t seed, double margin = 0.1);

// Binary mixture on the reduced graph whose one-hot patterns reproduce m.
// Entries are smoothed into [eta, 1 - eta]; parent patterns that are not
// one-hot get 1/2.
MixtureModel induced_binary_model(const DaryModel& m, const ReducedGraph& reduced,
                                  double eta = 1e-7);

// Reads P_u(v = b | pa) from a binary model as the probability of the one-hot
// pattern of b in v's block given one-hot parent blocks, normalized over b.
// Throws NonOneHotSupport when more than lift_tol of a block's mass falls on
// other patterns.
DaryModel lift_parameters(const MixtureModel& binary, const ReducedGraph& reduced, const Dag& g,
                          double lift_tol = 1e-6);

struct DarySamples {
    int n = 0;
    std::vector<int> cells;  // row-major, n per row, values in [0, d)

    std::size_t size() const { return n == 0 ? 0 : cells.size() / static_cast<std::size_t>(n); }
};

DarySamples sample_dary(const DaryModel& m, std::size_t count, std::uint64_t seed);
SampleSet encode_samples(const DarySamples& rows, const AlphabetSpec& spec);

// Smallest max-abs difference over all d-ary table entries and weights,
// minimized over source permutations.
double max_abs_error_up_to_permutation(const DaryModel& truth, const DaryModel& recovered);

}  // namespace mixbnd

#endif
