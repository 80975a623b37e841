#ifndef MIXBND_MIXPROD_HPP
#define MIXBND_MIXPROD_HPP

#include <cstdint>
#include <vector>

#include "mixbnd/model.hpp"
#include "mixbnd/runs.hpp"

namespace mixbnd {

// Row i is the i-th member of the run's independent set (ascending); column u
// is a source under a labeling private to the run.
struct OracleOutput {
    int rows = 0;
    int k = 0;
    std::vector<double> m;  // row-major, rows x k
    std::vector<double> pi;
    bool converged = true;

    double at(int i, int u) const { return m[static_cast<std::size_t>(i * k + u)]; }
    double& at(int i, int u) { return m[static_cast<std::size_t>(i * k + u)]; }
};

class OracleBackend {
public:
    virtual ~OracleBackend() = default;
    virtual int k() const = 0;
    // Safe to call concurrently for distinct runs.
    virtual OracleOutput solve(const Run& run, std::size_t run_index) const = 0;
    // Probability of the conditioning event of a run.
    virtual double event_probability(const Assignment& cond) const = 0;
    virtual double default_sep_tol() const { return 1e-6; }
};

// Exact values by enumeration, columns shuffled per run.
class ExactBackend : public OracleBackend {
public:
    ExactBackend(MixtureModel model, std::uint64_t scramble_seed);

    int k() const override { return model_.k(); }
    OracleOutput solve(const Run& run, std::size_t run_index) const override;
    double event_probability(const Assignment& cond) const override;

    // Column c of the output for this run holds true source scramble(i)[c].
    std::vector<int> scramble(std::size_t run_index) const;
    // Unshuffled output.
    OracleOutput truth(const Run& run) const;
    const MixtureModel& model() const { return model_; }

private:
    MixtureModel model_;
    std::uint64_t scramble_seed_;
};

OracleOutput permute_columns(const OracleOutput& out, const std::vector<int>& source_of_column);

// Exact values with relative perturbations of size at most eps, applied so
// that both P(x=1) and P(x=0) stay within a factor 1 +- eps.
class NoisyBackend : public OracleBackend {
public:
    NoisyBackend(MixtureModel model, double eps, std::uint64_t seed);

    int k() const override { return exact_.k(); }
    OracleOutput solve(const Run& run, std::size_t run_index) const override;
    double event_probability(const Assignment& cond) const override;

private:
    ExactBackend exact_;
    double eps_;
    std::uint64_t noise_seed_;
};

struct EmOptions {
    int restarts = 16;
    int max_iters = 100000;
    double tol = 1e-13;
    // 0 selects 200 * k * |I|.
    std::size_t min_postselect = 0;
};

struct EmFit {
    std::vector<double> theta;  // dims x k, row-major
    std::vector<double> weights;
    double log_likelihood = 0.0;
    bool converged = false;
    std::vector<double> trace;  // log-likelihood per iteration of the best restart
};

// Bernoulli-mixture EM on pattern counts: counts[p] is how often the bit
// pattern p (bit i = dimension i) was observed.
EmFit fit_bernoulli_mixture(const std::vector<double>& counts, int dims, int k,
                            const EmOptions& opts, std::uint64_t seed);

// Post-selects the rows matching a run's conditioning and fits EM.
class EmBackend : public OracleBackend {
public:
    EmBackend(SampleSet samples, int k, EmOptions opts, std::uint64_t seed);

    int k() const override { return k_; }
    OracleOutput solve(const Run& run, std::size_t run_index) const override;
    double event_probability(const Assignment& cond) const override;
    double default_sep_tol() const override { return 1e-2; }

private:
    SampleSet samples_;
    int k_;
    EmOptions opts_;
    std::uint64_t seed_;
};

}  // namespace mixbnd

#endif
