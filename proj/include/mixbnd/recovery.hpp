#ifndef MIXBND_RECOVERY_HPP
#define MIXBND_RECOVERY_HPP

#include <string>
#include <vector>

#include "mixbnd/mixprod.hpp"
#include "mixbnd/model.hpp"
#include "mixbnd/runs.hpp"

namespace mixbnd {

struct AlignedOutputs {
    std::vector<OracleOutput> outputs;     // columns in the global labeling
    std::vector<std::vector<int>> perms;   // perms[r][u]: raw column of global source u
    std::vector<int> edge_variable;        // per tree edge, the vertex used
};

AlignedOutputs align(const Dag& g, const RunCollection& coll,
                     const std::vector<OracleOutput>& outputs, double sep_tol);

// Which run supplies each parameter, and the recursion depth of unzipping.
struct ParameterSource {
    int run = -1;
    bool bottom = false;
    int level = 0;
    std::vector<int> alternatives;  // further covering runs, for cross-checks
};

struct UnzipPlan {
    std::vector<std::vector<ParameterSource>> entries;  // [v][mask]
};

UnzipPlan plan_unzip(const Dag& g, const RunCollection& coll);

struct UnzipResult {
    std::vector<std::vector<std::vector<double>>> tables;  // [u][v][mask]
    std::vector<std::vector<double>> discrepancy;          // [v][mask]
};

UnzipResult unzip(const Dag& g, const RunCollection& coll, const AlignedOutputs& aligned,
                  const UnzipPlan& plan);

// Bayes' rule on the root run. The result sums to 1.
std::vector<double> recover_weights(const Dag& g, const RunCollection& coll,
                                    const AlignedOutputs& aligned,
                                    const std::vector<std::vector<std::vector<double>>>& tables,
                                    const OracleBackend& backend);

struct BoundLedger {
    double eps = 0.0;
    int max_degree = 0;
    std::vector<std::vector<int>> level;       // [v][mask]
    std::vector<std::vector<double>> bound;    // [v][mask]
    double parameter_bound = 0.0;              // (6(D+1))^(3 n_mp) eps
    double weight_bound = 0.0;                 // 5 D^2 eps
    bool weight_hypothesis_met = true;         // |C^root| < 2 D^2
};

BoundLedger error_bound(const Dag& g, const RunCollection& coll, const UnzipPlan& plan,
                        int n_mp, double eps);
BoundLedger error_bound(const Dag& g, const RunCollection& coll, int n_mp, double eps);

struct SolveOptions {
    double sep_tol = 0.0;  // <= 0 selects the backend default
    int jobs = 1;
    int n_mp = 0;          // 0 selects 3k - 3 (at least 1)
    double eps = 0.0;      // relative oracle error assumed by the ledger
};

struct Diagnostics {
    std::vector<std::string> encodings;         // per run
    std::vector<std::vector<int>> perms;        // per run
    std::vector<int> edge_variable;             // per tree edge
    UnzipPlan plan;
    std::vector<std::vector<double>> discrepancy;
    BoundLedger ledger;
    int unconverged_runs = 0;
    double max_discrepancy = 0.0;
};

struct RecoveredModel {
    MixtureModel model;
    Diagnostics diagnostics;
};

int default_n_mp(int k);

// Oracle outputs for every run, computed on `jobs` threads. Results are
// independent of the thread count.
std::vector<OracleOutput> run_oracle(const RunCollection& coll, const OracleBackend& backend,
                                     int jobs);

RecoveredModel solve_mixbnd(const Dag& g, const RunCollection& coll,
                            const OracleBackend& backend, const SolveOptions& opts);

}  // namespace mixbnd

#endif
