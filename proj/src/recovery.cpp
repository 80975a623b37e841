#include "mixbnd/recovery.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <thread>

#include "mixbnd/error.hpp"

namespace mixbnd {

namespace {

constexpr double kDenominatorFloor = 1e-300;
constexpr int kExhaustiveLimit = 8;

std::string describe(const RunCollection& coll, int r) {
    return "run " + std::to_string(r) + " (" + encode_run(coll.runs[static_cast<std::size_t>(r)]) + ")";
}

double min_gap(const std::vector<double>& row) {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < row.size(); ++a)
        for (std::size_t b = a + 1; b < row.size(); ++b) gap = std::min(gap, std::abs(row[a] - row[b]));
    return gap;
}

struct Matching {
    std::vector<int> sigma;
    double cost = 0.0;
    double runner_up = std::numeric_limits<double>::infinity();
};

// sigma[u] = index into `raw` matched to reference entry u, minimizing the
// largest mismatch.
Matching match_rows(const std::vector<double>& ref, const std::vector<double>& raw) {
    const int k = static_cast<int>(ref.size());
    Matching best;
    best.cost = std::numeric_limits<double>::infinity();
    if (k > kExhaustiveLimit) {
        // In one dimension, pairing sorted orders minimizes the largest gap.
        std::vector<int> a(k), b(k);
        std::iota(a.begin(), a.end(), 0);
        std::iota(b.begin(), b.end(), 0);
        std::sort(a.begin(), a.end(), [&](int x, int y) { return ref[x] < ref[y]; });
        std::sort(b.begin(), b.end(), [&](int x, int y) { return raw[x] < raw[y]; });
        best.sigma.assign(k, 0);
        best.cost = 0.0;
        for (int i = 0; i < k; ++i) {
            best.sigma[a[i]] = b[i];
            best.cost = std::max(best.cost, std::abs(ref[a[i]] - raw[b[i]]));
        }
        return best;
    }
    std::vector<int> sigma(k);
    std::iota(sigma.begin(), sigma.end(), 0);
    do {
        double cost = 0.0;
        for (int u = 0; u < k; ++u) cost = std::max(cost, std::abs(ref[u] - raw[sigma[u]]));
        if (cost < best.cost) {
            best.runner_up = best.cost;
            best.cost = cost;
            best.sigma = sigma;
        } else if (cost < best.runner_up) {
            best.runner_up = cost;
        }
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return best;
}

std::vector<double> row_of(const OracleOutput& out, int i) {
    std::vector<double> row(static_cast<std::size_t>(out.k));
    for (int u = 0; u < out.k; ++u) row[u] = out.at(i, u);
    return row;
}

}  // namespace

AlignedOutputs align(const Dag& g, const RunCollection& coll,
                     const std::vector<OracleOutput>& outputs, double sep_tol) {
    const std::size_t count = coll.runs.size();
    if (outputs.size() != count)
        throw Error(ErrorCode::ShapeMismatch, "one oracle output per run required");
    AlignedOutputs res;
    res.outputs.resize(count);
    res.perms.resize(count);
    if (count == 0) return res;
    const int k = outputs[static_cast<std::size_t>(coll.root)].k;
    std::vector<int> identity(static_cast<std::size_t>(k));
    std::iota(identity.begin(), identity.end(), 0);
    res.outputs[static_cast<std::size_t>(coll.root)] = outputs[static_cast<std::size_t>(coll.root)];
    res.perms[static_cast<std::size_t>(coll.root)] = identity;

    for (const TreeEdge& e : coll.tree) {
        const Run& pr = coll.runs[static_cast<std::size_t>(e.parent)];
        const Run& cr = coll.runs[static_cast<std::size_t>(e.child)];
        const OracleOutput& parent = res.outputs[static_cast<std::size_t>(e.parent)];
        const OracleOutput& child = outputs[static_cast<std::size_t>(e.child)];
        if (child.k != k) throw Error(ErrorCode::ShapeMismatch, describe(coll, e.child) + " has wrong k");
        VertexSet candidates = e.candidates.empty() ? alignment_variables(g, pr, cr) : e.candidates;

        bool aligned = false;
        bool ambiguous = false;
        std::string report;
        for (VertexId x : candidates) {
            const std::vector<double> ref = row_of(parent, pr.independent.index_of(x));
            const std::vector<double> raw = row_of(child, cr.independent.index_of(x));
            const double gap = std::min(min_gap(ref), min_gap(raw));
            if (gap < sep_tol) {
                report += " v" + std::to_string(x.value) + " gap " + std::to_string(gap);
                continue;
            }
            Matching m = match_rows(ref, raw);
            if (m.runner_up - m.cost < sep_tol / 2) {
                ambiguous = true;
                report += " v" + std::to_string(x.value) + " ambiguous";
                continue;
            }
            res.perms[static_cast<std::size_t>(e.child)] = m.sigma;
            res.outputs[static_cast<std::size_t>(e.child)] = permute_columns(child, m.sigma);
            res.edge_variable.push_back(x.value);
            aligned = true;
            break;
        }
        if (!aligned) {
            const std::string msg = "edge " + describe(coll, e.parent) + " -> " +
                                    describe(coll, e.child) + ":" + report;
            throw Error(ambiguous ? ErrorCode::AmbiguousPermutation : ErrorCode::NotSeparated, msg);
        }
    }
    return res;
}

UnzipPlan plan_unzip(const Dag& g, const RunCollection& coll) {
    UnzipPlan plan;
    plan.entries.resize(static_cast<std::size_t>(g.n()));
    const auto& order = g.topo_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const VertexId v = *it;
        const std::size_t masks = std::size_t{1} << g.parents(v).size();
        auto& entries = plan.entries[ix(v)];
        entries.resize(masks);
        for (std::size_t mask = 0; mask < masks; ++mask) {
            std::vector<int> runs = covering_runs(g, coll, v, mask);
            if (runs.empty()) {
                throw Error(ErrorCode::MissingCoverage,
                            "vertex " + std::to_string(v.value) + " parent mask " + std::to_string(mask));
            }
            ParameterSource& src = entries[mask];
            src.run = runs.front();
            src.alternatives.assign(runs.begin() + 1, runs.end());
            const Run& r = coll.runs[static_cast<std::size_t>(src.run)];
            src.bottom = r.bottom.contains(v);
            if (src.bottom) continue;
            Assignment a = r.assignment;
            int deepest = 0;
            for (int y = 0; y <= 1; ++y) {
                a.set(v, y);
                for (VertexId c : g.children(v)) {
                    const std::size_t cm = parent_mask(g.parents(c), a);
                    deepest = std::max(deepest, plan.entries[ix(c)][cm].level);
                }
            }
            src.level = 1 + deepest;
        }
    }
    return plan;
}

namespace {

// P_u(v = 1 | pa) from one run's aligned output.
double unzip_one(const Dag& g, const Run& r, const OracleOutput& out, VertexId v, int u,
                 const std::vector<std::vector<std::vector<double>>>& tables) {
    const double m1 = out.at(r.independent.index_of(v), u);
    if (r.bottom.contains(v)) return m1;
    Assignment a = r.assignment;
    double q[2] = {1.0, 1.0};
    for (int y = 0; y <= 1; ++y) {
        a.set(v, y);
        for (VertexId c : g.children(v)) {
            const double p1 = tables[u][ix(c)][parent_mask(g.parents(c), a)];
            q[y] *= r.assignment.get(c) ? p1 : 1.0 - p1;
        }
    }
    const double num = m1 * q[0];
    const double den = num + (1.0 - m1) * q[1];
    if (!(den >= kDenominatorFloor)) {
        throw Error(ErrorCode::ZeroDenominator,
                    "vertex " + std::to_string(v.value) + " source " + std::to_string(u) +
                        " in run " + encode_run(r));
    }
    return num / den;
}

}  // namespace

UnzipResult unzip(const Dag& g, const RunCollection& coll, const AlignedOutputs& aligned,
                  const UnzipPlan& plan) {
    const int k = aligned.outputs.empty() ? 0 : aligned.outputs.front().k;
    UnzipResult res;
    res.tables.assign(static_cast<std::size_t>(k),
                      std::vector<std::vector<double>>(static_cast<std::size_t>(g.n())));
    res.discrepancy.resize(static_cast<std::size_t>(g.n()));
    const auto& order = g.topo_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const VertexId v = *it;
        const auto& entries = plan.entries[ix(v)];
        for (int u = 0; u < k; ++u) res.tables[u][ix(v)].resize(entries.size());
        res.discrepancy[ix(v)].assign(entries.size(), 0.0);
        for (std::size_t mask = 0; mask < entries.size(); ++mask) {
            const ParameterSource& src = entries[mask];
            for (int u = 0; u < k; ++u) {
                const std::size_t r = static_cast<std::size_t>(src.run);
                const double p = unzip_one(g, coll.runs[r], aligned.outputs[r], v, u, res.tables);
                res.tables[u][ix(v)][mask] = p;
                for (int alt : src.alternatives) {
                    const std::size_t ra = static_cast<std::size_t>(alt);
                    const double q = unzip_one(g, coll.runs[ra], aligned.outputs[ra], v, u, res.tables);
                    res.discrepancy[ix(v)][mask] = std::max(res.discrepancy[ix(v)][mask], std::abs(p - q));
                }
            }
        }
    }
    return res;
}

std::vector<double> recover_weights(const Dag& g, const RunCollection& coll,
                                    const AlignedOutputs& aligned,
                                    const std::vector<std::vector<std::vector<double>>>& tables,
                                    const OracleBackend& backend) {
    const int k = static_cast<int>(tables.size());
    if (k == 1) return {1.0};
    const Run& root = coll.runs[static_cast<std::size_t>(coll.root)];
    const std::vector<double>& pi = aligned.outputs[static_cast<std::size_t>(coll.root)].pi;
    std::vector<double> uniform(static_cast<std::size_t>(k), 1.0 / k);
    uniform.back() = 1.0 - std::accumulate(uniform.begin(), uniform.end() - 1, 0.0);
    const MixtureModel recovered(g, uniform, tables);
    const std::vector<double> given_u = source_probabilities(recovered, root.assignment);
    const double observed = backend.event_probability(root.assignment);
    if (!(observed > 0.0)) {
        throw Error(ErrorCode::ZeroConditioningProbability,
                    "root run " + encode_run(root) + " has an unobserved conditioning event");
    }
    std::vector<double> w(static_cast<std::size_t>(k));
    for (int u = 0; u < k; ++u) {
        if (!(given_u[u] > 0.0)) {
            throw Error(ErrorCode::ZeroConditioningProbability,
                        "recovered source " + std::to_string(u) + " gives the root event probability 0");
        }
        w[u] = std::max(pi[u] * observed / given_u[u], kProbFloor);
    }
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w) x /= total;
    w.back() = 1.0 - std::accumulate(w.begin(), w.end() - 1, 0.0);
    return w;
}

BoundLedger error_bound(const Dag& g, const RunCollection& coll, const UnzipPlan& plan,
                        int n_mp, double eps) {
    BoundLedger ledger;
    ledger.eps = eps;
    ledger.max_degree = g.max_degree();
    const double factor = 6.0 * (ledger.max_degree + 1);
    ledger.level.resize(plan.entries.size());
    ledger.bound.resize(plan.entries.size());
    for (std::size_t v = 0; v < plan.entries.size(); ++v) {
        for (const ParameterSource& src : plan.entries[v]) {
            ledger.level[v].push_back(src.level);
            ledger.bound[v].push_back(std::pow(factor, src.level) * eps);
        }
    }
    ledger.parameter_bound = std::pow(factor, 3 * n_mp) * eps;
    const double d2 = static_cast<double>(ledger.max_degree) * ledger.max_degree;
    ledger.weight_bound = 5.0 * d2 * eps;
    if (!coll.runs.empty()) {
        const Run& root = coll.runs[static_cast<std::size_t>(coll.root)];
        ledger.weight_hypothesis_met = static_cast<double>(root.assignment.keys().size()) < 2.0 * d2;
    }
    return ledger;
}

BoundLedger error_bound(const Dag& g, const RunCollection& coll, int n_mp, double eps) {
    return error_bound(g, coll, plan_unzip(g, coll), n_mp, eps);
}

int default_n_mp(int k) { return std::max(1, 3 * k - 3); }

std::vector<OracleOutput> run_oracle(const RunCollection& coll, const OracleBackend& backend,
                                     int jobs) {
    const std::size_t count = coll.runs.size();
    std::vector<OracleOutput> outputs(count);
    std::vector<std::exception_ptr> failures(count);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                outputs[i] = backend.solve(coll.runs[i], i);
            } catch (const Error& e) {
                failures[i] = std::make_exception_ptr(
                    Error(e.code(), describe(coll, static_cast<int>(i)) + ": " + e.what()));
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, jobs)), count);
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
    }
    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);
    return outputs;
}

RecoveredModel solve_mixbnd(const Dag& g, const RunCollection& coll,
                            const OracleBackend& backend, const SolveOptions& opts) {
    const int k = backend.k();
    const int n_mp = opts.n_mp > 0 ? opts.n_mp : default_n_mp(k);
    const double sep_tol = opts.sep_tol > 0.0 ? opts.sep_tol : backend.default_sep_tol();

    UnzipPlan plan = plan_unzip(g, coll);
    std::vector<OracleOutput> outputs = run_oracle(coll, backend, opts.jobs);
    Diagnostics diag;
    for (const OracleOutput& o : outputs)
        if (!o.converged) ++diag.unconverged_runs;
    AlignedOutputs aligned = align(g, coll, outputs, sep_tol);
    UnzipResult unz = unzip(g, coll, aligned, plan);
    std::vector<double> weights = recover_weights(g, coll, aligned, unz.tables, backend);

    for (const Run& r : coll.runs) diag.encodings.push_back(encode_run(r));
    diag.perms = aligned.perms;
    diag.edge_variable = aligned.edge_variable;
    diag.ledger = error_bound(g, coll, plan, n_mp, opts.eps);
    diag.plan = std::move(plan);
    for (const auto& row : unz.discrepancy)
        for (double d : row) diag.max_discrepancy = std::max(diag.max_discrepancy, d);
    diag.discrepancy = std::move(unz.discrepancy);
    return RecoveredModel{MixtureModel(g, std::move(weights), std::move(unz.tables)), std::move(diag)};
}

}  // namespace mixbnd
