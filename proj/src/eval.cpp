#include "mixbnd/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mixbnd/error.hpp"

namespace mixbnd {

std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost) {
    const int n = static_cast<int>(cost.size());
    const double inf = std::numeric_limits<double>::infinity();
    // 1-based potentials; way/match over columns with a virtual column 0.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> match(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = match[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> col(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j) col[match[j] - 1] = j - 1;
    return col;
}

namespace {

void check_shapes(const MixtureModel& a, const MixtureModel& b) {
    if (a.k() != b.k() || a.n() != b.n())
        throw Error(ErrorCode::ShapeMismatch, "models differ in k or n");
    for (int v = 0; v < a.n(); ++v) {
        if (!(a.dag().parents(VertexId{v}) == b.dag().parents(VertexId{v})))
            throw Error(ErrorCode::ShapeMismatch, "parents of vertex " + std::to_string(v) + " differ");
    }
}

double max_abs_between(const MixtureModel& a, int ua, const MixtureModel& b, int ub) {
    double worst = 0.0;
    for (int v = 0; v < a.n(); ++v) {
        const auto& ta = a.cpt(ua, VertexId{v}).table;
        const auto& tb = b.cpt(ub, VertexId{v}).table;
        for (std::size_t m = 0; m < ta.size(); ++m) worst = std::max(worst, std::abs(ta[m] - tb[m]));
    }
    return worst;
}

double sum_abs_between(const MixtureModel& a, int ua, const MixtureModel& b, int ub) {
    double total = 0.0;
    for (int v = 0; v < a.n(); ++v) {
        const auto& ta = a.cpt(ua, VertexId{v}).table;
        const auto& tb = b.cpt(ub, VertexId{v}).table;
        for (std::size_t m = 0; m < ta.size(); ++m) total += std::abs(ta[m] - tb[m]);
    }
    return total;
}

}  // namespace

Comparison compare_models(const MixtureModel& truth, const MixtureModel& recovered) {
    check_shapes(truth, recovered);
    const int k = truth.k();
    std::vector<int> best(static_cast<std::size_t>(k));
    std::iota(best.begin(), best.end(), 0);
    if (k <= 8) {
        std::vector<std::vector<double>> pair(k, std::vector<double>(k));
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b) pair[a][b] = max_abs_between(truth, a, recovered, b);
        std::vector<int> perm = best;
        double best_cost = std::numeric_limits<double>::infinity();
        do {
            double cost = 0.0;
            for (int u = 0; u < k; ++u) cost = std::max(cost, pair[u][perm[u]]);
            if (cost < best_cost) {
                best_cost = cost;
                best = perm;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
    } else {
        std::vector<std::vector<double>> cost(k, std::vector<double>(k));
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b) cost[a][b] = sum_abs_between(truth, a, recovered, b);
        best = min_cost_assignment(cost);
    }

    Comparison c;
    c.perm = best;
    c.rel_error.assign(static_cast<std::size_t>(k), std::vector<std::vector<double>>(truth.n()));
    std::size_t entries = 0;
    for (int u = 0; u < k; ++u) {
        for (int v = 0; v < truth.n(); ++v) {
            const auto& tt = truth.cpt(u, VertexId{v}).table;
            const auto& tr = recovered.cpt(best[u], VertexId{v}).table;
            for (std::size_t m = 0; m < tt.size(); ++m) {
                const double abs_err = std::abs(tt[m] - tr[m]);
                const double rel = std::max(abs_err / tt[m], abs_err / (1.0 - tt[m]));
                c.rel_error[u][v].push_back(rel);
                c.max_abs_param = std::max(c.max_abs_param, abs_err);
                c.max_rel_param = std::max(c.max_rel_param, rel);
                c.mean_abs_param += abs_err;
                c.mean_rel_param += rel;
                ++entries;
            }
        }
        const double tw = truth.weights()[u];
        const double err = std::abs(tw - recovered.weights()[best[u]]);
        c.max_abs_weight = std::max(c.max_abs_weight, err);
        c.weight_rel_error.push_back(err / tw);
        c.max_rel_weight = std::max(c.max_rel_weight, err / tw);
    }
    if (entries) {
        c.mean_abs_param /= static_cast<double>(entries);
        c.mean_rel_param /= static_cast<double>(entries);
    }
    return c;
}

double joint_total_variation(const MixtureModel& a, const MixtureModel& b) {
    if (a.n() != b.n()) throw Error(ErrorCode::ShapeMismatch, "models differ in n");
    if (a.n() > kMaxFreeVertices) {
        throw Error(ErrorCode::TooManyFreeVertices,
                    std::to_string(a.n()) + " vertices exceed the enumeration guard");
    }
    const int n = a.n();
    Assignment x(n);
    double tv = 0.0;
    for (std::size_t bits = 0; bits < (std::size_t{1} << n); ++bits) {
        for (int v = 0; v < n; ++v) x.set(VertexId{v}, (bits >> v) & 1U);
        double pa = 0.0, pb = 0.0;
        for (int u = 0; u < a.k(); ++u) pa += a.weights()[u] * within_source_joint(a, u, x);
        for (int u = 0; u < b.k(); ++u) pb += b.weights()[u] * within_source_joint(b, u, x);
        tv += std::abs(pa - pb);
    }
    return tv / 2.0;
}

}  // namespace mixbnd
