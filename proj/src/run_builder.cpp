#include "mixbnd/run_builder.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <set>

#include "mixbnd/error.hpp"

namespace mixbnd {

namespace {

std::string bits_of(const VertexSet& s, const Assignment& a) {
    std::string out;
    for (VertexId v : s) out += a.get(v) ? '1' : '0';
    return out;
}

// Collects runs, skipping exact duplicates.
struct RunList {
    std::vector<Run> runs;
    std::vector<std::string> labels;
    std::set<std::string> seen;

    void add(Run r, std::string label) {
        if (!seen.insert(encode_run(r)).second) return;
        runs.push_back(std::move(r));
        labels.push_back(std::move(label));
    }
};

}  // namespace

long long generic_size_bound(const Dag& g, int n_mp) {
    return 1 + static_cast<long long>(n_mp) * (1LL << g.gamma()) +
           static_cast<long long>(g.n()) * (1LL << g.max_in_degree());
}

long long path_size(int n, int n_mp) {
    return 3 + (n_mp - 1) + n_mp + 2LL * std::max(0, n - 2 * n_mp);
}

namespace {

RunCollection generic_attempt(const Dag& g, int n_mp, const VertexSet& centers, bool deepest_first) {
    const int depth_cap = 3 * n_mp;
    const int n = g.n();
    int center_depth = 0;
    VertexSet near;  // centers and their boundaries
    for (VertexId x : centers) {
        center_depth = std::max(center_depth, g.depth(x));
        near = near.unite(g.markov_boundary(x));
        near.insert(x);
    }

    std::vector<VertexId> by_depth;
    for (int v = 0; v < n; ++v) by_depth.push_back(VertexId{v});
    std::stable_sort(by_depth.begin(), by_depth.end(),
                     [&](VertexId a, VertexId b) { return g.depth(a) < g.depth(b); });

    const Assignment zeros = [&] {
        Assignment a(n);
        for (int v = 0; v < n; ++v) a.set(VertexId{v}, 0);
        return a;
    }();

    // Every vertex is bottom in all of its runs or in none of them.
    enum Role : std::int8_t { kUnset, kInner, kBottom };
    std::vector<Role> role(static_cast<std::size_t>(n), kUnset);
    auto fits = [&](const Run& r) {
        if (static_cast<int>(r.independent.size()) < n_mp || !is_well_formed(g, r)) return false;
        for (VertexId v : r.independent) {
            const Role want = r.bottom.contains(v) ? kBottom : kInner;
            if (role[ix(v)] != kUnset && role[ix(v)] != want) return false;
            if (want == kInner && g.depth(v) > depth_cap) return false;
        }
        return true;
    };
    auto commit = [&](const Run& r) {
        for (VertexId v : r.independent) role[ix(v)] = r.bottom.contains(v) ? kBottom : kInner;
    };

    // A member deeper than every center keeps the centers non-bottom.
    VertexSet central = centers;
    for (VertexId z : by_depth) {
        if (near.contains(z) || g.depth(z) <= center_depth) continue;
        VertexSet with = centers;
        with.insert(z);
        if (fits(make_run(g, with, zeros))) {
            central = with;
            break;
        }
    }
    Run a0 = make_run(g, central, zeros);
    if (!fits(a0)) throw Error(ErrorCode::IllFormedRun, "default central run " + encode_run(a0));
    commit(a0);
    const VertexSet central_cond = a0.assignment.keys();
    RunList list;
    list.add(a0, "default");

    for (VertexId x : centers) {
        const VertexSet swept = g.markov_boundary(x).intersect(central_cond);
        const std::size_t combos = std::size_t{1} << swept.size();
        for (std::size_t bits = 1; bits < combos; ++bits) {
            Assignment values = zeros;
            for (std::size_t i = 0; i < swept.size(); ++i) values.set(swept[i], (bits >> i) & 1U);
            list.add(make_run(g, central, values),
                     "sweep x=" + std::to_string(x.value) + " mb=" + bits_of(swept, values));
        }
    }

    // Center subsets, largest first.
    std::vector<VertexSet> kept;
    for (std::size_t size = centers.size() + 1; size-- > 0;) {
        for (std::size_t mask = 0; mask < (std::size_t{1} << centers.size()); ++mask) {
            if (static_cast<std::size_t>(std::popcount(mask)) != size) continue;
            std::vector<VertexId> s;
            for (std::size_t i = 0; i < centers.size(); ++i)
                if ((mask >> i) & 1U) s.push_back(centers[i]);
            kept.emplace_back(std::move(s));
        }
    }

    std::vector<VertexId> pending = by_depth;
    if (deepest_first) std::reverse(pending.begin(), pending.end());
    for (VertexId y : pending) {
        if (centers.contains(y)) continue;
        const VertexSet& pa = g.parents(y);
        const std::size_t combos = std::size_t{1} << pa.size();
        auto cover = [&](const VertexSet& i, std::size_t bits) {
            Assignment values = zeros;
            for (std::size_t p = 0; p < pa.size(); ++p) values.set(pa[p], (bits >> p) & 1U);
            return make_run(g, i, values);
        };
        auto acceptable = [&](const VertexSet& i, bool need_link) {
            for (std::size_t bits = 0; bits < combos; ++bits) {
                const Run r = cover(i, bits);
                if (!fits(r)) return false;
                bool linked = !need_link;
                for (const Run& q : list.runs) {
                    if (!alignment_variables(g, q, r).empty()) {
                        linked = true;
                        break;
                    }
                }
                if (!linked) return false;
            }
            return true;
        };

        // Prefer runs that already share an alignment variable with the list;
        // otherwise leave linking to later runs.
        std::optional<VertexSet> chosen;
        for (int need_link = 1; need_link >= 0 && !chosen; --need_link) {
            for (const VertexSet& s : kept) {
                if (s.intersects(g.markov_boundary(y))) continue;
                VertexSet base = s;
                base.insert(y);
                if (acceptable(base, need_link)) {
                    chosen = base;
                    break;
                }
                // Extra members: deeper vertices first, then the rest, then pairs.
                std::vector<VertexId> extra;
                for (VertexId z : by_depth)
                    if (g.depth(z) > g.depth(y) && !base.contains(z)) extra.push_back(z);
                for (VertexId z : by_depth)
                    if (g.depth(z) <= g.depth(y) && !base.contains(z) && !g.markov_boundary(y).contains(z))
                        extra.push_back(z);
                for (VertexId z : extra) {
                    VertexSet with = base;
                    with.insert(z);
                    if (acceptable(with, need_link)) {
                        chosen = with;
                        break;
                    }
                }
                for (std::size_t a = 0; a < extra.size() && !chosen; ++a) {
                    for (std::size_t b = a + 1; b < extra.size(); ++b) {
                        VertexSet with = base;
                        with.insert(extra[a]);
                        with.insert(extra[b]);
                        if (acceptable(with, need_link)) {
                            chosen = with;
                            break;
                        }
                    }
                }
                if (chosen) break;
            }
        }
        if (!chosen) {
            VertexSet base = centers.minus(g.markov_boundary(y));
            base.insert(y);
            throw Error(ErrorCode::IllFormedRun, "no well-formed run for vertex " + std::to_string(y.value) +
                                                     ", tried " + encode_run(make_run(g, base, zeros)));
        }
        for (std::size_t bits = 0; bits < combos; ++bits) {
            const Run r = cover(*chosen, bits);
            commit(r);
            list.add(r, "cover y=" + std::to_string(y.value) + " pa=" + bits_of(pa, r.assignment));
        }
    }
    return build_spanning_tree(g, std::move(list.runs), 0, std::move(list.labels));
}

}  // namespace

RunCollection build_generic(const Dag& g, int n_mp) {
    constexpr std::size_t kCenterTries = 16;
    const std::vector<VertexSet> options = center_options(g, n_mp, 3 * n_mp, kCenterTries);
    std::optional<Error> first;
    for (const VertexSet& centers : options) {
        for (bool deepest_first : {true, false}) {
            try {
                return generic_attempt(g, n_mp, centers, deepest_first);
            } catch (const Error& e) {
                if (!first) first = e;
            }
        }
    }
    throw *first;
}

RunCollection build_path(const Dag& g, int n_mp) {
    if (!g.is_path()) throw Error(ErrorCode::NotAPath, "graph is not V0 -> V1 -> ... -> Vn-1");
    const int n = g.n();
    // With n_mp = 2 the sweep of the last odd vertex shares no aligned vertex
    // with any other run.
    if (n_mp < 3) throw Error(ErrorCode::PathTooShort, "path construction needs n_mp >= 3");
    if (n < 2 * n_mp) {
        throw Error(ErrorCode::PathTooShort, "path of " + std::to_string(n) +
                                                 " vertices needs at least " +
                                                 std::to_string(2 * n_mp));
    }
    // Names below are 1-indexed: V(i) is vertex i - 1.
    auto V = [](int i) { return VertexId{i - 1}; };
    VertexSet odd, even;
    for (int i = 1; i <= 2 * n_mp; ++i) (i % 2 ? odd : even).insert(V(i));
    VertexSet link = even;
    link.erase(V(2));
    link.insert(V(1));

    Assignment zeros(n);
    for (int v = 0; v < n; ++v) zeros.set(VertexId{v}, 0);
    auto name = [](const char* base, int i) { return std::string(base) + "[V" + std::to_string(i) + "]"; };

    RunList list;
    auto add = [&](const VertexSet& i, const Assignment& values, std::string label) {
        Run r = make_run(g, i, values);
        if (!is_well_formed(g, r))
            throw Error(ErrorCode::IllFormedRun, label + " " + encode_run(r));
        list.add(std::move(r), std::move(label));
    };

    add(even, zeros, "EVEN");
    add(odd, zeros, "ODD");
    add(link, zeros, "LINK");
    for (int i = 1; i <= 2 * n_mp - 1; i += 2) {
        Assignment values = zeros;
        values.set(V(i), 1);
        add(even, values, name("ODD", i));
    }
    for (int i = 2; i <= 2 * n_mp - 2; i += 2) {
        Assignment values = zeros;
        values.set(V(i), 1);
        add(odd, values, name("EVEN", i));
    }
    // The last odd vertex is bottom in the ODD runs, so TAIL runs leave it out
    // to keep it from also appearing as a non-bottom vertex.
    VertexSet tail_base = odd;
    tail_base.erase(V(2 * n_mp - 1));
    for (int i = 2 * n_mp + 1; i <= n; ++i) {
        VertexSet members = tail_base;
        members.insert(V(i));
        for (int b = 0; b <= 1; ++b) {
            Assignment values = zeros;
            values.set(V(i - 1), b);
            add(members, values, "TAIL^" + std::to_string(b) + name("", i));
        }
    }
    return build_spanning_tree(g, std::move(list.runs), 0, std::move(list.labels));
}

}  // namespace mixbnd
