#ifndef MIXBND_RUN_BUILDER_HPP
#define MIXBND_RUN_BUILDER_HPP

#include "mixbnd/dag.hpp"
#include "mixbnd/runs.hpp"

namespace mixbnd {

// Centers, central sweeps over each center's boundary, then one run per
// parent assignment of every other vertex. Unassigned choices are 0.
// Retries other center sets and vertex orders; the first failure is rethrown.
RunCollection build_generic(const Dag& g, int n_mp);

// ODD / EVEN / LINK defaults, single-bit sweeps and TAIL runs on V1 -> ... -> Vn.
RunCollection build_path(const Dag& g, int n_mp);

// 1 + n_mp * 2^gamma + n * 2^max_in_degree
long long generic_size_bound(const Dag& g, int n_mp);
long long path_size(int n, int n_mp);

}  // namespace mixbnd

#endif
