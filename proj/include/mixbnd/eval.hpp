#ifndef MIXBND_EVAL_HPP
#define MIXBND_EVAL_HPP

#include <vector>

#include "mixbnd/model.hpp"

namespace mixbnd {

struct Comparison {
    std::vector<int> perm;  // perm[u]: recovered source matched to true source u
    double max_abs_param = 0.0;
    double mean_abs_param = 0.0;
    double max_rel_param = 0.0;
    double mean_rel_param = 0.0;
    double max_abs_weight = 0.0;
    double max_rel_weight = 0.0;
    // Larger of the relative errors on P(v=1|pa) and P(v=0|pa), [u][v][mask],
    // indexed by true source.
    std::vector<std::vector<std::vector<double>>> rel_error;
    std::vector<double> weight_rel_error;
};

// Minimizes the max-abs CPT error over source permutations: exhaustive for
// k <= 8, otherwise a minimum-cost assignment on summed abs error.
Comparison compare_models(const MixtureModel& truth, const MixtureModel& recovered);

// Total variation between the full joints of two mixtures on the same n.
double joint_total_variation(const MixtureModel& a, const MixtureModel& b);

// Hungarian method; returns col[r] for each row r of a square cost matrix.
std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost);

}  // namespace mixbnd

#endif
