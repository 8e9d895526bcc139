#pragma once

#include <utility>
#include <vector>

#include "budgetprune/forest.hpp"

namespace budgetprune {

// Routing record of one example through one tree, against the unpruned tree.
struct TreeExampleProfile {
    std::vector<NodeId> path;  // root..leaf
    // (feature, node) for the first node on the path testing that feature,
    // in path order; the leaf never appears. The keys are exactly the set of
    // features the example uses in this tree.
    std::vector<std::pair<int, NodeId>> first_use;

    bool uses_feature(int feature) const {
        for (const auto& [k, node] : first_use)
            if (k == feature) return true;
        return false;
    }
};

struct ProfileSet {
    std::vector<std::vector<TreeExampleProfile>> per_tree;  // [t][i]
    std::vector<int> labels;                                // labels of the profiled examples
    int num_examples = 0;
    int num_features = 0;

    const TreeExampleProfile& at(int t, int i) const { return per_tree[t][i]; }
};

ProfileSet build_profiles(const Forest& forest, const Dataset& samples);

} // namespace budgetprune
