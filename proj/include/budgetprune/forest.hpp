#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "budgetprune/dataset.hpp"

namespace budgetprune {

using NodeId = int;

struct TreeNode {
    enum class Kind : std::uint8_t { Internal, Leaf };
    Kind kind = Kind::Leaf;
    int feature = -1;        // internal nodes only
    double threshold = 0.0;  // internal nodes only; branch left iff value <= threshold
    NodeId left = -1;
    NodeId right = -1;
    int depth = 0;
    std::int64_t sample_count = 0;  // |S_h| under the annotation sample set
    std::int64_t error_count = 0;   // e_h: annotated samples the node's majority label misclassifies
    std::vector<double> class_distribution;
    int predicted_label = 0;

    bool is_leaf() const { return kind == Kind::Leaf; }
};

// Binary decision tree. Nodes are stored in pre-order: the root is node 0 and
// each subtree occupies a contiguous id range.
struct DecisionTree {
    std::vector<TreeNode> nodes;
    int num_features = 0;

    int num_nodes() const { return static_cast<int>(nodes.size()); }
    const TreeNode& node(NodeId h) const { return nodes[h]; }
    TreeNode& node(NodeId h) { return nodes[h]; }
    // one past the last id of the subtree rooted at h
    NodeId subtree_end(NodeId h) const;
    int num_leaves() const;
};

struct Forest {
    std::vector<DecisionTree> trees;
    int num_features = 0;
    int num_classes = 0;

    int num_trees() const { return static_cast<int>(trees.size()); }
};

struct TrainParams {
    int num_trees = 1;
    int max_depth = -1;         // -1: unlimited
    int min_leaf = 1;
    int feature_subset = 0;     // features sampled per split; 0: all
    bool bootstrap = true;
    std::uint64_t seed = 0;
};

// Grows an entropy-reduction forest and annotates each tree with its in-bag
// samples (the full training set per tree when bootstrap is off).
// Deterministic for a fixed seed, including across thread counts.
Forest train_forest(const Dataset& samples, const TrainParams& params);

// Recomputes sample_count, error_count, class_distribution and predicted_label
// on every node from `samples`, which may differ from the growing set. Nodes
// no sample reaches get zero counts and inherit the parent's predicted label.
void annotate_statistics(DecisionTree& tree, const Dataset& samples);
void annotate_statistics(Forest& forest, const Dataset& samples);

// Root-to-leaf node-id path of one example.
std::vector<NodeId> route(const DecisionTree& tree, std::span<const double> example);

// Forward declaration; defined in pruning.hpp. Only the z values are read here.
struct PruningAssignment;

// Aggregated-distribution prediction: average the reached leaves' class
// distributions over all trees, return the argmax (ties -> lowest class id).
// A pruning, when given, truncates each path at its first z=1 node.
int predict(const Forest& forest, const PruningAssignment* pruning, std::span<const double> example);

// Sum of unit costs (features, or groups when grouped) acquired by the example
// across the whole forest; each unit is charged once.
double feature_cost(const Forest& forest, const PruningAssignment* pruning,
                    std::span<const double> example, const CostModel& costs);

struct EvaluationResult {
    double error_rate = 0.0;
    double mean_feature_cost = 0.0;
    double mean_unique_features = 0.0;
};

EvaluationResult evaluate(const Forest& forest, const PruningAssignment* pruning,
                          const Dataset& samples, const CostModel& costs);

// Entropy of a distribution in bits; zero entries contribute nothing.
double entropy_bits(std::span<const double> distribution);

} // namespace budgetprune
