#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "budgetprune/dataset.hpp"
#include "budgetprune/forest.hpp"
#include "budgetprune/profiles.hpp"

namespace budgetprune {

// One coupling pair (cost unit k, example i) that at least one tree uses.
struct CouplingPair {
    int unit = 0;
    int example = 0;
};

// One per-tree usage site of a coupling pair: the fictitious-leaf anchor.
struct PairUse {
    int pair_id = 0;
    NodeId first_node = 0;  // first node on the example's path testing the unit
};

// The 0-1 program over node variables z and usage variables w:
//
//   min  (1/NT) sum_t sum_h e_h z_h
//        + lambda * ( sum_k c_k (1/N) sum_i w_{k,i}
//                     + (1/N) sum_t sum_h |S_h| d_h z_h )      [optional term]
//   s.t. every root-to-leaf path holds exactly one z=1        (per tree)
//        w_tree + sum of z over predecessors of first use = 1 (per tree,unit,example)
//        w_tree <= w_global                                   (coupling)
//
// node_coeff folds the error and computational terms into one coefficient per
// node. Cost units are features, or groups when the cost model is grouped.
struct PruningProblem {
    const Forest* forest = nullptr;
    const ProfileSet* profiles = nullptr;
    const CostModel* costs = nullptr;
    double lambda = 0.0;
    bool include_compute_cost = false;
    int num_examples = 0;  // N: profiled example count
    int num_units = 0;

    std::vector<std::vector<double>> node_coeff;    // [t][h]
    std::vector<CouplingPair> pairs;                // pair_id -> (unit, example)
    std::vector<std::vector<PairUse>> tree_uses;    // [t], sorted by (first_node, unit, example)
    std::vector<std::vector<std::pair<int, int>>> pair_uses;  // [pair_id] -> (t, index into tree_uses[t])

    int num_pairs() const { return static_cast<int>(pairs.size()); }
    std::size_t num_tree_use_vars() const;
    std::size_t num_node_vars() const;
    // lambda * c_unit / N: objective coefficient of one w_global variable
    double pair_cost_coeff(int pair_id) const {
        return lambda * costs->unit_cost(pairs[pair_id].unit) / num_examples;
    }
};

PruningProblem build_problem(const Forest& forest, const ProfileSet& profiles,
                             const CostModel& costs, double lambda,
                             bool include_compute_cost = false);

// z: per (tree, node); w_tree: aligned with problem.tree_uses; w_global:
// per pair id. Baseline pruners produce only z; derive_usage fills in w.
struct PruningAssignment {
    std::vector<std::vector<std::uint8_t>> z;
    std::vector<std::vector<std::uint8_t>> w_tree;
    std::vector<std::uint8_t> w_global;
};

// Identity pruning: z=1 exactly at the original leaves, all usage on.
PruningAssignment identity_assignment(const PruningProblem& problem);

// Fills w_tree and w_global from z by the operational definition: a unit is
// used in a tree iff no predecessor of its first-use node is a pruned leaf.
PruningAssignment derive_usage(const PruningProblem& problem,
                               std::vector<std::vector<std::uint8_t>> z);

struct ValidityResult {
    bool valid = true;
    std::string violation;  // first violated constraint, human-readable
    explicit operator bool() const { return valid; }
};

ValidityResult is_valid(const PruningProblem& problem, const PruningAssignment& assignment);

struct ObjectiveValue {
    double error_term = 0.0;    // (1/NT) sum e_h z_h
    double feature_term = 0.0;  // lambda * sum_k c_k (1/N) sum_i w_{k,i}
    double compute_term = 0.0;  // lambda * (1/N) sum |S_h| d_h z_h, 0 unless enabled
    double total() const { return error_term + feature_term + compute_term; }
};

// Exact objective of a valid assignment, summed tree-major then by node id.
// Throws std::invalid_argument on an invalid assignment.
ObjectiveValue objective(const PruningProblem& problem, const PruningAssignment& assignment);

// As objective() but skips the validity check (solver-internal fast path).
ObjectiveValue objective_unchecked(const PruningProblem& problem, const PruningAssignment& assignment);

// Collapses every node with z=1 into a leaf (statistics kept) and drops its
// descendants. Node ids are re-assigned pre-order; the result is a valid tree.
DecisionTree apply_pruning(const DecisionTree& tree, const std::vector<std::uint8_t>& z);
Forest apply_pruning(const Forest& forest, const PruningAssignment& assignment);

} // namespace budgetprune
