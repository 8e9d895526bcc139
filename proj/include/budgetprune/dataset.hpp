#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace budgetprune {

// Dense labeled sample matrix. Original label values (any finite reals) are
// remapped to contiguous class ids 0..num_classes-1 in ascending value order.
struct Dataset {
    std::vector<double> values;          // row-major, size() * num_features
    std::vector<int> labels;             // class ids
    std::vector<double> original_labels; // class id -> original label value
    int num_features = 0;
    int num_classes = 0;

    std::size_t size() const { return labels.size(); }
    double at(std::size_t i, int k) const { return values[i * static_cast<std::size_t>(num_features) + k]; }
    std::span<const double> row(std::size_t i) const {
        return {values.data() + i * static_cast<std::size_t>(num_features),
                static_cast<std::size_t>(num_features)};
    }
    Dataset subset(const std::vector<std::size_t>& indices) const;
};

// Builds a dataset from raw rows and labels; validates finiteness and maps labels.
Dataset make_dataset(std::vector<double> values, const std::vector<double>& raw_labels, int num_features);

// CSV with a header row; `label_column` names the label column, every other
// column is a feature in file order.
Dataset load_csv(const std::string& path, const std::string& label_column);

// svmlight/libsvm sparse text: "label idx:value ...", 1-based indices.
// Missing entries are zero. num_features can force a wider matrix (0 = infer).
Dataset load_svmlight(const std::string& path, int num_features = 0);

// Per-feature acquisition costs, optionally grouped. When groups are present
// the acquisition cost is charged once per group per example, so all cost
// accounting switches to group granularity ("units"). Without groups each
// feature is its own unit.
struct CostModel {
    std::vector<double> feature_costs;
    std::vector<int> group_of;        // per feature; empty when ungrouped
    std::vector<double> group_costs;  // per group id

    static CostModel uniform(int num_features, double cost = 1.0);
    // CSV rows "feature_index,cost[,group_id]" with 0-based indices. Every
    // feature must be covered; rows of one group must agree on the cost.
    static CostModel load(const std::string& path, int num_features);

    bool grouped() const { return !group_of.empty(); }
    int num_features() const { return static_cast<int>(feature_costs.size()); }
    int num_units() const { return grouped() ? static_cast<int>(group_costs.size()) : num_features(); }
    int unit_of(int feature) const { return grouped() ? group_of[feature] : feature; }
    double unit_cost(int unit) const { return grouped() ? group_costs[unit] : feature_costs[unit]; }
};

} // namespace budgetprune
