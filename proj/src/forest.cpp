#include "budgetprune/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "budgetprune/pruning.hpp"

namespace budgetprune {

namespace {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double entropy_from_counts(const std::vector<std::int64_t>& counts, std::int64_t total) {
    if (total <= 0) return 0.0;
    double h = 0.0;
    for (std::int64_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

class TreeGrower {
public:
    TreeGrower(const Dataset& data, const TrainParams& params, std::uint64_t tree_seed)
        : data_(data), params_(params), rng_(tree_seed) {}

    DecisionTree grow(std::vector<std::size_t> samples) {
        tree_.num_features = data_.num_features;
        grow_node(std::move(samples), 0);
        return std::move(tree_);
    }

private:
    // Modulo draw: uniform_int_distribution is implementation-defined, and
    // identical forests for identical seeds is a contract here.
    std::size_t draw(std::size_t n) { return static_cast<std::size_t>(rng_()) % n; }

    std::vector<int> candidate_features() {
        const int k = data_.num_features;
        const int m = (params_.feature_subset > 0 && params_.feature_subset < k)
                          ? params_.feature_subset
                          : k;
        std::vector<int> feats(static_cast<std::size_t>(k));
        std::iota(feats.begin(), feats.end(), 0);
        if (m < k) {
            for (int j = 0; j < m; ++j)
                std::swap(feats[j], feats[j + draw(static_cast<std::size_t>(k - j))]);
            feats.resize(static_cast<std::size_t>(m));
            std::sort(feats.begin(), feats.end());  // fixed evaluation order for tie-breaks
        }
        return feats;
    }

    struct Split {
        double gain = 0.0;
        int feature = -1;
        double threshold = 0.0;
    };

    // Best entropy-gain split over the candidate features; thresholds are
    // midpoints between consecutive distinct values. Ties keep the lowest
    // feature index, then the lowest threshold.
    Split find_split(const std::vector<std::size_t>& samples,
                     const std::vector<std::int64_t>& counts, double parent_entropy) {
        const std::int64_t n = static_cast<std::int64_t>(samples.size());
        const int num_classes = data_.num_classes;
        Split best;
        std::vector<std::pair<double, int>> column(samples.size());
        std::vector<std::int64_t> left_counts(static_cast<std::size_t>(num_classes));
        for (int k : candidate_features()) {
            for (std::size_t j = 0; j < samples.size(); ++j)
                column[j] = {data_.at(samples[j], k), data_.labels[samples[j]]};
            std::sort(column.begin(), column.end());
            if (column.front().first == column.back().first) continue;
            std::fill(left_counts.begin(), left_counts.end(), 0);
            std::int64_t left_n = 0;
            for (std::size_t j = 0; j + 1 < column.size(); ++j) {
                ++left_counts[column[j].second];
                ++left_n;
                if (column[j].first == column[j + 1].first) continue;
                if (left_n < params_.min_leaf || n - left_n < params_.min_leaf) continue;
                double weighted = static_cast<double>(left_n) / n * entropy_from_counts(left_counts, left_n);
                double right_h = 0.0;
                {
                    double h = 0.0;
                    for (int c = 0; c < num_classes; ++c) {
                        const std::int64_t rc = counts[c] - left_counts[c];
                        if (rc == 0) continue;
                        const double p = static_cast<double>(rc) / static_cast<double>(n - left_n);
                        h -= p * std::log2(p);
                    }
                    right_h = h;
                }
                weighted += static_cast<double>(n - left_n) / n * right_h;
                const double gain = parent_entropy - weighted;
                const double threshold = column[j].first + 0.5 * (column[j + 1].first - column[j].first);
                if (gain > best.gain) best = {gain, k, threshold};
            }
        }
        return best;
    }

    NodeId grow_node(std::vector<std::size_t> samples, int depth) {
        const NodeId id = static_cast<NodeId>(tree_.nodes.size());
        tree_.nodes.emplace_back();
        tree_.nodes[id].depth = depth;

        std::vector<std::int64_t> counts(static_cast<std::size_t>(data_.num_classes), 0);
        for (std::size_t i : samples) ++counts[data_.labels[i]];
        const std::int64_t n = static_cast<std::int64_t>(samples.size());
        const double parent_entropy = entropy_from_counts(counts, n);

        const bool depth_ok = params_.max_depth < 0 || depth < params_.max_depth;
        const bool splittable = depth_ok && parent_entropy > 0.0 &&
                                n >= 2 * static_cast<std::int64_t>(params_.min_leaf);
        Split split;
        if (splittable) split = find_split(samples, counts, parent_entropy);
        if (!splittable || split.feature < 0 || split.gain <= 0.0) return id;

        std::vector<std::size_t> left, right;
        for (std::size_t i : samples)
            (data_.at(i, split.feature) <= split.threshold ? left : right).push_back(i);
        samples.clear();
        samples.shrink_to_fit();

        tree_.nodes[id].kind = TreeNode::Kind::Internal;
        tree_.nodes[id].feature = split.feature;
        tree_.nodes[id].threshold = split.threshold;
        const NodeId l = grow_node(std::move(left), depth + 1);
        const NodeId r = grow_node(std::move(right), depth + 1);
        tree_.nodes[id].left = l;
        tree_.nodes[id].right = r;
        return id;
    }

    const Dataset& data_;
    const TrainParams& params_;
    std::mt19937_64 rng_;
    DecisionTree tree_;
};

NodeId walk_to_stop(const DecisionTree& tree, const std::vector<std::uint8_t>* z,
                    std::span<const double> example) {
    NodeId h = 0;
    while (true) {
        if (z && (*z)[h]) return h;
        const TreeNode& node = tree.node(h);
        if (node.is_leaf()) return h;
        h = example[node.feature] <= node.threshold ? node.left : node.right;
    }
}

} // namespace

NodeId DecisionTree::subtree_end(NodeId h) const {
    NodeId end = h;
    while (true) {
        const TreeNode& node = nodes[end];
        if (node.is_leaf()) return end + 1;
        end = node.right;
    }
}

int DecisionTree::num_leaves() const {
    int count = 0;
    for (const TreeNode& node : nodes)
        if (node.is_leaf()) ++count;
    return count;
}

Forest train_forest(const Dataset& samples, const TrainParams& params) {
    if (samples.size() == 0) throw std::invalid_argument("empty sample set");
    if (params.num_trees < 1) throw std::invalid_argument("num_trees must be >= 1");
    if (params.min_leaf < 1) throw std::invalid_argument("min_leaf must be >= 1");
    if (params.feature_subset > samples.num_features)
        throw std::invalid_argument("feature_subset exceeds feature count");
    for (double v : samples.values)
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite feature value");

    Forest forest;
    forest.num_features = samples.num_features;
    forest.num_classes = samples.num_classes;
    forest.trees.resize(static_cast<std::size_t>(params.num_trees));
    for (int t = 0; t < params.num_trees; ++t) {
        const std::uint64_t tree_seed = mix64(params.seed + 0x51ed270b * static_cast<std::uint64_t>(t + 1));
        std::mt19937_64 bag_rng(mix64(tree_seed));
        std::vector<std::size_t> in_bag(samples.size());
        if (params.bootstrap) {
            for (std::size_t& i : in_bag) i = static_cast<std::size_t>(bag_rng()) % samples.size();
        } else {
            std::iota(in_bag.begin(), in_bag.end(), std::size_t{0});
        }
        TreeGrower grower(samples, params, tree_seed);
        Dataset bag = samples.subset(in_bag);
        std::vector<std::size_t> all(bag.size());
        std::iota(all.begin(), all.end(), std::size_t{0});
        // grow on the bag so the in-bag annotation matches the growing set
        TreeGrower bag_grower(bag, params, tree_seed);
        forest.trees[t] = bag_grower.grow(std::move(all));
        annotate_statistics(forest.trees[t], bag);
    }
    return forest;
}

void annotate_statistics(DecisionTree& tree, const Dataset& samples) {
    if (samples.num_features != tree.num_features)
        throw std::invalid_argument("sample width does not match tree feature count");
    const int m = samples.num_classes;
    const std::size_t n_nodes = tree.nodes.size();
    std::vector<std::int64_t> counts(n_nodes * static_cast<std::size_t>(m), 0);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto x = samples.row(i);
        const int y = samples.labels[i];
        NodeId h = 0;
        while (true) {
            ++counts[static_cast<std::size_t>(h) * m + y];
            const TreeNode& node = tree.node(h);
            if (node.is_leaf()) break;
            h = x[node.feature] <= node.threshold ? node.left : node.right;
        }
    }
    for (std::size_t h = 0; h < n_nodes; ++h) {
        TreeNode& node = tree.nodes[h];
        const std::int64_t* c = counts.data() + h * static_cast<std::size_t>(m);
        const std::int64_t total = std::accumulate(c, c + m, std::int64_t{0});
        node.sample_count = total;
        node.class_distribution.assign(static_cast<std::size_t>(m), 0.0);
        if (total > 0) {
            int majority = 0;
            for (int y = 0; y < m; ++y) {
                node.class_distribution[y] = static_cast<double>(c[y]) / static_cast<double>(total);
                if (c[y] > c[majority]) majority = y;
            }
            node.predicted_label = majority;
            node.error_count = total - c[majority];
        } else {
            // empty node: neutral in the objective, prediction falls back to the parent
            node.predicted_label = 0;
            node.error_count = 0;
        }
    }
    // push predictions down into empty nodes
    for (std::size_t h = 0; h < n_nodes; ++h) {
        const TreeNode& node = tree.nodes[h];
        if (node.is_leaf() || node.sample_count == 0) continue;
        for (NodeId child : {node.left, node.right})
            if (tree.nodes[child].sample_count == 0)
                tree.nodes[child].predicted_label = node.predicted_label;
    }
    // a fully empty subtree inherits through intermediate empty nodes
    for (std::size_t h = 0; h < n_nodes; ++h) {
        const TreeNode& node = tree.nodes[h];
        if (node.is_leaf() || node.sample_count != 0) continue;
        tree.nodes[node.left].predicted_label = node.predicted_label;
        tree.nodes[node.right].predicted_label = node.predicted_label;
    }
}

void annotate_statistics(Forest& forest, const Dataset& samples) {
    if (samples.num_classes > forest.num_classes)
        throw std::invalid_argument("sample labels outside the forest's class range");
    for (DecisionTree& tree : forest.trees) annotate_statistics(tree, samples);
}

std::vector<NodeId> route(const DecisionTree& tree, std::span<const double> example) {
    if (static_cast<int>(example.size()) < tree.num_features)
        throw std::invalid_argument("example has fewer features than the tree");
    std::vector<NodeId> path;
    NodeId h = 0;
    while (true) {
        path.push_back(h);
        const TreeNode& node = tree.node(h);
        if (node.is_leaf()) return path;
        h = example[node.feature] <= node.threshold ? node.left : node.right;
    }
}

int predict(const Forest& forest, const PruningAssignment* pruning, std::span<const double> example) {
    const int m = forest.num_classes;
    std::vector<double> aggregate(static_cast<std::size_t>(m), 0.0);
    for (int t = 0; t < forest.num_trees(); ++t) {
        const DecisionTree& tree = forest.trees[t];
        const NodeId stop = walk_to_stop(tree, pruning ? &pruning->z[t] : nullptr, example);
        const auto& dist = tree.node(stop).class_distribution;
        for (int y = 0; y < m && y < static_cast<int>(dist.size()); ++y) aggregate[y] += dist[y];
    }
    int best = 0;
    for (int y = 1; y < m; ++y)
        if (aggregate[y] > aggregate[best]) best = y;
    return best;
}

double feature_cost(const Forest& forest, const PruningAssignment* pruning,
                    std::span<const double> example, const CostModel& costs) {
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(costs.num_units()), 0);
    double total = 0.0;
    for (int t = 0; t < forest.num_trees(); ++t) {
        const DecisionTree& tree = forest.trees[t];
        const std::vector<std::uint8_t>* z = pruning ? &pruning->z[t] : nullptr;
        NodeId h = 0;
        while (true) {
            if (z && (*z)[h]) break;
            const TreeNode& node = tree.node(h);
            if (node.is_leaf()) break;
            const int unit = costs.unit_of(node.feature);
            if (!seen[unit]) {
                seen[unit] = 1;
                total += costs.unit_cost(unit);
            }
            h = example[node.feature] <= node.threshold ? node.left : node.right;
        }
    }
    return total;
}

EvaluationResult evaluate(const Forest& forest, const PruningAssignment* pruning,
                          const Dataset& samples, const CostModel& costs) {
    if (samples.size() == 0) throw std::invalid_argument("empty sample set");
    EvaluationResult result;
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(forest.num_features), 0);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto x = samples.row(i);
        if (predict(forest, pruning, x) != samples.labels[i]) result.error_rate += 1.0;
        result.mean_feature_cost += feature_cost(forest, pruning, x, costs);
        std::fill(seen.begin(), seen.end(), 0);
        std::int64_t unique = 0;
        for (int t = 0; t < forest.num_trees(); ++t) {
            const DecisionTree& tree = forest.trees[t];
            const std::vector<std::uint8_t>* z = pruning ? &pruning->z[t] : nullptr;
            NodeId h = 0;
            while (true) {
                if (z && (*z)[h]) break;
                const TreeNode& node = tree.node(h);
                if (node.is_leaf()) break;
                if (!seen[node.feature]) {
                    seen[node.feature] = 1;
                    ++unique;
                }
                h = x[node.feature] <= node.threshold ? node.left : node.right;
            }
        }
        result.mean_unique_features += static_cast<double>(unique);
    }
    const double n = static_cast<double>(samples.size());
    result.error_rate /= n;
    result.mean_feature_cost /= n;
    result.mean_unique_features /= n;
    return result;
}

double entropy_bits(std::span<const double> distribution) {
    double h = 0.0;
    for (double p : distribution)
        if (p > 0.0) h -= p * std::log2(p);
    return h;
}

} // namespace budgetprune
