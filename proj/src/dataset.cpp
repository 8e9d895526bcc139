#include "budgetprune/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace budgetprune {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // trim whitespace and a possible trailing \r
        auto b = field.find_first_not_of(" \t\r");
        auto e = field.find_last_not_of(" \t\r");
        fields.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_double(const std::string& s, const std::string& context) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("could not parse number '" + s + "' in " + context);
    }
}

} // namespace

Dataset Dataset::subset(const std::vector<std::size_t>& indices) const {
    Dataset out;
    out.num_features = num_features;
    out.num_classes = num_classes;
    out.original_labels = original_labels;
    out.values.reserve(indices.size() * static_cast<std::size_t>(num_features));
    out.labels.reserve(indices.size());
    for (std::size_t i : indices) {
        auto r = row(i);
        out.values.insert(out.values.end(), r.begin(), r.end());
        out.labels.push_back(labels[i]);
    }
    return out;
}

Dataset make_dataset(std::vector<double> values, const std::vector<double>& raw_labels, int num_features) {
    if (num_features <= 0) throw std::invalid_argument("num_features must be positive");
    if (raw_labels.empty()) throw std::invalid_argument("empty sample set");
    if (values.size() != raw_labels.size() * static_cast<std::size_t>(num_features))
        throw std::invalid_argument("value matrix size does not match labels");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite feature value");

    std::map<double, int> label_ids;
    for (double y : raw_labels) {
        if (!std::isfinite(y)) throw std::invalid_argument("non-finite label");
        label_ids.emplace(y, 0);
    }
    Dataset out;
    out.original_labels.reserve(label_ids.size());
    for (auto& [value, id] : label_ids) {
        id = static_cast<int>(out.original_labels.size());
        out.original_labels.push_back(value);
    }
    out.values = std::move(values);
    out.labels.reserve(raw_labels.size());
    for (double y : raw_labels) out.labels.push_back(label_ids.at(y));
    out.num_features = num_features;
    out.num_classes = static_cast<int>(out.original_labels.size());
    return out;
}

Dataset load_csv(const std::string& path, const std::string& label_column) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    const auto header = split_csv_line(line);
    int label_idx = -1;
    for (std::size_t j = 0; j < header.size(); ++j)
        if (header[j] == label_column) label_idx = static_cast<int>(j);
    if (label_idx < 0) throw std::runtime_error(path + ": no column named '" + label_column + "'");

    const int num_features = static_cast<int>(header.size()) - 1;
    if (num_features <= 0) throw std::runtime_error(path + ": no feature columns");
    std::vector<double> values;
    std::vector<double> raw_labels;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected " +
                                     std::to_string(header.size()) + " fields, got " +
                                     std::to_string(fields.size()));
        for (std::size_t j = 0; j < fields.size(); ++j) {
            const double v = parse_double(fields[j], path + ":" + std::to_string(line_no));
            if (static_cast<int>(j) == label_idx)
                raw_labels.push_back(v);
            else
                values.push_back(v);
        }
    }
    return make_dataset(std::move(values), raw_labels, num_features);
}

Dataset load_svmlight(const std::string& path, int num_features) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::vector<std::vector<std::pair<int, double>>> rows;
    std::vector<double> raw_labels;
    int max_index = 0;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        double y;
        if (!(ss >> y)) throw std::runtime_error(path + ":" + std::to_string(line_no) + ": bad label");
        std::vector<std::pair<int, double>> entries;
        std::string tok;
        while (ss >> tok) {
            if (tok[0] == '#') break;
            const auto colon = tok.find(':');
            if (colon == std::string::npos)
                throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected idx:value, got '" + tok + "'");
            const int idx = std::stoi(tok.substr(0, colon));
            if (idx < 1) throw std::runtime_error(path + ":" + std::to_string(line_no) + ": indices are 1-based");
            const double v = parse_double(tok.substr(colon + 1), path + ":" + std::to_string(line_no));
            entries.emplace_back(idx - 1, v);
            max_index = std::max(max_index, idx);
        }
        rows.push_back(std::move(entries));
        raw_labels.push_back(y);
    }
    const int k = num_features > 0 ? num_features : max_index;
    if (max_index > k) throw std::runtime_error(path + ": feature index exceeds num_features");
    if (k <= 0) throw std::runtime_error(path + ": no features");
    std::vector<double> values(rows.size() * static_cast<std::size_t>(k), 0.0);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (const auto& [idx, v] : rows[i]) values[i * static_cast<std::size_t>(k) + idx] = v;
    return make_dataset(std::move(values), raw_labels, k);
}

CostModel CostModel::uniform(int num_features, double cost) {
    CostModel m;
    m.feature_costs.assign(static_cast<std::size_t>(num_features), cost);
    return m;
}

CostModel CostModel::load(const std::string& path, int num_features) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    CostModel m;
    m.feature_costs.assign(static_cast<std::size_t>(num_features), -1.0);
    std::vector<int> groups(static_cast<std::size_t>(num_features), -1);
    bool any_group = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (line_no == 1 && !fields.empty() && fields[0].find_first_not_of("0123456789") != std::string::npos)
            continue; // header row
        if (fields.size() != 2 && fields.size() != 3)
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected feature_index,cost[,group_id]");
        const int k = std::stoi(fields[0]);
        if (k < 0 || k >= num_features)
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": feature index out of range");
        const double c = parse_double(fields[1], path + ":" + std::to_string(line_no));
        if (c < 0) throw std::runtime_error(path + ":" + std::to_string(line_no) + ": negative cost");
        m.feature_costs[k] = c;
        if (fields.size() == 3 && !fields[2].empty()) {
            groups[k] = std::stoi(fields[2]);
            any_group = true;
        }
    }
    for (int k = 0; k < num_features; ++k)
        if (m.feature_costs[k] < 0)
            throw std::runtime_error(path + ": no cost for feature " + std::to_string(k));
    if (any_group) {
        for (int k = 0; k < num_features; ++k)
            if (groups[k] < 0)
                throw std::runtime_error(path + ": feature " + std::to_string(k) + " has no group but others do");
        const int num_groups = *std::max_element(groups.begin(), groups.end()) + 1;
        m.group_costs.assign(static_cast<std::size_t>(num_groups), -1.0);
        for (int k = 0; k < num_features; ++k) {
            double& gc = m.group_costs[groups[k]];
            if (gc < 0)
                gc = m.feature_costs[k];
            else if (gc != m.feature_costs[k])
                throw std::runtime_error(path + ": inconsistent cost within group " + std::to_string(groups[k]));
        }
        for (std::size_t g = 0; g < m.group_costs.size(); ++g)
            if (m.group_costs[g] < 0)
                throw std::runtime_error(path + ": group ids must be contiguous from 0");
        m.group_of = std::move(groups);
    }
    return m;
}

} // namespace budgetprune
