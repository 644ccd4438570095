#ifndef PROGIND_VARIABLE_INDEX_HPP
#define PROGIND_VARIABLE_INDEX_HPP

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "progind/trace.hpp"

namespace progind {

/// Exact nearest-neighbour kd-tree over labelled points of one dimension.
/// Ties in distance go to the lower label, labels being indices into a
/// lexicographically sorted name list.
class KdTree {
public:
    KdTree() = default;
    KdTree(int dim, std::vector<double> points, std::vector<int> labels);

    struct Hit {
        int label = -1;
        std::size_t point = 0;
        double dist2 = 0.0;
    };

    Hit nearest(std::span<const double> query) const;

    std::size_t size() const { return labels_.size(); }
    int dim() const { return dim_; }
    std::span<const double> point(std::size_t i) const {
        return {points_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
    }

private:
    struct KdNode {
        std::size_t point;
        int axis;
        int left = -1;
        int right = -1;
    };

    int build(std::vector<std::size_t>& idx, std::size_t lo, std::size_t hi, int depth);
    void search(int node, std::span<const double> q, Hit& best) const;
    bool better(double d2, std::size_t point, const Hit& best) const;

    int dim_ = 1;
    std::vector<double> points_;
    std::vector<int> labels_;
    std::vector<KdNode> nodes_;
    int root_ = -1;
};

struct NearestVariable {
    std::string name;
    Vec value;
};

/// One kd-tree per (timestep, variable dimension).
class VariableIndex {
public:
    VariableIndex() = default;
    explicit VariableIndex(const ObservationTrace& trace);

    /// Nearest d-dimensional variable to `query` at step t.
    NearestVariable nearest(int t, int d, std::span<const double> query) const;
    const std::string& nearest_name(int t, int d, std::span<const double> query) const;

    /// Points held by the tree at (t, d); 0 if no variable has dimension d.
    std::size_t tree_size(int t, int d) const;
    int length() const { return length_; }

private:
    const KdTree& tree(int t, int d) const;

    int length_ = 0;
    std::map<int, std::vector<std::string>> names_;  // per dimension, ascending
    std::map<int, std::vector<KdTree>> trees_;       // per dimension, per step
};

VariableIndex build_variable_index(const ObservationTrace& trace);

NearestVariable nearest_variable(const VariableIndex& index, int t, int d, std::span<const double> query);

} // namespace progind

#endif
