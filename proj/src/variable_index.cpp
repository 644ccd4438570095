#include "progind/variable_index.hpp"

#include <algorithm>
#include <numeric>

#include "progind/error.hpp"

namespace progind {

KdTree::KdTree(int dim, std::vector<double> points, std::vector<int> labels)
    : dim_(dim), points_(std::move(points)), labels_(std::move(labels)) {
    std::vector<std::size_t> idx(labels_.size());
    std::iota(idx.begin(), idx.end(), 0);
    nodes_.reserve(idx.size());
    root_ = build(idx, 0, idx.size(), 0);
}

int KdTree::build(std::vector<std::size_t>& idx, std::size_t lo, std::size_t hi, int depth) {
    if (lo >= hi) return -1;
    const int axis = depth % dim_;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::nth_element(idx.begin() + static_cast<std::ptrdiff_t>(lo), idx.begin() + static_cast<std::ptrdiff_t>(mid),
                     idx.begin() + static_cast<std::ptrdiff_t>(hi), [&](std::size_t a, std::size_t b) {
                         return point(a)[static_cast<std::size_t>(axis)] < point(b)[static_cast<std::size_t>(axis)];
                     });
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({idx[mid], axis});
    const int left = build(idx, lo, mid, depth + 1);
    const int right = build(idx, mid + 1, hi, depth + 1);
    nodes_[static_cast<std::size_t>(id)].left = left;
    nodes_[static_cast<std::size_t>(id)].right = right;
    return id;
}

bool KdTree::better(double d2, std::size_t p, const Hit& best) const {
    if (best.label < 0) return true;
    if (d2 < best.dist2) return true;
    return d2 == best.dist2 && labels_[p] < best.label;
}

void KdTree::search(int node, std::span<const double> q, Hit& best) const {
    if (node < 0) return;
    const KdNode& n = nodes_[static_cast<std::size_t>(node)];
    const auto p = point(n.point);
    double d2 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double diff = q[i] - p[i];
        d2 += diff * diff;
    }
    if (better(d2, n.point, best)) best = {labels_[n.point], n.point, d2};

    const auto axis = static_cast<std::size_t>(n.axis);
    const double delta = q[axis] - p[axis];
    const int near = delta < 0 ? n.left : n.right;
    const int far = delta < 0 ? n.right : n.left;
    search(near, q, best);
    // Inclusive bound: an equidistant point on the far side may win the tie.
    if (delta * delta <= best.dist2) search(far, q, best);
}

KdTree::Hit KdTree::nearest(std::span<const double> query) const {
    Hit best;
    search(root_, query, best);
    return best;
}

VariableIndex::VariableIndex(const ObservationTrace& trace) : length_(trace.length()) {
    const auto& names = trace.variable_names();
    std::map<int, std::vector<int>> ids_by_dim;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const int d = trace.variable_dim(static_cast<int>(i));
        ids_by_dim[d].push_back(static_cast<int>(i));
        names_[d].push_back(names[i]);
    }
    for (const auto& [d, ids] : ids_by_dim) {
        auto& per_step = trees_[d];
        per_step.reserve(static_cast<std::size_t>(length_));
        std::vector<int> labels(ids.size());
        std::iota(labels.begin(), labels.end(), 0);
        for (int t = 1; t <= length_; ++t) {
            std::vector<double> pts;
            pts.reserve(ids.size() * static_cast<std::size_t>(d));
            for (int id : ids) {
                const auto v = trace.value(id, t);
                pts.insert(pts.end(), v.begin(), v.end());
            }
            per_step.emplace_back(d, std::move(pts), labels);
        }
    }
}

const KdTree& VariableIndex::tree(int t, int d) const {
    auto it = trees_.find(d);
    if (it == trees_.end())
        throw Error(Errc::no_variable_of_dimension, "no variable of dimension " + std::to_string(d));
    if (t < 1 || t > length_)
        throw Error(Errc::out_of_range, "timestep " + std::to_string(t) + " outside 1.." + std::to_string(length_));
    return it->second[static_cast<std::size_t>(t - 1)];
}

std::size_t VariableIndex::tree_size(int t, int d) const {
    if (!trees_.contains(d)) return 0;
    return tree(t, d).size();
}

const std::string& VariableIndex::nearest_name(int t, int d, std::span<const double> query) const {
    if (static_cast<int>(query.size()) != d)
        throw Error(Errc::dimension_mismatch, "query of length " + std::to_string(query.size()) +
                                                  " against dimension " + std::to_string(d));
    const auto hit = tree(t, d).nearest(query);
    return names_.at(d)[static_cast<std::size_t>(hit.label)];
}

NearestVariable VariableIndex::nearest(int t, int d, std::span<const double> query) const {
    if (static_cast<int>(query.size()) != d)
        throw Error(Errc::dimension_mismatch, "query of length " + std::to_string(query.size()) +
                                                  " against dimension " + std::to_string(d));
    const KdTree& kd = tree(t, d);
    const auto hit = kd.nearest(query);
    const auto p = kd.point(hit.point);
    return {names_.at(d)[static_cast<std::size_t>(hit.label)], Vec(p.begin(), p.end())};
}

VariableIndex build_variable_index(const ObservationTrace& trace) { return VariableIndex(trace); }

NearestVariable nearest_variable(const VariableIndex& index, int t, int d, std::span<const double> query) {
    return index.nearest(t, d, query);
}

} // namespace progind
