#include "flowstack/learn/kdtree.hpp"

#include "flowstack/learn/distance.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace flowstack::learn {

namespace {

void offer(std::vector<Neighbor>& heap, std::size_t k, Neighbor candidate) {
    if (heap.size() < k) {
        heap.push_back(candidate);
        std::push_heap(heap.begin(), heap.end());
    } else if (candidate < heap.front()) {
        std::pop_heap(heap.begin(), heap.end());
        heap.back() = candidate;
        std::push_heap(heap.begin(), heap.end());
    }
}

}  // namespace

KdTree::KdTree(const Matrix& points) : order_(points.rows()) {
    if (points.rows() > std::numeric_limits<std::uint32_t>::max()) throw std::length_error("too many points");
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    if (!order_.empty()) root_ = build(points, 0, static_cast<std::uint32_t>(order_.size()));
}

std::int32_t KdTree::build(const Matrix& points, std::uint32_t begin, std::uint32_t end) {
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(Node{begin, end});
    if (end - begin <= kLeafSize || points.cols() == 0) return id;

    // Split the widest dimension at its median.
    std::uint32_t axis = 0;
    double widest = -1.0;
    for (std::size_t c = 0; c < points.cols(); ++c) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::uint32_t i = begin; i < end; ++i) {
            const double v = points(order_[i], c);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (hi - lo > widest) {
            widest = hi - lo;
            axis = static_cast<std::uint32_t>(c);
        }
    }
    if (widest <= 0.0) return id;  // all points coincide

    const std::uint32_t mid = begin + (end - begin) / 2;
    auto first = order_.begin();
    std::nth_element(first + begin, first + mid, first + end,
                     [&](std::size_t a, std::size_t b) { return points(a, axis) < points(b, axis); });
    const double split = points(order_[mid], axis);

    const auto left = build(points, begin, mid);
    const auto right = build(points, mid, end);
    nodes_[id].axis = axis;
    nodes_[id].split = split;
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
}

void KdTree::search(const Matrix& points, std::int32_t node_id, std::span<const double> query, std::size_t k,
                    std::vector<Neighbor>& heap) const {
    const Node& node = nodes_[node_id];
    if (node.left < 0) {
        for (std::uint32_t i = node.begin; i < node.end; ++i) {
            const std::size_t row = order_[i];
            offer(heap, k, Neighbor{squared_distance(points.row(row), query), row});
        }
        return;
    }
    const double delta = query[node.axis] - node.split;
    const auto near = delta < 0.0 ? node.left : node.right;
    const auto far = delta < 0.0 ? node.right : node.left;
    search(points, near, query, k, heap);
    // Ties at the current worst distance must still be visited: a farther
    // subtree may hold an equally distant row with a lower index.
    if (heap.size() < k || delta * delta <= heap.front().squared_distance) {
        search(points, far, query, k, heap);
    }
}

std::vector<Neighbor> KdTree::nearest(const Matrix& points, std::span<const double> query, std::size_t k) const {
    if (query.size() != points.cols()) throw std::invalid_argument("dimension mismatch");
    std::vector<Neighbor> heap;
    if (root_ < 0 || k == 0) return heap;
    heap.reserve(k + 1);
    search(points, root_, query, std::min(k, order_.size()), heap);
    std::sort_heap(heap.begin(), heap.end());
    return heap;
}

std::vector<Neighbor> brute_force_nearest(const Matrix& points, std::span<const double> query, std::size_t k) {
    if (query.size() != points.cols()) throw std::invalid_argument("dimension mismatch");
    std::vector<Neighbor> all(points.rows());
    for (std::size_t r = 0; r < points.rows(); ++r) all[r] = Neighbor{squared_distance(points.row(r), query), r};
    k = std::min(k, all.size());
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end());
    all.resize(k);
    return all;
}

}  // namespace flowstack::learn
