#pragma once

#include "flowstack/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace flowstack::learn {

struct Neighbor {
    double squared_distance = 0.0;
    std::size_t index = 0;

    // Distance first, lower training-row index wins ties.
    friend bool operator<(const Neighbor& a, const Neighbor& b) noexcept {
        return a.squared_distance < b.squared_distance ||
               (a.squared_distance == b.squared_distance && a.index < b.index);
    }
    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

// Exact k-d tree over the rows of a matrix. The tree does not own the points;
// queries take the same matrix it was built from.
class KdTree {
  public:
    static constexpr std::size_t kLeafSize = 16;

    KdTree() = default;
    explicit KdTree(const Matrix& points);

    // k nearest rows ordered by (distance, index); identical to a full sort.
    std::vector<Neighbor> nearest(const Matrix& points, std::span<const double> query, std::size_t k) const;

    std::size_t size() const noexcept { return order_.size(); }

  private:
    struct Node {
        std::uint32_t begin = 0;
        std::uint32_t end = 0;
        std::int32_t left = -1;
        std::int32_t right = -1;
        std::uint32_t axis = 0;
        double split = 0.0;
    };

    std::int32_t build(const Matrix& points, std::uint32_t begin, std::uint32_t end);
    void search(const Matrix& points, std::int32_t node, std::span<const double> query, std::size_t k,
                std::vector<Neighbor>& heap) const;

    std::vector<std::size_t> order_;
    std::vector<Node> nodes_;
    std::int32_t root_ = -1;
};

// Serial reference: sort every training row by (distance, index) and keep k.
std::vector<Neighbor> brute_force_nearest(const Matrix& points, std::span<const double> query, std::size_t k);

}  // namespace flowstack::learn
