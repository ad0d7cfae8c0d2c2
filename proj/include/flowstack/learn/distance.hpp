#pragma once

#include <span>

namespace flowstack::learn {

// Sum of squared coordinate differences, accumulated left to right. Every
// neighbor search in the project goes through this function so that indexed
// and brute-force searches compare bit-identical distances.
double squared_distance(std::span<const double> a, std::span<const double> b);

double euclidean_distance(std::span<const double> a, std::span<const double> b);

}  // namespace flowstack::learn
