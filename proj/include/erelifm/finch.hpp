#pragma once

#include <cstddef>
#include <vector>

namespace erelifm {

// First level of FINCH: link i-j iff j = nn(i), i = nn(j), or
// nn(i) = nn(j); the partitions are the connected components of that
// graph. Nearest neighbor by Euclidean distance, ties broken toward the
// lowest index. A single point forms one partition.
std::vector<std::vector<size_t>> finch_first_partition(
    const std::vector<std::vector<double>>& points);

// 1-nn index per point (exposed for the brute-force oracle tests).
std::vector<size_t> first_neighbors(const std::vector<std::vector<double>>& points);

}  // namespace erelifm
