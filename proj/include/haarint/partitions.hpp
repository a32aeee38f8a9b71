#pragma once

#include <vector>

#include "haarint/errors.hpp"

namespace haarint {

// Weakly decreasing non-negative integer tuples (n_1, ..., n_N) with
// n_1 <= max_part, enumerated in lexicographically decreasing order from
// (max_part, ..., max_part) down to (0, ..., 0). The total count is
// binom(N + max_part, N).
class PartitionGenerator {
public:
    PartitionGenerator(int n_parts, int max_part)
        : parts_(static_cast<size_t>(n_parts), max_part), max_part_(max_part) {
        if (n_parts < 1) throw DimensionError("partitions: need at least one part");
        if (max_part < 0) throw DomainError("partitions: max_part must be non-negative");
    }

    bool done() const { return done_; }
    const std::vector<int>& current() const { return parts_; }

    void advance() {
        int n = static_cast<int>(parts_.size());
        int j = n - 1;
        while (j >= 0 && parts_[j] == 0) --j;
        if (j < 0) {
            done_ = true;
            return;
        }
        --parts_[j];
        for (int i = j + 1; i < n; ++i) parts_[i] = parts_[j];
    }

    int max_part() const { return max_part_; }

private:
    std::vector<int> parts_;
    int max_part_;
    bool done_ = false;
};

inline long partition_weight(const std::vector<int>& p) {
    long w = 0;
    for (int x : p) w += x;
    return w;
}

inline bool is_partition(const std::vector<int>& p) {
    for (size_t i = 0; i + 1 < p.size(); ++i)
        if (p[i] < p[i + 1]) return false;
    return p.empty() || p.back() >= 0;
}

}  // namespace haarint
