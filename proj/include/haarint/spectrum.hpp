#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "haarint/errors.hpp"
#include "haarint/log_complex.hpp"

namespace haarint {

// Multiset of complex values together with its near-degeneracy structure.
// Two values land in one cluster when connected by steps of length at most
// cluster_threshold (absolute, derived from a relative threshold scaled by
// the largest modulus). Coincident values always share a cluster, including
// at threshold zero.
struct Spectrum {
    std::vector<Complex> values;
    double cluster_threshold = 0.0;
    std::vector<std::vector<int>> clusters;  // partition of {0..n-1}, members ascending

    int size() const { return static_cast<int>(values.size()); }
    bool degenerate() const {
        return clusters.size() != values.size();
    }
};

inline Spectrum make_spectrum(std::vector<Complex> values, double rel_threshold = 1e-4) {
    if (rel_threshold < 0) throw DomainError("cluster threshold must be non-negative");
    Spectrum s;
    s.values = std::move(values);
    const int n = s.size();
    double scale = 0.0;
    for (const Complex& v : s.values) scale = std::max(scale, std::abs(v));
    s.cluster_threshold = rel_threshold * scale;

    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(s.values[i] - s.values[j]) <= s.cluster_threshold)
                parent[find(i)] = find(j);

    std::vector<int> root_to_cluster(n, -1);
    for (int i = 0; i < n; ++i) {
        int r = find(i);
        if (root_to_cluster[r] < 0) {
            root_to_cluster[r] = static_cast<int>(s.clusters.size());
            s.clusters.emplace_back();
        }
        s.clusters[root_to_cluster[r]].push_back(i);
    }
    return s;
}

inline Spectrum make_spectrum(const std::vector<double>& values, double rel_threshold = 1e-4) {
    std::vector<Complex> v(values.begin(), values.end());
    return make_spectrum(std::move(v), rel_threshold);
}

}  // namespace haarint
