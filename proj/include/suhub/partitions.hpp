#pragma once

#include <algorithm>
#include <compare>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace suhub {

/// Integer partition in canonical non-increasing form, e.g. (3,2,1).
/// Canonical form makes partitions usable as map keys and lets histograms
/// from different workers merge associatively.
class NPartition {
public:
    explicit NPartition(std::vector<int> parts) : parts_(std::move(parts)) {
        if (parts_.empty())
            throw std::invalid_argument("NPartition: empty");
        for (int p : parts_)
            if (p <= 0)
                throw std::invalid_argument("NPartition: parts must be positive");
        std::sort(parts_.begin(), parts_.end(), std::greater<int>());
    }

    const std::vector<int>& parts() const { return parts_; }
    int num_parts() const { return static_cast<int>(parts_.size()); }
    int sum() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }

    /// Dash-joined form used in CSV output, e.g. "3-2-1".
    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (i) s += "-";
            s += std::to_string(parts_[i]);
        }
        return s;
    }

    friend bool operator==(const NPartition&, const NPartition&) = default;
    friend auto operator<=>(const NPartition& a, const NPartition& b) {
        return std::lexicographical_compare_three_way(
            a.parts_.begin(), a.parts_.end(), b.parts_.begin(), b.parts_.end());
    }

private:
    std::vector<int> parts_;
};

/// All partitions of N, largest part first within each partition, ordered
/// reverse-lexicographically: (N), (N-1,1), ..., (1,...,1).
inline std::vector<NPartition> enumerate_partitions(int N) {
    if (N < 1)
        throw std::invalid_argument("enumerate_partitions: N must be >= 1");
    std::vector<NPartition> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int remaining, int max_part) -> void {
        if (remaining == 0) {
            out.emplace_back(cur);
            return;
        }
        for (int p = std::min(remaining, max_part); p >= 1; --p) {
            cur.push_back(p);
            self(self, remaining - p, p);
            cur.pop_back();
        }
    };
    rec(rec, N, N);
    return out;
}

}  // namespace suhub
