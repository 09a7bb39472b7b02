#include "ragbench/evaluation/kendall.hpp"

#include "ragbench/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace ragbench::evaluation {

namespace {

// Pairs within equal-value groups: sum of g*(g-1)/2.
std::int64_t tie_pairs(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    std::int64_t total = 0;
    std::size_t i = 0;
    while (i < values.size()) {
        std::size_t j = i;
        while (j < values.size() && values[j] == values[i]) ++j;
        const auto g = static_cast<std::int64_t>(j - i);
        total += g * (g - 1) / 2;
        i = j;
    }
    return total;
}

// Inversions under strict greater-than, counted by merge sort.
std::int64_t count_inversions(std::vector<double>& values) {
    std::vector<double> buffer(values.size());
    std::int64_t inversions = 0;
    for (std::size_t width = 1; width < values.size(); width *= 2) {
        for (std::size_t left = 0; left + width < values.size(); left += 2 * width) {
            const auto mid = left + width;
            const auto right = std::min(values.size(), mid + width);
            std::size_t a = left, b = mid, out = left;
            while (a < mid && b < right) {
                if (values[a] <= values[b]) {
                    buffer[out++] = values[a++];
                } else {
                    inversions += static_cast<std::int64_t>(mid - a);
                    buffer[out++] = values[b++];
                }
            }
            while (a < mid) buffer[out++] = values[a++];
            while (b < right) buffer[out++] = values[b++];
            std::copy(buffer.begin() + static_cast<std::ptrdiff_t>(left),
                      buffer.begin() + static_cast<std::ptrdiff_t>(right),
                      values.begin() + static_cast<std::ptrdiff_t>(left));
        }
    }
    return inversions;
}

} // namespace

std::optional<double> kendall_tau(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) {
        throw Error::data("LengthMismatch", "paired vectors differ in length");
    }
    const auto n = static_cast<std::int64_t>(xs.size());
    if (n < 2) {
        throw Error::data("InsufficientSamples", "correlation needs at least 2 pairs");
    }

    std::vector<std::size_t> order(xs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (xs[a] != xs[b]) return xs[a] < xs[b];
        return ys[a] < ys[b];
    });

    const std::int64_t n0 = n * (n - 1) / 2;
    const std::int64_t n1 = tie_pairs(xs);
    const std::int64_t n2 = tie_pairs(ys);
    if (n1 == n0 || n2 == n0) {
        return std::nullopt; // constant vector: tau undefined
    }

    // Joint ties: groups equal in both coordinates, contiguous after sorting.
    std::int64_t n3 = 0;
    {
        std::size_t i = 0;
        while (i < order.size()) {
            std::size_t j = i;
            while (j < order.size() && xs[order[j]] == xs[order[i]] &&
                   ys[order[j]] == ys[order[i]]) {
                ++j;
            }
            const auto g = static_cast<std::int64_t>(j - i);
            n3 += g * (g - 1) / 2;
            i = j;
        }
    }

    // Sorting by (x, y) makes y-inversions exactly the discordant pairs:
    // within an x-tie group y ascends, so no inversion is counted there.
    std::vector<double> y_in_x_order;
    y_in_x_order.reserve(order.size());
    for (const auto i : order) y_in_x_order.push_back(ys[i]);
    const std::int64_t discordant = count_inversions(y_in_x_order);

    const std::int64_t concordant = n0 - n1 - n2 + n3 - discordant;
    const auto numerator = static_cast<double>(concordant - discordant);
    const auto denominator = std::sqrt(static_cast<double>(n0 - n1)) *
                             std::sqrt(static_cast<double>(n0 - n2));
    return numerator / denominator;
}

std::map<std::string, std::optional<double>> correlate_metrics(
    const std::map<std::string, std::map<std::string, double>>& by_metric,
    const std::map<std::string, double>& judge_scores) {
    std::map<std::string, std::optional<double>> table;
    for (const auto& [metric_id, scores] : by_metric) {
        std::vector<double> xs;
        std::vector<double> ys;
        for (const auto& [example_id, value] : scores) {
            const auto it = judge_scores.find(example_id);
            if (it == judge_scores.end()) continue; // unscored: dropped pairwise
            xs.push_back(value);
            ys.push_back(it->second);
        }
        if (xs.size() < 2) {
            throw Error::data("InsufficientSamples", "metric '" + metric_id +
                                                         "' aligns with fewer than 2 judged "
                                                         "examples");
        }
        table[metric_id] = kendall_tau(xs, ys);
    }
    return table;
}

} // namespace ragbench::evaluation
