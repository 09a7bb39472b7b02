#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ragbench::evaluation {

// Tie-corrected Kendall tau (tau-b) in O(n log n): (C - D) / sqrt((C + D +
// Tx)(C + D + Ty)). Returns nullopt when either vector is constant (the
// denominator vanishes). Throws LengthMismatch on unequal lengths and
// InsufficientSamples below two pairs.
std::optional<double> kendall_tau(const std::vector<double>& xs, const std::vector<double>& ys);

// Correlates each metric's per-example scores with the judge's. Examples
// missing from either side are dropped pairwise per metric; a metric with
// fewer than two aligned examples raises InsufficientSamples. Degenerate
// metrics correlate to nullopt.
std::map<std::string, std::optional<double>> correlate_metrics(
    const std::map<std::string, std::map<std::string, double>>& by_metric,
    const std::map<std::string, double>& judge_scores);

} // namespace ragbench::evaluation
