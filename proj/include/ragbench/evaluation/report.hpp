#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace ragbench::evaluation {

struct MetricScore {
    std::string example_id;
    std::string metric_id;
    double value = 0.0;
};

struct MetricAggregate {
    double mean = 0.0;
    std::uint64_t count = 0;
    std::uint64_t excluded = 0; // samples skipped for this metric (short CLR, unscored)
};

struct MetricReport {
    std::string run_id;
    std::vector<MetricScore> scores;
    std::map<std::string, MetricAggregate> aggregates;
};

// Aggregates per-sample scores into means; `excluded` counts samples a
// metric skipped. Rejects duplicate (example, metric) pairs and values
// outside the metric's range.
MetricReport build_report(const std::string& run_id, std::vector<MetricScore> scores,
                          const std::map<std::string, std::uint64_t>& excluded = {});

// Metrics file: one {example_id, metric_id, value} record per line, then a
// single {run_id, aggregates} summary record.
void write_metrics(const std::filesystem::path& path, const MetricReport& report);
MetricReport read_metrics(const std::filesystem::path& path);

// The same format over an in-memory buffer; reading re-aggregates and
// rejects summaries that disagree with the per-sample lines.
std::string metrics_to_jsonl(const MetricReport& report);
MetricReport metrics_from_jsonl(const std::string& content, const std::string& what = "metrics");

} // namespace ragbench::evaluation
