#include "ragbench/evaluation/report.hpp"

#include "ragbench/core/error.hpp"
#include "ragbench/core/jsonl.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace ragbench::evaluation {

MetricReport build_report(const std::string& run_id, std::vector<MetricScore> scores,
                          const std::map<std::string, std::uint64_t>& excluded) {
    MetricReport report;
    report.run_id = run_id;
    std::set<std::pair<std::string, std::string>> seen;
    std::map<std::string, double> sums;
    for (const auto& score : scores) {
        if (!std::isfinite(score.value)) {
            throw Error::data("InvalidScore", "non-finite value for metric '" + score.metric_id +
                                                  "' on example '" + score.example_id + "'");
        }
        const double lo = score.metric_id == "kendall_tau" ? -1.0 : 0.0;
        if (score.value < lo || score.value > 1.0) {
            throw Error::data("InvalidScore", "metric '" + score.metric_id +
                                                  "' out of range on example '" +
                                                  score.example_id + "'");
        }
        if (!seen.emplace(score.example_id, score.metric_id).second) {
            throw Error::data("DuplicateScore", "metric '" + score.metric_id +
                                                    "' scored twice for example '" +
                                                    score.example_id + "'");
        }
        sums[score.metric_id] += score.value;
        ++report.aggregates[score.metric_id].count;
    }
    for (auto& [metric_id, aggregate] : report.aggregates) {
        aggregate.mean = sums[metric_id] / static_cast<double>(aggregate.count);
    }
    for (const auto& [metric_id, count] : excluded) {
        report.aggregates[metric_id].excluded = count;
    }
    report.scores = std::move(scores);
    return report;
}

std::string metrics_to_jsonl(const MetricReport& report) {
    std::vector<nlohmann::json> records;
    records.reserve(report.scores.size() + 1);
    for (const auto& score : report.scores) {
        records.push_back({{"example_id", score.example_id},
                           {"metric_id", score.metric_id},
                           {"value", score.value}});
    }
    nlohmann::json aggregates = nlohmann::json::object();
    for (const auto& [metric_id, aggregate] : report.aggregates) {
        aggregates[metric_id] = {{"mean", aggregate.mean},
                                 {"count", aggregate.count},
                                 {"excluded", aggregate.excluded}};
    }
    records.push_back({{"run_id", report.run_id}, {"aggregates", std::move(aggregates)}});
    return jsonl::to_lines(records);
}

MetricReport metrics_from_jsonl(const std::string& content, const std::string& what) {
    std::vector<MetricScore> scores;
    std::map<std::string, std::uint64_t> excluded;
    std::string run_id;
    bool saw_summary = false;
    std::map<std::string, MetricAggregate> stored_aggregates;

    jsonl::for_each_line(content, what, [&](std::size_t line_no, const nlohmann::json& record) {
        const auto where = what + ":" + std::to_string(line_no);
        if (record.contains("aggregates")) {
            if (saw_summary) {
                throw Error::data("SchemaError", where + ": second summary record");
            }
            saw_summary = true;
            run_id = record.value("run_id", "");
            for (const auto& [metric_id, entry] : record["aggregates"].items()) {
                MetricAggregate aggregate;
                aggregate.mean = entry.value("mean", 0.0);
                aggregate.count = entry.value("count", std::uint64_t{0});
                aggregate.excluded = entry.value("excluded", std::uint64_t{0});
                stored_aggregates[metric_id] = aggregate;
                excluded[metric_id] = aggregate.excluded;
            }
            return;
        }
        if (!record.contains("example_id") || !record.contains("metric_id") ||
            !record.contains("value") || !record["value"].is_number()) {
            throw Error::data("SchemaError",
                              where + ": metric record needs example_id, metric_id, value");
        }
        scores.push_back({record["example_id"].get<std::string>(),
                          record["metric_id"].get<std::string>(),
                          record["value"].get<double>()});
    });

    auto report = build_report(run_id, std::move(scores), excluded);
    // The stored means must be reproducible from the per-sample lines.
    for (const auto& [metric_id, stored] : stored_aggregates) {
        const auto it = report.aggregates.find(metric_id);
        if (it == report.aggregates.end() || it->second.count != stored.count ||
            std::abs(it->second.mean - stored.mean) > 1e-12) {
            throw Error::data("AggregateMismatch",
                              what + ": summary disagrees with per-sample scores for '" +
                                  metric_id + "'");
        }
    }
    return report;
}

void write_metrics(const std::filesystem::path& path, const MetricReport& report) {
    jsonl::write_file_atomic(path, metrics_to_jsonl(report));
}

MetricReport read_metrics(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error::data("FileUnreadable", "cannot open " + path.string());
    }
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return metrics_from_jsonl(content, path.string());
}

} // namespace ragbench::evaluation
