#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace ragbench::orchestrator {

// Content-addressed identity of a stage execution: the stage kind, its
// normalized config, the parent run ids, and the corpus checksum. Identical
// logical inputs always map to the same id.
std::string compute_run_id(const std::string& stage, const nlohmann::json& config,
                           const std::vector<std::string>& parents,
                           const std::string& corpus_checksum);

// Directory-per-run artifact cache. A run becomes visible only once its
// manifest (stage, config, parents, artifact checksums) lands, so a crash
// mid-write never yields a half-cached stage. Artifact reads verify their
// recorded checksum.
class RunStore {
public:
    explicit RunStore(const std::filesystem::path& root);
    ~RunStore();
    RunStore(const RunStore&) = delete;
    RunStore& operator=(const RunStore&) = delete;

    const std::filesystem::path& root() const { return root_; }
    std::filesystem::path run_dir(const std::string& run_id) const;

    bool has(const std::string& run_id) const;

    // Stages an artifact for `run_id`; finish_run makes the run visible.
    void put_artifact(const std::string& run_id, const std::string& name,
                      const std::string& content);
    void finish_run(const std::string& run_id, const std::string& stage,
                    const nlohmann::json& config, const std::vector<std::string>& parents,
                    const std::string& corpus_checksum);

    std::string read_artifact(const std::string& run_id, const std::string& name) const;
    // Sidecar files live next to the artifacts but stay out of the manifest
    // (and therefore out of cache identity): timing logs and similar.
    void put_sidecar(const std::string& run_id, const std::string& name,
                     const std::string& content);

    nlohmann::json manifest(const std::string& run_id) const;

private:
    std::filesystem::path root_;
    int lock_fd_ = -1;
    std::map<std::string, std::map<std::string, std::string>> pending_; // run -> name -> sha256
};

} // namespace ragbench::orchestrator
