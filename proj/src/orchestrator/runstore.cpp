#include "ragbench/orchestrator/runstore.hpp"

#include "ragbench/core/error.hpp"
#include "ragbench/core/hash.hpp"
#include "ragbench/core/jsonl.hpp"

#include <sys/file.h>
#include <fcntl.h>
#include <unistd.h>

#include <fstream>

namespace ragbench::orchestrator {

std::string compute_run_id(const std::string& stage, const nlohmann::json& config,
                           const std::vector<std::string>& parents,
                           const std::string& corpus_checksum) {
    // nlohmann::json objects iterate in key order, so dump() is canonical.
    const nlohmann::json identity = {{"stage", stage},
                                     {"config", config},
                                     {"parents", parents},
                                     {"corpus_checksum", corpus_checksum}};
    return stage + "-" + sha256_hex(identity.dump()).substr(0, 16);
}

RunStore::RunStore(const std::filesystem::path& root) : root_(root) {
    std::filesystem::create_directories(root_ / "runs");
    const auto lock_path = root_ / "lock";
    lock_fd_ = ::open(lock_path.c_str(), O_CREAT | O_RDWR, 0644);
    if (lock_fd_ < 0) {
        throw Error::data("LockUnavailable", "cannot open " + lock_path.string());
    }
    // flock is advisory and dies with the process, so stale locks cannot wedge
    // the store after a crash.
    if (::flock(lock_fd_, LOCK_EX | LOCK_NB) != 0) {
        ::close(lock_fd_);
        lock_fd_ = -1;
        throw Error::data("StoreBusy",
                          "another process holds the run store at " + root.string());
    }
}

RunStore::~RunStore() {
    if (lock_fd_ >= 0) {
        ::flock(lock_fd_, LOCK_UN);
        ::close(lock_fd_);
    }
}

std::filesystem::path RunStore::run_dir(const std::string& run_id) const {
    return root_ / "runs" / run_id;
}

bool RunStore::has(const std::string& run_id) const {
    return std::filesystem::exists(run_dir(run_id) / "manifest.json");
}

void RunStore::put_artifact(const std::string& run_id, const std::string& name,
                            const std::string& content) {
    jsonl::write_file_atomic(run_dir(run_id) / name, content);
    pending_[run_id][name] = sha256_hex(content);
}

void RunStore::put_sidecar(const std::string& run_id, const std::string& name,
                           const std::string& content) {
    jsonl::write_file_atomic(run_dir(run_id) / name, content);
}

void RunStore::finish_run(const std::string& run_id, const std::string& stage,
                          const nlohmann::json& config, const std::vector<std::string>& parents,
                          const std::string& corpus_checksum) {
    nlohmann::json artifacts = nlohmann::json::object();
    const auto it = pending_.find(run_id);
    if (it != pending_.end()) {
        for (const auto& [name, checksum] : it->second) artifacts[name] = checksum;
    }
    const nlohmann::json manifest = {{"run_id", run_id},
                                     {"stage", stage},
                                     {"config", config},
                                     {"parents", parents},
                                     {"corpus_checksum", corpus_checksum},
                                     {"artifacts", artifacts}};
    jsonl::write_file_atomic(run_dir(run_id) / "manifest.json", manifest.dump(2) + "\n");
    if (it != pending_.end()) pending_.erase(it);
}

std::string RunStore::read_artifact(const std::string& run_id, const std::string& name) const {
    const auto manifest_json = manifest(run_id);
    if (!manifest_json["artifacts"].contains(name)) {
        throw Error::data("MissingArtifact",
                          "run " + run_id + " has no artifact '" + name + "'");
    }
    const auto path = run_dir(run_id) / name;
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error::data("MissingArtifact", "cannot open " + path.string());
    }
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto expected = manifest_json["artifacts"][name].get<std::string>();
    if (sha256_hex(content) != expected) {
        throw Error::data("RunCorrupt", "artifact '" + name + "' of run " + run_id +
                                            " fails its checksum");
    }
    return content;
}

nlohmann::json RunStore::manifest(const std::string& run_id) const {
    const auto path = run_dir(run_id) / "manifest.json";
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error::data("MissingRun", "no run " + run_id + " in " + root_.string());
    }
    auto manifest = nlohmann::json::parse(in, nullptr, false);
    if (manifest.is_discarded() || !manifest.is_object() || !manifest.contains("artifacts")) {
        throw Error::data("RunCorrupt", "manifest of run " + run_id + " is unreadable");
    }
    return manifest;
}

} // namespace ragbench::orchestrator
