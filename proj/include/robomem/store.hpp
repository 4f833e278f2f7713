#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "robomem/memory_model.hpp"
#include "robomem/recall.hpp"

namespace robomem {

namespace fs = std::filesystem;

nlohmann::json model_to_json(const UserModel& model);
// Throws Error(corruption) on schema mismatch or any invariant violation.
UserModel model_from_json(const nlohmann::json& doc);

// Throws Error(invalid_argument) unless the id is safe to use as a path
// component ([A-Za-z0-9_.-], not starting with '.').
void check_user_id(std::string_view user_id);

// <store_root>/<user_id>/<robot>.json
fs::path model_path(const fs::path& store_root, std::string_view user_id, RobotId robot);
// <store_root>/<user_id>/<robot>.log.jsonl
fs::path transcript_path(const fs::path& store_root, std::string_view user_id, RobotId robot);

// Writes atomically (temp file + rename).
void save(const UserModel& model, const fs::path& store_root);
// A missing document yields an empty model.
UserModel load(const fs::path& store_root, std::string_view user_id, RobotId robot);

// One line of the transcript log.
struct TranscriptEntry {
    std::string session_id;
    int turn = 0;
    std::string speaker;  // "user" | "robot"
    std::string text;
    nlohmann::json acts = nlohmann::json::array();
    nlohmann::json side_channel;  // object or null
    // Context needed to replay the session deterministically.
    std::string user_id;
    RobotId robot = RobotId::RoboTech;
    int session_index = 1;
    RecallConfig config;

    bool operator==(const TranscriptEntry&) const = default;
};

nlohmann::json transcript_entry_to_json(const TranscriptEntry& e);
// Throws Error(format) when a field is missing or mistyped.
TranscriptEntry transcript_entry_from_json(const nlohmann::json& j);

void append_transcript(const fs::path& path, const TranscriptEntry& entry);
std::vector<TranscriptEntry> read_transcript(const fs::path& path);

// Filesystem-backed store with one writer at a time per (user, robot) pair.
class ModelStore {
public:
    explicit ModelStore(fs::path root);

    const fs::path& root() const { return root_; }

    // Serializes all mutations of one (user, robot) pair.
    std::unique_lock<std::mutex> lock(std::string_view user_id, RobotId robot);

    UserModel load(std::string_view user_id, RobotId robot) const;
    void save(const UserModel& model) const;

    void append_transcript(const TranscriptEntry& entry) const;
    std::vector<TranscriptEntry> transcript(std::string_view user_id, RobotId robot) const;

    // Number of sessions whose transcript reached a Farewell act.
    int completed_sessions(std::string_view user_id, RobotId robot) const;

private:
    fs::path root_;
    std::mutex table_mutex_;
    std::map<std::string, std::unique_ptr<std::mutex>> pair_mutexes_;
};

}  // namespace robomem
