#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "robomem/dialogue.hpp"

namespace robomem {

struct ServiceConfig {
    std::filesystem::path store_root = "store";
    RecallConfig recall;  // defaults for sessions that do not override them
    std::string bind_address = "127.0.0.1:8080";

    // Reads store_root, mode, threshold, seed, bind from a JSON object;
    // absent fields keep their current value.
    void merge_json(const nlohmann::json& j);
    // Reads ROBOMEM_STORE_ROOT, ROBOMEM_MODE, ROBOMEM_THRESHOLD, ROBOMEM_SEED,
    // ROBOMEM_BIND.
    void merge_env();
};

struct SessionHandle {
    std::string session_id;
    std::string user_id;
    RobotId robot = RobotId::RoboTech;
    int session_index = 1;
    std::chrono::system_clock::time_point created_at;
};

struct RecallOverrides {
    std::optional<RecallMode> mode;
    std::optional<double> threshold;
    std::optional<std::uint64_t> seed;
};

struct OpenResult {
    SessionHandle handle;
    std::string text;
    std::vector<DialogueAct> acts;
    Phase phase = Phase::slot_filling;
};

struct MessageResult {
    std::string text;
    std::vector<DialogueAct> acts;
    Phase phase = Phase::slot_filling;
};

// Users, sessions and model inspection on top of DialogueEngine. Holds no
// conversational logic of its own.
class Service {
public:
    Service(const Resources& resources, ServiceConfig config);

    std::string create_user(const std::string& display_name);
    bool has_user(const std::string& user_id) const;

    OpenResult open_session(const std::string& user_id, RobotId robot,
                            const RecallOverrides& overrides = {});
    MessageResult post_message(const std::string& session_id, const std::string& text,
                               const SideChannel& side);
    // The persisted user-model document.
    nlohmann::json get_model(const std::string& user_id, RobotId robot) const;
    std::vector<TranscriptEntry> get_transcript(const std::string& session_id) const;

    std::optional<SessionHandle> session(const std::string& session_id) const;
    const Resources& resources() const { return resources_; }
    const ServiceConfig& config() const { return config_; }

private:
    struct Session {
        SessionHandle handle;
        DialogueState state;
        std::mutex mutex;
    };

    std::shared_ptr<Session> find_session(const std::string& session_id) const;
    void persist_users() const;
    std::string fresh_id(const std::string& prefix);

    const Resources& resources_;
    ServiceConfig config_;
    mutable ModelStore store_;
    DialogueEngine engine_;

    mutable std::mutex mutex_;
    std::map<std::string, std::string> users_;  // user_id -> display name
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::map<std::pair<std::string, RobotId>, std::string> open_;  // pair -> session_id
    std::uint64_t id_state_;
};

}  // namespace robomem
