#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "robomem/dialogue.hpp"

namespace robomem {

// Scripted answers for one session. Keys of `answers` are property keys in
// their string form ("username", "personal(profession)", "favourite(film)").
struct ScriptSession {
    std::map<std::string, std::string> answers;
    SideChannel side_channel;
    std::map<RobotId, SideChannel> side_channel_by_robot;
    std::string small_talk = "okay";

    const SideChannel& side_for(RobotId robot) const;
};

// Session k uses sessions[k-1], or the last entry once the list runs out.
struct UserScript {
    std::string user_id;
    std::vector<ScriptSession> sessions;

    const ScriptSession& session(int index) const;
    std::optional<std::string> answer_for(int session_index, const PropertyKey& key) const;
};

UserScript user_script_from_json(const nlohmann::json& doc);  // throws Error(format)
UserScript load_user_script(const std::filesystem::path& path);

struct SimulationResult {
    std::vector<TranscriptEntry> transcript;  // every line written this run
    UserModel final_model;
};

// Runs `sessions` complete sessions of the scripted user against `robot`,
// writing model documents and transcripts under `store_root`.
SimulationResult simulate(const Resources& resources, RobotId robot, const UserScript& script,
                          int sessions, const RecallConfig& config,
                          const std::filesystem::path& store_root);

struct StatsCell {
    RobotId robot = RobotId::RoboTech;
    Family family = Family::Username;
    std::optional<Valence> valence;  // emotion cells only
    double expected = 0.0;
    double observed = 0.0;
    int trials = 0;
};

// For every (robot, family[, observed valence]) cell, the fraction of
// `trials` fresh users whose record was remembered under stochastic recall.
std::vector<StatsCell> run_stats(int trials, std::uint64_t seed);
std::string stats_to_csv(const std::vector<StatsCell>& cells);

struct ReplayReport {
    bool identical = true;
    int sessions_checked = 0;
    int turns_checked = 0;
    std::string session_id;  // first divergence, if any
    int turn = 0;
    std::string expected;
    std::string actual;

    std::string summary() const;
};

// Re-runs every session of a transcript log on a scratch store and compares
// each robot turn byte for byte. Throws Error(format) on malformed input.
ReplayReport replay(const Resources& resources, const std::filesystem::path& transcript);
ReplayReport replay(const Resources& resources, const std::vector<TranscriptEntry>& entries);

}  // namespace robomem
