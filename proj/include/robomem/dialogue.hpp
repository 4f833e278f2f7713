#pragma once

#include <deque>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "robomem/dialogue_act.hpp"
#include "robomem/kb.hpp"
#include "robomem/persona.hpp"
#include "robomem/recall.hpp"
#include "robomem/store.hpp"
#include "robomem/templates.hpp"

namespace robomem {

// Read-only configuration shared by every session.
struct Resources {
    PersonaRegistry personas;
    KnowledgeBase kb;
    TemplateSet templates;

    // Expects personas.json, kb.json and templates/ under `data_dir`.
    static Resources load(const std::filesystem::path& data_dir);
};

enum class Phase { greeting, slot_filling, recall_talk, farewell, closed };

std::string_view to_string(Phase phase);

// Stand-in for perception: what the robot "sees" alongside a user turn.
struct SideChannel {
    std::optional<Valence> emotion_valence;
    std::vector<std::pair<std::string, std::string>> attire;  // (aspect, value)

    bool empty() const { return !emotion_valence && attire.empty(); }
    bool operator==(const SideChannel&) const = default;
};

// null when empty; otherwise {"emotion_valence"?: "...", "attire"?: {aspect: value}}
nlohmann::json side_channel_to_json(const SideChannel& side);
SideChannel side_channel_from_json(const nlohmann::json& j);  // throws Error(format)

// One pending question plus the acts that lead into it.
struct ScriptStep {
    std::vector<DialogueAct> lead;
    DialogueAct question;

    PropertyKey key() const { return *question.key(); }
};

struct DialogueState {
    std::string session_id;
    std::string user_id;
    RobotId robot = RobotId::RoboTech;
    int session_index = 1;
    RecallConfig config;
    Phase phase = Phase::greeting;
    std::deque<ScriptStep> pending;
    std::vector<DialogueAct> closing;  // acts emitted just before Farewell
    std::optional<RecallOutcome> recall_outcome;
    std::vector<Observation> collected;
    std::vector<PropertyKey> reasked;
    std::vector<Valence> valences_seen;
    int turn = 0;

    std::vector<PropertyKey> pending_slots() const;
};

struct Turn {
    DialogueState state;
    std::vector<DialogueAct> acts;
    std::string text;
};

// Slots every first session collects, in order (before persona extras).
std::vector<PropertyKey> first_session_slots();

// Question script for a first session, shaped by the persona's style.
std::deque<ScriptStep> plan_first_session(const StyleParams& style);

// Acts for the opening of a later session, derived only from what was
// remembered. Never utters a forgotten or unobserved value.
std::vector<DialogueAct> plan_recall_acts(const RecallOutcome& outcome, const UserModel& model,
                                          const StyleParams& style, const KnowledgeBase& kb);

// Most frequent valence; ties go to the most recent.
std::optional<Valence> prevalent_valence(const std::vector<Valence>& seen);

class DialogueEngine {
public:
    DialogueEngine(const Resources& resources, ModelStore& store)
        : res_(resources), store_(store) {}

    // Loads the model, runs recall for returning users and plans the opening.
    Turn start_session(const std::string& user_id, RobotId robot, const RecallConfig& config,
                       const std::string& session_id);

    // Takes the user's answer to the pending question. Persists the model when
    // the session closes.
    Turn step(DialogueState state, std::string_view user_text, const SideChannel& side);

    const Resources& resources() const { return res_; }

private:
    void close(DialogueState& state);
    void log_turn(const DialogueState& state, const std::string& speaker, const std::string& text,
                  const std::vector<DialogueAct>& acts, const SideChannel* side);
    std::optional<Value> parse_answer(const PropertyKey& key, std::string_view text) const;

    const Resources& res_;
    ModelStore& store_;
};

}  // namespace robomem
