#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "robomem/kb.hpp"
#include "robomem/memory_model.hpp"

namespace robomem {

enum class ActKind {
    GreetWithName,
    GreetAnonymous,
    ReAsk,
    AskSlot,
    AskMotivation,
    AskDetail,
    SelfDisclose,
    CommentAttire,
    ReferenceEmotion,
    Recommend,
    SharedFavouriteCallout,
    RecallPersonal,
    Farewell,
};

inline constexpr std::array<ActKind, 13> kAllActKinds = {
    ActKind::GreetWithName,  ActKind::GreetAnonymous,   ActKind::ReAsk,
    ActKind::AskSlot,        ActKind::AskMotivation,    ActKind::AskDetail,
    ActKind::SelfDisclose,   ActKind::CommentAttire,    ActKind::ReferenceEmotion,
    ActKind::Recommend,      ActKind::SharedFavouriteCallout, ActKind::RecallPersonal,
    ActKind::Farewell};

std::string_view to_string(ActKind kind);
ActKind parse_act_kind(std::string_view name);  // throws Error(format)

// True for the kinds that put a question to the user and wait for an answer.
bool is_question(ActKind kind);

// A typed unit of robot behaviour. Slots by kind:
//   GreetWithName            name, family
//   AskSlot/AskDetail/
//   AskMotivation/ReAsk      family, [param], label, [hedged]
//   SelfDisclose             topic
//   CommentAttire            family, param, aspect, value
//   ReferenceEmotion         family, valence
//   Recommend                film, reason, [genre, favourite_film, director, actor]
//   SharedFavouriteCallout   family, param, category, value
//   RecallPersonal           family, param, aspect, value
//   GreetAnonymous/Farewell  (none)
struct DialogueAct {
    ActKind kind = ActKind::Farewell;
    std::map<std::string, std::string> slots;

    // The property the act asks about or draws its value from, if any.
    std::optional<PropertyKey> key() const;
    std::string slot(const std::string& name) const;

    bool operator==(const DialogueAct&) const = default;
};

// Throws Error(format) when the slots do not fit the kind.
void check_act(const DialogueAct& act);

nlohmann::json act_to_json(const DialogueAct& act);
DialogueAct act_from_json(const nlohmann::json& j);
nlohmann::json acts_to_json(const std::vector<DialogueAct>& acts);
std::vector<DialogueAct> acts_from_json(const nlohmann::json& j);

// Short human label for a property: "name", "profession", "favourite film".
std::string property_label(const PropertyKey& key);

namespace acts {

DialogueAct greet_with_name(const std::string& name);
DialogueAct greet_anonymous();
DialogueAct ask_slot(const PropertyKey& key);
DialogueAct ask_detail(const PropertyKey& key);
DialogueAct ask_motivation(const PropertyKey& key);
DialogueAct re_ask(const PropertyKey& key, bool hedged);
DialogueAct self_disclose(const std::string& topic);
DialogueAct comment_attire(const std::string& aspect, const std::string& value);
DialogueAct reference_emotion(Valence stored);
DialogueAct recommend(const Recommendation& rec);
DialogueAct shared_favourite_callout(const std::string& category, const std::string& value);
DialogueAct recall_personal(const std::string& aspect, const std::string& value);
DialogueAct farewell();

}  // namespace acts

}  // namespace robomem
