#include "robomem/dialogue_act.hpp"

#include "robomem/error.hpp"

namespace robomem {

using nlohmann::json;

std::string_view to_string(ActKind kind) {
    switch (kind) {
        case ActKind::GreetWithName: return "GreetWithName";
        case ActKind::GreetAnonymous: return "GreetAnonymous";
        case ActKind::ReAsk: return "ReAsk";
        case ActKind::AskSlot: return "AskSlot";
        case ActKind::AskMotivation: return "AskMotivation";
        case ActKind::AskDetail: return "AskDetail";
        case ActKind::SelfDisclose: return "SelfDisclose";
        case ActKind::CommentAttire: return "CommentAttire";
        case ActKind::ReferenceEmotion: return "ReferenceEmotion";
        case ActKind::Recommend: return "Recommend";
        case ActKind::SharedFavouriteCallout: return "SharedFavouriteCallout";
        case ActKind::RecallPersonal: return "RecallPersonal";
        case ActKind::Farewell: return "Farewell";
    }
    return "?";
}

ActKind parse_act_kind(std::string_view name) {
    for (ActKind k : kAllActKinds) {
        if (name == to_string(k)) return k;
    }
    throw Error(ErrorCode::format, "unknown act kind '" + std::string(name) + "'");
}

bool is_question(ActKind kind) {
    return kind == ActKind::AskSlot || kind == ActKind::ReAsk || kind == ActKind::AskDetail ||
           kind == ActKind::AskMotivation;
}

std::optional<PropertyKey> DialogueAct::key() const {
    auto fam = slots.find("family");
    if (fam == slots.end()) return std::nullopt;
    std::optional<std::string> param;
    if (auto p = slots.find("param"); p != slots.end()) param = p->second;
    return PropertyKey::make(parse_family(fam->second), param);
}

std::string DialogueAct::slot(const std::string& name) const {
    auto it = slots.find(name);
    return it == slots.end() ? std::string() : it->second;
}

namespace {

std::vector<std::string_view> required_slots(ActKind kind) {
    switch (kind) {
        case ActKind::GreetWithName: return {"name", "family"};
        case ActKind::AskSlot:
        case ActKind::AskDetail:
        case ActKind::AskMotivation:
        case ActKind::ReAsk: return {"family", "label"};
        case ActKind::SelfDisclose: return {"topic"};
        case ActKind::CommentAttire: return {"family", "param", "aspect", "value"};
        case ActKind::ReferenceEmotion: return {"family", "valence"};
        case ActKind::Recommend: return {"film", "reason"};
        case ActKind::SharedFavouriteCallout: return {"family", "param", "category", "value"};
        case ActKind::RecallPersonal: return {"family", "param", "aspect", "value"};
        case ActKind::GreetAnonymous:
        case ActKind::Farewell: return {};
    }
    return {};
}

void put_key(DialogueAct& act, const PropertyKey& key) {
    act.slots["family"] = std::string(to_string(key.family()));
    if (key.param()) act.slots["param"] = *key.param();
}

DialogueAct question(ActKind kind, const PropertyKey& key) {
    DialogueAct act{kind, {}};
    put_key(act, key);
    act.slots["label"] = property_label(key);
    return act;
}

}  // namespace

void check_act(const DialogueAct& act) {
    for (auto name : required_slots(act.kind)) {
        if (!act.slots.contains(std::string(name))) {
            throw Error(ErrorCode::format, std::string(to_string(act.kind)) +
                                               " act is missing slot '" + std::string(name) + "'");
        }
    }
    if (act.slots.contains("family")) (void)act.key();
}

json act_to_json(const DialogueAct& act) {
    return {{"kind", std::string(to_string(act.kind))}, {"slots", act.slots}};
}

DialogueAct act_from_json(const json& j) {
    try {
        DialogueAct act;
        act.kind = parse_act_kind(j.at("kind").get<std::string>());
        act.slots = j.value("slots", json::object()).get<std::map<std::string, std::string>>();
        check_act(act);
        return act;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::format, std::string("bad dialogue act: ") + e.what());
    }
}

json acts_to_json(const std::vector<DialogueAct>& acts) {
    json out = json::array();
    for (const auto& a : acts) out.push_back(act_to_json(a));
    return out;
}

std::vector<DialogueAct> acts_from_json(const json& j) {
    std::vector<DialogueAct> out;
    for (const auto& item : j) out.push_back(act_from_json(item));
    return out;
}

std::string property_label(const PropertyKey& key) {
    const std::string param = key.param().value_or("");
    switch (key.family()) {
        case Family::Username: return "name";
        case Family::Personal: return param;
        case Family::Topic: return "topic";
        case Family::Interest: return "interest in " + param;
        case Family::Favourite:
        case Family::SharedFavourite: return "favourite " + param;
        case Family::Emotion: return "mood";
        case Family::Attire: return param;
    }
    return param;
}

namespace acts {

DialogueAct greet_with_name(const std::string& name) {
    return {ActKind::GreetWithName, {{"name", name}, {"family", "username"}}};
}

DialogueAct greet_anonymous() { return {ActKind::GreetAnonymous, {}}; }

DialogueAct ask_slot(const PropertyKey& key) { return question(ActKind::AskSlot, key); }

DialogueAct ask_detail(const PropertyKey& key) { return question(ActKind::AskDetail, key); }

DialogueAct ask_motivation(const PropertyKey& key) {
    return question(ActKind::AskMotivation, key);
}

DialogueAct re_ask(const PropertyKey& key, bool hedged) {
    DialogueAct act = question(ActKind::ReAsk, key);
    if (hedged) act.slots["hedged"] = "true";
    return act;
}

DialogueAct self_disclose(const std::string& topic) {
    return {ActKind::SelfDisclose, {{"topic", topic}}};
}

DialogueAct comment_attire(const std::string& aspect, const std::string& value) {
    return {ActKind::CommentAttire,
            {{"family", "attire"}, {"param", aspect}, {"aspect", aspect}, {"value", value}}};
}

DialogueAct reference_emotion(Valence stored) {
    return {ActKind::ReferenceEmotion,
            {{"family", "emotion"}, {"valence", std::string(to_string(stored))}}};
}

DialogueAct recommend(const Recommendation& rec) {
    DialogueAct act{ActKind::Recommend,
                    {{"film", rec.film}, {"reason", std::string(to_string(rec.reason.kind))}}};
    auto put = [&](const char* name, const std::string& v) {
        if (!v.empty()) act.slots[name] = v;
    };
    put("genre", rec.reason.genre);
    put("favourite_film", rec.reason.favourite_film);
    put("director", rec.reason.director);
    put("actor", rec.reason.actor);
    return act;
}

DialogueAct shared_favourite_callout(const std::string& category, const std::string& value) {
    return {ActKind::SharedFavouriteCallout,
            {{"family", "shared_favourite"},
             {"param", category},
             {"category", category},
             {"value", value}}};
}

DialogueAct recall_personal(const std::string& aspect, const std::string& value) {
    return {ActKind::RecallPersonal,
            {{"family", "personal"}, {"param", aspect}, {"aspect", aspect}, {"value", value}}};
}

DialogueAct farewell() { return {ActKind::Farewell, {}}; }

}  // namespace acts

}  // namespace robomem
