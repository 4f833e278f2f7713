#include "robomem/dialogue.hpp"

#include <algorithm>
#include <map>

#include "robomem/error.hpp"

namespace robomem {

using nlohmann::json;

Resources Resources::load(const std::filesystem::path& data_dir) {
    return Resources{
        PersonaRegistry::load(data_dir / "personas.json"),
        KnowledgeBase::load(data_dir / "kb.json"),
        TemplateSet::load_dir(data_dir / "templates"),
    };
}

std::string_view to_string(Phase phase) {
    switch (phase) {
        case Phase::greeting: return "greeting";
        case Phase::slot_filling: return "slot_filling";
        case Phase::recall_talk: return "recall_talk";
        case Phase::farewell: return "farewell";
        case Phase::closed: return "closed";
    }
    return "?";
}

json side_channel_to_json(const SideChannel& side) {
    if (side.empty()) return nullptr;
    json j = json::object();
    if (side.emotion_valence) j["emotion_valence"] = std::string(to_string(*side.emotion_valence));
    if (!side.attire.empty()) {
        json attire = json::object();
        for (const auto& [aspect, value] : side.attire) attire[aspect] = value;
        j["attire"] = attire;
    }
    return j;
}

SideChannel side_channel_from_json(const json& j) {
    SideChannel side;
    if (j.is_null()) return side;
    try {
        if (!j.is_object()) throw Error(ErrorCode::format, "side channel must be an object");
        if (j.contains("emotion_valence") && !j.at("emotion_valence").is_null()) {
            side.emotion_valence = parse_valence(j.at("emotion_valence").get<std::string>());
        }
        if (j.contains("attire") && !j.at("attire").is_null()) {
            const json& a = j.at("attire");
            if (a.is_object()) {
                for (const auto& [aspect, value] : a.items()) {
                    side.attire.emplace_back(aspect, value.get<std::string>());
                }
            } else if (a.is_array()) {
                for (const auto& item : a) {
                    side.attire.emplace_back(item.at("aspect").get<std::string>(),
                                             item.at("value").get<std::string>());
                }
            } else {
                throw Error(ErrorCode::format, "attire must be an object or an array");
            }
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::format, std::string("bad side channel: ") + e.what());
    }
    return side;
}

std::vector<PropertyKey> DialogueState::pending_slots() const {
    std::vector<PropertyKey> out;
    for (const auto& s : pending) out.push_back(s.key());
    return out;
}

std::vector<PropertyKey> first_session_slots() {
    return {
        PropertyKey::username(),
        PropertyKey::personal("profession"),
        PropertyKey::topic(),
        PropertyKey::interest("cinema"),
        PropertyKey::favourite("film"),
        PropertyKey::favourite("actor"),
        PropertyKey::favourite("director"),
    };
}

std::deque<ScriptStep> plan_first_session(const StyleParams& style) {
    std::deque<ScriptStep> script;
    for (const PropertyKey& key : first_session_slots()) {
        ScriptStep step{{}, acts::ask_slot(key)};
        if (key.family() == Family::Username) step.lead.push_back(acts::greet_anonymous());
        if (style.self_disclosure) {
            step.lead.push_back(acts::self_disclose(key.param().value_or(
                std::string(to_string(key.family())))));
        }
        script.push_back(std::move(step));

        if (style.detail_probing) {
            if (key == PropertyKey::personal("profession")) {
                script.push_back({{}, acts::ask_detail(PropertyKey::personal("field"))});
            } else if (key == PropertyKey::favourite("film")) {
                script.push_back({{}, acts::ask_detail(PropertyKey::favourite("genre"))});
            }
        }
        if (style.motivation_probing && key.family() == Family::Favourite) {
            script.push_back(
                {{}, acts::ask_motivation(PropertyKey::personal(*key.param() + " motivation"))});
        }
    }
    return script;
}

std::vector<DialogueAct> plan_recall_acts(const RecallOutcome& outcome, const UserModel& model,
                                          const StyleParams& style, const KnowledgeBase& kb) {
    auto record = [&](const PropertyKey& k) -> const MemoryRecord* {
        auto it = model.records.find(k);
        return it == model.records.end() ? nullptr : &it->second;
    };
    auto remembered = [&](const PropertyKey& k) {
        return outcome.remembered.contains(k) && record(k) != nullptr;
    };
    auto forgotten = [&](const PropertyKey& k) {
        return outcome.forgotten.contains(k) && record(k) != nullptr;
    };
    auto text = [&](const PropertyKey& k) { return std::get<std::string>(record(k)->value); };
    auto remembered_of = [&](Family f) {
        std::vector<PropertyKey> out;
        for (const auto& k : outcome.remembered) {
            if (k.family() == f && record(k)) out.push_back(k);
        }
        return out;
    };
    const bool hedged = style.hedged_recall;

    std::vector<DialogueAct> out;
    const PropertyKey username = PropertyKey::username();
    if (remembered(username)) {
        out.push_back(acts::greet_with_name(text(username)));
    } else if (forgotten(username)) {
        out.push_back(acts::re_ask(username, hedged));
    } else {
        out.push_back(acts::greet_anonymous());
        out.push_back(acts::ask_slot(username));
    }

    for (const auto& k : remembered_of(Family::Personal)) {
        out.push_back(acts::recall_personal(*k.param(), text(k)));
    }
    for (const auto& k : remembered_of(Family::Attire)) {
        out.push_back(acts::comment_attire(*k.param(), text(k)));
    }
    if (remembered(PropertyKey::emotion())) {
        out.push_back(acts::reference_emotion(std::get<Valence>(record(PropertyKey::emotion())->value)));
    }
    if (forgotten(PropertyKey::topic())) out.push_back(acts::re_ask(PropertyKey::topic(), hedged));

    if (style.preference_mirroring) {
        for (const auto& k : remembered_of(Family::SharedFavourite)) {
            out.push_back(acts::shared_favourite_callout(*k.param(), text(k)));
        }
    }

    FavouriteSet favourites;
    for (Family f : {Family::Favourite, Family::SharedFavourite}) {
        for (const auto& k : remembered_of(f)) favourites.emplace(*k.param(), text(k));
    }
    if (!favourites.empty()) {
        if (auto rec = kb.recommend(favourites)) out.push_back(acts::recommend(*rec));
    }

    for (const auto& film : {PropertyKey::favourite("film"), PropertyKey::shared_favourite("film")}) {
        if (forgotten(film)) out.push_back(acts::re_ask(film, hedged));
    }
    if (style.detail_probing) {
        for (const auto& k : outcome.forgotten) {
            if (k.family() == Family::Personal && record(k)) out.push_back(acts::re_ask(k, hedged));
        }
    }
    return out;
}

std::optional<Valence> prevalent_valence(const std::vector<Valence>& seen) {
    if (seen.empty()) return std::nullopt;
    std::map<Valence, int> counts;
    for (Valence v : seen) ++counts[v];
    int best = 0;
    for (const auto& [v, n] : counts) best = std::max(best, n);
    for (auto it = seen.rbegin(); it != seen.rend(); ++it) {
        if (counts[*it] == best) return *it;
    }
    return std::nullopt;
}

namespace {

void append(std::vector<DialogueAct>& to, const std::vector<DialogueAct>& from) {
    to.insert(to.end(), from.begin(), from.end());
}

// Emits the lead-in and question of the front step; the lead is spoken once.
std::vector<DialogueAct> take_next_question(DialogueState& state) {
    ScriptStep& front = state.pending.front();
    std::vector<DialogueAct> out = std::move(front.lead);
    front.lead.clear();
    out.push_back(front.question);
    return out;
}

std::optional<EntityType> favourite_entity(const std::string& category) {
    return parse_entity_type(category);
}

}  // namespace

Turn DialogueEngine::start_session(const std::string& user_id, RobotId robot,
                                   const RecallConfig& config, const std::string& session_id) {
    const PersonaProfile& persona = res_.personas.get(robot);
    check_user_id(user_id);
    if (session_id.empty()) throw Error(ErrorCode::invalid_argument, "empty session id");
    if (!(config.threshold >= 0.0 && config.threshold <= 1.0)) {
        throw Error(ErrorCode::invalid_argument, "recall threshold must lie in [0,1]");
    }
    const StyleParams style = style_params(persona);

    DialogueState state;
    state.session_id = session_id;
    state.user_id = user_id;
    state.robot = robot;
    state.config = config;

    std::vector<DialogueAct> opening;
    {
        auto guard = store_.lock(user_id, robot);
        state.session_index = 1 + store_.completed_sessions(user_id, robot);
        if (state.session_index == 1) {
            state.pending = plan_first_session(style);
            state.phase = Phase::slot_filling;
        } else {
            auto [model, outcome] = recall(store_.load(user_id, robot), config, state.session_index);
            store_.save(model);
            std::vector<DialogueAct> lead;
            for (auto& act : plan_recall_acts(outcome, model, style, res_.kb)) {
                if (is_question(act.kind)) {
                    state.pending.push_back({std::move(lead), std::move(act)});
                    lead.clear();
                } else {
                    lead.push_back(std::move(act));
                }
            }
            state.closing = std::move(lead);
            state.recall_outcome = std::move(outcome);
            state.phase = state.pending.empty() ? Phase::farewell : Phase::recall_talk;
        }
    }

    if (!state.pending.empty()) {
        opening = take_next_question(state);
    } else {
        opening = std::move(state.closing);
        state.closing.clear();
    }
    std::string text = render(opening, persona, res_.templates);
    log_turn(state, "robot", text, opening, nullptr);
    return {std::move(state), std::move(opening), std::move(text)};
}

std::optional<Value> DialogueEngine::parse_answer(const PropertyKey& key,
                                                  std::string_view text) const {
    std::string norm;
    try {
        norm = normalize_value(text);
    } catch (const Error&) {
        return std::nullopt;
    }
    switch (key.family()) {
        case Family::Interest:
            if (auto level = parse_interest(norm)) return *level;
            return std::nullopt;
        case Family::Favourite:
        case Family::SharedFavourite:
            if (auto type = favourite_entity(*key.param())) {
                if (const KbEntry* e = res_.kb.lookup(*type, norm)) return e->name;
            }
            return norm;
        default:
            return norm;
    }
}

Turn DialogueEngine::step(DialogueState state, std::string_view user_text,
                          const SideChannel& side) {
    if (state.phase == Phase::closed) {
        throw Error(ErrorCode::closed_session, "session " + state.session_id + " is closed");
    }
    if (state.phase == Phase::greeting) {
        throw Error(ErrorCode::invalid_argument, "session " + state.session_id + " not started");
    }
    const PersonaProfile& persona = res_.personas.get(state.robot);

    std::vector<Observation> attire;
    for (const auto& [aspect, value] : side.attire) {
        attire.push_back(validate_observation(
            {PropertyKey::attire(aspect), Value{value}, Channel::side_channel}));
    }

    ++state.turn;
    log_turn(state, "user", std::string(user_text), {}, &side);

    if (side.emotion_valence) state.valences_seen.push_back(*side.emotion_valence);
    for (auto& obs : attire) state.collected.push_back(std::move(obs));

    std::vector<DialogueAct> reply;
    bool finished = state.pending.empty();
    if (!state.pending.empty()) {
        const ScriptStep& current = state.pending.front();
        const PropertyKey key = current.key();
        if (auto value = parse_answer(key, user_text)) {
            state.collected.push_back(
                validate_observation({key, std::move(*value), Channel::explicit_answer}));
            if (current.question.kind == ActKind::ReAsk) state.reasked.push_back(key);
            state.pending.pop_front();
            if (state.pending.empty()) {
                finished = true;
            } else {
                reply = take_next_question(state);
            }
        } else {
            reply.push_back(current.question);
        }
    }
    if (finished) {
        append(reply, state.closing);
        state.closing.clear();
        reply.push_back(acts::farewell());
        close(state);
    }

    ++state.turn;
    std::string text = render(reply, persona, res_.templates);
    log_turn(state, "robot", text, reply, nullptr);
    return {std::move(state), std::move(reply), std::move(text)};
}

void DialogueEngine::close(DialogueState& state) {
    const PersonaProfile& persona = res_.personas.get(state.robot);
    std::vector<Observation> fresh;
    std::vector<Observation> again;
    for (const auto& obs : state.collected) {
        bool reasked = std::find(state.reasked.begin(), state.reasked.end(), obs.key) !=
                       state.reasked.end();
        (reasked ? again : fresh).push_back(obs);
    }
    if (auto v = prevalent_valence(state.valences_seen)) {
        fresh.push_back({PropertyKey::emotion(), Value{*v}, Channel::side_channel});
    }

    auto guard = store_.lock(state.user_id, state.robot);
    UserModel model = store_.load(state.user_id, state.robot);
    model = populate(std::move(model), persona, fresh, state.session_index);
    for (const auto& obs : again) {
        model = reacquire(std::move(model), persona, obs, state.session_index);
    }
    store_.save(model);
    state.phase = Phase::closed;
}

void DialogueEngine::log_turn(const DialogueState& state, const std::string& speaker,
                              const std::string& text, const std::vector<DialogueAct>& acts,
                              const SideChannel* side) {
    TranscriptEntry e;
    e.session_id = state.session_id;
    e.turn = state.turn;
    e.speaker = speaker;
    e.text = text;
    e.acts = acts_to_json(acts);
    e.side_channel = side ? side_channel_to_json(*side) : json(nullptr);
    e.user_id = state.user_id;
    e.robot = state.robot;
    e.session_index = state.session_index;
    e.config = state.config;
    store_.append_transcript(e);
}

}  // namespace robomem
