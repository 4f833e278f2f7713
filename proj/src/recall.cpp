#include "robomem/recall.hpp"

#include <random>

#include "robomem/error.hpp"

namespace robomem {

std::string_view to_string(RecallMode mode) {
    return mode == RecallMode::threshold ? "threshold" : "stochastic";
}

RecallMode parse_recall_mode(std::string_view name) {
    if (name == "threshold") return RecallMode::threshold;
    if (name == "stochastic") return RecallMode::stochastic;
    throw Error(ErrorCode::format, "unknown recall mode '" + std::string(name) + "'");
}

Observation validate_observation(Observation obs) {
    const Family f = obs.key.family();
    const Channel expected = (f == Family::Emotion || f == Family::Attire)
                                 ? Channel::side_channel
                                 : Channel::explicit_answer;
    if (obs.channel != expected) {
        throw Error(ErrorCode::invalid_observation,
                    obs.key.to_string() + " arrived on the wrong channel");
    }
    if (auto* text = std::get_if<std::string>(&obs.raw_value)) {
        *text = normalize_value(*text);
    }
    check_value_matches(obs.key, obs.raw_value);
    return obs;
}

namespace {

PropertyKey route_key(const PersonaProfile& persona, const Observation& obs) {
    const Family f = obs.key.family();
    if (f == Family::Favourite || f == Family::SharedFavourite) {
        return classify_favourite(persona, *obs.key.param(), std::get<std::string>(obs.raw_value));
    }
    return obs.key;
}

void store_one(UserModel& model, const PersonaProfile& persona, const Observation& obs,
               int session_index) {
    PropertyKey key = route_key(persona, obs);
    if (key.family() == Family::Favourite) {
        model.records.erase(PropertyKey::shared_favourite(*key.param()));
    } else if (key.family() == Family::SharedFavourite) {
        model.records.erase(PropertyKey::favourite(*key.param()));
    }
    MemoryRecord rec = make_record(model.robot, key, obs.raw_value, session_index);
    model.records.insert_or_assign(key, std::move(rec));
}

void check_persona(const UserModel& model, const PersonaProfile& persona) {
    if (model.robot != persona.robot) {
        throw Error(ErrorCode::invalid_argument, "persona does not match the user model's robot");
    }
}

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// FNV-1a over the bytes, then mixed into the running state.
std::uint64_t absorb(std::uint64_t state, std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    // Length prefix keeps ("ab","c") and ("a","bc") apart.
    return mix64(state ^ mix64(h ^ (bytes.size() << 1)));
}

}  // namespace

UserModel populate(UserModel model, const PersonaProfile& persona,
                   std::span<const Observation> observations, int session_index) {
    check_persona(model, persona);
    std::vector<Observation> valid;
    valid.reserve(observations.size());
    for (const auto& obs : observations) valid.push_back(validate_observation(obs));
    for (const auto& obs : valid) store_one(model, persona, obs, session_index);
    return model;
}

UserModel reacquire(UserModel model, const PersonaProfile& persona, const Observation& obs,
                    int session_index) {
    check_persona(model, persona);
    store_one(model, persona, validate_observation(obs), session_index);
    return model;
}

double recall_draw(std::uint64_t seed, std::string_view user_id, RobotId robot,
                   const PropertyKey& key) {
    std::uint64_t state = mix64(seed);
    state = absorb(state, user_id);
    state = absorb(state, to_string(robot));
    state = absorb(state, key.to_string());
    std::mt19937_64 stream(state);
    // 53 high bits -> [0,1); avoids implementation-defined distributions.
    return static_cast<double>(stream() >> 11) * 0x1.0p-53;
}

RecallResult recall(UserModel model, const RecallConfig& config, int session_index) {
    if (session_index < 2) {
        throw Error(ErrorCode::invalid_argument, "recall runs from the second session onwards");
    }
    RecallOutcome outcome;
    outcome.session_index = session_index;
    for (auto& [key, rec] : model.records) {
        if (config.mode == RecallMode::threshold) {
            rec.status = rec.probability >= config.threshold ? RecordStatus::remembered
                                                             : RecordStatus::forgotten;
        } else if (rec.status == RecordStatus::stored) {
            double u = recall_draw(config.seed, model.user_id, model.robot, key);
            rec.status = u < rec.probability ? RecordStatus::remembered : RecordStatus::forgotten;
        }
        (rec.status == RecordStatus::remembered ? outcome.remembered : outcome.forgotten)
            .insert(key);
    }
    return {std::move(model), std::move(outcome)};
}

}  // namespace robomem
