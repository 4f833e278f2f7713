#include "robomem/memory_model.hpp"

#include <cctype>

#include "robomem/error.hpp"

namespace robomem {

std::string_view to_string(Family family) {
    switch (family) {
        case Family::Username: return "username";
        case Family::Personal: return "personal";
        case Family::Topic: return "topic";
        case Family::Interest: return "interest";
        case Family::Favourite: return "favourite";
        case Family::SharedFavourite: return "shared_favourite";
        case Family::Emotion: return "emotion";
        case Family::Attire: return "attire";
    }
    return "?";
}

Family parse_family(std::string_view name) {
    for (Family f : kAllFamilies) {
        if (name == to_string(f)) return f;
    }
    throw Error(ErrorCode::format, "unknown property family '" + std::string(name) + "'");
}

bool family_takes_param(Family family) {
    switch (family) {
        case Family::Personal:
        case Family::Interest:
        case Family::Favourite:
        case Family::SharedFavourite:
        case Family::Attire:
            return true;
        case Family::Username:
        case Family::Topic:
        case Family::Emotion:
            return false;
    }
    return false;
}

std::string_view to_string(Valence v) {
    switch (v) {
        case Valence::positive: return "positive";
        case Valence::neutral: return "neutral";
        case Valence::negative: return "negative";
    }
    return "?";
}

Valence parse_valence(std::string_view name) {
    for (Valence v : kAllValences) {
        if (name == to_string(v)) return v;
    }
    throw Error(ErrorCode::format, "unknown valence '" + std::string(name) + "'");
}

std::string_view to_string(InterestLevel level) {
    switch (level) {
        case InterestLevel::low: return "low";
        case InterestLevel::medium: return "medium";
        case InterestLevel::high: return "high";
    }
    return "?";
}

std::optional<InterestLevel> parse_interest(std::string_view name) {
    for (InterestLevel l : {InterestLevel::low, InterestLevel::medium, InterestLevel::high}) {
        if (name == to_string(l)) return l;
    }
    return std::nullopt;
}

std::string normalize_value(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (char ch : raw) {
        auto c = static_cast<unsigned char>(ch);
        if (std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(static_cast<char>(std::tolower(c)));
    }
    if (out.empty()) throw Error(ErrorCode::empty_value, "value is empty after normalization");
    return out;
}

PropertyKey PropertyKey::make(Family family, std::optional<std::string> param) {
    if (family_takes_param(family) != param.has_value()) {
        throw Error(ErrorCode::invalid_observation,
                    std::string("family '") + std::string(robomem::to_string(family)) +
                        (param ? "' takes no parameter" : "' requires a parameter"));
    }
    if (param) param = normalize_value(*param);
    return PropertyKey(family, std::move(param));
}

std::string PropertyKey::to_string() const {
    std::string s(robomem::to_string(family_));
    if (param_) s += "(" + *param_ + ")";
    return s;
}

void check_value_matches(const PropertyKey& key, const Value& value) {
    bool ok = false;
    switch (key.family()) {
        case Family::Interest: ok = std::holds_alternative<InterestLevel>(value); break;
        case Family::Emotion: ok = std::holds_alternative<Valence>(value); break;
        default: ok = std::holds_alternative<std::string>(value); break;
    }
    if (!ok) {
        throw Error(ErrorCode::invalid_observation,
                    "value type does not match property " + key.to_string());
    }
    if (const auto* text = std::get_if<std::string>(&value); text && text->empty()) {
        throw Error(ErrorCode::empty_value, "empty value for property " + key.to_string());
    }
}

std::string value_to_string(const Value& value) {
    return std::visit(
        [](const auto& v) -> std::string {
            if constexpr (std::is_same_v<std::decay_t<decltype(v)>, std::string>) {
                return v;
            } else {
                return std::string(to_string(v));
            }
        },
        value);
}

std::string_view to_string(RecordStatus status) {
    switch (status) {
        case RecordStatus::stored: return "stored";
        case RecordStatus::remembered: return "remembered";
        case RecordStatus::forgotten: return "forgotten";
    }
    return "?";
}

RecordStatus parse_status(std::string_view name) {
    for (RecordStatus s :
         {RecordStatus::stored, RecordStatus::remembered, RecordStatus::forgotten}) {
        if (name == to_string(s)) return s;
    }
    throw Error(ErrorCode::format, "unknown record status '" + std::string(name) + "'");
}

namespace {

// Row order follows Family; columns are RoboTech, SunnyBot, MindStorm.
// Emotion is handled separately since it depends on the observed valence.
constexpr double kRecallTable[8][3] = {
    {1.0, 0.8, 0.3},  // username
    {0.9, 0.4, 0.4},  // personal(P)
    {1.0, 1.0, 0.5},  // topic
    {1.0, 0.9, 0.4},  // interest(topic)
    {0.9, 0.6, 0.2},  // favourite(F)
    {0.9, 0.9, 0.2},  // sharedFavourite(F)
    {0.0, 0.0, 0.0},  // emotion: see kEmotionTable
    {0.3, 0.7, 0.1},  // attire(A)
};

// Columns are positive, neutral, negative observed valence.
constexpr double kEmotionTable[3][3] = {
    {0.1, 0.1, 0.1},  // RoboTech
    {1.0, 1.0, 0.5},  // SunnyBot
    {0.2, 1.0, 1.0},  // MindStorm
};

}  // namespace

double get_probability(RobotId robot, const PropertyKey& key,
                       std::optional<Valence> observed_valence) {
    const auto r = static_cast<std::size_t>(robot);
    if (key.family() == Family::Emotion) {
        if (!observed_valence) {
            throw Error(ErrorCode::missing_valence, "emotion lookup needs the observed valence");
        }
        return kEmotionTable[r][static_cast<std::size_t>(*observed_valence)];
    }
    if (observed_valence) {
        throw Error(ErrorCode::spurious_valence,
                    "valence supplied for non-emotion property " + key.to_string());
    }
    return kRecallTable[static_cast<std::size_t>(key.family())][r];
}

Valence perceive_valence(RobotId robot, Valence observed) {
    if (observed != Valence::neutral) return observed;
    switch (robot) {
        case RobotId::SunnyBot: return Valence::positive;
        case RobotId::MindStorm: return Valence::negative;
        case RobotId::RoboTech: return Valence::neutral;
    }
    return observed;
}

PropertyKey classify_favourite(const PersonaProfile& persona, std::string_view category,
                               std::string_view user_value) {
    Preference pref{std::string(category), std::string(user_value)};
    if (persona.preferences.contains(pref)) {
        return PropertyKey::shared_favourite(std::string(category));
    }
    return PropertyKey::favourite(std::string(category));
}

MemoryRecord make_record(RobotId robot, const PropertyKey& key, const Value& observed,
                         int session_index) {
    check_value_matches(key, observed);
    if (session_index < 1) {
        throw Error(ErrorCode::invalid_argument, "session index must be positive");
    }
    std::optional<Valence> observed_valence;
    Value stored = observed;
    if (key.family() == Family::Emotion) {
        observed_valence = std::get<Valence>(observed);
        stored = perceive_valence(robot, *observed_valence);
    }
    return MemoryRecord{
        .key = key,
        .value = std::move(stored),
        .probability = get_probability(robot, key, observed_valence),
        .status = RecordStatus::stored,
        .observed_valence = observed_valence,
        .session_observed = session_index,
    };
}

}  // namespace robomem
