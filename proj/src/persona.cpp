#include "robomem/persona.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "robomem/error.hpp"
#include "robomem/memory_model.hpp"

namespace robomem {

using nlohmann::json;

std::string_view to_string(RobotId id) {
    switch (id) {
        case RobotId::RoboTech: return "RoboTech";
        case RobotId::SunnyBot: return "SunnyBot";
        case RobotId::MindStorm: return "MindStorm";
    }
    return "?";
}

RobotId parse_robot(std::string_view name) {
    auto iequals = [](std::string_view a, std::string_view b) {
        return a.size() == b.size() &&
               std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
                   return std::tolower(static_cast<unsigned char>(x)) ==
                          std::tolower(static_cast<unsigned char>(y));
               });
    };
    for (RobotId id : kAllRobots) {
        if (iequals(name, to_string(id))) return id;
    }
    throw Error(ErrorCode::unknown_robot, "unknown robot '" + std::string(name) + "'");
}

StyleParams style_params(const PersonaProfile& profile) {
    const Traits& t = profile.traits;
    StyleParams s;
    s.detail_probing = t.conscientiousness >= kHighTraitCutoff;
    s.motivation_probing = t.openness >= kHighTraitCutoff;
    s.self_disclosure = t.extraversion >= kHighTraitCutoff;
    s.preference_mirroring = t.agreeableness >= kHighTraitCutoff;
    s.hedged_recall = t.neuroticism >= kHighTraitCutoff;
    return s;
}

json persona_to_json(const PersonaProfile& p) {
    json prefs = json::array();
    for (const auto& [category, value] : p.preferences) {
        prefs.push_back({{"category", category}, {"value", value}});
    }
    return {
        {"robot_id", std::string(to_string(p.robot))},
        {"extraversion", p.traits.extraversion},
        {"agreeableness", p.traits.agreeableness},
        {"neuroticism", p.traits.neuroticism},
        {"conscientiousness", p.traits.conscientiousness},
        {"openness", p.traits.openness},
        {"motto", p.motto},
        {"preferences", prefs},
    };
}

namespace {

double read_trait(const json& j, const char* name) {
    if (!j.contains(name) || !j.at(name).is_number()) {
        throw Error(ErrorCode::format, std::string("persona is missing trait '") + name + "'");
    }
    double w = j.at(name).get<double>();
    if (!(w >= 0.0 && w <= 1.0)) {
        throw Error(ErrorCode::format,
                    std::string("trait '") + name + "' outside [0,1]: " + std::to_string(w));
    }
    return w;
}

}  // namespace

PersonaProfile persona_from_json(const json& j) {
    if (!j.is_object()) throw Error(ErrorCode::format, "persona entry must be an object");
    PersonaProfile p;
    p.robot = parse_robot(j.at("robot_id").get<std::string>());
    p.traits.extraversion = read_trait(j, "extraversion");
    p.traits.agreeableness = read_trait(j, "agreeableness");
    p.traits.neuroticism = read_trait(j, "neuroticism");
    p.traits.conscientiousness = read_trait(j, "conscientiousness");
    p.traits.openness = read_trait(j, "openness");
    p.motto = j.value("motto", "");
    for (const auto& pref : j.value("preferences", json::array())) {
        p.preferences.emplace(normalize_value(pref.at("category").get<std::string>()),
                              normalize_value(pref.at("value").get<std::string>()));
    }
    return p;
}

PersonaRegistry PersonaRegistry::from_json(const json& doc) {
    PersonaRegistry reg;
    try {
        for (const auto& entry : doc.at("personas")) {
            PersonaProfile p = persona_from_json(entry);
            RobotId id = p.robot;
            if (!reg.profiles_.emplace(id, std::move(p)).second) {
                throw Error(ErrorCode::format,
                            "duplicate persona '" + std::string(to_string(id)) + "'");
            }
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::format, std::string("malformed personas document: ") + e.what());
    }
    return reg;
}

PersonaRegistry PersonaRegistry::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io, "cannot open personas file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::format, path.string() + ": " + e.what());
    }
    return from_json(doc);
}

const PersonaProfile& PersonaRegistry::get(RobotId robot) const {
    auto it = profiles_.find(robot);
    if (it == profiles_.end()) {
        throw Error(ErrorCode::unknown_robot,
                    "no persona registered for '" + std::string(to_string(robot)) + "'");
    }
    return it->second;
}

const PersonaProfile& PersonaRegistry::get(std::string_view robot_name) const {
    return get(parse_robot(robot_name));
}

std::vector<PersonaProfile> PersonaRegistry::all() const {
    std::vector<PersonaProfile> out;
    out.reserve(profiles_.size());
    for (const auto& [id, p] : profiles_) out.push_back(p);
    return out;
}

}  // namespace robomem
