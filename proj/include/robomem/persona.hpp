#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace robomem {

enum class RobotId { RoboTech, SunnyBot, MindStorm };

inline constexpr std::array<RobotId, 3> kAllRobots = {
    RobotId::RoboTech, RobotId::SunnyBot, RobotId::MindStorm};

std::string_view to_string(RobotId id);
// Case-insensitive; throws Error(unknown_robot).
RobotId parse_robot(std::string_view name);

// Big Five weights, each in [0,1].
struct Traits {
    double extraversion = 0.0;
    double agreeableness = 0.0;
    double neuroticism = 0.0;
    double conscientiousness = 0.0;
    double openness = 0.0;

    bool operator==(const Traits&) const = default;
};

// (category, value), both normalized.
using Preference = std::pair<std::string, std::string>;

struct PersonaProfile {
    RobotId robot = RobotId::RoboTech;
    Traits traits;
    std::string motto;
    std::set<Preference> preferences;

    bool operator==(const PersonaProfile&) const = default;
};

// Trait magnitude at or above which a persona is treated as "high" on it.
inline constexpr double kHighTraitCutoff = 0.7;

struct StyleParams {
    bool detail_probing = false;        // conscientiousness
    bool motivation_probing = false;    // openness
    bool self_disclosure = false;       // extraversion
    bool preference_mirroring = false;  // agreeableness
    bool hedged_recall = false;         // neuroticism

    bool operator==(const StyleParams&) const = default;
};

StyleParams style_params(const PersonaProfile& profile);

nlohmann::json persona_to_json(const PersonaProfile& profile);
PersonaProfile persona_from_json(const nlohmann::json& j);

// Immutable set of persona profiles, loaded from a personas document:
//   {"personas": [{"robot_id", "extraversion", "agreeableness", "neuroticism",
//                  "conscientiousness", "openness", "motto",
//                  "preferences": [{"category", "value"}]}]}
class PersonaRegistry {
public:
    static PersonaRegistry from_json(const nlohmann::json& doc);
    static PersonaRegistry load(const std::filesystem::path& path);

    // Throws Error(unknown_robot) when the registry has no such persona.
    const PersonaProfile& get(RobotId robot) const;
    const PersonaProfile& get(std::string_view robot_name) const;

    std::vector<PersonaProfile> all() const;
    std::size_t size() const { return profiles_.size(); }

private:
    std::map<RobotId, PersonaProfile> profiles_;
};

}  // namespace robomem
