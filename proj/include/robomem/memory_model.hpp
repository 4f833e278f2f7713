#pragma once

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "robomem/persona.hpp"

namespace robomem {

// Categories of user information a robot can store.
enum class Family {
    Username,
    Personal,
    Topic,
    Interest,
    Favourite,
    SharedFavourite,
    Emotion,
    Attire,
};

inline constexpr std::array<Family, 8> kAllFamilies = {
    Family::Username, Family::Personal,        Family::Topic,   Family::Interest,
    Family::Favourite, Family::SharedFavourite, Family::Emotion, Family::Attire};

std::string_view to_string(Family family);
Family parse_family(std::string_view name);  // throws Error(format)

// Whether keys of this family carry a parameter, e.g. personal("profession").
bool family_takes_param(Family family);

enum class Valence { positive, neutral, negative };

inline constexpr std::array<Valence, 3> kAllValences = {
    Valence::positive, Valence::neutral, Valence::negative};

std::string_view to_string(Valence v);
Valence parse_valence(std::string_view name);  // throws Error(format)

enum class InterestLevel { low, medium, high };

std::string_view to_string(InterestLevel level);
std::optional<InterestLevel> parse_interest(std::string_view name);

// Trims, case-folds and collapses internal whitespace. Throws
// Error(empty_value) when nothing is left.
std::string normalize_value(std::string_view raw);

class PropertyKey {
public:
    // Validates param arity against the family and normalizes the param.
    static PropertyKey make(Family family, std::optional<std::string> param = std::nullopt);

    static PropertyKey username() { return make(Family::Username); }
    static PropertyKey topic() { return make(Family::Topic); }
    static PropertyKey emotion() { return make(Family::Emotion); }
    static PropertyKey personal(std::string p) { return make(Family::Personal, std::move(p)); }
    static PropertyKey interest(std::string p) { return make(Family::Interest, std::move(p)); }
    static PropertyKey favourite(std::string p) { return make(Family::Favourite, std::move(p)); }
    static PropertyKey shared_favourite(std::string p) {
        return make(Family::SharedFavourite, std::move(p));
    }
    static PropertyKey attire(std::string p) { return make(Family::Attire, std::move(p)); }

    Family family() const { return family_; }
    const std::optional<std::string>& param() const { return param_; }

    // "username", "personal(profession)", ...
    std::string to_string() const;

    auto operator<=>(const PropertyKey&) const = default;
    bool operator==(const PropertyKey&) const = default;

private:
    PropertyKey(Family f, std::optional<std::string> p) : family_(f), param_(std::move(p)) {}

    Family family_;
    std::optional<std::string> param_;
};

using Value = std::variant<std::string, InterestLevel, Valence>;

// Throws Error(invalid_observation) if the variant does not match the family.
void check_value_matches(const PropertyKey& key, const Value& value);
std::string value_to_string(const Value& value);

enum class RecordStatus { stored, remembered, forgotten };

std::string_view to_string(RecordStatus status);
RecordStatus parse_status(std::string_view name);  // throws Error(format)

struct MemoryRecord {
    PropertyKey key;
    Value value;
    double probability = 0.0;
    RecordStatus status = RecordStatus::stored;
    std::optional<Valence> observed_valence;  // Emotion only
    int session_observed = 1;

    bool operator==(const MemoryRecord&) const = default;
};

inline constexpr int kUserModelSchemaVersion = 1;

struct UserModel {
    std::string user_id;
    RobotId robot = RobotId::RoboTech;
    std::map<PropertyKey, MemoryRecord> records;
    int schema_version = kUserModelSchemaVersion;

    bool operator==(const UserModel&) const = default;
};

// Likelihood that `robot` remembers a value stored under `key`. For the
// emotion family the lookup is keyed on the valence actually observed.
double get_probability(RobotId robot, const PropertyKey& key,
                       std::optional<Valence> observed_valence = std::nullopt);

// How a persona's temperament colours an observed valence before storage.
Valence perceive_valence(RobotId robot, Valence observed);

// SharedFavourite(category) when the persona holds the same preference,
// otherwise Favourite(category).
PropertyKey classify_favourite(const PersonaProfile& persona, std::string_view category,
                               std::string_view user_value);

// Builds a fresh `stored` record, applying the probability lookup and the
// valence-perception transform. Does not route favourites.
MemoryRecord make_record(RobotId robot, const PropertyKey& key, const Value& observed,
                         int session_index);

}  // namespace robomem
