#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace robomem {

enum class EntityType { director, actor, film, genre };

std::string_view to_string(EntityType t);
std::optional<EntityType> parse_entity_type(std::string_view name);

// directed_by: film -> director     has_genre: film -> genre
// acted_in:    actor -> film        upcoming:  actor|director -> film
enum class Relation { directed_by, acted_in, has_genre, upcoming };

std::string_view to_string(Relation r);

struct KbEntry {
    EntityType type = EntityType::film;
    std::string name;
    std::vector<std::pair<Relation, std::string>> relations;

    bool operator==(const KbEntry&) const = default;
};

enum class ReasonKind {
    genre_match,          // same genre as a favourite film
    favourite_director,   // by a favourite director
    upcoming_with_actor,  // upcoming release featuring a favourite actor
    favourite_actor,      // features a favourite actor
    favourite_genre,      // belongs to a favourite genre
};

std::string_view to_string(ReasonKind k);

struct RecommendationReason {
    ReasonKind kind = ReasonKind::favourite_director;
    std::string genre;           // genre_match, favourite_genre
    std::string favourite_film;  // genre_match
    std::string director;        // genre_match, favourite_director
    std::string actor;           // upcoming_with_actor, favourite_actor

    bool operator==(const RecommendationReason&) const = default;
};

struct Recommendation {
    std::string film;
    RecommendationReason reason;

    bool operator==(const Recommendation&) const = default;
};

// (category, value) with category in {film, actor, director, genre}.
using FavouriteSet = std::set<std::pair<std::string, std::string>>;

// Small immutable movie-domain graph. Loaded from a JSON array of
// {"entity_type", "name", "relations": [{"relation", "target"}]}.
class KnowledgeBase {
public:
    static KnowledgeBase from_json(const nlohmann::json& doc);
    static KnowledgeBase load(const std::filesystem::path& path);

    // Exact match after normalization; nullptr when absent.
    const KbEntry* lookup(EntityType type, std::string_view name) const;
    std::optional<KbEntry> find(EntityType type, std::string_view name) const;

    // Picks a film the user has not named. Preference order: films by a
    // favourite director, upcoming films with a favourite actor, other films
    // with a favourite actor, films in a favourite genre. Ties break on the
    // lexicographically smallest film name.
    std::optional<Recommendation> recommend(const FavouriteSet& favourites) const;

    std::size_t size() const { return entries_.size(); }

private:
    std::vector<std::string> targets_of(EntityType type, std::string_view name,
                                        Relation rel) const;
    std::set<std::string> films_related_to(EntityType person_type, std::string_view person,
                                           std::optional<Relation> from_film,
                                           std::optional<Relation> from_person) const;

    std::map<std::pair<EntityType, std::string>, KbEntry> entries_;
};

}  // namespace robomem
