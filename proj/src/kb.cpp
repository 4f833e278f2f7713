#include "robomem/kb.hpp"

#include <algorithm>
#include <fstream>

#include "robomem/error.hpp"
#include "robomem/memory_model.hpp"

namespace robomem {

using nlohmann::json;

std::string_view to_string(EntityType t) {
    switch (t) {
        case EntityType::director: return "director";
        case EntityType::actor: return "actor";
        case EntityType::film: return "film";
        case EntityType::genre: return "genre";
    }
    return "?";
}

std::optional<EntityType> parse_entity_type(std::string_view name) {
    for (EntityType t :
         {EntityType::director, EntityType::actor, EntityType::film, EntityType::genre}) {
        if (name == to_string(t)) return t;
    }
    return std::nullopt;
}

std::string_view to_string(Relation r) {
    switch (r) {
        case Relation::directed_by: return "directed_by";
        case Relation::acted_in: return "acted_in";
        case Relation::has_genre: return "has_genre";
        case Relation::upcoming: return "upcoming";
    }
    return "?";
}

std::string_view to_string(ReasonKind k) {
    switch (k) {
        case ReasonKind::genre_match: return "genre_match";
        case ReasonKind::favourite_director: return "favourite_director";
        case ReasonKind::upcoming_with_actor: return "upcoming_with_actor";
        case ReasonKind::favourite_actor: return "favourite_actor";
        case ReasonKind::favourite_genre: return "favourite_genre";
    }
    return "?";
}

namespace {

Relation parse_relation(std::string_view name) {
    for (Relation r :
         {Relation::directed_by, Relation::acted_in, Relation::has_genre, Relation::upcoming}) {
        if (name == to_string(r)) return r;
    }
    throw Error(ErrorCode::format, "unknown relation '" + std::string(name) + "'");
}

// Source and target types are always distinct, which also rules out cycles
// within a single relation.
bool relation_allowed(EntityType source, Relation rel) {
    switch (rel) {
        case Relation::directed_by:
        case Relation::has_genre:
            return source == EntityType::film;
        case Relation::acted_in:
            return source == EntityType::actor;
        case Relation::upcoming:
            return source == EntityType::actor || source == EntityType::director;
    }
    return false;
}

EntityType target_type(Relation rel) {
    switch (rel) {
        case Relation::directed_by: return EntityType::director;
        case Relation::has_genre: return EntityType::genre;
        case Relation::acted_in:
        case Relation::upcoming: return EntityType::film;
    }
    return EntityType::film;
}

}  // namespace

KnowledgeBase KnowledgeBase::from_json(const json& doc) {
    KnowledgeBase kb;
    try {
        if (!doc.is_array()) throw Error(ErrorCode::format, "knowledge base must be a JSON array");
        for (const auto& item : doc) {
            KbEntry entry;
            auto type = parse_entity_type(item.at("entity_type").get<std::string>());
            if (!type) throw Error(ErrorCode::format, "unknown entity_type in knowledge base");
            entry.type = *type;
            entry.name = normalize_value(item.at("name").get<std::string>());
            for (const auto& rel : item.value("relations", json::array())) {
                Relation r = parse_relation(rel.at("relation").get<std::string>());
                if (!relation_allowed(entry.type, r)) {
                    throw Error(ErrorCode::format, std::string(to_string(r)) +
                                                       " not allowed on a " +
                                                       std::string(to_string(entry.type)));
                }
                entry.relations.emplace_back(r, normalize_value(rel.at("target").get<std::string>()));
            }
            auto id = std::make_pair(entry.type, entry.name);
            if (!kb.entries_.emplace(id, std::move(entry)).second) {
                throw Error(ErrorCode::format, "duplicate knowledge base entry '" + id.second + "'");
            }
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::format, std::string("malformed knowledge base: ") + e.what());
    }
    for (const auto& [id, entry] : kb.entries_) {
        for (const auto& [rel, target] : entry.relations) {
            if (!kb.lookup(target_type(rel), target)) {
                throw Error(ErrorCode::format, "'" + entry.name + "' " +
                                                   std::string(to_string(rel)) +
                                                   " unknown entry '" + target + "'");
            }
        }
    }
    return kb;
}

KnowledgeBase KnowledgeBase::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io, "cannot open knowledge base " + path.string());
    try {
        return from_json(json::parse(in));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::format, path.string() + ": " + e.what());
    }
}

const KbEntry* KnowledgeBase::lookup(EntityType type, std::string_view name) const {
    std::string key;
    try {
        key = normalize_value(name);
    } catch (const Error&) {
        return nullptr;
    }
    auto it = entries_.find({type, key});
    return it == entries_.end() ? nullptr : &it->second;
}

std::optional<KbEntry> KnowledgeBase::find(EntityType type, std::string_view name) const {
    if (const KbEntry* e = lookup(type, name)) return *e;
    return std::nullopt;
}

std::vector<std::string> KnowledgeBase::targets_of(EntityType type, std::string_view name,
                                                   Relation rel) const {
    std::vector<std::string> out;
    if (const KbEntry* e = lookup(type, name)) {
        for (const auto& [r, target] : e->relations) {
            if (r == rel) out.push_back(target);
        }
    }
    return out;
}

// Films linked to `person` either by a film-side relation pointing at the
// person or by a person-side relation pointing at the film.
std::set<std::string> KnowledgeBase::films_related_to(EntityType person_type,
                                                      std::string_view person,
                                                      std::optional<Relation> from_film,
                                                      std::optional<Relation> from_person) const {
    std::set<std::string> films;
    for (const auto& [id, entry] : entries_) {
        if (entry.type == EntityType::film) {
            for (const auto& [r, target] : entry.relations) {
                if (r == from_film && target == person) films.insert(entry.name);
            }
        } else if (entry.type == person_type && entry.name == person) {
            for (const auto& [r, target] : entry.relations) {
                if (r == from_person) films.insert(target);
            }
        }
    }
    return films;
}

std::optional<Recommendation> KnowledgeBase::recommend(const FavouriteSet& favourites) const {
    std::set<std::string> named_films;
    for (const auto& [category, value] : favourites) {
        if (category == "film") named_films.insert(value);
    }
    auto values_of = [&](std::string_view category) {
        std::vector<std::string> out;
        for (const auto& [c, v] : favourites) {
            if (c == category) out.push_back(v);
        }
        return out;
    };

    // film -> person that led to it; the first person (sorted) wins.
    auto best = [&](const std::map<std::string, std::string>& cands)
        -> std::optional<std::pair<std::string, std::string>> {
        if (cands.empty()) return std::nullopt;
        return *cands.begin();
    };
    auto collect = [&](const std::vector<std::string>& people, EntityType person_type,
                       std::optional<Relation> from_film, std::optional<Relation> from_person) {
        std::map<std::string, std::string> cands;
        for (const auto& person : people) {
            for (const auto& film : films_related_to(person_type, person, from_film, from_person)) {
                if (!named_films.contains(film)) cands.emplace(film, person);
            }
        }
        return cands;
    };

    const auto directors = values_of("director");
    if (auto pick = best(collect(directors, EntityType::director, Relation::directed_by,
                                 Relation::upcoming))) {
        Recommendation rec{pick->first, {}};
        rec.reason.director = pick->second;
        rec.reason.kind = ReasonKind::favourite_director;
        const auto genres = targets_of(EntityType::film, rec.film, Relation::has_genre);
        for (const auto& fav_film : named_films) {
            for (const auto& g : targets_of(EntityType::film, fav_film, Relation::has_genre)) {
                if (std::find(genres.begin(), genres.end(), g) == genres.end()) continue;
                if (rec.reason.kind != ReasonKind::genre_match || g < rec.reason.genre) {
                    rec.reason.kind = ReasonKind::genre_match;
                    rec.reason.genre = g;
                    rec.reason.favourite_film = fav_film;
                }
            }
            if (rec.reason.kind == ReasonKind::genre_match) break;
        }
        return rec;
    }

    const auto actors = values_of("actor");
    if (auto pick = best(collect(actors, EntityType::actor, std::nullopt, Relation::upcoming))) {
        Recommendation rec{pick->first, {}};
        rec.reason.kind = ReasonKind::upcoming_with_actor;
        rec.reason.actor = pick->second;
        return rec;
    }
    if (auto pick = best(collect(actors, EntityType::actor, std::nullopt, Relation::acted_in))) {
        Recommendation rec{pick->first, {}};
        rec.reason.kind = ReasonKind::favourite_actor;
        rec.reason.actor = pick->second;
        return rec;
    }

    const auto genres = values_of("genre");
    if (auto pick = best(collect(genres, EntityType::genre, Relation::has_genre, std::nullopt))) {
        Recommendation rec{pick->first, {}};
        rec.reason.kind = ReasonKind::favourite_genre;
        rec.reason.genre = pick->second;
        return rec;
    }
    return std::nullopt;
}

}  // namespace robomem
