#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "robomem/memory_model.hpp"

namespace robomem {

enum class RecallMode { threshold, stochastic };

std::string_view to_string(RecallMode mode);
RecallMode parse_recall_mode(std::string_view name);  // throws Error(format)

inline constexpr double kDefaultRecallThreshold = 0.7;

struct RecallConfig {
    RecallMode mode = RecallMode::threshold;
    double threshold = kDefaultRecallThreshold;
    std::uint64_t seed = 0;

    bool operator==(const RecallConfig&) const = default;
};

struct RecallOutcome {
    std::set<PropertyKey> remembered;
    std::set<PropertyKey> forgotten;
    int session_index = 2;

    bool operator==(const RecallOutcome&) const = default;
};

enum class Channel { explicit_answer, side_channel };

struct Observation {
    PropertyKey key;
    Value raw_value;
    Channel channel = Channel::explicit_answer;

    bool operator==(const Observation&) const = default;
};

// Checks arity, value type and channel; normalizes text values in place.
// Throws Error(invalid_observation) or Error(empty_value).
Observation validate_observation(Observation obs);

// Stores every observation as a fresh record. Favourites are routed through
// classify_favourite, so Favourite/SharedFavourite of the same category are
// mutually exclusive in the result. Duplicate keys: the last one wins.
// All observations are validated before any is applied.
UserModel populate(UserModel model, const PersonaProfile& persona,
                   std::span<const Observation> observations, int session_index);

// Overwrites (or creates) the record for one observation with a fresh
// `stored` record.
UserModel reacquire(UserModel model, const PersonaProfile& persona, const Observation& obs,
                    int session_index);

struct RecallResult {
    UserModel model;
    RecallOutcome outcome;
};

// Decides which records are remembered at the start of session
// `session_index` (>= 2) and writes the statuses back.
//
// threshold: remembered iff probability >= config.threshold, recomputed every
//   session.
// stochastic: each `stored` record is sampled once as Bernoulli(probability)
//   from a stream keyed by (seed, user_id, robot, key); the sampled status is
//   then sticky until the record is reacquired.
RecallResult recall(UserModel model, const RecallConfig& config, int session_index);

// Uniform draw in [0,1) for the stream keyed by (seed, user_id, robot, key).
// Exposed for tests and statistics.
double recall_draw(std::uint64_t seed, std::string_view user_id, RobotId robot,
                   const PropertyKey& key);

}  // namespace robomem
