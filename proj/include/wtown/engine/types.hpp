#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wtown {

using Money = std::int64_t;
using Units = int;

// Stable player identifier. Distinct from the display name so that two
// games can reuse names without clashing in aggregated records.
struct PlayerId {
    std::string value;

    PlayerId() = default;
    explicit PlayerId(std::string v) : value(std::move(v)) {}

    auto operator<=>(const PlayerId&) const = default;
    bool operator==(const PlayerId&) const = default;
};

struct PersonaText {
    std::string profession;
    std::string personality;
    std::string background;

    bool complete() const {
        return !profession.empty() && !personality.empty() && !background.empty();
    }
    bool operator==(const PersonaText&) const = default;
};

struct PlayerSpec {
    PlayerId id;
    std::string name;
    Units requirement = 1;
    Money salary = 1;
    std::optional<PersonaText> persona;

    bool operator==(const PlayerSpec&) const = default;
};

struct PlayerState {
    int hp = 8;
    Money balance = 0;
    int no_water_days = 0;
    bool alive = true;

    bool operator==(const PlayerState&) const = default;
};

enum class AllocationPolicy {
    skip_and_continue,     // misfits are skipped, lower bidders may still win
    stop_at_first_misfit,  // the walk ends at the first bidder that does not fit
};

struct GameConfig {
    int days = 20;
    int hp_start = 8;
    int hp_max = 10;
    int water_gain = 2;
    Units supply_low = 10;
    Units supply_high = 20;
    std::vector<PlayerSpec> roster;
    std::uint64_t seed = 0;
    AllocationPolicy policy = AllocationPolicy::skip_and_continue;

    // Throws ConfigError when any structural invariant is broken.
    void validate() const;
    const PlayerSpec& player(const PlayerId& id) const;
    std::optional<std::size_t> index_of(const PlayerId& id) const;

    bool operator==(const GameConfig&) const = default;
};

// A sealed bid. An empty amount is an abstention, which is not the same
// thing as a zero bid (zero bids are not accepted by the engine).
struct Bid {
    PlayerId player;
    std::optional<Money> amount;
    std::string reason;

    bool abstains() const { return !amount.has_value(); }
    bool operator==(const Bid&) const = default;
};

struct Winner {
    PlayerId player;
    Money payment = 0;
    Units units = 0;

    bool operator==(const Winner&) const = default;
};

struct RoundRecord {
    int day = 0;
    Units supply = 0;
    std::vector<Bid> bids;
    std::vector<Winner> winners;
    std::map<std::string, int> hp_after;
    std::map<std::string, int> nwd_after;
    std::map<std::string, Money> balance_after;
    std::vector<PlayerId> eliminated;
    std::optional<Money> min_successful_bid;

    bool operator==(const RoundRecord&) const = default;
};

// Labels attached by the experiment harness or live service. Not used by
// the engine itself.
struct ExperimentLabel {
    int setting_id = 0;
    int repetition = 0;
    bool persona = false;
    std::string agents;
    std::string source;  // "harness" or "live"

    bool operator==(const ExperimentLabel&) const = default;
};

inline constexpr int kSchemaVersion = 1;

struct GameRecord {
    int schema_version = kSchemaVersion;
    GameConfig config;
    std::vector<RoundRecord> rounds;
    std::map<std::string, PlayerState> final_states;
    std::optional<ExperimentLabel> experiment;

    bool operator==(const GameRecord&) const = default;
};

class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A participant broke the game protocol (bid from a dead player, duplicate
// bid, amount above balance, ...).
class ProtocolError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Internal bookkeeping went wrong. Never expected with validated inputs.
class InvariantError : public std::logic_error {
    using std::logic_error::logic_error;
};

// The canonical five-resident roster: Alex 8/$70, Bob 9/$75, Cindy 10/$100,
// David 11/$120, Eric 12/$120.
std::vector<PlayerSpec> canonical_roster();

enum class Abundance { low, medium, high };

struct SupplyBounds {
    Units low;
    Units high;
};

SupplyBounds supply_bounds(Abundance a);
std::string to_string(Abundance a);
Abundance abundance_from_string(const std::string& s);

}  // namespace wtown
