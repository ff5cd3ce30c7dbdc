#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "complexity_options/bit_string.hpp"
#include "complexity_options/complexity_cache.hpp"
#include "complexity_options/errors.hpp"
#include "complexity_options/market.hpp"
#include "complexity_options/monte_carlo.hpp"
#include "complexity_options/pricing.hpp"
#include "complexity_options/rational.hpp"

namespace complexity_options {

enum class GameStatus { active, exercised, expired };

inline const char* to_string(GameStatus s) {
    switch (s) {
        case GameStatus::active: return "active";
        case GameStatus::exercised: return "exercised";
        case GameStatus::expired: return "expired";
    }
    return "?";
}

enum class GameAction { hold, exercise };

class SessionNotFound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SessionConflict : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One play of the option game. The whole tick sequence is drawn from the seed
/// at creation; only the first `revealed` ticks are ever shown while active.
struct GameSession {
    std::string id;
    std::size_t expiry = 0;
    MarketParams params;
    std::uint64_t seed = 0;
    BitString ticks;
    std::size_t revealed = 0;
    GameStatus status = GameStatus::active;
    std::optional<std::size_t> exercise_time;
    Rational payoff = 0;
    bool forced = false;
    Rational optimal_value = 0;
    std::chrono::steady_clock::time_point last_access = std::chrono::steady_clock::now();

    BitString revealed_ticks() const { return ticks.prefix(revealed); }
    bool finished() const { return status != GameStatus::active; }
};

struct GameView {
    std::string id;
    std::size_t expiry = 0;
    BitString revealed;
    std::size_t deficiency = 0;           ///< D_m of the revealed prefix
    Rational exercise_value = 0;           ///< D_m (1+r)^{-m}
    GameStatus status = GameStatus::active;
    std::optional<std::size_t> exercise_time;
    std::optional<Rational> payoff;
    bool forced = false;
    Rational optimal_value = 0;
};

struct GameReport {
    std::string id;
    BitString ticks;
    std::optional<std::size_t> player_exercise_time;
    Rational player_payoff = 0;
    bool forced = false;
    Rational optimal_value = 0;
    std::size_t optimal_exercise_time = 0;
    Rational optimal_payoff = 0;
};

struct GameConfig {
    PricingConfig pricing;
    std::chrono::seconds idle_timeout{3600};
};

/// In-memory session store. Each session carries its own mutex; the map
/// itself is guarded separately, so distinct sessions never contend.
class GameService {
public:
    explicit GameService(ComplexityCache& cache = ComplexityCache::shared(), GameConfig config = {})
        : cache_(cache), config_(config) {}

    GameService(const GameService&) = delete;
    GameService& operator=(const GameService&) = delete;

    GameView new_game(std::size_t expiry, const MarketParams& params, std::optional<std::uint64_t> seed = std::nullopt) {
        config_.pricing.check(expiry);
        params.validate();
        purge_idle();

        auto slot = std::make_shared<Slot>();
        GameSession& s = slot->session;
        s.expiry = expiry;
        s.params = params;
        s.seed = seed ? *seed : random_seed();
        CoinFlipper coins(s.seed, 0, to_double(params.up_probability));
        for (std::size_t i = 0; i < expiry; ++i) s.ticks.push_back(coins.flip());
        s.optimal_value = tree_for(expiry, params)->value();
        if (expiry == 0) settle(s, GameStatus::expired, true);

        std::lock_guard lock(map_mutex_);
        do {
            s.id = make_token();
        } while (sessions_.count(s.id) != 0);
        sessions_.emplace(s.id, slot);
        return view(s);
    }

    /// exercise: settle at the current time. hold: reveal the next tick, or
    /// force settlement when every tick is already revealed.
    GameView step(const std::string& id, GameAction action) {
        auto slot = find(id);
        std::lock_guard lock(slot->mutex);
        GameSession& s = slot->session;
        s.last_access = std::chrono::steady_clock::now();
        if (s.finished()) throw SessionConflict("session " + id + " is " + to_string(s.status));
        if (action == GameAction::exercise) {
            settle(s, GameStatus::exercised, false);
        } else if (s.revealed < s.expiry) {
            ++s.revealed;
        } else {
            settle(s, GameStatus::expired, true);
        }
        return view(s);
    }

    GameView state(const std::string& id) {
        auto slot = find(id);
        std::lock_guard lock(slot->mutex);
        slot->session.last_access = std::chrono::steady_clock::now();
        return view(slot->session);
    }

    /// Replays the session's ticks through the American exercise decisions.
    GameReport report(const std::string& id) {
        auto slot = find(id);
        std::lock_guard lock(slot->mutex);
        const GameSession& s = slot->session;
        if (!s.finished()) throw SessionConflict("session " + id + " is still active");
        auto tree = tree_for(s.expiry, s.params);

        GameReport r;
        r.id = s.id;
        r.ticks = s.ticks;
        r.player_exercise_time = s.exercise_time;
        r.player_payoff = s.payoff;
        r.forced = s.forced;
        r.optimal_value = s.optimal_value;
        std::uint64_t node = 0;
        for (std::size_t m = 0; m <= s.expiry; ++m) {
            const PriceNode& pn = tree->node(m, node);
            if (pn.exercise) {
                r.optimal_exercise_time = m;
                r.optimal_payoff = Rational(pn.payoff) * s.params.discount(m);
                break;
            }
            node = 2 * node + (s.ticks[m] ? 1 : 0);
        }
        return r;
    }

    std::size_t size() const {
        std::lock_guard lock(map_mutex_);
        return sessions_.size();
    }

    /// Drops sessions idle for longer than the configured timeout.
    void purge_idle() {
        const auto now = std::chrono::steady_clock::now();
        std::lock_guard lock(map_mutex_);
        for (auto it = sessions_.begin(); it != sessions_.end();) {
            std::unique_lock session_lock(it->second->mutex, std::try_to_lock);
            if (session_lock && now - it->second->session.last_access > config_.idle_timeout) {
                session_lock.unlock();
                it = sessions_.erase(it);
            } else {
                ++it;
            }
        }
    }

    void save_snapshot(const std::filesystem::path& file) const;
    void load_snapshot(const std::filesystem::path& file);

    const GameConfig& config() const noexcept { return config_; }
    ComplexityCache& cache() noexcept { return cache_; }

    /// Shared tree for (n, r, p); built once.
    std::shared_ptr<const PriceTree> tree_for(std::size_t expiry, const MarketParams& params) {
        const auto key = std::make_tuple(expiry, params.rate.str(), params.up_probability.str());
        {
            std::lock_guard lock(tree_mutex_);
            if (auto it = trees_.find(key); it != trees_.end()) return it->second;
        }
        auto tree = std::make_shared<const PriceTree>(american_price(expiry, params, cache_, config_.pricing));
        std::lock_guard lock(tree_mutex_);
        return trees_.emplace(key, std::move(tree)).first->second;
    }

private:
    struct Slot {
        std::mutex mutex;
        GameSession session;
    };

    std::shared_ptr<Slot> find(const std::string& id) {
        std::lock_guard lock(map_mutex_);
        auto it = sessions_.find(id);
        if (it == sessions_.end()) throw SessionNotFound("unknown session " + id);
        return it->second;
    }

    void settle(GameSession& s, GameStatus status, bool forced) {
        s.status = status;
        s.forced = forced;
        s.exercise_time = s.revealed;
        s.payoff = Rational(cache_.deficiency(s.revealed_ticks()).deficiency) * s.params.discount(s.revealed);
    }

    GameView view(const GameSession& s) {
        GameView v;
        v.id = s.id;
        v.expiry = s.expiry;
        v.revealed = s.revealed_ticks();
        v.deficiency = cache_.deficiency(v.revealed).deficiency;
        v.exercise_value = Rational(v.deficiency) * s.params.discount(s.revealed);
        v.status = s.status;
        v.exercise_time = s.exercise_time;
        if (s.finished()) v.payoff = s.payoff;
        v.forced = s.forced;
        v.optimal_value = s.optimal_value;
        return v;
    }

    std::uint64_t random_seed() {
        std::lock_guard lock(rng_mutex_);
        return token_rng_();
    }

    std::string make_token() {
        static constexpr char kHex[] = "0123456789abcdef";
        std::lock_guard lock(rng_mutex_);
        std::string token;
        for (int i = 0; i < 2; ++i) {
            std::uint64_t word = token_rng_();
            for (int j = 0; j < 16; ++j, word >>= 4) token.push_back(kHex[word & 15u]);
        }
        return token;
    }

    ComplexityCache& cache_;
    GameConfig config_;
    mutable std::mutex map_mutex_;
    std::unordered_map<std::string, std::shared_ptr<Slot>> sessions_;
    std::mutex tree_mutex_;
    std::map<std::tuple<std::size_t, std::string, std::string>, std::shared_ptr<const PriceTree>> trees_;
    std::mutex rng_mutex_;
    std::mt19937_64 token_rng_{std::random_device{}()};
};

// Snapshot format: a JSON array of sessions with exact rationals as "a/b" strings.
inline void GameService::save_snapshot(const std::filesystem::path& file) const {
    nlohmann::json out = nlohmann::json::array();
    std::lock_guard lock(map_mutex_);
    for (const auto& [id, slot] : sessions_) {
        std::lock_guard session_lock(slot->mutex);
        const GameSession& s = slot->session;
        out.push_back({{"id", s.id},
                       {"expiry", s.expiry},
                       {"rate", s.params.rate.str()},
                       {"p", s.params.up_probability.str()},
                       {"seed", s.seed},
                       {"ticks", s.ticks.to_string()},
                       {"revealed", s.revealed},
                       {"status", to_string(s.status)},
                       {"exercise_time", s.exercise_time ? nlohmann::json(*s.exercise_time) : nlohmann::json(nullptr)},
                       {"payoff", s.payoff.str()},
                       {"forced", s.forced},
                       {"optimal_value", s.optimal_value.str()}});
    }
    std::ofstream(file) << out.dump(2) << '\n';
}

inline void GameService::load_snapshot(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) return;
    const auto data = nlohmann::json::parse(in);
    std::lock_guard lock(map_mutex_);
    for (const auto& j : data) {
        auto slot = std::make_shared<Slot>();
        GameSession& s = slot->session;
        s.id = j.at("id").get<std::string>();
        s.expiry = j.at("expiry").get<std::size_t>();
        s.params = MarketParams::make(parse_rational(j.at("rate").get<std::string>()),
                                      parse_rational(j.at("p").get<std::string>()));
        s.seed = j.at("seed").get<std::uint64_t>();
        s.ticks = BitString::from_string(j.at("ticks").get<std::string>());
        s.revealed = j.at("revealed").get<std::size_t>();
        const auto status = j.at("status").get<std::string>();
        s.status = status == "exercised" ? GameStatus::exercised
                   : status == "expired" ? GameStatus::expired
                                         : GameStatus::active;
        if (!j.at("exercise_time").is_null()) s.exercise_time = j.at("exercise_time").get<std::size_t>();
        s.payoff = parse_rational(j.at("payoff").get<std::string>());
        s.forced = j.at("forced").get<bool>();
        s.optimal_value = parse_rational(j.at("optimal_value").get<std::string>());
        if (s.ticks.size() != s.expiry || s.revealed > s.expiry) continue;
        sessions_[s.id] = std::move(slot);
    }
}

}  // namespace complexity_options
