#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "complexity_options/complexity.hpp"
#include "complexity_options/complexity_cache.hpp"
#include "complexity_options/errors.hpp"
#include "complexity_options/game.hpp"
#include "complexity_options/io.hpp"
#include "complexity_options/market.hpp"
#include "complexity_options/pricing.hpp"

namespace complexity_options {

struct ServiceConfig {
    GameConfig game;
    std::size_t max_complexity_length = 32;
    std::size_t precision = 6;
    std::string cors_origin = "*";
    std::string openapi_document;  ///< served verbatim at GET /openapi.yaml when nonempty
};

struct ApiResponse {
    int status = 200;
    nlohmann::json body;
};

/// Transport-free request handling; `mount` binds it to an httplib server.
class ApiHandler {
public:
    explicit ApiHandler(ComplexityCache& cache = ComplexityCache::shared(), ServiceConfig config = {})
        : cache_(cache), config_(std::move(config)), games_(cache, config_.game) {}

    ApiResponse complexity(const std::optional<std::string>& text) {
        return guarded([&] {
            if (!text) return error(400, "missing query parameter x");
            auto x = BitString::parse(*text);
            if (!x) return error(400, "x must be a binary (0/1 or H/T) string");
            if (x->size() > config_.max_complexity_length) {
                return error(413, "string longer than " + std::to_string(config_.max_complexity_length));
            }
            return ApiResponse{200, complexity_json(*x, an_complexity(*x))};
        });
    }

    ApiResponse price(const std::string& body) {
        return guarded([&] {
            const auto request = nlohmann::json::parse(body);
            const auto style_name = request.value("style", std::string("american"));
            if (style_name != "american" && style_name != "european") return error(400, "style must be american or european");
            const auto style = style_name == "american" ? ExerciseStyle::american : ExerciseStyle::european;
            const std::size_t n = count_field(request, "n");
            const MarketParams params = params_from(request);
            const std::size_t precision = request.contains("precision") ? count_field(request, "precision") : config_.precision;
            const PriceTree tree = price_tree(n, params, style, cache_, config_.game.pricing);
            auto out = price_tree_json(tree, precision, request.value("tree", false));
            out["value"] = to_double(tree.value());
            return ApiResponse{200, std::move(out)};
        });
    }

    ApiResponse new_game(const std::string& body) {
        return guarded([&] {
            const auto request = body.empty() ? nlohmann::json::object() : nlohmann::json::parse(body);
            std::optional<std::uint64_t> seed;
            if (request.contains("seed") && !request["seed"].is_null()) seed = count_field(request, "seed");
            const auto view = games_.new_game(count_field(request, "n"), params_from(request), seed);
            auto out = view_json(view);
            out["V_n"] = rational_json(view.optimal_value, config_.precision);
            return ApiResponse{200, std::move(out)};
        });
    }

    ApiResponse step(const std::string& id, const std::string& body) {
        return guarded([&] {
            const auto request = nlohmann::json::parse(body);
            const auto action = request.at("action").get<std::string>();
            if (action != "hold" && action != "exercise") return error(400, "action must be hold or exercise");
            return ApiResponse{200, view_json(games_.step(id, action == "hold" ? GameAction::hold : GameAction::exercise))};
        });
    }

    ApiResponse state(const std::string& id) {
        return guarded([&] { return ApiResponse{200, view_json(games_.state(id))}; });
    }

    ApiResponse report(const std::string& id) {
        return guarded([&] {
            const GameReport r = games_.report(id);
            return ApiResponse{200, nlohmann::json{
                                        {"id", r.id},
                                        {"ticks", r.ticks.to_coin_string()},
                                        {"ticks_bits", r.ticks.to_string()},
                                        {"player_exercise_time", r.player_exercise_time ? nlohmann::json(*r.player_exercise_time) : nlohmann::json(nullptr)},
                                        {"player_payoff", rational_json(r.player_payoff, config_.precision)},
                                        {"forced", r.forced},
                                        {"optimal_value", rational_json(r.optimal_value, config_.precision)},
                                        {"optimal_exercise_time", r.optimal_exercise_time},
                                        {"optimal_payoff", rational_json(r.optimal_payoff, config_.precision)},
                                    }};
        });
    }

    GameService& games() noexcept { return games_; }
    const ServiceConfig& config() const noexcept { return config_; }

private:
    static ApiResponse error(int status, const std::string& message) {
        return ApiResponse{status, nlohmann::json{{"error", message}}};
    }

    template <class F>
    ApiResponse guarded(F&& handler) {
        try {
            return handler();
        } catch (const SessionNotFound& e) {
            return error(404, e.what());
        } catch (const SessionConflict& e) {
            return error(409, e.what());
        } catch (const LimitExceeded& e) {
            return error(413, e.what());
        } catch (const nlohmann::json::exception& e) {
            return error(400, std::string("bad request body: ") + e.what());
        } catch (const std::invalid_argument& e) {
            return error(400, e.what());
        }
    }

    static std::uint64_t count_field(const nlohmann::json& request, const char* key) {
        const auto& value = request.at(key);
        if (!value.is_number_unsigned()) throw PreconditionError(std::string(key) + " must be a nonnegative integer");
        return value.get<std::uint64_t>();
    }

    static Rational number_field(const nlohmann::json& value) {
        if (value.is_string()) return parse_rational(value.get<std::string>());
        if (value.is_number()) return parse_rational(value.dump());
        throw PreconditionError("numeric field must be a number or a numeric string");
    }

    MarketParams params_from(const nlohmann::json& request) const {
        const Rational rate = request.contains("rate") ? number_field(request["rate"]) : Rational(0);
        if (request.contains("u") || request.contains("d")) {
            return MarketParams::from_factors(rate, number_field(request.at("u")), number_field(request.at("d")));
        }
        const Rational p = request.contains("p") ? number_field(request["p"]) : Rational(1, 2);
        return MarketParams::make(rate, p);
    }

    nlohmann::json view_json(const GameView& v) const {
        nlohmann::json out{{"id", v.id},
                           {"expiry", v.expiry},
                           {"revealed", v.revealed.to_coin_string()},
                           {"revealed_bits", v.revealed.to_string()},
                           {"time", v.revealed.size()},
                           {"steps_remaining", v.expiry - v.revealed.size()},
                           {"deficiency", v.deficiency},
                           {"exercise_value", rational_json(v.exercise_value, config_.precision)},
                           {"status", to_string(v.status)},
                           {"forced", v.forced},
                           {"optimal_value", rational_json(v.optimal_value, config_.precision)}};
        out["exercise_time"] = v.exercise_time ? nlohmann::json(*v.exercise_time) : nlohmann::json(nullptr);
        out["payoff"] = v.payoff ? rational_json(*v.payoff, config_.precision) : nlohmann::json(nullptr);
        return out;
    }

    ComplexityCache& cache_;
    ServiceConfig config_;
    GameService games_;
};

/// Routes:
///   GET  /complexity?x=...       GET  /game/{id}
///   POST /price                  POST /game/{id}/step
///   POST /game/new               GET  /game/{id}/report
///   GET  /openapi.yaml
inline void mount(httplib::Server& server, ApiHandler& api) {
    const std::string origin = api.config().cors_origin;
    auto reply = [origin](httplib::Response& res, const ApiResponse& r) {
        res.status = r.status;
        res.set_header("Access-Control-Allow-Origin", origin);
        res.set_content(r.body.dump(), "application/json");
    };
    server.Options(R"(.*)", [origin](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Origin", origin);
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
    });
    server.Get("/complexity", [&api, reply](const httplib::Request& req, httplib::Response& res) {
        std::optional<std::string> x;
        if (req.has_param("x")) x = req.get_param_value("x");
        reply(res, api.complexity(x));
    });
    server.Post("/price", [&api, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, api.price(req.body));
    });
    server.Post("/game/new", [&api, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, api.new_game(req.body));
    });
    server.Post(R"(/game/([0-9a-f]+)/step)", [&api, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, api.step(req.matches[1], req.body));
    });
    server.Get(R"(/game/([0-9a-f]+)/report)", [&api, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, api.report(req.matches[1]));
    });
    server.Get(R"(/game/([0-9a-f]+))", [&api, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, api.state(req.matches[1]));
    });
    server.Get("/openapi.yaml", [&api, origin](const httplib::Request&, httplib::Response& res) {
        if (api.config().openapi_document.empty()) {
            res.status = 404;
            return;
        }
        res.set_header("Access-Control-Allow-Origin", origin);
        res.set_content(api.config().openapi_document, "application/yaml");
    });
}

}  // namespace complexity_options
