// HTTP/JSON service for complexity lookups, pricing and option game sessions.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "complexity_options/service.hpp"

namespace co = complexity_options;

namespace {

httplib::Server* g_server = nullptr;

void stop(int) {
    if (g_server) g_server->stop();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) return {};
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"complexity option service"};
    std::string host = "127.0.0.1";
    int port = 8080;
    std::size_t limit = 16;
    std::size_t max_length = 32;
    std::size_t idle_seconds = 3600;
    std::string cache_path, snapshot, openapi = COMPLEXITY_OPENAPI_PATH, origin = "*";
    app.add_option("--host", host)->capture_default_str();
    app.add_option("--port", port)->check(CLI::Range(0, 65535))->capture_default_str();
    app.add_option("--limit", limit, "largest expiry for pricing and games")->check(CLI::Range(1, 24))->capture_default_str();
    app.add_option("--max-length", max_length, "longest string for /complexity")->capture_default_str();
    app.add_option("--cache", cache_path, "A_N cache file (env COMPLEXITY_OPTIONS_CACHE)");
    app.add_option("--snapshot", snapshot, "session snapshot file, loaded at start and written at shutdown");
    app.add_option("--idle-timeout", idle_seconds, "seconds before an idle session is dropped")->capture_default_str();
    app.add_option("--openapi", openapi, "OpenAPI document served at /openapi.yaml")->capture_default_str();
    app.add_option("--cors-origin", origin)->capture_default_str();
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (cache_path.empty()) {
        if (const char* env = std::getenv("COMPLEXITY_OPTIONS_CACHE")) cache_path = env;
    }
    auto cache = cache_path.empty() ? std::make_unique<co::ComplexityCache>()
                                    : std::make_unique<co::ComplexityCache>(cache_path);

    co::ServiceConfig config;
    config.game.pricing.exhaustive_limit = limit;
    config.game.idle_timeout = std::chrono::seconds(idle_seconds);
    config.max_complexity_length = max_length;
    config.cors_origin = origin;
    config.openapi_document = read_file(openapi);

    co::ApiHandler api(*cache, config);
    if (!snapshot.empty()) api.games().load_snapshot(snapshot);

    httplib::Server server;
    co::mount(server, api);
    g_server = &server;
    std::signal(SIGINT, stop);
    std::signal(SIGTERM, stop);

    std::cerr << "listening on " << host << ':' << port << '\n';
    const bool ok = server.listen(host, port);
    if (!snapshot.empty()) api.games().save_snapshot(snapshot);
    return ok ? 0 : 1;
}
