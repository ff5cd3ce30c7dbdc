// Command-line front end: automatic complexity lookups, option prices, the
// static-vs-dynamic table, run options, Hamming-ball sweeps and policy simulation.
//
// Exit codes: 0 success, 2 usage or invalid parameters, 3 resource limit.

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "complexity_options/complexity_options.hpp"

namespace co = complexity_options;

namespace {

constexpr int kUsage = 2;
constexpr int kLimit = 3;

struct CliConfig {
    std::string format = "table";
    std::size_t precision = 6;
    std::size_t limit = 16;
    std::size_t max_length = 32;
    std::string cache_path;
    std::uint64_t seed = 1;
    std::size_t threads = 1;
};

struct MarketFlags {
    std::string rate = "0";
    std::string p = "1/2";
    std::optional<std::string> u, d;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--rate,-r", rate, "per-step interest rate (decimal or fraction)")->capture_default_str();
        cmd->add_option("--p", p, "risk-neutral up probability")->capture_default_str();
        cmd->add_option("--u", u, "up factor (with --d, derives p)");
        cmd->add_option("--d", d, "down factor (with --u, derives p)");
    }

    co::MarketParams params() const {
        const co::Rational r = co::parse_rational(rate);
        if (u || d) {
            if (!u || !d) throw co::PreconditionError("--u and --d must be given together");
            return co::MarketParams::from_factors(r, co::parse_rational(*u), co::parse_rational(*d));
        }
        return co::MarketParams::make(r, co::parse_rational(p));
    }
};

std::unique_ptr<co::ComplexityCache> open_cache(const CliConfig& config) {
    std::string path = config.cache_path;
    if (path.empty()) {
        if (const char* env = std::getenv("COMPLEXITY_OPTIONS_CACHE")) path = env;
    }
    if (path.empty()) return std::make_unique<co::ComplexityCache>();
    return std::make_unique<co::ComplexityCache>(path);
}

co::BitString parse_bits(const std::string& text) {
    auto x = co::BitString::parse(text);
    if (!x) throw co::PreconditionError("not a binary (0/1 or H/T) string: '" + text + "'");
    return *x;
}

std::string show(const co::Rational& v, const CliConfig& c) { return co::format_decimal_trimmed(v, c.precision); }

void print_json(const co::json& j) { std::cout << j.dump(2) << '\n'; }

int cmd_an(const CliConfig& config, const std::string& text) {
    const co::BitString x = parse_bits(text);
    if (x.size() > config.max_length) {
        throw co::LimitExceeded("string length " + std::to_string(x.size()) + " exceeds --max-length " +
                                std::to_string(config.max_length));
    }
    const auto result = co::an_complexity(x);
    const auto d = co::make_deficiency(x.size(), result.complexity);
    if (config.format == "json") {
        print_json(co::complexity_json(x, result));
    } else if (config.format == "csv") {
        std::cout << "string,length,complexity,b_n,deficiency,automaton\n"
                  << x.to_string() << ',' << x.size() << ',' << result.complexity << ',' << d.b_n << ','
                  << d.deficiency << ",\"" << co::to_text(result.witness_automaton) << "\"\n";
    } else {
        std::cout << "string:     " << x.to_string() << '\n'
                  << "length:     " << x.size() << '\n'
                  << "complexity: " << result.complexity << '\n'
                  << "deficiency: " << d.deficiency << "  (b(n) = " << d.b_n << ")\n"
                  << "witness:   ";
        for (auto s : result.witness) std::cout << ' ' << s;
        std::cout << "\nautomaton:  " << co::to_text(result.witness_automaton) << '\n';
    }
    return 0;
}

int cmd_price(const CliConfig& config, co::ComplexityCache& cache, const std::string& style_name, std::size_t n,
              const MarketFlags& market, bool with_tree) {
    const auto style = style_name == "european" ? co::ExerciseStyle::european : co::ExerciseStyle::american;
    const auto params = market.params();
    const co::PricingConfig pricing{config.limit};
    const co::PriceTree tree = co::price_tree(n, params, style, cache, pricing);
    if (config.format == "json") {
        print_json(co::price_tree_json(tree, config.precision, with_tree));
        return 0;
    }
    if (!with_tree) {
        std::cout << show(tree.value(), config) << '\n';
        return 0;
    }
    const bool csv = config.format == "csv";
    std::cout << (csv ? "prefix,payoff,continuation,value,exercise\n" : "prefix            payoff  continuation  value     exercise\n");
    for (std::size_t len = 0; len <= n; ++len) {
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << len); ++v) {
            const auto& node = tree.node(len, v);
            const std::string prefix = co::BitString::from_index(v, len).to_string();
            const std::string cont = node.continuation ? show(*node.continuation, config) : "";
            if (csv) {
                std::cout << prefix << ',' << node.payoff << ',' << cont << ',' << show(node.value, config) << ','
                          << (node.exercise ? 1 : 0) << '\n';
            } else {
                std::cout << std::left << std::setw(18) << ("(" + prefix + ")") << std::setw(8) << node.payoff
                          << std::setw(14) << cont << std::setw(10) << show(node.value, config)
                          << (node.exercise ? "yes" : "no") << '\n';
            }
        }
    }
    return 0;
}

int cmd_table(const CliConfig& config, co::ComplexityCache& cache, std::size_t max_n, bool all_n,
              const MarketFlags& market) {
    const auto params = market.params();
    const co::PricingConfig pricing{config.limit};
    pricing.check(max_n);
    co::json rows = co::json::array();
    if (config.format == "csv") std::cout << "n,E_D_n,W_n,V_n\n";
    if (config.format == "table") std::cout << "Length  E D_n   rel  V_n\n";
    for (std::size_t n = 0; n <= max_n; ++n) {
        if (!all_n && n % 2 != 0) continue;
        const co::Rational expected = co::expected_deficiency(n, cache, pricing);
        const co::Rational european = co::european_price(n, params, cache, pricing);
        const co::Rational american = co::american_price(n, params, cache, pricing).value();
        const char* rel = expected == american ? "=" : (expected < american ? "<" : ">");
        if (config.format == "json") {
            rows.push_back({{"n", n},
                            {"expected_deficiency", co::rational_json(expected, config.precision)},
                            {"european", co::rational_json(european, config.precision)},
                            {"american", co::rational_json(american, config.precision)},
                            {"relation", rel}});
        } else if (config.format == "csv") {
            std::cout << n << ',' << show(expected, config) << ',' << show(european, config) << ','
                      << show(american, config) << '\n';
        } else {
            std::cout << std::right << std::setw(6) << n << "  " << std::left << std::setw(8)
                      << co::truncate_decimal(expected, 3) << rel << "    " << co::truncate_decimal(american, 3) << '\n';
        }
    }
    if (config.format == "json") print_json(rows);
    return 0;
}

int cmd_run_option(const CliConfig& config, std::size_t horizon, const std::string& t_flag, std::size_t samples,
                   const MarketFlags& market) {
    const auto params = market.params();
    std::size_t t = 0;
    if (t_flag == "auto") {
        t = co::choose_t(horizon);
    } else {
        if (t_flag.empty() || t_flag.find_first_not_of("0123456789") != std::string::npos) {
            throw co::PreconditionError("--t must be 'auto' or a positive integer");
        }
        t = std::stoul(t_flag);
    }
    if (samples == 0) throw co::PreconditionError("--samples must be positive");
    const double mean_run = co::longest_run_expectation(horizon);
    const double boyd = co::boyd_expectation(horizon);
    const auto simulated = co::simulate_tau_t(horizon, t, samples, config.seed, params, config.threads);
    const double exact = co::run_option_price_exact<double>(horizon, params).value;

    if (config.format == "json") {
        print_json({{"N", horizon},
                    {"expected_longest_run", mean_run},
                    {"boyd_expectation", boyd},
                    {"t", t},
                    {"target", co::tau_t_target(horizon, t)},
                    {"simulated", co::policy_json(simulated)},
                    {"exact_value", exact}});
        return 0;
    }
    const auto old_precision = std::cout.precision(static_cast<std::streamsize>(config.precision + 2));
    if (config.format == "table") {
        std::cout << "N:                  " << horizon << '\n'
                  << "E(R_N):             " << mean_run << '\n'
                  << "Boyd approximation: " << boyd << '\n'
                  << "t_N:                " << t << "  (target run " << co::tau_t_target(horizon, t) << ")\n"
                  << "tau_t simulated:    " << simulated.value << " +/- " << simulated.standard_error << "  ("
                  << samples << " samples)\n"
                  << "exact V^A:          " << exact << '\n';
    } else {
        std::cout << "N,E_R_N,boyd,t_N,tau_t_value,tau_t_stderr,V_A\n"
                  << horizon << ',' << mean_run << ',' << boyd << ',' << t << ',' << simulated.value << ','
                  << simulated.standard_error << ',' << exact << '\n';
    }
    std::cout.precision(old_precision);
    return 0;
}

int cmd_perturb(const CliConfig& config, co::ComplexityCache& cache, const std::string& text, const std::string& measure_name) {
    const co::BitString x = parse_bits(text);
    const auto measure = measure_name == "run" ? co::Measure::run : co::Measure::automatic;
    co::SweepConfig sweep;
    sweep.max_automatic_length = config.max_length;
    const auto report = co::hamming_sweep(x, measure, cache, sweep);
    if (config.format == "json") {
        print_json(co::perturbation_json(report));
    } else if (config.format == "csv") {
        co::write_perturbation_csv(std::cout, report);
    } else {
        std::cout << "base " << co::run_pattern(x) << "  (" << co::to_string(measure) << ")\n";
        for (const auto& e : report.entries) {
            std::cout << std::left << std::setw(24) << co::run_pattern(e.perturbed) << ' ' << e.measure(measure) << '\n';
        }
        std::cout << "min " << report.min << "  max " << report.max << "  mean " << report.mean << '\n';
    }
    return 0;
}

int cmd_simulate(const CliConfig& config, co::ComplexityCache& cache, const std::string& policy_text,
                 std::size_t horizon, std::size_t samples, const MarketFlags& market) {
    const co::PricingConfig pricing{config.limit};
    pricing.check(horizon);
    const auto result = co::simulate_policy(co::parse_policy(policy_text), horizon, market.params(), samples,
                                            config.seed, cache, config.threads);
    if (config.format == "json") {
        print_json(co::policy_json(result));
    } else if (config.format == "csv") {
        std::cout << "policy,horizon,samples,value,standard_error\n"
                  << result.policy << ',' << result.horizon << ',' << result.samples << ',' << result.value << ','
                  << result.standard_error << '\n';
    } else {
        std::cout << result.policy << " over " << horizon << " steps: " << result.value << " +/- "
                  << result.standard_error << "  (" << samples << " samples)\n";
    }
    return 0;
}

int cmd_trend(const CliConfig& config, co::ComplexityCache& cache, std::size_t max_n, const MarketFlags& market) {
    const auto rows = co::perpetual_trend_report(max_n, market.params(), cache, co::PricingConfig{config.limit});
    if (config.format == "json") {
        co::json out = co::json::array();
        for (const auto& row : rows) {
            out.push_back({{"n", row.n},
                           {"W_n", co::rational_json(row.european, config.precision)},
                           {"V_n", co::rational_json(row.american, config.precision)}});
        }
        print_json(out);
        return 0;
    }
    std::cout << (config.format == "csv" ? "n,W_n,V_n\n" : "n     W_n         V_n\n");
    for (const auto& row : rows) {
        if (config.format == "csv") {
            std::cout << row.n << ',' << show(row.european, config) << ',' << show(row.american, config) << '\n';
        } else {
            std::cout << std::left << std::setw(6) << row.n << std::setw(12) << show(row.european, config)
                      << show(row.american, config) << '\n';
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Automatic complexity deficiencies and complexity options in the binomial model"};
    app.require_subcommand(1);
    app.fallthrough();
    CliConfig config;
    app.add_option("--format,-f", config.format, "output format")
        ->check(CLI::IsMember({"table", "json", "csv"}))
        ->capture_default_str();
    app.add_option("--precision", config.precision, "decimal digits in output")->check(CLI::Range(1, 60))->capture_default_str();
    app.add_option("--limit", config.limit, "exhaustive expiry limit for path trees")->check(CLI::Range(1, 24))->capture_default_str();
    app.add_option("--max-length", config.max_length, "longest string accepted by the witness search")
        ->check(CLI::Range(1, static_cast<int>(co::kMaxSearchLength)))
        ->capture_default_str();
    app.add_option("--cache", config.cache_path, "A_N cache file (env COMPLEXITY_OPTIONS_CACHE)");
    app.add_option("--seed", config.seed, "random seed")->capture_default_str();
    app.add_option("--threads", config.threads, "worker threads for simulation")->check(CLI::Range(1, 256))->capture_default_str();

    std::string an_string;
    auto* an = app.add_subcommand("an", "nondeterministic automatic complexity with witness");
    an->add_option("string", an_string, "binary string (0/1 or H/T)")->required();

    std::string style = "american";
    std::size_t price_n = 0;
    bool price_tree_flag = false;
    MarketFlags price_market;
    auto* price = app.add_subcommand("price", "price a complexity option");
    price->add_option("--style", style)->check(CLI::IsMember({"european", "american"}))->capture_default_str();
    price->add_option("--n", price_n, "expiry")->required();
    price->add_flag("--tree", price_tree_flag, "print every node");
    price_market.add_to(price);

    std::size_t table_max = 12;
    bool table_all = false;
    MarketFlags table_market;
    auto* table = app.add_subcommand("table", "expected deficiency versus American price");
    table->add_option("--max-n", table_max)->capture_default_str();
    table->add_flag("--all", table_all, "include odd n");
    table_market.add_to(table);

    std::size_t run_n = 0, run_samples = 100000;
    std::string run_t = "auto";
    MarketFlags run_market;
    auto* run = app.add_subcommand("run-option", "American option on the current run of heads");
    run->add_option("--N", run_n, "horizon")->required()->check(CLI::Range(2, 1 << 20));
    run->add_option("--t", run_t, "tau_t offset: auto or an integer")->capture_default_str();
    run->add_option("--samples", run_samples)->capture_default_str();
    run_market.add_to(run);

    std::string perturb_string, measure = "an";
    auto* perturb = app.add_subcommand("perturb", "Hamming ball of radius 1");
    perturb->add_option("string", perturb_string)->required();
    perturb->add_option("--measure", measure)->check(CLI::IsMember({"an", "run"}))->capture_default_str();

    std::string policy_text;
    std::size_t sim_n = 0, sim_samples = 100000;
    MarketFlags sim_market;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo value of an exercise policy");
    simulate->add_option("--policy", policy_text, "static:N | deficiency-threshold:K | run-threshold:G")->required();
    simulate->add_option("--N", sim_n, "horizon")->required();
    simulate->add_option("--samples", sim_samples)->capture_default_str();
    sim_market.add_to(simulate);

    std::size_t trend_max = 12;
    MarketFlags trend_market;
    auto* trend = app.add_subcommand("trend", "W_n and V_n for n = 0..max-n");
    trend->add_option("--max-n", trend_max)->capture_default_str();
    trend_market.add_to(trend);

    std::string decide_string;
    std::size_t decide_k = 0;
    auto* decide_def = app.add_subcommand("decide-deficiency", "is D(x) >= k?");
    decide_def->add_option("string", decide_string)->required();
    decide_def->add_option("k", decide_k)->required();

    std::size_t decide_n = 0;
    std::uint64_t decide_price_k = 0;
    auto* decide_price = app.add_subcommand("decide-price", "is W_n >= k/2^n at p = 1/2, r = 0?");
    decide_price->add_option("n", decide_n)->required();
    decide_price->add_option("k", decide_price_k)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        auto cache = open_cache(config);
        if (an->parsed()) return cmd_an(config, an_string);
        if (price->parsed()) return cmd_price(config, *cache, style, price_n, price_market, price_tree_flag);
        if (table->parsed()) return cmd_table(config, *cache, table_max, table_all, table_market);
        if (run->parsed()) return cmd_run_option(config, run_n, run_t, run_samples, run_market);
        if (perturb->parsed()) return cmd_perturb(config, *cache, perturb_string, measure);
        if (simulate->parsed()) return cmd_simulate(config, *cache, policy_text, sim_n, sim_samples, sim_market);
        if (trend->parsed()) return cmd_trend(config, *cache, trend_max, trend_market);
        if (decide_def->parsed()) {
            const auto x = parse_bits(decide_string);
            if (x.size() > config.max_length) throw co::LimitExceeded("string exceeds --max-length");
            std::cout << (co::deficiency_decision(x, decide_k) ? "true" : "false") << '\n';
            return 0;
        }
        if (decide_price->parsed()) {
            std::cout << (co::price_decision(decide_n, decide_price_k, *cache, co::PricingConfig{config.limit}) ? "true" : "false")
                      << '\n';
            return 0;
        }
    } catch (const co::LimitExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kLimit;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
