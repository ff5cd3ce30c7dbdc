#pragma once

// Umbrella header for the complexity-option engine (HTTP service excluded;
// include complexity_options/service.hpp for that).

#include "complexity_options/automaton.hpp"
#include "complexity_options/bit_string.hpp"
#include "complexity_options/complexity.hpp"
#include "complexity_options/complexity_cache.hpp"
#include "complexity_options/errors.hpp"
#include "complexity_options/game.hpp"
#include "complexity_options/io.hpp"
#include "complexity_options/market.hpp"
#include "complexity_options/monte_carlo.hpp"
#include "complexity_options/policy.hpp"
#include "complexity_options/pricing.hpp"
#include "complexity_options/rational.hpp"
#include "complexity_options/robustness.hpp"
#include "complexity_options/run_option.hpp"
