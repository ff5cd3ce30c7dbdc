#pragma once

#include <optional>
#include <string>

#include "complexity_options/errors.hpp"
#include "complexity_options/rational.hpp"

namespace complexity_options {

/// One-period binomial market: per-step rate r and risk-neutral up probability p.
/// The up/down factors are optional and only used to derive p.
struct MarketParams {
    Rational rate = 0;
    Rational up_probability = Rational(1, 2);
    std::optional<Rational> up_factor;
    std::optional<Rational> down_factor;

    /// Fair coin, zero rate.
    static MarketParams fair(const Rational& rate = 0) { return make(rate, Rational(1, 2)); }

    static MarketParams make(const Rational& rate, const Rational& p) {
        MarketParams params;
        params.rate = rate;
        params.up_probability = p;
        params.validate();
        return params;
    }

    /// p = ((1+r) - d) / (u - d); requires d < 1+r < u.
    static MarketParams from_factors(const Rational& rate, const Rational& u, const Rational& d) {
        const Rational growth = 1 + rate;
        if (!(d < growth && growth < u)) throw PreconditionError("factors must satisfy d < 1+r < u");
        MarketParams params;
        params.rate = rate;
        params.up_factor = u;
        params.down_factor = d;
        params.up_probability = (growth - d) / (u - d);
        params.validate();
        return params;
    }

    Rational down_probability() const { return 1 - up_probability; }
    Rational growth() const { return 1 + rate; }

    /// (1+r)^{-steps}
    Rational discount(std::size_t steps) const { return 1 / pow_rational(growth(), steps); }

    void validate() const {
        if (rate < 0) throw PreconditionError("interest rate must be nonnegative");
        if (!(up_probability > 0 && up_probability < 1)) throw PreconditionError("risk-neutral probability must lie in (0,1)");
    }
};

}  // namespace complexity_options
