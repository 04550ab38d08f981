#pragma once

// Seeded instance generators shared by the unit tests and the acceptance run.

#include <cstdint>
#include <random>

#include "wp/model.hpp"

namespace wp::gen {

struct RandomSpec {
    int max_horizon = 4;
    int max_vendors = 2;
    std::int64_t max_gamma = 2;
    int max_constraints = 3;
    int max_arity = 3;
    int max_stock_units = 10;  // U^s <= this many basis units
    bool stock_payoff = true;  // allow convex stock pieces
    bool fixed_costs = true;
    bool explicit_anchors = true;
    bool nonzero_stock_lower = false;
};

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
    }
    bool coin(int num = 1, int den = 2) { return uniform(0, den - 1) < num; }
    /// Small rational in [lo, hi] with denominator 1 or 2.
    Rational price(std::int64_t lo, std::int64_t hi) {
        const std::int64_t den = coin(1, 3) ? 2 : 1;
        return Rational(uniform(lo * den, hi * den), den);
    }
    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

/// Random instance with a one-dimensional lattice {d}, every bound d * alpha
/// with 0 <= alpha <= gamma. Passes validate_instance.
Instance random_instance(Gen& g, const RandomSpec& spec = {});

/// Random full schedule whose flows mostly sit on anchor values (stocks are not
/// required to be feasible).
std::vector<Decision> random_schedule(Gen& g, const Instance& inst);

}  // namespace wp::gen
