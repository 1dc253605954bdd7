// Copyright 2026 The guardrun Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <algorithm>
#include <set>

#include "guardrun/action.hpp"
#include "test_util.hpp"

using namespace guardrun;
using testutil::continuation_of;
using testutil::random_durations;
using testutil::units_with_durations;

namespace {

// Independent oracle: plain running cumulative sum.
double cumsum_prefix(const std::vector<double>& durations, std::size_t k) {
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        total += durations[i];
    }
    return total;
}

}  // namespace

TEST_CASE("predicted_prefix_time matches direct sums") {
    auto units = units_with_durations({1.14, 1.14, 1.14, 1.14});
    CHECK(predicted_prefix_time(units, 2) == doctest::Approx(2.28));
    CHECK(predicted_prefix_time(units, 0) == 0.0);

    auto mixed = units_with_durations({0.5, 1.0, 0.25});
    CHECK(predicted_prefix_time(mixed, 3) == doctest::Approx(1.75));

    CHECK_THROWS_AS(predicted_prefix_time(units, 5), std::out_of_range);
}

TEST_CASE("predicted_prefix_time equals the cumulative-sum oracle on random vectors") {
    Rng rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        const auto durations =
            random_durations(rng, 1 + static_cast<std::size_t>(rng.next_u64() % 12), 0.0, 3.0);
        auto units = units_with_durations(durations);
        double previous = 0.0;
        for (std::size_t k = 0; k <= durations.size(); ++k) {
            const double value = predicted_prefix_time(units, k);
            CHECK(value == doctest::Approx(cumsum_prefix(durations, k)).epsilon(1e-12));
            CHECK(value >= previous);  // monotone in k
            if (k > 0) {
                // additive: T^(k) = T^(k-1) + tau(unit_k)
                CHECK(value ==
                      doctest::Approx(previous + durations[k - 1]).epsilon(1e-12));
            }
            previous = value;
        }
    }
}

TEST_CASE("split_at produces a guard/tail partition in order") {
    auto c = continuation_of(0, {1.0, 2.0, 3.0, 4.0});
    auto [guard, tail] = split_at(c, 2);
    REQUIRE(guard.size() == 2);
    REQUIRE(tail.size() == 2);
    CHECK(guard[0].id == 1);
    CHECK(guard[1].id == 2);
    CHECK(tail[0].id == 3);
    CHECK(tail[1].id == 4);

    auto full = continuation_of(0, {1.0, 1.0, 1.0});
    auto [g2, t2] = split_at(full, 3);
    CHECK(g2.size() == 3);
    CHECK(t2.empty());

    auto five = continuation_of(0, {1, 1, 1, 1, 1});
    auto [g3, t3] = split_at(five, 1);
    CHECK(g3.size() == 1);
    CHECK(t3.size() == 4);

    CHECK_THROWS_AS(split_at(c, 0), std::out_of_range);
    CHECK_THROWS_AS(split_at(c, 5), std::out_of_range);
    Continuation started = c;
    started.executed_prefix_len = 1;
    CHECK_THROWS_AS(split_at(started, 2), std::invalid_argument);
}

TEST_CASE("split_at re-concatenation reproduces the original order") {
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t horizon = 1 + rng.next_u64() % 10;
        auto c = continuation_of(0, random_durations(rng, horizon, 0.1, 2.0));
        const std::size_t k = 1 + rng.next_u64() % horizon;
        auto [guard, tail] = split_at(c, k);
        std::vector<ActionUnit> rejoined = guard;
        rejoined.insert(rejoined.end(), tail.begin(), tail.end());
        CHECK(rejoined == c.units);
    }
}

TEST_CASE("consume_next moves exactly one unit from guard to executed") {
    ShortHorizonState state;
    state.guard = units_with_durations({1.0, 2.0});
    auto [first, after] = consume_next(state);
    CHECK(first.id == 1);
    REQUIRE(after.executed.size() == 1);
    CHECK(after.executed[0].id == 1);
    REQUIRE(after.guard.size() == 1);
    CHECK(after.guard[0].id == 2);

    ShortHorizonState with_tail;
    with_tail.guard = units_with_durations({1.0}, 1);
    with_tail.tail = units_with_durations({1.0, 1.0}, 2);
    auto [unit, rest] = consume_next(with_tail);
    CHECK(unit.id == 1);
    CHECK(rest.guard.empty());
    CHECK(rest.tail.size() == 2);  // tail untouched by consumption

    CHECK_THROWS_AS(consume_next(rest), GuardUnderflowError);
}

TEST_CASE("folding consume_next over a guard yields the units in original order") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t k = 1 + rng.next_u64() % 8;
        ShortHorizonState state;
        state.guard = units_with_durations(random_durations(rng, k, 0.1, 1.0));
        const auto expected = state.guard;
        std::vector<ActionUnit> consumed;
        while (!state.guard.empty()) {
            auto [unit, next] = consume_next(std::move(state));
            consumed.push_back(unit);
            state = std::move(next);
        }
        CHECK(consumed == expected);
        CHECK(state.executed == expected);
    }
}

TEST_CASE("apply_handoff promotes the refreshed prefix and retires the guard") {
    // Round t state: guard [g1,g2] fully consumed.
    ShortHorizonState state;
    state.round = 0;
    state.guard = units_with_durations({1.0, 1.0}, 1);
    state.tail = units_with_durations({1.0}, 3);
    while (!state.guard.empty()) {
        auto [unit, next] = consume_next(std::move(state));
        state = std::move(next);
    }

    auto refreshed = continuation_of(1, {2.0, 2.0, 2.0, 2.0}, 10);
    auto next = apply_handoff(state, refreshed, 2);
    CHECK(next.round == 1);
    CHECK(ids_match(next.executed, {1, 2}));
    CHECK(ids_match(next.guard, {10, 11}));
    CHECK(ids_match(next.tail, {12, 13}));

    // Minimal continuation: guard takes everything, tail empty.
    auto single = continuation_of(2, {1.0}, 20);
    auto after = apply_handoff(next, single, 1);
    CHECK(after.tail.empty());
    CHECK(ids_match(after.executed, {10, 11}));

    CHECK_THROWS_AS(apply_handoff(next, continuation_of(5, {1.0}, 30), 1), SequencingError);
    CHECK_THROWS_AS(apply_handoff(next, continuation_of(2, {1.0}, 30), 2), std::out_of_range);
}

TEST_CASE("successive handoffs preserve global id order across executed histories") {
    // Replay oracle: concatenating the executed prefix of every handoff must
    // reproduce one strictly increasing id sequence.
    Rng rng(23);
    ShortHorizonState state;
    state.round = -1;
    ActionId next_id = 1;
    std::vector<ActionId> replay;
    for (int round = 0; round < 6; ++round) {
        const std::size_t horizon = 2 + rng.next_u64() % 4;
        Continuation refreshed;
        refreshed.round = round;
        refreshed.units = units_with_durations(random_durations(rng, horizon, 0.1, 1.0), next_id);
        next_id += static_cast<ActionId>(horizon);
        const std::size_t k = 1 + rng.next_u64() % horizon;
        state = apply_handoff(state, refreshed, k);
        for (const auto& unit : state.executed) {
            replay.push_back(unit.id);
        }
        // Consume a random part of the guard (possibly all of it).
        std::size_t consume = rng.next_u64() % (state.guard.size() + 1);
        for (std::size_t i = 0; i < consume; ++i) {
            auto [unit, next] = consume_next(std::move(state));
            state = std::move(next);
        }
    }
    CHECK(std::is_sorted(replay.begin(), replay.end()));
    CHECK(std::adjacent_find(replay.begin(), replay.end()) == replay.end());
}

TEST_CASE("partition invariant holds through random consume/handoff sequences") {
    Rng rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        ShortHorizonState state;
        state.round = -1;
        ActionId next_id = 1;
        for (int round = 0; round < 5; ++round) {
            const std::size_t horizon = 1 + rng.next_u64() % 6;
            Continuation refreshed;
            refreshed.round = round;
            refreshed.units =
                units_with_durations(random_durations(rng, horizon, 0.1, 1.0), next_id);
            next_id += static_cast<ActionId>(horizon);
            state = apply_handoff(state, refreshed, 1 + rng.next_u64() % horizon);

            std::size_t consume = rng.next_u64() % (state.guard.size() + 1);
            for (std::size_t i = 0; i < consume; ++i) {
                auto [unit, next] = consume_next(std::move(state));
                state = std::move(next);
            }
            // Disjoint by id, and concatenation is ordered by id.
            std::vector<ActionId> all;
            for (const auto& unit : state.executed) all.push_back(unit.id);
            for (const auto& unit : state.guard) all.push_back(unit.id);
            for (const auto& unit : state.tail) all.push_back(unit.id);
            CHECK(std::is_sorted(all.begin(), all.end()));
            CHECK(std::set<ActionId>(all.begin(), all.end()).size() == all.size());
        }
    }
}
