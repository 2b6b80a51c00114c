#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "generators.hpp"
#include "oracle.hpp"
#include "qpath/circuit.hpp"
#include "qpath/errors.hpp"

using namespace qpath;
using testgen::random_circuit;

TEST_CASE("splitter blocks", "[circuit]") {
    SECTION("full reflectivity keeps rails, with the sign on sign_rail") {
        const Operator u = splitter_unitary({0, 1, 1.0, 1}, 2);
        REQUIRE(std::abs(u.at(0, 0) - Complex{1.0, 0.0}) <= kAlgebraTol);
        REQUIRE(std::abs(u.at(1, 1) - Complex{-1.0, 0.0}) <= kAlgebraTol);
        REQUIRE(std::abs(u.at(0, 1)) <= kAlgebraTol);
    }
    SECTION("zero reflectivity crosses rails") {
        const Operator u = splitter_unitary({0, 1, 0.0, 1}, 2);
        const StateVector out = apply(u, StateVector::basis(2, 0));
        REQUIRE(std::abs(out[0]) <= kAlgebraTol);
        REQUIRE(std::abs(out[1] - Complex{1.0, 0.0}) <= kAlgebraTol);
    }
    SECTION("blocks are unitary across the reflectivity range") {
        for (double r : {0.0, 0.1, 1.0 / 3.0, 0.5, 0.9, 1.0}) {
            REQUIRE(splitter_unitary({0, 2, r, 0}, 3).is_unitary());
        }
    }
    SECTION("invalid geometry") {
        REQUIRE_THROWS_AS(splitter_unitary({0, 0, 0.5, 0}, 2), Error);
        REQUIRE_THROWS_AS(splitter_unitary({0, 1, 1.5, 1}, 2), Error);
        REQUIRE_THROWS_AS(splitter_unitary({0, 1, 0.5, 2}, 3), Error);
    }
}

TEST_CASE("three-box forward propagation", "[circuit]") {
    const Circuit c = build_three_box();
    const StateVector psi = three_box_input();

    SECTION("first splitter distributes the source amplitudes") {
        const StateVector v = c.propagate(psi, "bs1");
        REQUIRE(std::abs(v[c.rail_index("bs1", "1")] -
                         Complex{std::sqrt(1.0 / 3.0), 0.0}) <= kAlgebraTol);
        REQUIRE(std::abs(v[c.rail_index("bs1", "S1")] -
                         Complex{std::sqrt(2.0 / 3.0), 0.0}) <= kAlgebraTol);
    }
    SECTION("equal moduli on the three middle paths") {
        const StateVector v = c.propagate(psi, "bs2");
        for (const char* rail : {"1", "2", "3"}) {
            REQUIRE(std::abs(std::abs(v[c.rail_index("bs2", rail)]) -
                             1.0 / std::sqrt(3.0)) <= kAlgebraTol);
        }
    }
    SECTION("destructive interference empties D2") {
        const StateVector v = c.propagate(psi, "bs3");
        REQUIRE(std::abs(v[c.rail_index("bs3", "D2")]) <= kAlgebraTol);
    }
    SECTION("every checkpoint matches the hand-built matrix chain") {
        for (int k = 0; k <= 4; ++k) {
            const StateVector v = c.propagate(psi, c.checkpoint_name(k));
            const oracle::Vec3 expected = oracle::psi_at(k);
            for (std::size_t i = 0; i < 3; ++i) {
                REQUIRE(std::abs(v[i] - Complex{expected[i], 0.0}) <=
                        kAlgebraTol);
            }
        }
    }
}

TEST_CASE("three-box backward propagation", "[circuit]") {
    const Circuit c = build_three_box();
    const StateVector f = three_box_postselect();

    SECTION("post-selection seen at the middle stage") {
        const StateVector v = c.back_propagate(f, "bs2");
        const double r3 = 1.0 / std::sqrt(3.0);
        REQUIRE(std::abs(v[c.rail_index("bs2", "1")] - Complex{r3, 0.0}) <=
                kAlgebraTol);
        REQUIRE(std::abs(v[c.rail_index("bs2", "2")] - Complex{r3, 0.0}) <=
                kAlgebraTol);
        REQUIRE(std::abs(v[c.rail_index("bs2", "3")] - Complex{-r3, 0.0}) <=
                kAlgebraTol);
    }
    SECTION("no transmission from S1 to the post-selected port") {
        const StateVector v = c.back_propagate(f, "bs1");
        const StateVector s1 = c.basis_state("bs1", "S1");
        REQUIRE(std::abs(inner(v, s1)) <= kAlgebraTol);
    }
    SECTION("every checkpoint matches the transposed matrix chain") {
        for (int k = 0; k <= 4; ++k) {
            const StateVector v = c.back_propagate(f, c.checkpoint_name(k));
            const oracle::Vec3 expected = oracle::f_at(k);
            for (std::size_t i = 0; i < 3; ++i) {
                REQUIRE(std::abs(v[i] - Complex{expected[i], 0.0}) <=
                        kAlgebraTol);
            }
        }
    }
}

TEST_CASE("stage unitaries", "[circuit]") {
    const Circuit c = build_three_box();

    SECTION("equal checkpoints give the identity") {
        const Operator u = c.stage_unitary("bs2", "bs2");
        REQUIRE(max_abs_entry(subtract(u, Operator::identity(3))) <=
                kAlgebraTol);
    }
    SECTION("full-circuit operator is unitary and matches the oracle product") {
        const Operator u = c.stage_unitary("input", "bs4");
        REQUIRE(u.is_unitary());
        oracle::Mat3 expected = oracle::stage_matrix(1);
        for (int s = 2; s <= 4; ++s) {
            expected = oracle::matmul(oracle::stage_matrix(s), expected);
        }
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) {
                REQUIRE(std::abs(u.at(i, j) - Complex{expected[i][j], 0.0}) <=
                        kAlgebraTol);
            }
        }
    }
    SECTION("unknown and misordered stages throw") {
        REQUIRE_THROWS_AS(c.stage_unitary("input", "bs9"), UnknownStage);
        REQUIRE_THROWS_AS(c.stage_unitary("bs3", "bs1"), StageOrderViolation);
        REQUIRE_THROWS_AS(c.rail_index("bs2", "S1"), UnknownStage);
    }
    SECTION("transport requires a stage tag and respects ordering") {
        REQUIRE_THROWS_AS(c.propagate(StateVector(3), "bs2"), UnknownStage);
        const StateVector late = c.basis_state("bs3", "2");
        REQUIRE_THROWS_AS(c.propagate(late, "bs1"), StageOrderViolation);
        REQUIRE_THROWS_AS(c.back_propagate(three_box_input(), "bs2"),
                          StageOrderViolation);
    }
}

TEST_CASE("transport round trips and stage invariance", "[circuit][property]") {
    const Circuit c = build_three_box();
    const StateVector psi = three_box_input();
    const StateVector f = three_box_postselect();

    SECTION("transition amplitude is the same at every checkpoint") {
        const Complex reference = inner(c.back_propagate(f, "input"), psi);
        for (std::size_t k = 0; k < c.checkpoint_count(); ++k) {
            const std::string& name = c.checkpoint_name(k);
            const Complex value =
                inner(c.back_propagate(f, name), c.propagate(psi, name));
            REQUIRE(std::abs(value - reference) <= kAlgebraTol);
        }
    }
    SECTION("forward then backward returns the input") {
        const StateVector there = c.propagate(psi, "bs3");
        const StateVector back = c.back_propagate(there, "input");
        for (std::size_t i = 0; i < 3; ++i) {
            REQUIRE(std::abs(back[i] - psi[i]) <= kAlgebraTol);
        }
    }
}

TEST_CASE("random circuits stay unitary", "[circuit][property]") {
    std::mt19937_64 rng(2024);
    for (int rep = 0; rep < 100; ++rep) {
        const Circuit c = random_circuit(rng);
        for (std::size_t k = 0; k + 1 < c.checkpoint_count(); ++k) {
            const Operator u = c.stage_unitary(c.checkpoint_name(k),
                                               c.checkpoint_name(k + 1));
            REQUIRE(u.is_unitary());
        }
        const Operator full = c.stage_unitary(c.checkpoint_name(0),
                                              c.output_checkpoint());
        REQUIRE(full.is_unitary());
    }
}
