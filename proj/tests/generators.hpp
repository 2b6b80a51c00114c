// Deterministic random generators shared by the property suites.

#pragma once

#include <random>
#include <string>
#include <vector>

#include "qpath/algebra.hpp"
#include "qpath/circuit.hpp"

namespace testgen {

inline qpath::StateVector random_state(std::mt19937_64& rng, std::size_t dim,
                                       bool normalize = true,
                                       std::string stage_tag = {}) {
    std::normal_distribution<double> normal;
    std::vector<qpath::Complex> amps;
    for (std::size_t i = 0; i < dim; ++i) {
        amps.emplace_back(normal(rng), normal(rng));
    }
    qpath::StateVector v(std::move(amps), std::move(stage_tag));
    return normalize ? v.normalized() : v;
}

inline qpath::Circuit random_circuit(std::mt19937_64& rng) {
    const std::size_t rails =
        std::uniform_int_distribution<std::size_t>(2, 5)(rng);
    const std::size_t n_stages =
        std::uniform_int_distribution<std::size_t>(1, 4)(rng);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<std::string> labels;
    for (std::size_t i = 0; i < rails; ++i) {
        labels.push_back("in" + std::to_string(i));
    }
    std::vector<qpath::Stage> stages;
    for (std::size_t s = 0; s < n_stages; ++s) {
        qpath::Stage stage;
        stage.name = "st" + std::to_string(s);
        const std::size_t n_split =
            std::uniform_int_distribution<std::size_t>(1, 2)(rng);
        for (std::size_t k = 0; k < n_split; ++k) {
            qpath::BeamSplitterSpec spec;
            spec.rail_a =
                std::uniform_int_distribution<std::size_t>(0, rails - 1)(rng);
            spec.rail_b =
                std::uniform_int_distribution<std::size_t>(0, rails - 2)(rng);
            if (spec.rail_b >= spec.rail_a) ++spec.rail_b;
            spec.reflectivity = unit(rng);
            spec.sign_rail = (rng() & 1) ? spec.rail_a : spec.rail_b;
            stage.splitters.push_back(spec);
        }
        for (std::size_t i = 0; i < rails; ++i) {
            stage.labels_after.push_back("s" + std::to_string(s) + "r" +
                                         std::to_string(i));
        }
        stages.push_back(std::move(stage));
    }
    return qpath::Circuit(rails, std::move(labels), std::move(stages));
}

}  // namespace testgen
