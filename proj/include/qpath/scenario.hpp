// Scenario files: a JSON description of a beam-splitter network together
// with its source state and post-selection. The built-in three-box network
// serializes to exactly this schema.
//
//   {
//     "rails": 3,
//     "labels": {"input": ["in","aux","D1"], "bs1": ["1","S1","D1"], ...},
//     "stages": [
//       {"name": "bs1",
//        "splitters": [{"rails": ["in","aux"], "reflectivity": 0.333...,
//                       "sign_rail": "aux"}]},
//       ...
//     ],
//     "input": {"rail": "in"},                  // or {"amplitudes": [[re,im],...]}
//     "postselect": {"stage": "bs4", "rail": "f"}   // or amplitudes
//   }
//
// Splitter rail names resolve against the labeling of the checkpoint before
// the stage. Amplitude lists are normalized on load. Complex numbers are
// two-element [re, im] arrays.

#pragma once

#include <string>

#include <json.hpp>

#include "qpath/algebra.hpp"
#include "qpath/circuit.hpp"

namespace qpath {

struct Scenario {
    Circuit circuit;
    StateVector input;        // tagged with the input checkpoint
    StateVector postselect;   // tagged with its defining checkpoint
};

Scenario scenario_from_json(const nlohmann::json& doc);
Scenario load_scenario(const std::string& path);

nlohmann::ordered_json scenario_to_json(const Scenario& scenario);

// The built-in three-box network as a scenario.
Scenario three_box_scenario();

}  // namespace qpath
