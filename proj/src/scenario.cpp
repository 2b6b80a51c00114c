#include "qpath/scenario.hpp"

#include <cmath>
#include <fstream>
#include <utility>

#include "qpath/errors.hpp"

namespace qpath {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const json& require_key(const json& obj, const std::string& key,
                        const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) {
        throw ScenarioError("missing key '" + where + "." + key + "'");
    }
    return obj.at(key);
}

std::vector<Complex> parse_amplitudes(const json& arr,
                                      const std::string& where) {
    if (!arr.is_array() || arr.empty()) {
        throw ScenarioError("'" + where + "' must be a non-empty array");
    }
    std::vector<Complex> amps;
    amps.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const json& cell = arr.at(i);
        if (!cell.is_array() || cell.size() != 2 ||
            !cell.at(0).is_number() || !cell.at(1).is_number()) {
            throw ScenarioError("'" + where + "[" + std::to_string(i) +
                                "]' must be a [re, im] pair");
        }
        amps.emplace_back(cell.at(0).get<double>(), cell.at(1).get<double>());
    }
    return amps;
}

StateVector parse_state(const json& obj, const Circuit& circuit,
                        const std::string& checkpoint,
                        const std::string& where) {
    const bool has_rail = obj.is_object() && obj.contains("rail");
    const bool has_amps = obj.is_object() && obj.contains("amplitudes");
    if (has_amps) {
        std::vector<Complex> amps =
            parse_amplitudes(obj.at("amplitudes"), where + ".amplitudes");
        if (amps.size() != circuit.rails()) {
            throw ScenarioError("'" + where + ".amplitudes' has " +
                                std::to_string(amps.size()) + " entries for " +
                                std::to_string(circuit.rails()) + " rails");
        }
        StateVector state(std::move(amps), checkpoint);
        if (!(state.norm2() > 0.0)) {
            throw ScenarioError("'" + where + ".amplitudes' is the zero vector");
        }
        return state.normalized();
    }
    if (has_rail) {
        const std::string rail = obj.at("rail").get<std::string>();
        try {
            return circuit.basis_state(checkpoint, rail);
        } catch (const UnknownStage& e) {
            throw ScenarioError("'" + where + ".rail': " + e.what());
        }
    }
    throw ScenarioError("'" + where + "' needs a 'rail' or 'amplitudes' key");
}

ordered_json complex_to_json(const Complex& v) {
    return ordered_json::array({v.real(), v.imag()});
}

}  // namespace

Scenario scenario_from_json(const json& doc) {
    const json& rails_node = require_key(doc, "rails", "scenario");
    if (!rails_node.is_number_unsigned() || rails_node.get<std::size_t>() == 0) {
        throw ScenarioError("'scenario.rails' must be a positive integer");
    }
    const std::size_t rails = rails_node.get<std::size_t>();

    const json& labels_node = require_key(doc, "labels", "scenario");
    auto labels_for = [&](const std::string& name) {
        if (!labels_node.contains(name)) {
            throw ScenarioError("missing key 'scenario.labels." + name + "'");
        }
        const json& arr = labels_node.at(name);
        if (!arr.is_array() || arr.size() != rails) {
            throw ScenarioError("'scenario.labels." + name + "' must list " +
                                std::to_string(rails) + " rail names");
        }
        std::vector<std::string> out;
        for (const json& cell : arr) {
            if (!cell.is_string()) {
                throw ScenarioError("'scenario.labels." + name +
                                    "' contains a non-string entry");
            }
            out.push_back(cell.get<std::string>());
        }
        return out;
    };

    std::vector<std::string> previous_labels = labels_for("input");
    const json& stages_node = require_key(doc, "stages", "scenario");
    if (!stages_node.is_array()) {
        throw ScenarioError("'scenario.stages' must be an array");
    }

    std::vector<Stage> stages;
    for (std::size_t s = 0; s < stages_node.size(); ++s) {
        const std::string where = "scenario.stages[" + std::to_string(s) + "]";
        const json& stage_node = stages_node.at(s);
        const json& name_node = require_key(stage_node, "name", where);
        if (!name_node.is_string()) {
            throw ScenarioError("'" + where + ".name' must be a string");
        }
        Stage stage;
        stage.name = name_node.get<std::string>();
        stage.labels_after = labels_for(stage.name);

        auto rail_from_name = [&](const std::string& rail_name,
                                  const std::string& key) {
            for (std::size_t i = 0; i < previous_labels.size(); ++i) {
                if (previous_labels[i] == rail_name) return i;
            }
            throw ScenarioError("'" + key + "': unknown rail '" + rail_name +
                                "' before stage '" + stage.name + "'");
        };

        const json& splitters_node = require_key(stage_node, "splitters", where);
        if (!splitters_node.is_array()) {
            throw ScenarioError("'" + where + ".splitters' must be an array");
        }
        for (std::size_t k = 0; k < splitters_node.size(); ++k) {
            const std::string skey =
                where + ".splitters[" + std::to_string(k) + "]";
            const json& sp = splitters_node.at(k);
            const json& rails_pair = require_key(sp, "rails", skey);
            if (!rails_pair.is_array() || rails_pair.size() != 2 ||
                !rails_pair.at(0).is_string() || !rails_pair.at(1).is_string()) {
                throw ScenarioError("'" + skey +
                                    ".rails' must name exactly two rails");
            }
            const json& refl = require_key(sp, "reflectivity", skey);
            if (!refl.is_number()) {
                throw ScenarioError("'" + skey +
                                    ".reflectivity' must be a number");
            }
            const double reflectivity = refl.get<double>();
            if (!(reflectivity >= 0.0 && reflectivity <= 1.0)) {
                throw ScenarioError("'" + skey +
                                    ".reflectivity' outside [0, 1]");
            }
            const json& sign = require_key(sp, "sign_rail", skey);
            if (!sign.is_string()) {
                throw ScenarioError("'" + skey + ".sign_rail' must be a string");
            }
            BeamSplitterSpec spec;
            spec.rail_a = rail_from_name(rails_pair.at(0).get<std::string>(),
                                         skey + ".rails");
            spec.rail_b = rail_from_name(rails_pair.at(1).get<std::string>(),
                                         skey + ".rails");
            spec.reflectivity = reflectivity;
            spec.sign_rail = rail_from_name(sign.get<std::string>(),
                                            skey + ".sign_rail");
            if (spec.sign_rail != spec.rail_a && spec.sign_rail != spec.rail_b) {
                throw ScenarioError("'" + skey +
                                    ".sign_rail' must be one of the two rails");
            }
            stage.splitters.push_back(spec);
        }
        previous_labels = stage.labels_after;
        stages.push_back(std::move(stage));
    }

    Circuit circuit(rails, labels_for("input"), std::move(stages));

    const json& input_node = require_key(doc, "input", "scenario");
    StateVector input = parse_state(input_node, circuit,
                                    circuit.input_checkpoint(), "scenario.input");

    const json& post_node = require_key(doc, "postselect", "scenario");
    const json& post_stage_node =
        require_key(post_node, "stage", "scenario.postselect");
    if (!post_stage_node.is_string()) {
        throw ScenarioError("'scenario.postselect.stage' must be a string");
    }
    const std::string post_stage = post_stage_node.get<std::string>();
    try {
        circuit.checkpoint_index(post_stage);
    } catch (const UnknownStage& e) {
        throw ScenarioError(std::string("'scenario.postselect.stage': ") +
                            e.what());
    }
    StateVector postselect =
        parse_state(post_node, circuit, post_stage, "scenario.postselect");

    return Scenario{std::move(circuit), std::move(input), std::move(postselect)};
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ScenarioError("cannot open scenario file '" + path + "'");
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ScenarioError("scenario '" + path + "' is not valid JSON: " +
                            e.what());
    }
    return scenario_from_json(doc);
}

nlohmann::ordered_json scenario_to_json(const Scenario& scenario) {
    const Circuit& circuit = scenario.circuit;
    ordered_json doc;
    doc["rails"] = circuit.rails();

    ordered_json labels;
    labels[circuit.input_checkpoint()] =
        circuit.labels_at(circuit.input_checkpoint());
    for (const Stage& stage : circuit.stages()) {
        labels[stage.name] = stage.labels_after;
    }
    doc["labels"] = labels;

    ordered_json stages = ordered_json::array();
    std::vector<std::string> previous =
        circuit.labels_at(circuit.input_checkpoint());
    for (const Stage& stage : circuit.stages()) {
        ordered_json splitters = ordered_json::array();
        for (const BeamSplitterSpec& spec : stage.splitters) {
            ordered_json sp;
            sp["rails"] = {previous[spec.rail_a], previous[spec.rail_b]};
            sp["reflectivity"] = spec.reflectivity;
            sp["sign_rail"] = previous[spec.sign_rail];
            splitters.push_back(sp);
        }
        ordered_json st;
        st["name"] = stage.name;
        st["splitters"] = splitters;
        stages.push_back(st);
        previous = stage.labels_after;
    }
    doc["stages"] = stages;

    auto state_to_json = [&](const StateVector& state) {
        ordered_json node;
        const std::vector<std::string>& names =
            circuit.labels_at(state.stage_tag());
        std::size_t support = 0;
        std::size_t index = 0;
        for (std::size_t i = 0; i < state.dim(); ++i) {
            if (state[i] != Complex{0.0, 0.0}) {
                ++support;
                index = i;
            }
        }
        if (support == 1 && state[index] == Complex{1.0, 0.0}) {
            node["rail"] = names[index];
        } else {
            ordered_json amps = ordered_json::array();
            for (std::size_t i = 0; i < state.dim(); ++i) {
                amps.push_back(complex_to_json(state[i]));
            }
            node["amplitudes"] = amps;
        }
        return node;
    };

    doc["input"] = state_to_json(scenario.input);
    ordered_json post = state_to_json(scenario.postselect);
    ordered_json post_with_stage;
    post_with_stage["stage"] = scenario.postselect.stage_tag();
    for (auto& item : post.items()) {
        post_with_stage[item.key()] = item.value();
    }
    doc["postselect"] = post_with_stage;
    return doc;
}

Scenario three_box_scenario() {
    return Scenario{build_three_box(), three_box_input(),
                    three_box_postselect()};
}

}  // namespace qpath
