#include "qpath/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "qpath/errors.hpp"

namespace qpath {

Operator splitter_unitary(const BeamSplitterSpec& spec, std::size_t rails) {
    if (spec.rail_a >= rails || spec.rail_b >= rails) {
        throw DimensionMismatch("splitter_unitary: rail index out of range");
    }
    if (spec.rail_a == spec.rail_b) {
        throw Error("splitter_unitary: rail_a equals rail_b");
    }
    if (spec.sign_rail != spec.rail_a && spec.sign_rail != spec.rail_b) {
        throw Error("splitter_unitary: sign_rail must be rail_a or rail_b");
    }
    if (!(spec.reflectivity >= 0.0 && spec.reflectivity <= 1.0)) {
        throw Error("splitter_unitary: reflectivity outside [0, 1]");
    }
    const double r = std::sqrt(spec.reflectivity);
    const double t = std::sqrt(1.0 - spec.reflectivity);
    Operator u = Operator::identity(rails);
    const std::size_t a = spec.rail_a;
    const std::size_t b = spec.rail_b;
    const double sign_a = (spec.sign_rail == a) ? -1.0 : 1.0;
    const double sign_b = (spec.sign_rail == b) ? -1.0 : 1.0;
    u.set(a, a, Complex{sign_a * r, 0.0});
    u.set(a, b, Complex{t, 0.0});
    u.set(b, a, Complex{t, 0.0});
    u.set(b, b, Complex{sign_b * r, 0.0});
    return u;
}

Circuit::Circuit(std::size_t rails, std::vector<std::string> input_labels,
                 std::vector<Stage> stages)
    : rails_(rails),
      input_labels_(std::move(input_labels)),
      stages_(std::move(stages)),
      input_name_("input") {
    if (rails_ == 0) throw Error("Circuit: rails must be positive");
    auto check_labels = [this](const std::vector<std::string>& labels,
                               const std::string& where) {
        if (labels.size() != rails_) {
            throw Error("Circuit: labeling at " + where + " has " +
                        std::to_string(labels.size()) + " names for " +
                        std::to_string(rails_) + " rails");
        }
        std::set<std::string> seen(labels.begin(), labels.end());
        if (seen.size() != labels.size()) {
            throw Error("Circuit: duplicate rail name at " + where);
        }
    };
    check_labels(input_labels_, input_name_);
    std::set<std::string> stage_names{input_name_};
    for (std::size_t k = 0; k < stages_.size(); ++k) {
        const Stage& st = stages_[k];
        if (!stage_names.insert(st.name).second) {
            throw Error("Circuit: duplicate stage name '" + st.name + "'");
        }
        check_labels(st.labels_after, st.name);
        // Validates splitter geometry and, via composition, stage unitarity.
        const Operator u = stage_operator(k);
        if (!u.is_unitary(kAlgebraTol)) {
            throw Error("Circuit: stage '" + st.name + "' is not unitary");
        }
    }
}

const std::string& Circuit::checkpoint_name(std::size_t index) const {
    if (index == 0) return input_name_;
    if (index > stages_.size()) {
        throw UnknownStage("checkpoint index " + std::to_string(index) +
                           " out of range");
    }
    return stages_[index - 1].name;
}

std::size_t Circuit::checkpoint_index(const std::string& name) const {
    if (name == input_name_) return 0;
    for (std::size_t k = 0; k < stages_.size(); ++k) {
        if (stages_[k].name == name) return k + 1;
    }
    throw UnknownStage("unknown stage '" + name + "'");
}

const std::string& Circuit::input_checkpoint() const { return input_name_; }

const std::string& Circuit::output_checkpoint() const {
    return checkpoint_name(stages_.size());
}

const std::vector<std::string>& Circuit::labels_at(
    const std::string& checkpoint) const {
    const std::size_t idx = checkpoint_index(checkpoint);
    return idx == 0 ? input_labels_ : stages_[idx - 1].labels_after;
}

std::size_t Circuit::rail_index(const std::string& checkpoint,
                                const std::string& rail_name) const {
    const std::vector<std::string>& labels = labels_at(checkpoint);
    const auto it = std::find(labels.begin(), labels.end(), rail_name);
    if (it == labels.end()) {
        throw UnknownStage("no rail named '" + rail_name + "' at stage '" +
                           checkpoint + "'");
    }
    return static_cast<std::size_t>(it - labels.begin());
}

StateVector Circuit::basis_state(const std::string& checkpoint,
                                 const std::string& rail_name) const {
    return StateVector::basis(rails_, rail_index(checkpoint, rail_name),
                              checkpoint);
}

Operator Circuit::stage_operator(std::size_t stage) const {
    Operator u = Operator::identity(rails_);
    for (const BeamSplitterSpec& spec : stages_[stage].splitters) {
        u = compose(splitter_unitary(spec, rails_), u);
    }
    return u;
}

Operator Circuit::stage_unitary(const std::string& from_checkpoint,
                                const std::string& to_checkpoint) const {
    const std::size_t from = checkpoint_index(from_checkpoint);
    const std::size_t to = checkpoint_index(to_checkpoint);
    if (to < from) {
        throw StageOrderViolation("stage '" + to_checkpoint +
                                  "' precedes stage '" + from_checkpoint + "'");
    }
    Operator u = Operator::identity(rails_);
    for (std::size_t k = from; k < to; ++k) {
        u = compose(stage_operator(k), u);
    }
    return u;
}

StateVector Circuit::propagate(const StateVector& v,
                               const std::string& to_checkpoint) const {
    if (!v.has_stage_tag()) {
        throw UnknownStage("propagate: state carries no stage tag");
    }
    const StateVector out =
        apply(stage_unitary(v.stage_tag(), to_checkpoint), v);
    return out.with_stage_tag(checkpoint_name(checkpoint_index(to_checkpoint)));
}

StateVector Circuit::back_propagate(const StateVector& v,
                                    const std::string& to_checkpoint) const {
    if (!v.has_stage_tag()) {
        throw UnknownStage("back_propagate: state carries no stage tag");
    }
    const StateVector out =
        apply(adjoint(stage_unitary(to_checkpoint, v.stage_tag())), v);
    return out.with_stage_tag(checkpoint_name(checkpoint_index(to_checkpoint)));
}

Circuit build_three_box() {
    const double third = 1.0 / 3.0;
    const double half = 0.5;
    // Rail 0 carries the source; rail 2 is the empty co-input of the second
    // splitter. Checkpoint labelings rename only the rails a stage touches.
    std::vector<std::string> input_labels{"in", "aux", "D1"};
    std::vector<Stage> stages;
    stages.push_back(Stage{"bs1",
                           {BeamSplitterSpec{0, 1, third, 1}},
                           {"1", "S1", "D1"}});
    stages.push_back(Stage{"bs2",
                           {BeamSplitterSpec{1, 2, half, 2}},
                           {"1", "2", "3"}});
    stages.push_back(Stage{"bs3",
                           {BeamSplitterSpec{0, 2, half, 2}},
                           {"S2", "2", "D2"}});
    stages.push_back(Stage{"bs4",
                           {BeamSplitterSpec{1, 2, third, 2}},
                           {"S2", "f", "df"}});
    return Circuit(3, std::move(input_labels), std::move(stages));
}

StateVector three_box_input() {
    return StateVector::basis(3, 0, "input");
}

StateVector three_box_postselect() {
    return StateVector::basis(3, 1, "bs4");
}

}  // namespace qpath
