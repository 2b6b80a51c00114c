// Beam-splitter networks as ordered two-rail unitaries with named stage
// checkpoints. States propagate forward through stage unitaries and
// post-selections propagate backward through their adjoints.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qpath/algebra.hpp"

namespace qpath {

// One two-rail mixing element. The induced 2x2 block on (rail_a, rail_b) is
//
//     [  sqrt(R)  sqrt(T) ]        T = 1 - R,
//     [  sqrt(T) -sqrt(R) ]
//
// with the minus sign on the row of sign_rail (shown here on rail_b).
// Reflection keeps the rail index, transmission crosses; R = 1 is the
// identity-like block and R = 0 the swap-like block.
struct BeamSplitterSpec {
    std::size_t rail_a;
    std::size_t rail_b;
    double reflectivity;       // R in [0, 1]
    std::size_t sign_rail;     // must equal rail_a or rail_b
};

// A named group of splitters applied together, plus the rail labeling that
// holds at the checkpoint immediately after the group.
struct Stage {
    std::string name;
    std::vector<BeamSplitterSpec> splitters;
    std::vector<std::string> labels_after;
};

// The embedded rails x rails unitary of a single splitter.
Operator splitter_unitary(const BeamSplitterSpec& spec, std::size_t rails);

class Circuit {
  public:
    // Checkpoint 0 is named "input" and carries input_labels; checkpoint
    // k >= 1 sits after stages[k-1] and carries its labels_after.
    Circuit(std::size_t rails, std::vector<std::string> input_labels,
            std::vector<Stage> stages);

    std::size_t rails() const { return rails_; }
    const std::vector<Stage>& stages() const { return stages_; }

    std::size_t checkpoint_count() const { return stages_.size() + 1; }
    const std::string& checkpoint_name(std::size_t index) const;
    std::size_t checkpoint_index(const std::string& name) const;
    const std::string& input_checkpoint() const;
    const std::string& output_checkpoint() const;

    const std::vector<std::string>& labels_at(const std::string& checkpoint) const;
    std::size_t rail_index(const std::string& checkpoint,
                           const std::string& rail_name) const;

    // Basis vector of the named rail, tagged with the checkpoint.
    StateVector basis_state(const std::string& checkpoint,
                            const std::string& rail_name) const;

    // Unitary mapping representations at from_checkpoint to to_checkpoint;
    // equal checkpoints give the identity.
    Operator stage_unitary(const std::string& from_checkpoint,
                           const std::string& to_checkpoint) const;

    // Forward transport of a stage-tagged state to a checkpoint at or after
    // its tag; result is tagged with the target checkpoint.
    StateVector propagate(const StateVector& v,
                          const std::string& to_checkpoint) const;

    // Backward transport (adjoint of the intervening unitary) of a state
    // tagged at or after the target checkpoint.
    StateVector back_propagate(const StateVector& v,
                               const std::string& to_checkpoint) const;

  private:
    // Composed unitary of one stage (index into stages_).
    Operator stage_operator(std::size_t stage) const;

    std::size_t rails_;
    std::vector<std::string> input_labels_;
    std::vector<Stage> stages_;
    std::string input_name_;
};

// The built-in three-rail network: four splitters with reflectivities
// 1/3, 1/2, 1/2, 1/3 and checkpoints input, bs1, bs2, bs3, bs4. The
// canonical source enters on rail "in" and the canonical post-selection is
// rail "f" at the output. The sign convention (minus on the second rail of
// every splitter) fixes all interference identities exactly.
Circuit build_three_box();

// Canonical source state |in> at checkpoint "input".
StateVector three_box_input();

// Canonical post-selection direction |f> at checkpoint "bs4".
StateVector three_box_postselect();

}  // namespace qpath
