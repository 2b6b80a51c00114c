// Stochastic verification layer: Born-rule detection sampling at the output
// ports and a Gaussian-pointer weak-measurement simulation whose mean shift
// recovers projector weak values in the weak-coupling limit.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qpath/analysis.hpp"
#include "qpath/circuit.hpp"

namespace qpath {

struct ShotConfig {
    std::uint64_t shots = 1'000'000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
};

// Gaussian pointer of width `width` coupled with strength `coupling` to the
// projector onto `rail` at checkpoint `stage`. coupling/width <= 1 is the
// weak regime; the weak-value recovery contract applies only there.
struct PointerConfig {
    double coupling = 0.01;
    double width = 1.0;
    std::string stage;
    std::string rail;
};

struct DetectionCounts {
    std::vector<std::string> labels;
    std::vector<std::uint64_t> counts;
    std::uint64_t shots = 0;
};

struct PointerRunResult {
    std::uint64_t accepted_shots = 0;
    double mean_shift = 0.0;
    // Sample standard deviation of accepted pointer readings / sqrt(accepted).
    double stderr_shift = 0.0;
    // mean_shift / coupling, the weak-value estimate, with its standard error.
    double estimate = 0.0;
    double estimate_stderr = 0.0;
    bool weak_regime = true;
    PointerConfig pointer;
    ShotConfig config;
};

// Per-shot output-port draw with probability |amp|^2 of the fully propagated
// state. Counts sum to shots exactly; identical (shots, seed) give identical
// counts for any worker count.
DetectionCounts sample_detections(const Circuit& circuit,
                                  const StateVector& psi,
                                  const ShotConfig& config);

// The two coherent branches of the pointer coupling: amp_projected is
// <f|P|psi>, amp_rest is <f|(1-P)|psi>, and weight_projected = <psi|P|psi>
// is the probability that the pointer marginal takes the shifted branch.
struct PointerBranches {
    Complex amp_projected;
    Complex amp_rest;
    double weight_projected;
};

PointerBranches pointer_branches(const PpsEnsemble& ensemble,
                                 const PointerConfig& pointer);

// Exact post-selection probability and conditional pointer mean of the
// two-branch Gaussian mixture, in closed form.
double analytic_acceptance(const PointerBranches& branches, double coupling,
                           double width);
double analytic_conditional_mean(const PointerBranches& branches,
                                 double coupling, double width);

// Per shot: draw the pointer reading from its exact two-branch Gaussian
// mixture marginal, then accept with the exact conditional post-selection
// probability given that reading. As coupling/width -> 0 the estimate
// converges to Re(weak value) with bias O((coupling/width)^2).
PointerRunResult weak_pointer_run(const PpsEnsemble& ensemble,
                                  const PointerConfig& pointer,
                                  const ShotConfig& config);

// One weak_pointer_run per coupling value, each with the same seed.
std::vector<PointerRunResult> coupling_sweep(const PpsEnsemble& ensemble,
                                             const std::string& stage,
                                             const std::string& rail,
                                             const std::vector<double>& couplings,
                                             double width,
                                             const ShotConfig& config);

}  // namespace qpath
