// The built-in three-box reproduction: computes every characteristic number
// of the network — path amplitudes, orthogonality checks, weak values, the
// coherence-transport identities, the normalized pre/post-selected operator
// tables, and the quasiprobability distribution — and checks each against
// its analytic target.

#pragma once

#include "qpath/circuit.hpp"
#include "qpath/report.hpp"

namespace qpath {

// Runs the full battery on the given circuit (normally build_three_box();
// tests pass deliberately corrupted circuits). Every entry carries a target
// and pass flag.
Report run_paradox_checks(const Circuit& circuit);

}  // namespace qpath
