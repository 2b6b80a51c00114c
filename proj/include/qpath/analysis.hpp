// Exact pre/post-selection analytics: weak values, the normalized
// pre/post-selected operator and its basis decompositions, empty-path
// coherence identities, and Kirkwood-Dirac quasiprobabilities.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qpath/algebra.hpp"
#include "qpath/circuit.hpp"

namespace qpath {

// A named set of state vectors at a common stage. Orthonormality is checked
// at use time, not trusted from construction.
struct Basis {
    std::vector<std::string> names;
    std::vector<StateVector> vectors;

    std::size_t size() const { return vectors.size(); }
};

// The rail basis of a checkpoint, in label order.
Basis rail_basis(const Circuit& circuit, const std::string& checkpoint);

// Transport every basis vector to another checkpoint (forward or backward).
Basis transport_basis(const Circuit& circuit, const Basis& basis,
                      const std::string& to_checkpoint);

// Throws NonOrthonormalBasis unless pairwise inner products match the
// identity within tol.
void require_orthonormal(const Basis& basis, double tol = kAlgebraTol);

// A (pre-selected state, post-selected direction) pair over a circuit, each
// tagged with its defining stage. Construction validates normalization and
// rejects post-selections with |<f|psi>| at or below the anomaly threshold.
class PpsEnsemble {
  public:
    PpsEnsemble(Circuit circuit, StateVector psi, StateVector postselect,
                double anomaly_threshold = 1e-10);

    const Circuit& circuit() const { return circuit_; }
    double anomaly_threshold() const { return anomaly_threshold_; }

    // Defining checkpoints of the pre- and post-selection.
    const std::string& psi_stage() const { return psi_.stage_tag(); }
    const std::string& postselect_stage() const { return f_.stage_tag(); }

    // Transported representations at a checkpoint.
    StateVector psi_at(const std::string& checkpoint) const;
    StateVector f_at(const std::string& checkpoint) const;

    // <f|psi>, stage-invariant by unitarity.
    Complex transition_amplitude() const { return transition_; }

  private:
    Circuit circuit_;
    StateVector psi_;
    StateVector f_;
    double anomaly_threshold_;
    Complex transition_;
};

struct WeakValue {
    Complex value;
    std::string observable_tag;
};

// <f|A|psi>/<f|psi> with psi and f transported to the given stage. The
// result is stage-covariant: transporting A with the stage unitary gives
// the same value at any other stage.
WeakValue weak_value(const PpsEnsemble& ensemble, const Operator& observable,
                     const std::string& stage,
                     const std::string& observable_tag = {});

// Weak value of the projector onto a named rail at a checkpoint.
WeakValue path_weak_value(const PpsEnsemble& ensemble, const std::string& stage,
                          const std::string& rail_name);

// |psi><f| / <f|psi> at the requested stage; trace is 1 by construction.
Operator pps_operator(const PpsEnsemble& ensemble, const std::string& stage);

// Expansion of an operator as sum_ij c_ij |left_i><right_j| over two
// complete orthonormal bases; c_ij = <left_i|A|right_j>.
struct OperatorDecomposition {
    Basis left;
    Basis right;
    std::vector<Complex> coeffs;  // row-major, left index major

    Complex coeff(std::size_t left_index, std::size_t right_index) const {
        return coeffs[left_index * right.size() + right_index];
    }
    Complex coeff(const std::string& left_name,
                  const std::string& right_name) const;
    Operator reconstruct() const;
};

OperatorDecomposition decompose(const Operator& op, const Basis& left,
                                const Basis& right);

// Complex quasiprobability table q(a, b) = <b|a><a|psi><psi|b> over an
// intermediate basis {a} and a final basis {b} at a common stage.
struct KdDistribution {
    std::vector<std::string> intermediate_names;
    std::vector<std::string> final_names;
    std::vector<Complex> table;  // row-major, intermediate index major

    std::size_t rows() const { return intermediate_names.size(); }
    std::size_t cols() const { return final_names.size(); }
    Complex q(std::size_t a, std::size_t b) const {
        return table[a * cols() + b];
    }
    Complex total() const;
    Complex row_marginal(std::size_t a) const;
    Complex column_marginal(std::size_t b) const;
};

KdDistribution kd_distribution(const PpsEnsemble& ensemble,
                               const Basis& intermediate_basis,
                               const Basis& final_basis,
                               const std::string& stage);

// Contextuality witness: sum of max(0, -Re q) over all cells.
double negativity(const KdDistribution& kd);

// Total imaginary magnitude, reported separately from the witness.
double imaginarity(const KdDistribution& kd);

// Sum of projector weak values over a complete orthonormal basis; equals 1.
Complex weak_value_sum_check(const PpsEnsemble& ensemble, const Basis& basis,
                             const std::string& stage);

// Orthonormal basis at the given stage whose first vector is the transported
// post-selection f and whose second spans the f-orthogonal component of psi
// (when nonzero); remaining vectors complete via Gram-Schmidt over the rail
// basis. This is the completion the built-in reports use.
Basis final_basis_containing_f(const PpsEnsemble& ensemble,
                               const std::string& stage);

}  // namespace qpath
