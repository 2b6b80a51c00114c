#include "qpath/analysis.hpp"

#include <cmath>
#include <utility>

#include "qpath/errors.hpp"

namespace qpath {

Basis rail_basis(const Circuit& circuit, const std::string& checkpoint) {
    Basis basis;
    for (const std::string& name : circuit.labels_at(checkpoint)) {
        basis.names.push_back(name);
        basis.vectors.push_back(circuit.basis_state(checkpoint, name));
    }
    return basis;
}

Basis transport_basis(const Circuit& circuit, const Basis& basis,
                      const std::string& to_checkpoint) {
    const std::size_t target = circuit.checkpoint_index(to_checkpoint);
    Basis out;
    out.names = basis.names;
    for (const StateVector& v : basis.vectors) {
        const std::size_t from = circuit.checkpoint_index(v.stage_tag());
        out.vectors.push_back(from <= target
                                  ? circuit.propagate(v, to_checkpoint)
                                  : circuit.back_propagate(v, to_checkpoint));
    }
    return out;
}

void require_orthonormal(const Basis& basis, double tol) {
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = 0; j < basis.size(); ++j) {
            const Complex overlap = inner(basis.vectors[i], basis.vectors[j]);
            const Complex expected = (i == j) ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
            if (std::abs(overlap - expected) > tol) {
                throw NonOrthonormalBasis(
                    "basis vectors '" + basis.names[i] + "' and '" +
                    basis.names[j] + "' fail orthonormality");
            }
        }
    }
}

namespace {

// A complete orthonormal basis of the full rail space.
void require_complete_orthonormal(const Basis& basis, std::size_t dim) {
    if (basis.size() != dim) {
        throw NonOrthonormalBasis("basis has " + std::to_string(basis.size()) +
                                  " vectors for dimension " +
                                  std::to_string(dim));
    }
    require_orthonormal(basis);
}

}  // namespace

PpsEnsemble::PpsEnsemble(Circuit circuit, StateVector psi,
                         StateVector postselect, double anomaly_threshold)
    : circuit_(std::move(circuit)),
      psi_(std::move(psi)),
      f_(std::move(postselect)),
      anomaly_threshold_(anomaly_threshold) {
    if (!psi_.has_stage_tag() || !f_.has_stage_tag()) {
        throw UnknownStage("PpsEnsemble: psi and f must carry stage tags");
    }
    if (!psi_.is_normalized()) {
        throw Error("PpsEnsemble: pre-selected state is not normalized");
    }
    if (!f_.is_normalized()) {
        throw Error("PpsEnsemble: post-selected direction is not normalized");
    }
    const StateVector f_there = f_at(psi_.stage_tag());
    transition_ = inner(f_there, psi_);
    if (std::abs(transition_) <= anomaly_threshold_) {
        throw AnomalousPostselection(
            "post-selection nearly orthogonal to the propagated input: "
            "|<f|psi>| = " + std::to_string(std::abs(transition_)),
            std::abs(transition_));
    }
}

StateVector PpsEnsemble::psi_at(const std::string& checkpoint) const {
    const std::size_t from = circuit_.checkpoint_index(psi_.stage_tag());
    const std::size_t to = circuit_.checkpoint_index(checkpoint);
    return from <= to ? circuit_.propagate(psi_, checkpoint)
                      : circuit_.back_propagate(psi_, checkpoint);
}

StateVector PpsEnsemble::f_at(const std::string& checkpoint) const {
    const std::size_t from = circuit_.checkpoint_index(f_.stage_tag());
    const std::size_t to = circuit_.checkpoint_index(checkpoint);
    return from <= to ? circuit_.propagate(f_, checkpoint)
                      : circuit_.back_propagate(f_, checkpoint);
}

WeakValue weak_value(const PpsEnsemble& ensemble, const Operator& observable,
                     const std::string& stage,
                     const std::string& observable_tag) {
    const StateVector psi = ensemble.psi_at(stage);
    const StateVector f = ensemble.f_at(stage);
    const Complex numerator = inner(f, apply(observable, psi));
    const Complex value = numerator / ensemble.transition_amplitude();
    return WeakValue{value, observable_tag};
}

WeakValue path_weak_value(const PpsEnsemble& ensemble, const std::string& stage,
                          const std::string& rail_name) {
    const StateVector ket = ensemble.circuit().basis_state(stage, rail_name);
    return weak_value(ensemble, outer(ket, ket), stage,
                      "|" + rail_name + "><" + rail_name + "|");
}

Operator pps_operator(const PpsEnsemble& ensemble, const std::string& stage) {
    const StateVector psi = ensemble.psi_at(stage);
    const StateVector f = ensemble.f_at(stage);
    return scale(Complex{1.0, 0.0} / ensemble.transition_amplitude(),
                 outer(psi, f));
}

Complex OperatorDecomposition::coeff(const std::string& left_name,
                                     const std::string& right_name) const {
    std::size_t li = left.names.size();
    std::size_t ri = right.names.size();
    for (std::size_t i = 0; i < left.names.size(); ++i) {
        if (left.names[i] == left_name) li = i;
    }
    for (std::size_t j = 0; j < right.names.size(); ++j) {
        if (right.names[j] == right_name) ri = j;
    }
    if (li == left.names.size() || ri == right.names.size()) {
        throw Error("OperatorDecomposition: unknown cell (" + left_name + ", " +
                    right_name + ")");
    }
    return coeff(li, ri);
}

Operator OperatorDecomposition::reconstruct() const {
    const std::size_t dim = left.vectors.front().dim();
    Operator out(dim);
    for (std::size_t i = 0; i < left.size(); ++i) {
        for (std::size_t j = 0; j < right.size(); ++j) {
            out = add(out, scale(coeff(i, j),
                                 outer(left.vectors[i], right.vectors[j])));
        }
    }
    return out;
}

OperatorDecomposition decompose(const Operator& op, const Basis& left,
                                const Basis& right) {
    require_complete_orthonormal(left, op.dim());
    require_complete_orthonormal(right, op.dim());
    OperatorDecomposition d;
    d.left = left;
    d.right = right;
    d.coeffs.resize(left.size() * right.size());
    for (std::size_t i = 0; i < left.size(); ++i) {
        for (std::size_t j = 0; j < right.size(); ++j) {
            d.coeffs[i * right.size() + j] =
                inner(left.vectors[i], apply(op, right.vectors[j]));
        }
    }
    return d;
}

KdDistribution kd_distribution(const PpsEnsemble& ensemble,
                               const Basis& intermediate_basis,
                               const Basis& final_basis,
                               const std::string& stage) {
    const StateVector psi = ensemble.psi_at(stage);
    require_complete_orthonormal(intermediate_basis, psi.dim());
    require_complete_orthonormal(final_basis, psi.dim());

    KdDistribution kd;
    kd.intermediate_names = intermediate_basis.names;
    kd.final_names = final_basis.names;
    kd.table.resize(intermediate_basis.size() * final_basis.size());
    for (std::size_t a = 0; a < intermediate_basis.size(); ++a) {
        const StateVector& va = intermediate_basis.vectors[a];
        const Complex a_psi = inner(va, psi);
        for (std::size_t b = 0; b < final_basis.size(); ++b) {
            const StateVector& vb = final_basis.vectors[b];
            const Complex b_a = inner(vb, va);
            const Complex psi_b = std::conj(inner(vb, psi));
            kd.table[a * final_basis.size() + b] = b_a * a_psi * psi_b;
        }
    }
    return kd;
}

Complex KdDistribution::total() const {
    Complex acc{0.0, 0.0};
    for (const Complex& v : table) acc += v;
    return acc;
}

Complex KdDistribution::row_marginal(std::size_t a) const {
    Complex acc{0.0, 0.0};
    for (std::size_t b = 0; b < cols(); ++b) acc += q(a, b);
    return acc;
}

Complex KdDistribution::column_marginal(std::size_t b) const {
    Complex acc{0.0, 0.0};
    for (std::size_t a = 0; a < rows(); ++a) acc += q(a, b);
    return acc;
}

double negativity(const KdDistribution& kd) {
    double acc = 0.0;
    for (const Complex& v : kd.table) acc += std::max(0.0, -v.real());
    return acc;
}

double imaginarity(const KdDistribution& kd) {
    double acc = 0.0;
    for (const Complex& v : kd.table) acc += std::abs(v.imag());
    return acc;
}

Complex weak_value_sum_check(const PpsEnsemble& ensemble, const Basis& basis,
                             const std::string& stage) {
    const StateVector psi = ensemble.psi_at(stage);
    require_complete_orthonormal(basis, psi.dim());
    Complex acc{0.0, 0.0};
    for (const StateVector& v : basis.vectors) {
        acc += weak_value(ensemble, outer(v, v), stage).value;
    }
    return acc;
}

Basis final_basis_containing_f(const PpsEnsemble& ensemble,
                               const std::string& stage) {
    const StateVector f = ensemble.f_at(stage);
    const StateVector psi = ensemble.psi_at(stage);
    const std::size_t dim = f.dim();

    // Gram-Schmidt over [f, psi, e_0, e_1, ...]; keep vectors whose residual
    // survives. Seeding with psi makes the second vector span the f-orthogonal
    // component of the input, which concentrates the quasiprobability weight
    // of the remaining columns.
    std::vector<std::vector<Complex>> kept;
    std::vector<std::vector<Complex>> candidates;
    candidates.push_back(f.amps());
    candidates.push_back(psi.amps());
    for (std::size_t i = 0; i < dim; ++i) {
        std::vector<Complex> e(dim, Complex{0.0, 0.0});
        e[i] = Complex{1.0, 0.0};
        candidates.push_back(std::move(e));
    }
    const double residual_tol = 1e-9;
    for (const std::vector<Complex>& cand : candidates) {
        if (kept.size() == dim) break;
        std::vector<Complex> v = cand;
        for (const std::vector<Complex>& k : kept) {
            Complex overlap{0.0, 0.0};
            for (std::size_t i = 0; i < dim; ++i) {
                overlap += std::conj(k[i]) * v[i];
            }
            for (std::size_t i = 0; i < dim; ++i) v[i] -= overlap * k[i];
        }
        double n2 = 0.0;
        for (const Complex& c : v) n2 += std::norm(c);
        if (n2 <= residual_tol) continue;
        const double n = std::sqrt(n2);
        for (Complex& c : v) c /= n;
        kept.push_back(std::move(v));
    }
    if (kept.size() != dim) {
        throw Error("final_basis_containing_f: completion failed");
    }

    Basis basis;
    for (std::size_t k = 0; k < dim; ++k) {
        basis.names.push_back(k == 0 ? "f" : "f_perp" + std::to_string(k));
        basis.vectors.push_back(StateVector(kept[k], stage));
    }
    return basis;
}

}  // namespace qpath
