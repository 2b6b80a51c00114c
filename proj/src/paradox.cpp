#include "qpath/paradox.hpp"

#include <cmath>

#include "qpath/analysis.hpp"

namespace qpath {

namespace {

constexpr double kTol = kAlgebraTol;

// Orders a rail basis by explicit name list, for table layouts that differ
// from label order.
Basis reorder(const Basis& basis, const std::vector<std::string>& order) {
    Basis out;
    for (const std::string& name : order) {
        for (std::size_t i = 0; i < basis.size(); ++i) {
            if (basis.names[i] == name) {
                out.names.push_back(name);
                out.vectors.push_back(basis.vectors[i]);
            }
        }
    }
    return out;
}

void add_coefficient_table(Report& report, const std::string& prefix,
                           const std::string& stage,
                           const OperatorDecomposition& decomposition,
                           const std::vector<std::pair<std::string, std::string>>& named,
                           const std::vector<Complex>& named_targets) {
    for (std::size_t i = 0; i < decomposition.left.size(); ++i) {
        for (std::size_t j = 0; j < decomposition.right.size(); ++j) {
            const std::string left = decomposition.left.names[i];
            const std::string right = decomposition.right.names[j];
            Complex target{0.0, 0.0};
            for (std::size_t k = 0; k < named.size(); ++k) {
                if (named[k].first == left && named[k].second == right) {
                    target = named_targets[k];
                }
            }
            report.add_checked(prefix + ".coeff." + left + "_" + right, stage,
                               decomposition.coeff(i, j), target, kTol);
        }
    }
}

}  // namespace

Report run_paradox_checks(const Circuit& circuit) {
    Report report;
    report.command = "paradox";

    const double r3 = std::sqrt(1.0 / 3.0);
    const double r23 = std::sqrt(2.0 / 3.0);
    const double r2 = std::sqrt(2.0);

    const StateVector psi0 = three_box_input();
    const StateVector f0 = three_box_postselect();

    // Splitting at the first stage.
    const StateVector psi_bs1 = circuit.propagate(psi0, "bs1");
    report.add_checked("eq1.amp.path1", "bs1",
                       psi_bs1[circuit.rail_index("bs1", "1")],
                       Complex{r3, 0.0}, kTol);
    report.add_checked("eq1.amp.S1", "bs1",
                       psi_bs1[circuit.rail_index("bs1", "S1")],
                       Complex{r23, 0.0}, kTol);

    // Destructive interference into D2 and the forbidden S1 -> f transmission.
    const StateVector psi_bs3 = circuit.propagate(psi0, "bs3");
    const StateVector d2 = circuit.basis_state("bs3", "D2");
    report.add_checked("eq2.inner.D2_psi", "bs3", inner(d2, psi_bs3),
                       Complex{0.0, 0.0}, kTol);
    const StateVector f_bs1 = circuit.back_propagate(f0, "bs1");
    const StateVector s1 = circuit.basis_state("bs1", "S1");
    report.add_checked("eq3.inner.f_S1", "bs1", inner(f_bs1, s1),
                       Complex{0.0, 0.0}, kTol);

    const PpsEnsemble ensemble(circuit, psi0, f0);
    report.add_checked("transition.f_psi", "any",
                       ensemble.transition_amplitude(),
                       Complex{1.0 / 3.0, 0.0}, kTol);

    // Path weak values between the second and third splitter.
    const WeakValue w1 = path_weak_value(ensemble, "bs2", "1");
    const WeakValue w2 = path_weak_value(ensemble, "bs2", "2");
    const WeakValue w3 = path_weak_value(ensemble, "bs2", "3");
    report.add_checked("eq4.weak_value.path1", "bs2", w1.value,
                       Complex{1.0, 0.0}, kTol);
    report.add_checked("eq5.weak_value.path3", "bs2", w3.value,
                       Complex{-1.0, 0.0}, kTol);
    report.add_checked("eq6.weak_value.path2", "bs2", w2.value,
                       Complex{1.0, 0.0}, kTol);
    report.add_checked("fig2.weak_value_sum", "bs2",
                       w1.value + w2.value + w3.value, Complex{1.0, 0.0}, kTol);

    // Input coherence carried into the output-path difference of the second
    // splitter: |2><2| - |3><3| equals |D1><S1| + |S1><D1| transported.
    {
        const StateVector k2 = circuit.basis_state("bs2", "2");
        const StateVector k3 = circuit.basis_state("bs2", "3");
        const Operator lhs = subtract(outer(k2, k2), outer(k3, k3));
        const StateVector ks1 = circuit.basis_state("bs1", "S1");
        const StateVector kd1 = circuit.basis_state("bs1", "D1");
        const Operator coherence = add(outer(kd1, ks1), outer(ks1, kd1));
        const Operator u = circuit.stage_unitary("bs1", "bs2");
        const Operator transported = compose(compose(u, coherence), adjoint(u));
        report.add_checked("eq7.residual_max", "bs2",
                           Complex{max_abs_entry(subtract(lhs, transported)), 0.0},
                           Complex{0.0, 0.0}, kTol);
    }
    // Input paths of the third splitter converted to an output coherence
    // between its empty output paths.
    {
        const StateVector k1 = circuit.basis_state("bs2", "1");
        const StateVector k3 = circuit.basis_state("bs2", "3");
        const Operator rhs = subtract(outer(k1, k1), outer(k3, k3));
        const StateVector ks2 = circuit.basis_state("bs3", "S2");
        const StateVector kd2 = circuit.basis_state("bs3", "D2");
        const Operator coherence = add(outer(kd2, ks2), outer(ks2, kd2));
        const Operator u = circuit.stage_unitary("bs2", "bs3");
        const Operator transported = compose(compose(u, rhs), adjoint(u));
        report.add_checked("eq8.residual_max", "bs3",
                           Complex{max_abs_entry(subtract(coherence, transported)), 0.0},
                           Complex{0.0, 0.0}, kTol);
    }

    // Normalized pre/post-selected operator between the first and second
    // splitter, and between the third and fourth.
    const Operator pps_bs1 = pps_operator(ensemble, "bs1");
    report.add_checked("pps.trace", "bs1", trace(pps_bs1), Complex{1.0, 0.0},
                       kTol);
    {
        const Basis basis = rail_basis(circuit, "bs1");
        const OperatorDecomposition d =
            decompose(pps_bs1, reorder(basis, {"1", "S1", "D1"}),
                      reorder(basis, {"1", "D1", "S1"}));
        add_coefficient_table(report, "eq9", "bs1", d,
                              {{"1", "1"}, {"S1", "1"}, {"1", "D1"}, {"S1", "D1"}},
                              {Complex{1.0, 0.0}, Complex{r2, 0.0},
                               Complex{r2, 0.0}, Complex{2.0, 0.0}});
    }
    const Operator pps_bs3 = pps_operator(ensemble, "bs3");
    report.add_checked("pps.trace", "bs3", trace(pps_bs3), Complex{1.0, 0.0},
                       kTol);
    {
        const Basis basis = rail_basis(circuit, "bs3");
        const OperatorDecomposition d =
            decompose(pps_bs3, reorder(basis, {"2", "S2", "D2"}),
                      reorder(basis, {"2", "D2", "S2"}));
        add_coefficient_table(report, "eq10", "bs3", d,
                              {{"2", "2"}, {"S2", "2"}, {"2", "D2"}, {"S2", "D2"}},
                              {Complex{1.0, 0.0}, Complex{r2, 0.0},
                               Complex{r2, 0.0}, Complex{2.0, 0.0}});
    }
    // A basis change alone converts one table into the other.
    {
        const Operator u = circuit.stage_unitary("bs1", "bs3");
        const Operator transported = compose(compose(u, pps_bs1), adjoint(u));
        report.add_checked(
            "eq9_to_eq10.transport_residual", "bs3",
            Complex{max_abs_entry(subtract(transported, pps_bs3)), 0.0},
            Complex{0.0, 0.0}, kTol);
    }

    // Quasiprobability table over (path, final outcome) at the middle stage.
    {
        const Basis paths = rail_basis(circuit, "bs2");
        const Basis finals = final_basis_containing_f(ensemble, "bs2");
        const KdDistribution kd = kd_distribution(ensemble, paths, finals, "bs2");
        const double ninth = 1.0 / 9.0;
        const std::vector<std::vector<Complex>> targets{
            {Complex{ninth, 0.0}, Complex{2.0 * ninth, 0.0}, Complex{0.0, 0.0}},
            {Complex{ninth, 0.0}, Complex{2.0 * ninth, 0.0}, Complex{0.0, 0.0}},
            {Complex{-ninth, 0.0}, Complex{4.0 * ninth, 0.0}, Complex{0.0, 0.0}}};
        for (std::size_t a = 0; a < kd.rows(); ++a) {
            for (std::size_t b = 0; b < kd.cols(); ++b) {
                report.add_checked("kd.q." + kd.intermediate_names[a] + "_" +
                                       kd.final_names[b],
                                   "bs2", kd.q(a, b), targets[a][b], kTol);
            }
        }
        report.add_checked("kd.total", "bs2", kd.total(), Complex{1.0, 0.0},
                           kTol);
        report.add_checked("kd.negativity", "bs2",
                           Complex{negativity(kd), 0.0},
                           Complex{1.0 / 9.0, 0.0}, kTol);
        report.add_checked("kd.imaginarity", "bs2",
                           Complex{imaginarity(kd), 0.0}, Complex{0.0, 0.0},
                           kTol);
        report.add_checked("kd.conditioned.path3", "bs2",
                           kd.q(2, 0) / kd.column_marginal(0), w3.value, kTol);
    }

    return report;
}

}  // namespace qpath
