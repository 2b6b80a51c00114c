#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "generators.hpp"
#include "oracle.hpp"
#include "qpath/analysis.hpp"
#include "qpath/errors.hpp"

using namespace qpath;

namespace {

PpsEnsemble three_box_ensemble() {
    return PpsEnsemble(build_three_box(), three_box_input(),
                       three_box_postselect());
}

// A valid random ensemble; resamples the post-selection until its overlap
// with the propagated input stays clear of the anomaly threshold.
PpsEnsemble random_ensemble(std::mt19937_64& rng) {
    for (;;) {
        const Circuit c = testgen::random_circuit(rng);
        const StateVector psi =
            testgen::random_state(rng, c.rails(), true, c.input_checkpoint());
        const StateVector f =
            testgen::random_state(rng, c.rails(), true, c.output_checkpoint());
        const Complex overlap = inner(c.back_propagate(f, "input"), psi);
        if (std::abs(overlap) < 1e-2) continue;
        return PpsEnsemble(c, psi, f);
    }
}

}  // namespace

TEST_CASE("path weak values of the three-box ensemble", "[analysis]") {
    const PpsEnsemble e = three_box_ensemble();

    const WeakValue w1 = path_weak_value(e, "bs2", "1");
    const WeakValue w2 = path_weak_value(e, "bs2", "2");
    const WeakValue w3 = path_weak_value(e, "bs2", "3");
    REQUIRE(std::abs(w1.value - Complex{1.0, 0.0}) <= kAlgebraTol);
    REQUIRE(std::abs(w2.value - Complex{1.0, 0.0}) <= kAlgebraTol);
    REQUIRE(std::abs(w3.value - Complex{-1.0, 0.0}) <= kAlgebraTol);

    SECTION("they agree with the amplitude-product oracle") {
        REQUIRE(w1.value.real() ==
                Catch::Approx(oracle::path_weak_value(0)).margin(1e-12));
        REQUIRE(w2.value.real() ==
                Catch::Approx(oracle::path_weak_value(1)).margin(1e-12));
        REQUIRE(w3.value.real() ==
                Catch::Approx(oracle::path_weak_value(2)).margin(1e-12));
    }
    SECTION("the identity has weak value one") {
        const WeakValue w = weak_value(e, Operator::identity(3), "bs2");
        REQUIRE(std::abs(w.value - Complex{1.0, 0.0}) <= kAlgebraTol);
    }
    SECTION("sum rule over the path basis") {
        const Complex sum =
            weak_value_sum_check(e, rail_basis(e.circuit(), "bs2"), "bs2");
        REQUIRE(std::abs(sum - Complex{1.0, 0.0}) <= kAlgebraTol);
    }
    SECTION("a single-rail space makes the one-element basis the identity") {
        const Circuit trivial(1, {"r"}, {});
        const PpsEnsemble single(trivial,
                                 StateVector::basis(1, 0, "input"),
                                 StateVector::basis(1, 0, "input"));
        const Complex sum =
            weak_value_sum_check(single, rail_basis(trivial, "input"), "input");
        REQUIRE(std::abs(sum - Complex{1.0, 0.0}) <= kAlgebraTol);
    }
}

TEST_CASE("anomalous post-selection is rejected", "[analysis]") {
    const Circuit c = build_three_box();
    // D2 at the output side carries no amplitude from the source, so
    // post-selecting it is exactly orthogonal.
    const StateVector f = c.basis_state("bs3", "D2");
    try {
        PpsEnsemble e(c, three_box_input(), f);
        FAIL("expected AnomalousPostselection");
    } catch (const AnomalousPostselection& err) {
        REQUIRE(err.overlap <= 1e-10);
    }
}

TEST_CASE("pre/post-selected operator tables", "[analysis]") {
    const PpsEnsemble e = three_box_ensemble();
    const double r2 = std::sqrt(2.0);

    SECTION("trace is one at every checkpoint") {
        for (const char* stage : {"input", "bs1", "bs2", "bs3", "bs4"}) {
            REQUIRE(std::abs(trace(pps_operator(e, stage)) - Complex{1.0, 0.0}) <=
                    kAlgebraTol);
        }
    }
    SECTION("coefficients between the first and second splitter") {
        const OperatorDecomposition d =
            decompose(pps_operator(e, "bs1"), rail_basis(e.circuit(), "bs1"),
                      rail_basis(e.circuit(), "bs1"));
        REQUIRE(std::abs(d.coeff("1", "1") - Complex{1.0, 0.0}) <= kAlgebraTol);
        REQUIRE(std::abs(d.coeff("S1", "1") - Complex{r2, 0.0}) <= kAlgebraTol);
        REQUIRE(std::abs(d.coeff("1", "D1") - Complex{r2, 0.0}) <= kAlgebraTol);
        REQUIRE(std::abs(d.coeff("S1", "D1") - Complex{2.0, 0.0}) <= kAlgebraTol);
        REQUIRE(std::abs(d.coeff("D1", "1")) <= kAlgebraTol);
        REQUIRE(std::abs(d.coeff("1", "S1")) <= kAlgebraTol);
        REQUIRE(std::abs(d.coeff("D1", "D1")) <= kAlgebraTol);
    }
    SECTION("coefficients between the third and fourth splitter") {
        const OperatorDecomposition d =
            decompose(pps_operator(e, "bs3"), rail_basis(e.circuit(), "bs3"),
                      rail_basis(e.circuit(), "bs3"));
        REQUIRE(std::abs(d.coeff("2", "2") - Complex{1.0, 0.0}) <= kAlgebraTol);
        REQUIRE(std::abs(d.coeff("S2", "2") - Complex{r2, 0.0}) <= kAlgebraTol);
        REQUIRE(std::abs(d.coeff("2", "D2") - Complex{r2, 0.0}) <= kAlgebraTol);
        REQUIRE(std::abs(d.coeff("S2", "D2") - Complex{2.0, 0.0}) <= kAlgebraTol);
        REQUIRE(std::abs(d.coeff("2", "S2")) <= kAlgebraTol);
    }
    SECTION("transporting the early table reproduces the late one") {
        const Circuit& c = e.circuit();
        const Operator early = pps_operator(e, "bs1");
        const Operator late = pps_operator(e, "bs3");
        const Operator u = c.stage_unitary("bs1", "bs3");
        const Operator moved = compose(compose(u, early), adjoint(u));
        REQUIRE(max_abs_entry(subtract(moved, late)) <= kAlgebraTol);
    }
}

TEST_CASE("operator decompositions", "[analysis]") {
    const Circuit c = build_three_box();

    SECTION("the identity decomposes diagonally") {
        const Basis basis = rail_basis(c, "bs2");
        const OperatorDecomposition d =
            decompose(Operator::identity(3), basis, basis);
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) {
                const Complex expected =
                    i == j ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
                REQUIRE(std::abs(d.coeff(i, j) - expected) <= kAlgebraTol);
            }
        }
    }
    SECTION("reconstruction returns the decomposed operator") {
        std::mt19937_64 rng(5150);
        const Basis basis = rail_basis(c, "bs2");
        std::vector<Complex> entries;
        std::normal_distribution<double> normal;
        for (int k = 0; k < 9; ++k) entries.emplace_back(normal(rng), normal(rng));
        const Operator op(3, entries);
        const OperatorDecomposition d = decompose(op, basis, basis);
        REQUIRE(max_abs_entry(subtract(d.reconstruct(), op)) <= 1e-12);
    }
    SECTION("non-orthonormal bases are rejected") {
        Basis bad = rail_basis(c, "bs2");
        bad.vectors[1] = bad.vectors[0];
        REQUIRE_THROWS_AS(decompose(Operator::identity(3), bad, bad),
                          NonOrthonormalBasis);
    }
    SECTION("output-path difference equals the input coherence pair") {
        // |2><2| - |3><3| seen before the splitter that creates the paths.
        const StateVector k2 = c.basis_state("bs2", "2");
        const StateVector k3 = c.basis_state("bs2", "3");
        const Operator diff = subtract(outer(k2, k2), outer(k3, k3));
        const Operator u = c.stage_unitary("bs1", "bs2");
        const Operator moved = compose(compose(adjoint(u), diff), u);
        const StateVector ks1 = c.basis_state("bs1", "S1");
        const StateVector kd1 = c.basis_state("bs1", "D1");
        const Operator expected = add(outer(kd1, ks1), outer(ks1, kd1));
        REQUIRE(max_abs_entry(subtract(moved, expected)) <= kAlgebraTol);
    }
    SECTION("input-path difference equals the output coherence pair") {
        const StateVector k1 = c.basis_state("bs2", "1");
        const StateVector k3 = c.basis_state("bs2", "3");
        const Operator diff = subtract(outer(k1, k1), outer(k3, k3));
        const Operator u = c.stage_unitary("bs2", "bs3");
        const Operator moved = compose(compose(u, diff), adjoint(u));
        const StateVector ks2 = c.basis_state("bs3", "S2");
        const StateVector kd2 = c.basis_state("bs3", "D2");
        const Operator expected = add(outer(kd2, ks2), outer(ks2, kd2));
        REQUIRE(max_abs_entry(subtract(moved, expected)) <= kAlgebraTol);
    }
}

TEST_CASE("quasiprobability distribution", "[analysis]") {
    const PpsEnsemble e = three_box_ensemble();
    const Circuit& c = e.circuit();
    const Basis paths = rail_basis(c, "bs2");
    const Basis finals = final_basis_containing_f(e, "bs2");
    const KdDistribution kd = kd_distribution(e, paths, finals, "bs2");

    SECTION("the completion is orthonormal and leads with f") {
        require_orthonormal(finals);
        const StateVector f = e.f_at("bs2");
        REQUIRE(std::abs(std::abs(inner(finals.vectors[0], f)) - 1.0) <=
                kAlgebraTol);
    }
    SECTION("cells match the brute-force amplitude products") {
        for (std::size_t a = 0; a < 3; ++a) {
            for (std::size_t b = 0; b < 3; ++b) {
                REQUIRE(std::abs(kd.q(a, b) -
                                 Complex{oracle::kd_cell(a, b), 0.0}) <= 1e-12);
            }
        }
        REQUIRE(std::abs(kd.q(2, 0) - Complex{-1.0 / 9.0, 0.0}) <= kAlgebraTol);
        REQUIRE(std::abs(kd.q(0, 0) - Complex{1.0 / 9.0, 0.0}) <= kAlgebraTol);
    }
    SECTION("marginals and total") {
        REQUIRE(std::abs(kd.total() - Complex{1.0, 0.0}) <= kAlgebraTol);
        const StateVector psi = e.psi_at("bs2");
        for (std::size_t a = 0; a < 3; ++a) {
            const double expected = std::norm(inner(paths.vectors[a], psi));
            REQUIRE(std::abs(kd.row_marginal(a) - Complex{expected, 0.0}) <=
                    kAlgebraTol);
        }
        for (std::size_t b = 0; b < 3; ++b) {
            const double expected = std::norm(inner(finals.vectors[b], psi));
            REQUIRE(std::abs(kd.column_marginal(b) - Complex{expected, 0.0}) <=
                    kAlgebraTol);
        }
    }
    SECTION("conditioning on the post-selected column recovers weak values") {
        for (std::size_t a = 0; a < 3; ++a) {
            const Complex conditioned = kd.q(a, 0) / kd.column_marginal(0);
            const WeakValue w = path_weak_value(e, "bs2", paths.names[a]);
            REQUIRE(std::abs(conditioned - w.value) <= 1e-12);
        }
    }
    SECTION("negativity witnesses the paradox") {
        REQUIRE(negativity(kd) == Catch::Approx(1.0 / 9.0).margin(1e-12));
        REQUIRE(negativity(kd) ==
                Catch::Approx(oracle::kd_negativity()).margin(1e-12));
        REQUIRE(imaginarity(kd) <= kAlgebraTol);
    }
    SECTION("coinciding bases give a nonnegative diagonal table") {
        const KdDistribution diag = kd_distribution(e, paths, paths, "bs2");
        REQUIRE(negativity(diag) <= kAlgebraTol);
    }
    SECTION("an input aligned with a path gives no negativity") {
        const Circuit c2 = build_three_box();
        const StateVector psi2 = c2.basis_state("bs2", "2");
        const StateVector f2 = three_box_postselect();
        const PpsEnsemble aligned(c2, psi2, f2);
        const KdDistribution kd2 = kd_distribution(
            aligned, rail_basis(c2, "bs2"),
            final_basis_containing_f(aligned, "bs2"), "bs2");
        REQUIRE(negativity(kd2) <= kAlgebraTol);
    }
}

TEST_CASE("weak-value properties on random ensembles", "[analysis][property]") {
    std::mt19937_64 rng(7777);

    SECTION("completeness sum over a rail basis is one") {
        for (int rep = 0; rep < 100; ++rep) {
            const PpsEnsemble e = random_ensemble(rng);
            const Circuit& c = e.circuit();
            const std::size_t stage = std::uniform_int_distribution<std::size_t>(
                0, c.checkpoint_count() - 1)(rng);
            const std::string name = c.checkpoint_name(stage);
            const Complex sum =
                weak_value_sum_check(e, rail_basis(c, name), name);
            REQUIRE(std::abs(sum - Complex{1.0, 0.0}) <= 1e-12);
        }
    }
    SECTION("stage covariance of weak values") {
        std::normal_distribution<double> normal;
        for (int rep = 0; rep < 50; ++rep) {
            const PpsEnsemble e = random_ensemble(rng);
            const Circuit& c = e.circuit();
            std::vector<Complex> entries;
            for (std::size_t k = 0; k < c.rails() * c.rails(); ++k) {
                entries.emplace_back(normal(rng), normal(rng));
            }
            const Operator observable(c.rails(), entries);
            const std::string from = c.checkpoint_name(0);
            const std::string to = c.output_checkpoint();
            const Operator u = c.stage_unitary(from, to);
            const Operator moved = compose(compose(u, observable), adjoint(u));
            const Complex a = weak_value(e, observable, from).value;
            const Complex b = weak_value(e, moved, to).value;
            REQUIRE(std::abs(a - b) <= 1e-10);
        }
    }
    SECTION("KD marginals on random ensembles") {
        for (int rep = 0; rep < 50; ++rep) {
            const PpsEnsemble e = random_ensemble(rng);
            const Circuit& c = e.circuit();
            const std::string stage = c.checkpoint_name(
                std::uniform_int_distribution<std::size_t>(
                    0, c.checkpoint_count() - 1)(rng));
            const Basis paths = rail_basis(c, stage);
            const Basis finals = final_basis_containing_f(e, stage);
            const KdDistribution kd = kd_distribution(e, paths, finals, stage);
            REQUIRE(std::abs(kd.total() - Complex{1.0, 0.0}) <= 1e-12);
            const StateVector psi = e.psi_at(stage);
            for (std::size_t a = 0; a < kd.rows(); ++a) {
                const double expected = std::norm(inner(paths.vectors[a], psi));
                REQUIRE(std::abs(kd.row_marginal(a) - Complex{expected, 0.0}) <=
                        1e-12);
            }
        }
    }
}
