#include "qpath/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

#include "qpath/errors.hpp"
#include "qpath/rng.hpp"

namespace qpath {

namespace {

void validate(const ShotConfig& config) {
    if (config.shots == 0) throw Error("ShotConfig: shots must be positive");
    if (config.workers == 0) throw Error("ShotConfig: workers must be positive");
}

void validate(const PointerConfig& pointer) {
    if (!(pointer.coupling > 0.0)) {
        throw Error("PointerConfig: coupling must be positive");
    }
    if (!(pointer.width > 0.0)) {
        throw Error("PointerConfig: width must be positive");
    }
}

// Shots are processed in fixed blocks; workers claim whole blocks and the
// per-block partials are folded in block order afterwards, so floating-point
// accumulation order never depends on the worker count.
constexpr std::uint64_t kBlockShots = 1u << 16;

void run_blocked(std::uint64_t shots, unsigned workers,
                 const std::function<void(std::uint64_t first,
                                          std::uint64_t last,
                                          std::size_t block)>& body) {
    const std::uint64_t blocks = (shots + kBlockShots - 1) / kBlockShots;
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::uint64_t b = next.fetch_add(1);
            if (b >= blocks) return;
            const std::uint64_t first = b * kBlockShots;
            const std::uint64_t last = std::min(shots, first + kBlockShots);
            body(first, last, static_cast<std::size_t>(b));
        }
    };
    if (workers <= 1 || blocks <= 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    const unsigned n = std::min<std::uint64_t>(workers, blocks);
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
}

std::size_t block_count(std::uint64_t shots) {
    return static_cast<std::size_t>((shots + kBlockShots - 1) / kBlockShots);
}

}  // namespace

DetectionCounts sample_detections(const Circuit& circuit,
                                  const StateVector& psi,
                                  const ShotConfig& config) {
    validate(config);
    if (!psi.is_normalized(1e-9)) {
        throw Error("sample_detections: input state is not normalized");
    }
    const StateVector out = circuit.propagate(psi, circuit.output_checkpoint());
    const std::size_t rails = out.dim();
    std::vector<double> cumulative(rails);
    double acc = 0.0;
    for (std::size_t i = 0; i < rails; ++i) {
        acc += std::norm(out[i]);
        cumulative[i] = acc;
    }

    std::vector<std::vector<std::uint64_t>> partial(
        block_count(config.shots), std::vector<std::uint64_t>(rails, 0));
    run_blocked(config.shots, config.workers,
                [&](std::uint64_t first, std::uint64_t last, std::size_t block) {
                    std::vector<std::uint64_t>& counts = partial[block];
                    for (std::uint64_t shot = first; shot < last; ++shot) {
                        ShotRng rng(config.seed, shot);
                        const double u = rng.next_uniform() * acc;
                        std::size_t rail = rails - 1;
                        for (std::size_t i = 0; i < rails; ++i) {
                            if (u < cumulative[i]) {
                                rail = i;
                                break;
                            }
                        }
                        ++counts[rail];
                    }
                });

    DetectionCounts result;
    result.labels = circuit.labels_at(circuit.output_checkpoint());
    result.counts.assign(rails, 0);
    result.shots = config.shots;
    for (const std::vector<std::uint64_t>& counts : partial) {
        for (std::size_t i = 0; i < rails; ++i) result.counts[i] += counts[i];
    }
    return result;
}

PointerBranches pointer_branches(const PpsEnsemble& ensemble,
                                 const PointerConfig& pointer) {
    const Circuit& circuit = ensemble.circuit();
    const StateVector psi = ensemble.psi_at(pointer.stage);
    const StateVector f = ensemble.f_at(pointer.stage);
    const std::size_t rail = circuit.rail_index(pointer.stage, pointer.rail);

    PointerBranches branches;
    branches.amp_projected = std::conj(f[rail]) * psi[rail];
    branches.amp_rest = inner(f, psi) - branches.amp_projected;
    branches.weight_projected = std::norm(psi[rail]);
    return branches;
}

double analytic_acceptance(const PointerBranches& branches, double coupling,
                           double width) {
    const double overlap =
        std::exp(-coupling * coupling / (8.0 * width * width));
    const double cross =
        (branches.amp_projected * std::conj(branches.amp_rest)).real();
    return std::norm(branches.amp_projected) + std::norm(branches.amp_rest) +
           2.0 * cross * overlap;
}

double analytic_conditional_mean(const PointerBranches& branches,
                                 double coupling, double width) {
    const double overlap =
        std::exp(-coupling * coupling / (8.0 * width * width));
    const double cross =
        (branches.amp_projected * std::conj(branches.amp_rest)).real();
    const double numerator =
        coupling * (std::norm(branches.amp_projected) + cross * overlap);
    return numerator / analytic_acceptance(branches, coupling, width);
}

PointerRunResult weak_pointer_run(const PpsEnsemble& ensemble,
                                  const PointerConfig& pointer,
                                  const ShotConfig& config) {
    validate(config);
    validate(pointer);
    const Circuit& circuit = ensemble.circuit();
    const std::size_t probe = circuit.checkpoint_index(pointer.stage);
    const std::size_t source = circuit.checkpoint_index(ensemble.psi_stage());
    const std::size_t post =
        circuit.checkpoint_index(ensemble.postselect_stage());
    if (probe <= source || probe >= post) {
        throw StageOrderViolation(
            "weak_pointer_run: probe stage must lie strictly between input "
            "and post-selection");
    }

    const PointerBranches branches = pointer_branches(ensemble, pointer);
    const double g = pointer.coupling;
    const double sigma = pointer.width;
    const double w_proj = branches.weight_projected;
    const double norm_proj = std::norm(branches.amp_projected);
    const double norm_rest = std::norm(branches.amp_rest);
    const double cross =
        2.0 * (branches.amp_projected * std::conj(branches.amp_rest)).real();

    struct Partial {
        std::uint64_t accepted = 0;
        double sum = 0.0;
        double sum_sq = 0.0;
    };
    std::vector<Partial> partial(block_count(config.shots));

    run_blocked(
        config.shots, config.workers,
        [&](std::uint64_t first, std::uint64_t last_shot, std::size_t block) {
            Partial& p = partial[block];
            for (std::uint64_t shot = first; shot < last_shot; ++shot) {
                ShotRng rng(config.seed, shot);
                // Pointer marginal: the cross terms cancel against the
                // unobserved output ports, leaving an honest two-component
                // Gaussian mixture.
                const bool shifted = rng.next_uniform() < w_proj;
                const double x =
                    (shifted ? g : 0.0) + sigma * rng.next_normal();
                // Conditional acceptance given the reading x; densities share
                // the Gaussian normalization, which cancels in the ratio.
                const double dx_g = x - g;
                const double n_g =
                    std::exp(-dx_g * dx_g / (2.0 * sigma * sigma));
                const double n_0 = std::exp(-x * x / (2.0 * sigma * sigma));
                const double joint = norm_proj * n_g + norm_rest * n_0 +
                                     cross * std::sqrt(n_g * n_0);
                const double marginal =
                    w_proj * n_g + (1.0 - w_proj) * n_0;
                const double p_accept = marginal > 0.0 ? joint / marginal : 0.0;
                if (rng.next_uniform() < p_accept) {
                    ++p.accepted;
                    p.sum += x;
                    p.sum_sq += x * x;
                }
            }
        });

    std::uint64_t accepted = 0;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (const Partial& p : partial) {
        accepted += p.accepted;
        sum += p.sum;
        sum_sq += p.sum_sq;
    }

    PointerRunResult result;
    result.pointer = pointer;
    result.config = config;
    result.weak_regime = g / sigma <= 1.0;
    result.accepted_shots = accepted;
    if (accepted > 0) {
        result.mean_shift = sum / static_cast<double>(accepted);
        if (accepted > 1) {
            const double n = static_cast<double>(accepted);
            const double var =
                std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
            result.stderr_shift = std::sqrt(var / n);
        }
        result.estimate = result.mean_shift / g;
        result.estimate_stderr = result.stderr_shift / g;
    }
    return result;
}

std::vector<PointerRunResult> coupling_sweep(const PpsEnsemble& ensemble,
                                             const std::string& stage,
                                             const std::string& rail,
                                             const std::vector<double>& couplings,
                                             double width,
                                             const ShotConfig& config) {
    for (std::size_t i = 1; i < couplings.size(); ++i) {
        if (!(couplings[i] > couplings[i - 1])) {
            throw Error("coupling_sweep: couplings must be positive ascending");
        }
    }
    std::vector<PointerRunResult> results;
    results.reserve(couplings.size());
    for (double g : couplings) {
        PointerConfig pointer;
        pointer.coupling = g;
        pointer.width = width;
        pointer.stage = stage;
        pointer.rail = rail;
        results.push_back(weak_pointer_run(ensemble, pointer, config));
    }
    return results;
}

}  // namespace qpath
