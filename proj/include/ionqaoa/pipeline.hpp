#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ionqaoa/heuristic.hpp"
#include "ionqaoa/ionchain.hpp"
#include "ionqaoa/optimizers.hpp"
#include "ionqaoa/problems.hpp"
#include "ionqaoa/rng.hpp"
#include "ionqaoa/simulator.hpp"

namespace ionqaoa::pipeline {

using heuristic::beta_range;
using heuristic::gamma_range;
using linalg::Vec;
using problems::DiagonalHamiltonian;

struct LayerwiseConfig {
    int p_max = 1;
    int restarts_per_step = 25;
    int runs = 10;
    std::uint64_t seed = 0;

    void validate() const {
        if (p_max < 1 || restarts_per_step < 1 || runs < 1)
            throw std::invalid_argument("LayerwiseConfig: all counts must be positive");
    }
};

// Training outcome at one circuit depth; "solved" is the g > 0.5 criterion.
struct RunRecord {
    std::string instance;
    int p = 0;
    Vec betas;
    Vec gammas;
    double energy = 0.0;
    double ratio = 0.0;
    double overlap = 0.0;
    bool solved = false;
    std::uint64_t n_evals = 0;  // cost evaluations spent at this depth, all runs
};

// Layerwise training: depth grows one layer at a time; the new layer is
// optimized from restarts_per_step random starts with earlier layers frozen,
// then all parameters are polished jointly. The reported record per depth is
// the best-energy run among `runs` independent repetitions.
inline std::vector<RunRecord> layerwise_train(const sim::AnsatzSpec& spec,
                                              const DiagonalHamiltonian& h,
                                              const LayerwiseConfig& cfg,
                                              const std::string& instance_id = "") {
    cfg.validate();
    if (spec.n != h.n) throw std::invalid_argument("layerwise_train: dimension mismatch");

    struct DepthBest {
        double energy = std::numeric_limits<double>::infinity();
        sim::LayerParams params;
        std::uint64_t evals = 0;
    };
    std::vector<DepthBest> best(cfg.p_max);

    for (int run = 0; run < cfg.runs; ++run) {
        rng::Xoshiro256ss gen(
            rng::derive_stream(cfg.seed, {0x7A1EULL, static_cast<std::uint64_t>(run)}));
        Vec betas, gammas;

        for (int p = 1; p <= cfg.p_max; ++p) {
            std::uint64_t depth_evals = 0;

            // new layer alone, earlier layers frozen
            auto cost_new = [&](const Vec& th) {
                ++depth_evals;
                Vec b = betas, g = gammas;
                b.push_back(th[0]);
                g.push_back(th[1]);
                return sim::energy(
                    sim::ansatz_state(spec, sim::LayerParams(std::move(b), std::move(g))), h);
            };
            opt::OptResult best_new;
            best_new.f = std::numeric_limits<double>::infinity();
            for (int r = 0; r < cfg.restarts_per_step; ++r) {
                const Vec x0{gen.uniform(beta_range.lo, beta_range.hi),
                             gen.uniform(gamma_range.lo, gamma_range.hi)};
                opt::OptResult res =
                    opt::bfgs_box_minimize(cost_new, x0, Vec{beta_range.lo, gamma_range.lo},
                                           Vec{beta_range.hi, gamma_range.hi});
                if (res.f < best_new.f) best_new = std::move(res);
            }
            betas.push_back(best_new.x[0]);
            gammas.push_back(best_new.x[1]);

            // joint polish over all 2p parameters
            auto cost_all = [&](const Vec& flat) {
                ++depth_evals;
                return sim::energy(sim::ansatz_state(spec, sim::LayerParams::from_flat(flat)), h);
            };
            Vec flat = sim::LayerParams(betas, gammas).to_flat();
            Vec lo(2 * p), hi(2 * p);
            for (int i = 0; i < p; ++i) {
                lo[i] = beta_range.lo;
                hi[i] = beta_range.hi;
                lo[p + i] = gamma_range.lo;
                hi[p + i] = gamma_range.hi;
            }
            opt::OptResult joint = opt::bfgs_box_minimize(cost_all, std::move(flat), lo, hi);
            sim::LayerParams tuned = sim::LayerParams::from_flat(joint.x);
            betas = tuned.betas;
            gammas = tuned.gammas;

            DepthBest& db = best[p - 1];
            db.evals += depth_evals;
            if (joint.f < db.energy) {
                db.energy = joint.f;
                db.params = sim::LayerParams(betas, gammas);
            }
        }
    }

    std::vector<RunRecord> records;
    records.reserve(cfg.p_max);
    for (int p = 1; p <= cfg.p_max; ++p) {
        const DepthBest& db = best[p - 1];
        const sim::StateVector psi = sim::ansatz_state(spec, db.params);
        RunRecord rec;
        rec.instance = instance_id;
        rec.p = p;
        rec.betas = db.params.betas;
        rec.gammas = db.params.gammas;
        rec.energy = db.energy;
        rec.ratio = sim::approx_ratio(db.energy, h.lambda_min, h.lambda_max);
        rec.overlap = sim::ground_overlap(psi, h);
        rec.solved = rec.overlap > 0.5;
        rec.n_evals = db.evals;
        records.push_back(std::move(rec));
    }
    return records;
}

namespace detail {

// Deterministic instance-level parallelism: jobs indexed 0..count-1, results
// keyed by index, worker count independent of the outcome.
template <typename Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    const int workers = std::min<int>(jobs, static_cast<int>(count));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace detail

struct CampaignConfig {
    ionchain::TrapConfig trap;  // trap.n fixes the qubit count
    int n_instances = 20;
    int cycles = 4;
    int p_max = 0;  // 0 -> p = n
    int restarts_per_step = 25;
    int runs = 3;
    heuristic::BcdConfig bcd;          // eps is derived per instance (0.5 * lambda_min)
    heuristic::RescaleConfig rescale;
    std::uint64_t master_seed = 1;
    int jobs = 1;

    int depth() const { return p_max > 0 ? p_max : trap.n; }

    void validate() const {
        trap.validate();
        if (n_instances < 1) throw std::invalid_argument("CampaignConfig: n_instances >= 1");
        if (cycles < 1) throw std::invalid_argument("CampaignConfig: cycles >= 1");
        rescale.validate();
    }
};

struct CampaignSummary {
    std::string variant;
    int n = 0;
    int n_instances = 0;
    int cycles = 0;
    int p_max = 0;
    std::vector<double> cycle_fractions;  // cumulative solved fraction after each cycle
    std::vector<double> depth_fractions;  // solved fraction vs depth, after the final cycle
    double mean_evals_train = 0.0;
    double mean_evals_rescale = 0.0;
    double mean_evals_layerwise = 0.0;
    std::uint64_t jobs_executed = 0;
};

// One training record annotated with its campaign position.
struct CampaignRecord {
    int cycle = 0;
    std::string variant;
    RunRecord record;
};

struct HeuristicRecord {
    int cycle = 0;
    std::string instance;
    heuristic::HeuristicOutcome outcome;
};

struct CampaignResult {
    CampaignSummary summary;
    std::vector<CampaignRecord> records;
    std::vector<HeuristicRecord> heuristics;
    std::vector<std::uint64_t> instance_seeds;
};

inline std::string instance_label(int n, std::uint64_t seed) {
    return "sk-n" + std::to_string(n) + "-s" + std::to_string(seed);
}

// Multi-cycle SK benchmark. Per cycle, every still-unsolved instance gets a
// fresh heuristic (ion-native variant only) and a fresh layerwise training at.
// depth p = n; an instance counts as solved once the depth-p overlap passes
// 0.5. Later cycles rerun only unsolved instances on new derived streams.
inline CampaignResult run_campaign(const CampaignConfig& cfg,
                                   sim::AnsatzVariant variant = sim::AnsatzVariant::IonNative) {
    cfg.validate();
    const int n = cfg.trap.n;
    const int p_max = cfg.depth();
    const std::string variant_name =
        variant == sim::AnsatzVariant::IonNative ? "ion_native" : "standard_qaoa";

    const ionchain::CouplingBase base = variant == sim::AnsatzVariant::IonNative
                                            ? ionchain::coupling_base_from_trap(cfg.trap)
                                            : ionchain::CouplingBase{};

    struct InstanceState {
        std::uint64_t seed = 0;
        DiagonalHamiltonian h;
        bool solved = false;
        std::vector<RunRecord> latest_records;  // from the last executed cycle
    };
    std::vector<InstanceState> instances(cfg.n_instances);
    for (int i = 0; i < cfg.n_instances; ++i) {
        instances[i].seed =
            rng::derive_stream(cfg.master_seed, {0x1257ULL, static_cast<std::uint64_t>(i)});
        instances[i].h = problems::sk_hamiltonian(n, instances[i].seed);
    }

    CampaignResult result;
    result.summary.variant = variant_name;
    result.summary.n = n;
    result.summary.n_instances = cfg.n_instances;
    result.summary.cycles = cfg.cycles;
    result.summary.p_max = p_max;
    for (const auto& inst : instances) result.instance_seeds.push_back(inst.seed);

    std::uint64_t total_train = 0, total_rescale = 0, total_layerwise = 0, jobs_executed = 0;

    for (int cycle = 1; cycle <= cfg.cycles; ++cycle) {
        std::vector<int> todo;
        for (int i = 0; i < cfg.n_instances; ++i)
            if (!instances[i].solved) todo.push_back(i);
        if (todo.empty()) {
            result.summary.cycle_fractions.push_back(1.0);
            continue;
        }

        struct JobOutput {
            heuristic::HeuristicOutcome heur;
            std::vector<RunRecord> records;
            bool ran_heuristic = false;
        };
        std::vector<JobOutput> outputs(todo.size());

        detail::parallel_for(todo.size(), cfg.jobs, [&](std::size_t t) {
            const int i = todo[t];
            const InstanceState& inst = instances[i];
            const std::string id = instance_label(n, inst.seed);
            JobOutput& out = outputs[t];

            sim::AnsatzSpec spec;
            if (variant == sim::AnsatzVariant::IonNative) {
                heuristic::BcdConfig bcd = cfg.bcd;
                bcd.eps = heuristic::sk_epsilon(inst.h);
                bcd.seed = rng::derive_stream(
                    cfg.master_seed,
                    {0xBCDULL, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(cycle)});
                out.heur = heuristic::run_heuristic(inst.h, base, bcd, cfg.rescale);
                out.ran_heuristic = true;
                spec = sim::AnsatzSpec::ion_native(base, out.heur.scaled_a());
            } else {
                spec = sim::AnsatzSpec::standard_qaoa(inst.h);
            }

            LayerwiseConfig train;
            train.p_max = p_max;
            train.restarts_per_step = cfg.restarts_per_step;
            train.runs = cfg.runs;
            train.seed = rng::derive_stream(
                cfg.master_seed,
                {0x7124ULL, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(cycle)});
            out.records = layerwise_train(spec, inst.h, train, id);
        });

        for (std::size_t t = 0; t < todo.size(); ++t) {
            const int i = todo[t];
            JobOutput& out = outputs[t];
            ++jobs_executed;
            if (out.ran_heuristic) {
                total_train += out.heur.n_evals_train;
                total_rescale += out.heur.n_evals_rescale;
                result.heuristics.push_back(
                    {cycle, instance_label(n, instances[i].seed), out.heur});
            }
            for (const RunRecord& rec : out.records) total_layerwise += rec.n_evals;
            instances[i].latest_records = out.records;
            instances[i].solved = out.records.back().solved;
            for (RunRecord& rec : out.records)
                result.records.push_back({cycle, variant_name, std::move(rec)});
        }

        int solved = 0;
        for (const auto& inst : instances) solved += inst.solved ? 1 : 0;
        result.summary.cycle_fractions.push_back(static_cast<double>(solved) / cfg.n_instances);
    }

    result.summary.depth_fractions.assign(p_max, 0.0);
    for (const auto& inst : instances)
        for (const RunRecord& rec : inst.latest_records)
            if (rec.solved) result.summary.depth_fractions[rec.p - 1] += 1.0;
    for (double& f : result.summary.depth_fractions) f /= cfg.n_instances;

    result.summary.jobs_executed = jobs_executed;
    if (jobs_executed > 0) {
        result.summary.mean_evals_train = static_cast<double>(total_train) / jobs_executed;
        result.summary.mean_evals_rescale = static_cast<double>(total_rescale) / jobs_executed;
        result.summary.mean_evals_layerwise = static_cast<double>(total_layerwise) / jobs_executed;
    }
    return result;
}

struct PairedCampaign {
    CampaignResult ion;
    CampaignResult standard;
};

// Matched comparison on the same instances and layerwise settings; only the
// ion-native arm uses the hyperparameter heuristic.
inline PairedCampaign compare_standard_qaoa(const CampaignConfig& cfg) {
    PairedCampaign pair;
    pair.ion = run_campaign(cfg, sim::AnsatzVariant::IonNative);
    pair.standard = run_campaign(cfg, sim::AnsatzVariant::StandardQaoa);
    return pair;
}

}  // namespace ionqaoa::pipeline
