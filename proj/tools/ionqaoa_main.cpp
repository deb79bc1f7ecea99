// Command-line front end: seeded experiment execution and plot-data export.
//
// Subcommands: chain, heuristic, train, bench, express, svd.
// Exit codes: 0 success, 2 validation error, 3 numerical failure.

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ionqaoa/ionqaoa.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ionqaoa;

namespace {

struct ExperimentConfig {
    ionchain::TrapConfig trap;
    std::string family = "sk";  // sk | ghz_prep
    int instance_count = 1;
    std::vector<std::uint64_t> instance_seeds;  // explicit seeds win over count
    heuristic::BcdConfig bcd;
    heuristic::RescaleConfig rescale;
    int cycles = 4;
    int p_max = 0;  // 0 -> p = n
    int restarts_per_step = 25;
    int runs = 3;
    int samples = 10000;
    int bins = 75;
    int k_states = 20;
    int depth = 8;
    fs::path output_dir = "out";
    std::uint64_t master_seed = 1;
    int jobs = 1;
};

json config_to_json(const ExperimentConfig& c) {
    return json{
        {"trap",
         {{"n", c.trap.n},
          {"mass_amu", c.trap.mass_amu},
          {"omega_x_hz", c.trap.omega_x_hz},
          {"omega_z_hz", c.trap.omega_z_hz},
          {"wavelength_m", c.trap.wavelength_m},
          {"detuning_offset_hz", c.trap.detuning_offset_hz},
          {"omega_max_hz", c.trap.omega_max_hz}}},
        {"problem",
         {{"family", c.family}, {"count", c.instance_count}, {"seeds", c.instance_seeds}}},
        {"heuristic",
         {{"k_max", c.bcd.k_max},
          {"m_max", c.bcd.m_max},
          {"delta", c.bcd.delta},
          {"grid_n", c.rescale.grid_n},
          {"level", c.rescale.level},
          {"tol", c.rescale.tol},
          {"alpha0", c.rescale.alpha0}}},
        {"training",
         {{"cycles", c.cycles},
          {"p_max", c.p_max},
          {"restarts_per_step", c.restarts_per_step},
          {"runs", c.runs}}},
        {"analysis",
         {{"samples", c.samples}, {"bins", c.bins}, {"k_states", c.k_states}, {"depth", c.depth}}},
        {"output_dir", c.output_dir.string()},
        {"master_seed", c.master_seed},
        {"jobs", c.jobs}};
}

void load_config_file(const fs::path& path, ExperimentConfig& c) {
    const json j = io::read_json_file(path);
    if (j.contains("trap")) {
        const json& t = j["trap"];
        c.trap.n = t.value("n", c.trap.n);
        c.trap.mass_amu = t.value("mass_amu", c.trap.mass_amu);
        c.trap.omega_x_hz = t.value("omega_x_hz", c.trap.omega_x_hz);
        c.trap.omega_z_hz = t.value("omega_z_hz", c.trap.omega_z_hz);
        c.trap.wavelength_m = t.value("wavelength_m", c.trap.wavelength_m);
        c.trap.detuning_offset_hz = t.value("detuning_offset_hz", c.trap.detuning_offset_hz);
        c.trap.omega_max_hz = t.value("omega_max_hz", c.trap.omega_max_hz);
    }
    if (j.contains("problem")) {
        const json& p = j["problem"];
        c.family = p.value("family", c.family);
        if (p.contains("n")) c.trap.n = p["n"].get<int>();
        c.instance_count = p.value("count", c.instance_count);
        if (p.contains("seeds")) c.instance_seeds = p["seeds"].get<std::vector<std::uint64_t>>();
    }
    if (j.contains("heuristic")) {
        const json& h = j["heuristic"];
        c.bcd.k_max = h.value("k_max", c.bcd.k_max);
        c.bcd.m_max = h.value("m_max", c.bcd.m_max);
        c.bcd.delta = h.value("delta", c.bcd.delta);
        c.rescale.grid_n = h.value("grid_n", c.rescale.grid_n);
        c.rescale.level = h.value("level", c.rescale.level);
        c.rescale.tol = h.value("tol", c.rescale.tol);
        c.rescale.alpha0 = h.value("alpha0", c.rescale.alpha0);
    }
    if (j.contains("training")) {
        const json& t = j["training"];
        c.cycles = t.value("cycles", c.cycles);
        c.p_max = t.value("p_max", c.p_max);
        c.restarts_per_step = t.value("restarts_per_step", c.restarts_per_step);
        c.runs = t.value("runs", c.runs);
    }
    if (j.contains("analysis")) {
        const json& a = j["analysis"];
        c.samples = a.value("samples", c.samples);
        c.bins = a.value("bins", c.bins);
        c.k_states = a.value("k_states", c.k_states);
        c.depth = a.value("depth", c.depth);
    }
    if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("master_seed")) c.master_seed = j["master_seed"].get<std::uint64_t>();
    if (j.contains("jobs")) c.jobs = j["jobs"].get<int>();
}

std::vector<std::uint64_t> resolve_instance_seeds(const ExperimentConfig& c) {
    if (!c.instance_seeds.empty()) return c.instance_seeds;
    std::vector<std::uint64_t> seeds;
    seeds.reserve(c.instance_count);
    for (int i = 0; i < c.instance_count; ++i)
        seeds.push_back(rng::derive_stream(c.master_seed, {0x1257ULL, static_cast<std::uint64_t>(i)}));
    return seeds;
}

problems::DiagonalHamiltonian make_problem(const ExperimentConfig& c, std::uint64_t seed) {
    if (c.family == "sk") return problems::sk_hamiltonian(c.trap.n, seed);
    if (c.family == "ghz_prep") return problems::ghz_prep_hamiltonian(c.trap.n);
    throw std::invalid_argument("unknown problem family: " + c.family +
                                " (expected sk or ghz_prep)");
}

std::string instance_id(const ExperimentConfig& c, std::uint64_t seed) {
    if (c.family == "ghz_prep") return "ghz-n" + std::to_string(c.trap.n);
    return pipeline::instance_label(c.trap.n, seed);
}

heuristic::BcdConfig bcd_for(const ExperimentConfig& c, const problems::DiagonalHamiltonian& h,
                             std::uint64_t stream_seed) {
    heuristic::BcdConfig bcd = c.bcd;
    bcd.seed = stream_seed;
    // SK: eps = 0.5 * lambda_min; state preparation: convergence disabled,
    // best-of-m_max selection.
    if (c.family == "sk") bcd.eps = heuristic::sk_epsilon(h);
    return bcd;
}

heuristic::RescaleConfig rescale_for(const ExperimentConfig& c) {
    heuristic::RescaleConfig r = c.rescale;
    if (c.family == "ghz_prep" && r.level == 0.95) r.level = 1.1;  // state-prep convention
    return r;
}

fs::path output_dir(const ExperimentConfig& c) {
    if (const char* env = std::getenv("IONQAOA_OUT")) return fs::path(env);
    return c.output_dir;
}

// ---- subcommands ----

int cmd_chain(const ExperimentConfig& c, const std::string& hash) {
    const ionchain::PhononData ph = ionchain::compute_phonons(c.trap);
    const ionchain::CouplingBase base =
        ionchain::coupling_base(ph, c.trap.laser_detuning_rad(), c.trap.omega_max_hz);

    std::printf("radial modes (n = %d):\n", c.trap.n);
    std::printf("  %4s  %14s  %12s\n", "mode", "freq (MHz)", "lambda");
    for (std::size_t m = 0; m < ph.frequencies.size(); ++m) {
        const double f_mhz = ph.frequencies[m] / constants::two_pi / 1e6;
        const double lambda = ph.frequencies[m] / (constants::two_pi * c.trap.omega_z_hz);
        std::printf("  %4zu  %14.6f  %12.6f\n", m, f_mhz, lambda * lambda);
    }
    const linalg::Mat j = ionchain::coupling_matrix(base, linalg::Vec(c.trap.n, 1.0));
    std::printf("max |J_ij| at A = 1: %.6f (2*pi*kHz)\n", j.max_abs() / constants::two_pi);

    const fs::path dir = output_dir(c);
    fs::create_directories(dir);
    json out = io::meta_block(hash);
    out["coupling_base"] = base;
    io::write_json_file(dir / "coupling.json", out);
    std::printf("wrote %s\n", (dir / "coupling.json").string().c_str());
    return 0;
}

int cmd_heuristic(const ExperimentConfig& c, const std::string& hash) {
    const ionchain::CouplingBase base = ionchain::coupling_base_from_trap(c.trap);
    const fs::path dir = output_dir(c);
    fs::create_directories(dir);
    const std::vector<std::uint64_t> seeds = resolve_instance_seeds(c);
    const heuristic::RescaleConfig rescale = rescale_for(c);

    for (std::size_t i = 0; i < seeds.size(); ++i) {
        const problems::DiagonalHamiltonian h = make_problem(c, seeds[i]);
        const heuristic::BcdConfig bcd = bcd_for(
            c, h, rng::derive_stream(c.master_seed, {0xBCDULL, static_cast<std::uint64_t>(i), 1}));
        const heuristic::HeuristicOutcome out = heuristic::run_heuristic(h, base, bcd, rescale);

        const std::string id = instance_id(c, seeds[i]);
        json j = out;
        j["instance"] = id;
        j["config_hash"] = hash;
        j["version"] = std::string(version);
        io::write_json_file(dir / ("heuristic_" + id + ".json"), j);
        std::printf("%s: E* = %.6f alpha* = %.4f evals = %llu + %llu converged = %s\n", id.c_str(),
                    out.best_energy, out.alpha_star.value_or(1.0),
                    static_cast<unsigned long long>(out.n_evals_train),
                    static_cast<unsigned long long>(out.n_evals_rescale),
                    out.converged ? "true" : "false");
    }
    return 0;
}

int cmd_train(const ExperimentConfig& c, const std::string& hash) {
    const fs::path dir = output_dir(c);
    const std::vector<std::uint64_t> seeds = resolve_instance_seeds(c);
    const int p_max = c.p_max > 0 ? c.p_max : c.trap.n;
    const ionchain::CouplingBase base = ionchain::coupling_base_from_trap(c.trap);

    std::vector<pipeline::CampaignRecord> records;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        const std::string id = instance_id(c, seeds[i]);
        const fs::path hfile = dir / ("heuristic_" + id + ".json");
        if (!fs::exists(hfile))
            throw std::invalid_argument("missing prerequisite " + hfile.string() +
                                        "; run `ionqaoa heuristic` with the same config first");
        heuristic::HeuristicOutcome heur = io::read_json_file(hfile).get<heuristic::HeuristicOutcome>();

        const problems::DiagonalHamiltonian h = make_problem(c, seeds[i]);
        const sim::AnsatzSpec spec = sim::AnsatzSpec::ion_native(base, heur.scaled_a());
        pipeline::LayerwiseConfig train;
        train.p_max = p_max;
        train.restarts_per_step = c.restarts_per_step;
        train.runs = c.runs;
        train.seed = rng::derive_stream(c.master_seed, {0x7124ULL, static_cast<std::uint64_t>(i), 1});
        for (pipeline::RunRecord& rec : pipeline::layerwise_train(spec, h, train, id)) {
            std::printf("%s p=%d E=%.6f r=%.4f g=%.4f %s\n", id.c_str(), rec.p, rec.energy,
                        rec.ratio, rec.overlap, rec.solved ? "solved" : "");
            records.push_back({1, "ion_native", std::move(rec)});
        }
    }
    fs::create_directories(dir);
    io::write_text_file(dir / "records.jsonl", io::campaign_records_jsonl(records, hash));
    std::printf("wrote %s\n", (dir / "records.jsonl").string().c_str());
    return 0;
}

int cmd_bench(const ExperimentConfig& c, const std::string& hash) {
    if (c.family != "sk")
        throw std::invalid_argument("bench runs on the sk family (got " + c.family + ")");
    pipeline::CampaignConfig cc;
    cc.trap = c.trap;
    cc.n_instances = c.instance_count;
    cc.cycles = c.cycles;
    cc.p_max = c.p_max;
    cc.restarts_per_step = c.restarts_per_step;
    cc.runs = c.runs;
    cc.bcd = c.bcd;
    cc.rescale = c.rescale;
    cc.master_seed = c.master_seed;
    cc.jobs = c.jobs;

    const pipeline::PairedCampaign pair = pipeline::compare_standard_qaoa(cc);
    const fs::path dir = output_dir(c);
    io::write_campaign_outputs(dir, pair, hash);

    std::printf("ion native    cycle fractions:");
    for (double f : pair.ion.summary.cycle_fractions) std::printf(" %.3f", f);
    std::printf("\nstandard qaoa cycle fractions:");
    for (double f : pair.standard.summary.cycle_fractions) std::printf(" %.3f", f);
    std::printf("\nmean evals: heuristic train %.1f, rescale %.1f, layerwise %.1f\n",
                pair.ion.summary.mean_evals_train, pair.ion.summary.mean_evals_rescale,
                pair.ion.summary.mean_evals_layerwise);
    std::printf("wrote %s\n", (dir / "summary.json").string().c_str());
    return 0;
}

int cmd_express(const ExperimentConfig& c, const std::string& hash, const std::string& kind,
                const std::string& heuristic_file) {
    const ionchain::CouplingBase base = ionchain::coupling_base_from_trap(c.trap);
    sim::AnsatzSpec spec;
    if (kind == "asymmetric") {
        spec = sim::AnsatzSpec::ion_native(base, analysis::asymmetric_config(c.trap.n));
    } else if (kind == "trained") {
        if (heuristic_file.empty())
            throw std::invalid_argument("--heuristic-file is required for --kind trained");
        heuristic::HeuristicOutcome heur =
            io::read_json_file(heuristic_file).get<heuristic::HeuristicOutcome>();
        spec = sim::AnsatzSpec::ion_native(base, heur.scaled_a());
    } else if (kind == "standard") {
        const std::vector<std::uint64_t> seeds = resolve_instance_seeds(c);
        spec = sim::AnsatzSpec::standard_qaoa(make_problem(c, seeds.at(0)));
    } else {
        throw std::invalid_argument("unknown --kind " + kind +
                                    " (expected asymmetric, trained or standard)");
    }

    const analysis::ExpressibilityResult res = analysis::expressibility_kl(
        spec, c.depth, c.samples, c.bins, rng::derive_stream(c.master_seed, {0xE4B5ULL}));
    std::printf("D_KL(%s, p=%d, S=%d, B=%d) = %.6f\n", kind.c_str(), c.depth, c.samples, c.bins,
                res.d_kl);

    const fs::path dir = output_dir(c);
    fs::create_directories(dir);
    io::write_text_file(dir / ("fidelity_hist_" + kind + ".csv"), io::histogram_csv(res.histogram));
    json j = io::meta_block(hash);
    j["kind"] = kind;
    j["p"] = c.depth;
    j["samples"] = c.samples;
    j["bins"] = c.bins;
    j["d_kl"] = res.d_kl;
    io::write_json_file(dir / ("expressibility_" + kind + ".json"), j);
    return 0;
}

int cmd_svd(const ExperimentConfig& c, const std::string& hash, const std::string& kind,
            const std::string& heuristic_file) {
    const ionchain::CouplingBase base = ionchain::coupling_base_from_trap(c.trap);
    sim::AnsatzSpec spec;
    if (kind == "asymmetric") {
        spec = sim::AnsatzSpec::ion_native(base, analysis::asymmetric_config(c.trap.n));
    } else if (kind == "trained") {
        if (heuristic_file.empty())
            throw std::invalid_argument("--heuristic-file is required for --kind trained");
        heuristic::HeuristicOutcome heur =
            io::read_json_file(heuristic_file).get<heuristic::HeuristicOutcome>();
        spec = sim::AnsatzSpec::ion_native(base, heur.scaled_a());
    } else {
        throw std::invalid_argument("unknown --kind " + kind + " (expected asymmetric or trained)");
    }

    const analysis::SingularProfile prof = analysis::singular_profile(
        spec, c.depth, c.k_states, rng::derive_stream(c.master_seed, {0x51D5ULL}));
    std::printf("singular values (%s, p=%d, K=%d): sigma_1 = %.4f, sigma_%d = %.3e\n", kind.c_str(),
                c.depth, c.k_states, prof.sigmas.front(), c.k_states, prof.sigmas.back());

    const fs::path dir = output_dir(c);
    fs::create_directories(dir);
    io::write_text_file(dir / ("singular_" + kind + ".csv"), io::singular_profile_csv(prof));
    (void)hash;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"trapped-ion native QAOA: couplings, hyperparameter search, training, diagnostics"};
    app.require_subcommand(1);

    std::string config_path;
    ExperimentConfig cfg;
    std::optional<int> opt_n, opt_count, opt_cycles, opt_pmax, opt_runs, opt_samples, opt_bins,
        opt_k, opt_depth, opt_jobs;
    std::optional<std::uint64_t> opt_seed;
    std::optional<std::string> opt_out, opt_family;
    std::string kind = "asymmetric";
    std::string heuristic_file;

    app.add_option("--config", config_path, "JSON config file (see README for the schema)");
    app.add_option("--n", opt_n, "qubit / ion count override");
    app.add_option("--family", opt_family, "problem family: sk or ghz_prep");
    app.add_option("--instances", opt_count, "number of problem instances");
    app.add_option("--cycles", opt_cycles, "training cycles");
    app.add_option("--p-max", opt_pmax, "maximum circuit depth (0 = n)");
    app.add_option("--runs", opt_runs, "layerwise training runs");
    app.add_option("--samples", opt_samples, "fidelity samples for express");
    app.add_option("--bins", opt_bins, "histogram bins for express");
    app.add_option("--k-states", opt_k, "states stacked for svd");
    app.add_option("--depth", opt_depth, "circuit depth for express/svd");
    app.add_option("--seed", opt_seed, "master seed override");
    app.add_option("--out", opt_out, "output directory override");
    app.add_option("--jobs", opt_jobs, "worker threads over instances");

    CLI::App* sub_chain = app.add_subcommand("chain", "phonon modes and coupling base");
    CLI::App* sub_heur = app.add_subcommand("heuristic", "hyperparameter search per instance");
    CLI::App* sub_train = app.add_subcommand("train", "layerwise training from heuristic outputs");
    CLI::App* sub_bench = app.add_subcommand("bench", "multi-cycle benchmark, both ansatz variants");
    CLI::App* sub_expr = app.add_subcommand("express", "expressibility (KL vs Haar)");
    CLI::App* sub_svd = app.add_subcommand("svd", "singular-value profile of sampled states");
    for (CLI::App* s : {sub_expr, sub_svd}) {
        s->add_option("--kind", kind, "configuration: asymmetric, trained or standard");
        s->add_option("--heuristic-file", heuristic_file, "heuristic outcome JSON for --kind trained");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) load_config_file(config_path, cfg);
        if (opt_n) cfg.trap.n = *opt_n;
        if (opt_family) cfg.family = *opt_family;
        if (opt_count) cfg.instance_count = *opt_count;
        if (opt_cycles) cfg.cycles = *opt_cycles;
        if (opt_pmax) cfg.p_max = *opt_pmax;
        if (opt_runs) cfg.runs = *opt_runs;
        if (opt_samples) cfg.samples = *opt_samples;
        if (opt_bins) cfg.bins = *opt_bins;
        if (opt_k) cfg.k_states = *opt_k;
        if (opt_depth) cfg.depth = *opt_depth;
        if (opt_seed) cfg.master_seed = *opt_seed;
        if (opt_out) cfg.output_dir = *opt_out;
        if (opt_jobs) cfg.jobs = *opt_jobs;

        cfg.trap.validate();
        const std::string hash = hash_hex(config_to_json(cfg).dump());

        if (sub_chain->parsed()) return cmd_chain(cfg, hash);
        if (sub_heur->parsed()) return cmd_heuristic(cfg, hash);
        if (sub_train->parsed()) return cmd_train(cfg, hash);
        if (sub_bench->parsed()) return cmd_bench(cfg, hash);
        if (sub_expr->parsed()) return cmd_express(cfg, hash, kind, heuristic_file);
        if (sub_svd->parsed()) return cmd_svd(cfg, hash, kind, heuristic_file);
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
}
