#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ionqaoa/analysis.hpp"
#include "ionqaoa/heuristic.hpp"
#include "ionqaoa/ionchain.hpp"
#include "ionqaoa/pipeline.hpp"
#include "ionqaoa/problems.hpp"
#include "ionqaoa/version.hpp"

// JSON, JSON-lines and CSV wire formats. nlohmann::json keeps keys sorted
// and prints doubles with the shortest round-trip representation, which is
// what makes identically-seeded runs byte-identical.

namespace ionqaoa::ionchain {

inline void to_json(nlohmann::json& j, const CouplingBase& base) {
    j = nlohmann::json{{"n", base.n},
                       {"omega_max_hz", base.omega_max_hz},
                       {"c", base.c.data()}};
}

inline void from_json(const nlohmann::json& j, CouplingBase& base) {
    base.n = j.at("n").get<int>();
    base.omega_max_hz = j.at("omega_max_hz").get<double>();
    std::vector<double> flat = j.at("c").get<std::vector<double>>();
    const std::size_t n = static_cast<std::size_t>(base.n);
    if (flat.size() != n * n) throw std::invalid_argument("CouplingBase: c must be n*n entries");
    base.c = linalg::Mat(n, n);
    base.c.data() = std::move(flat);
}

}  // namespace ionqaoa::ionchain

namespace ionqaoa::problems {

inline void to_json(nlohmann::json& j, const SkInstance& inst) {
    nlohmann::json triples = nlohmann::json::array();
    std::size_t idx = 0;
    for (int i = 0; i < inst.n; ++i)
        for (int k = i + 1; k < inst.n; ++k, ++idx)
            triples.push_back({i, k, inst.couplings[idx]});
    j = nlohmann::json{{"n", inst.n}, {"seed", inst.seed}, {"couplings", triples}};
}

inline void from_json(const nlohmann::json& j, SkInstance& inst) {
    const int n = j.at("n").get<int>();
    std::vector<double> packed(SkInstance::pair_count(n), 0.0);
    for (const auto& t : j.at("couplings")) {
        const int i = t.at(0).get<int>();
        const int k = t.at(1).get<int>();
        if (!(0 <= i && i < k && k < n))
            throw std::invalid_argument("SkInstance: coupling indices must satisfy 0 <= i < j < n");
        packed[static_cast<std::size_t>(i) * n - static_cast<std::size_t>(i) * (i + 1) / 2 +
               static_cast<std::size_t>(k - i - 1)] = t.at(2).get<double>();
    }
    inst = SkInstance::from_couplings(n, std::move(packed), j.value("seed", std::uint64_t{0}));
}

}  // namespace ionqaoa::problems

namespace ionqaoa::heuristic {

inline void to_json(nlohmann::json& j, const HeuristicOutcome& out) {
    j = nlohmann::json{{"a_star", out.a_star},
                       {"best_energy", out.best_energy},
                       {"n_evals_train", out.n_evals_train},
                       {"n_evals_rescale", out.n_evals_rescale},
                       {"restarts_used", out.restarts_used},
                       {"converged", out.converged},
                       {"alpha_feasible", out.alpha_feasible}};
    if (out.alpha_star)
        j["alpha_star"] = *out.alpha_star;
    else
        j["alpha_star"] = nullptr;
    if (!out.trace.empty()) {
        nlohmann::json tr = nlohmann::json::array();
        for (const RestartTrace& rt : out.trace) {
            nlohmann::json steps = nlohmann::json::array();
            for (const BcdStep& st : rt.steps) {
                const char* branch = st.branch == BcdBranch::Converged  ? "converged"
                                     : st.branch == BcdBranch::Stagnated ? "stagnated"
                                                                         : "updated";
                steps.push_back({{"k", st.k}, {"energy", st.energy}, {"branch", branch}});
            }
            tr.push_back({{"restart", rt.restart}, {"steps", steps}});
        }
        j["trace"] = tr;
    }
}

inline void from_json(const nlohmann::json& j, HeuristicOutcome& out) {
    out = HeuristicOutcome{};
    out.a_star = j.at("a_star").get<std::vector<double>>();
    out.best_energy = j.at("best_energy").get<double>();
    out.n_evals_train = j.at("n_evals_train").get<std::uint64_t>();
    out.n_evals_rescale = j.at("n_evals_rescale").get<std::uint64_t>();
    out.restarts_used = j.at("restarts_used").get<int>();
    out.converged = j.at("converged").get<bool>();
    out.alpha_feasible = j.value("alpha_feasible", true);
    if (j.contains("alpha_star") && !j.at("alpha_star").is_null())
        out.alpha_star = j.at("alpha_star").get<double>();
}

}  // namespace ionqaoa::heuristic

namespace ionqaoa::pipeline {

inline void to_json(nlohmann::json& j, const RunRecord& rec) {
    j = nlohmann::json{{"instance", rec.instance}, {"p", rec.p},
                       {"betas", rec.betas},       {"gammas", rec.gammas},
                       {"energy", rec.energy},     {"ratio", rec.ratio},
                       {"overlap", rec.overlap},   {"solved", rec.solved},
                       {"n_evals", rec.n_evals}};
}

inline void from_json(const nlohmann::json& j, RunRecord& rec) {
    rec.instance = j.at("instance").get<std::string>();
    rec.p = j.at("p").get<int>();
    rec.betas = j.at("betas").get<std::vector<double>>();
    rec.gammas = j.at("gammas").get<std::vector<double>>();
    rec.energy = j.at("energy").get<double>();
    rec.ratio = j.at("ratio").get<double>();
    rec.overlap = j.at("overlap").get<double>();
    rec.solved = j.at("solved").get<bool>();
    rec.n_evals = j.at("n_evals").get<std::uint64_t>();
}

inline void to_json(nlohmann::json& j, const CampaignSummary& s) {
    j = nlohmann::json{{"variant", s.variant},
                       {"n", s.n},
                       {"n_instances", s.n_instances},
                       {"cycles", s.cycles},
                       {"p_max", s.p_max},
                       {"cycle_fractions", s.cycle_fractions},
                       {"depth_fractions", s.depth_fractions},
                       {"mean_evals_train", s.mean_evals_train},
                       {"mean_evals_rescale", s.mean_evals_rescale},
                       {"mean_evals_layerwise", s.mean_evals_layerwise},
                       {"jobs_executed", s.jobs_executed}};
}

}  // namespace ionqaoa::pipeline

namespace ionqaoa::io {

// Metadata block stamped into every output document.
inline nlohmann::json meta_block(const std::string& config_hash) {
    return nlohmann::json{{"config_hash", config_hash}, {"version", std::string(version)}};
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
    f << text;
    if (!f) throw std::runtime_error("write failed: " + path.string());
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
    return nlohmann::json::parse(read_text_file(path));
}

// One RunRecord per line, annotated with cycle and variant.
inline std::string campaign_records_jsonl(const std::vector<pipeline::CampaignRecord>& records,
                                          const std::string& config_hash) {
    std::string out;
    for (const pipeline::CampaignRecord& cr : records) {
        nlohmann::json j = cr.record;
        j["cycle"] = cr.cycle;
        j["variant"] = cr.variant;
        j["config_hash"] = config_hash;
        j["version"] = std::string(version);
        out += j.dump();
        out += '\n';
    }
    return out;
}

inline std::string heuristics_jsonl(const std::vector<pipeline::HeuristicRecord>& records,
                                    const std::string& config_hash) {
    std::string out;
    for (const pipeline::HeuristicRecord& hr : records) {
        nlohmann::json j = hr.outcome;
        j.erase("trace");  // traces are debugging data, not results
        j["cycle"] = hr.cycle;
        j["instance"] = hr.instance;
        j["config_hash"] = config_hash;
        j["version"] = std::string(version);
        out += j.dump();
        out += '\n';
    }
    return out;
}

// CSV of solved-fraction curves for plotting.
inline std::string fraction_curves_csv(const pipeline::CampaignSummary& ion,
                                       const pipeline::CampaignSummary* standard = nullptr) {
    std::ostringstream csv;
    csv.precision(17);
    csv << "kind,index,ion_fraction";
    if (standard) csv << ",standard_fraction";
    csv << "\n";
    for (std::size_t c = 0; c < ion.cycle_fractions.size(); ++c) {
        csv << "cycle," << (c + 1) << "," << ion.cycle_fractions[c];
        if (standard) csv << "," << standard->cycle_fractions[c];
        csv << "\n";
    }
    for (std::size_t p = 0; p < ion.depth_fractions.size(); ++p) {
        csv << "depth," << (p + 1) << "," << ion.depth_fractions[p];
        if (standard) csv << "," << standard->depth_fractions[p];
        csv << "\n";
    }
    return csv.str();
}

inline std::string histogram_csv(const analysis::FidelityHistogram& hist) {
    std::ostringstream csv;
    csv.precision(17);
    csv << "bin_left,bin_right,count\n";
    for (int b = 0; b < hist.bins; ++b) {
        csv << (static_cast<double>(b) / hist.bins) << ","
            << (static_cast<double>(b + 1) / hist.bins) << "," << hist.counts[b] << "\n";
    }
    return csv.str();
}

inline std::string singular_profile_csv(const analysis::SingularProfile& prof) {
    std::ostringstream csv;
    csv.precision(17);
    csv << "k,sigma\n";
    for (std::size_t k = 0; k < prof.sigmas.size(); ++k)
        csv << (k + 1) << "," << prof.sigmas[k] << "\n";
    return csv.str();
}

// Writes the full benchmark output set; paths are fixed within out_dir so
// reruns with the same config produce byte-identical files.
inline void write_campaign_outputs(const std::filesystem::path& out_dir,
                                   const pipeline::PairedCampaign& pair,
                                   const std::string& config_hash) {
    std::filesystem::create_directories(out_dir);
    std::vector<pipeline::CampaignRecord> all = pair.ion.records;
    all.insert(all.end(), pair.standard.records.begin(), pair.standard.records.end());
    write_text_file(out_dir / "records.jsonl", campaign_records_jsonl(all, config_hash));
    write_text_file(out_dir / "heuristics.jsonl", heuristics_jsonl(pair.ion.heuristics, config_hash));

    nlohmann::json summary = meta_block(config_hash);
    summary["ion_native"] = pair.ion.summary;
    summary["standard_qaoa"] = pair.standard.summary;
    write_json_file(out_dir / "summary.json", summary);
    write_text_file(out_dir / "curves.csv",
                    fraction_curves_csv(pair.ion.summary, &pair.standard.summary));
}

}  // namespace ionqaoa::io
