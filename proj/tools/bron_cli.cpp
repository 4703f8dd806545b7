// bron: command-line entry point.
//
//   bron ingest --kind attack|capec|cwe|nvd|canonical FILE... --out graph.jsonl
//   bron ingest capec:a.xml cwe:b.xml nvd:c.json --out graph.jsonl
//   bron analyze top-cwe --graph g.jsonl --roots cwe-list.txt --out report.csv
//   bron analyze connectivity|frequency|ngrams --graph g.jsonl ...
//   bron pairs --graph g.jsonl --seed N --out pairs.csv
//   bron experiment --name CWE-TACTIC-BOW-RANDOM_FOREST --graph g.jsonl --out dir
//   bron grid --config grid.json --graph g.jsonl --out dir
//
// Exit status: 0 success, 1 usage error, 2 data error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bron/bron.hpp"

namespace {

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

struct Common {
    std::uint64_t seed = 0;
    std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool out_required) {
    cmd->add_option("--seed", c.seed, "Master seed for randomized steps")->capture_default_str();
    auto* o = cmd->add_option("--out", c.out, "Output file or directory");
    if (out_required) o->required();
}

void write_or_print(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
    } else {
        bron::write_text_file(path, content);
    }
}

std::vector<std::string> read_lines(const std::string& path) {
    std::istringstream in(bron::read_file(path));
    std::vector<std::string> out;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto b = line.find_first_not_of(" \t");
        if (b == std::string::npos || line[b] == '#') continue;
        out.push_back(line.substr(b, line.find_last_not_of(" \t") - b + 1));
    }
    return out;
}

void print_warnings(const std::vector<std::string>& w) {
    for (const auto& s : w) std::cerr << "warning: " << s << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Threat knowledge graph ingest, analytics and link-prediction experiments"};
    app.require_subcommand(1);

    // ingest
    Common ingest_c;
    std::string kind_name;
    std::vector<std::string> ingest_files;
    auto* ingest = app.add_subcommand("ingest", "Parse source feeds and write the canonical JSONL graph");
    ingest->add_option("--kind", kind_name, "Format of files given without a kind: prefix")
        ->check(CLI::IsMember({"attack", "capec", "cwe", "nvd", "canonical"}));
    ingest->add_option("files", ingest_files, "Input files as PATH or KIND:PATH, merged in order")->required();
    add_common(ingest, ingest_c, true);

    // analyze
    Common an_c;
    std::string an_graph, an_roots, an_layer = "technique", an_source = "technique";
    std::size_t an_top = 10;
    int an_n = 1;
    auto* analyze = app.add_subcommand("analyze", "Graph reports");
    analyze->require_subcommand(1);
    auto add_graph = [](CLI::App* cmd, std::string& g) {
        cmd->add_option("--graph", g, "Canonical graph (JSONL)")->required()->check(CLI::ExistingFile);
    };
    auto* top_cwe = analyze->add_subcommand("top-cwe", "Per-weakness linkage report (CSV)");
    add_graph(top_cwe, an_graph);
    top_cwe->add_option("--roots", an_roots, "File with one CWE id per line")->required()->check(CLI::ExistingFile);
    add_common(top_cwe, an_c, false);
    auto* conn = analyze->add_subcommand("connectivity", "Technique-AttackPattern connectivity");
    add_graph(conn, an_graph);
    add_common(conn, an_c, false);
    auto* freq = analyze->add_subcommand("frequency", "Nodes of a layer most often reached from the roots");
    add_graph(freq, an_graph);
    freq->add_option("--roots", an_roots, "File with one root per line as layer:id")->required()->check(CLI::ExistingFile);
    freq->add_option("--layer", an_layer, "Layer to count")->capture_default_str();
    freq->add_option("--top", an_top, "Rows to keep")->capture_default_str();
    add_common(freq, an_c, false);
    auto* ngrams = analyze->add_subcommand("ngrams", "Most frequent n-grams in node names of a layer");
    add_graph(ngrams, an_graph);
    ngrams->add_option("--layer", an_source, "Layer whose names are counted")->capture_default_str();
    ngrams->add_option("--n", an_n, "1 or 2")->capture_default_str()->check(CLI::Range(1, 2));
    ngrams->add_option("--top", an_top, "Rows to keep")->capture_default_str();
    add_common(ngrams, an_c, false);

    // pairs
    Common pairs_c;
    std::string pairs_graph;
    auto* pairs = app.add_subcommand("pairs", "Write a balanced labelled Technique-CAPEC pair sample (CSV)");
    add_graph(pairs, pairs_graph);
    add_common(pairs, pairs_c, true);

    // experiment
    Common ex_c;
    std::string ex_name, ex_graph, ex_embeddings;
    std::size_t ex_trials = bron::ExperimentConfig::kDefaultTrials, ex_threads = 0;
    double ex_fraction = bron::ExperimentConfig::kDefaultTrainFraction;
    bool ex_fixed = false, ex_leaky = false;
    auto* experiment = app.add_subcommand("experiment", "Run one configuration over repeated trials");
    experiment->add_option("--name", ex_name, "FEATURE(-FEATURE)*-REPR-CLASSIFIER")->required();
    add_graph(experiment, ex_graph);
    experiment->add_option("--trials", ex_trials, "Number of trials")->capture_default_str();
    experiment->add_option("--train-fraction", ex_fraction, "Training share of each split")->capture_default_str();
    experiment->add_flag("--fixed-negatives", ex_fixed, "Draw one negative sample for all trials");
    experiment->add_flag("--leaky-capec-techniques", ex_leaky,
                         "Keep the paired technique's name in CAPEC_TECHNIQUES");
    experiment->add_option("--embeddings", ex_embeddings, "Embedding CSV (layer,id,v0..) for EMB configs")
        ->check(CLI::ExistingFile);
    experiment->add_option("--threads", ex_threads, "Worker threads (0 = all cores)")->capture_default_str();
    add_common(experiment, ex_c, true);

    // grid
    Common grid_c;
    std::string grid_config, grid_graph;
    std::size_t grid_threads = 0;
    auto* grid = app.add_subcommand("grid", "Run a grid of configurations with pairwise significance tests");
    grid->add_option("--config", grid_config, "grid.json: array of experiment objects")->required()->check(CLI::ExistingFile);
    add_graph(grid, grid_graph);
    grid->add_option("--threads", grid_threads, "Worker threads (0 = all cores)")->capture_default_str();
    add_common(grid, grid_c, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageError;
    }

    try {
        if (*ingest) {
            std::vector<bron::RecordStream> streams;
            for (auto f : ingest_files) {
                std::optional<bron::SourceKind> kind;
                if (const auto colon = f.find(':'); colon != std::string::npos) {
                    kind = bron::parse_source_kind(f.substr(0, colon));
                    if (kind) f = f.substr(colon + 1);
                }
                if (!kind && !kind_name.empty()) kind = bron::parse_source_kind(kind_name);
                if (!kind) throw bron::InvalidConfig(f + ": no --kind and no kind: prefix");
                if (!std::filesystem::is_regular_file(f)) throw bron::InvalidConfig(f + ": no such file");
                try {
                    streams.push_back(bron::parse_source(*kind, bron::read_file(f)));
                } catch (const bron::MalformedInput& e) {
                    throw bron::MalformedInput(f + ": " + e.what(), e.location());
                }
            }
            auto [g, report] = bron::load_graph(streams);
            write_or_print(ingest_c.out, bron::export_canonical(g));
            std::cerr << "nodes " << g.node_count() << ", edges " << g.edge_count() << ", dangling "
                      << report.dangling_edges << ", duplicates merged " << report.duplicates_merged
                      << ", rejected edges " << report.rejected_edges << ", invalid nodes " << report.invalid_nodes
                      << "\n";
            return 0;
        }

        if (*analyze) {
            const bron::ThreatGraph g = bron::load_canonical_file(an_graph);
            if (*top_cwe) {
                std::vector<bron::WeaknessReport> reports;
                for (const auto& id : read_lines(an_roots)) {
                    if (!g.contains({bron::Layer::Weakness, id})) {
                        std::cerr << "warning: " << id << " is not in the graph, skipped\n";
                        continue;
                    }
                    reports.push_back(bron::weakness_report(g, id));
                    print_warnings(reports.back().warnings);
                }
                std::cout << "note: n_techniques counts every reachable Technique node, sub-techniques included\n";
                write_or_print(an_c.out, bron::weakness_csv(reports));
            } else if (*conn) {
                const auto s = bron::connectivity_stats(g);
                std::ostringstream os;
                os << "techniques," << s.n_techniques << "\nattack_patterns," << s.n_attack_patterns
                   << "\nlinked_pairs," << s.linked_pairs << "\npossible_pairs," << s.possible_pairs
                   << "\ndensity_percent," << bron::format_density(s) << "\nunlinked_techniques_percent,"
                   << bron::format_fixed(s.pct_unlinked_techniques, 1) << "\n";
                write_or_print(an_c.out, os.str());
            } else if (*freq) {
                const auto layer = bron::parse_layer(an_layer);
                if (!layer) throw bron::InvalidConfig("unknown layer '" + an_layer + "'");
                std::vector<bron::NodeId> roots;
                for (const auto& line : read_lines(an_roots)) {
                    const auto colon = line.find(':');
                    const auto l = colon == std::string::npos ? std::nullopt : bron::parse_layer(line.substr(0, colon));
                    if (!l) throw bron::MalformedInput("expected layer:id", line);
                    roots.push_back({*l, line.substr(colon + 1)});
                }
                std::string out = "layer,id,name,count\n";
                for (const auto& [id, n] : bron::frequency_table(g, roots, *layer, an_top))
                    out += std::string(bron::layer_name(id.layer)) + "," + bron::detail::csv_field(id.local_id) + "," +
                           bron::detail::csv_field(g.node(id).name) + "," + std::to_string(n) + "\n";
                write_or_print(an_c.out, out);
            } else if (*ngrams) {
                const auto layer = bron::parse_layer(an_source);
                if (!layer) throw bron::InvalidConfig("unknown layer '" + an_source + "'");
                std::vector<std::string> texts;
                for (const auto& id : g.nodes_in(*layer)) texts.push_back(g.node(id).name);
                std::string out = "ngram,count\n";
                for (const auto& [gram, n] : bron::ngram_frequency(texts, an_n, an_top))
                    out += bron::detail::csv_field(gram) + "," + std::to_string(n) + "\n";
                write_or_print(an_c.out, out);
            }
            return 0;
        }

        if (*pairs) {
            const bron::ThreatGraph g = bron::load_canonical_file(pairs_graph);
            write_or_print(pairs_c.out, bron::pairs_csv(bron::build_pairs(g, pairs_c.seed)));
            return 0;
        }

        if (*experiment) {
            const bron::ThreatGraph g = bron::load_canonical_file(ex_graph);
            auto cfg = bron::ExperimentConfig::from_name(ex_name);
            cfg.trials = ex_trials;
            cfg.train_fraction = ex_fraction;
            cfg.master_seed = ex_c.seed;
            cfg.fixed_negatives = ex_fixed;
            cfg.leaky_capec_techniques = ex_leaky;
            cfg.threads = ex_threads;
            if (!ex_embeddings.empty()) {
                auto t = bron::import_embeddings(bron::read_file(ex_embeddings), &g);
                print_warnings(t.warnings);
                cfg.embeddings = std::make_shared<const bron::EmbeddingTable>(std::move(t));
            }
            const auto s = bron::run_experiment(cfg, g);
            bron::emit_results({s}, ex_c.out);
            std::cout << s.name << ": error " << bron::format_fixed(s.mean_error, 3) << ", auc "
                      << bron::format_fixed(s.mean_auc, 3) << ", f1 " << bron::format_fixed(s.mean_f1, 3) << "\n";
            return 0;
        }

        if (*grid) {
            const bron::ThreatGraph g = bron::load_canonical_file(grid_graph);
            auto configs = bron::parse_grid_config(bron::read_file(grid_config), grid_c.seed,
                                                   std::filesystem::path(grid_config).parent_path(), &g);
            for (auto& c : configs) c.threads = grid_threads;
            const auto r = bron::run_grid(configs, g);
            bron::emit_results(r.summaries, grid_c.out, &r);
            for (const auto& s : r.summaries)
                std::cout << s.name << ": error " << bron::format_fixed(s.mean_error, 3) << ", auc "
                          << bron::format_fixed(s.mean_auc, 3) << ", f1 " << bron::format_fixed(s.mean_f1, 3) << "\n";
            return 0;
        }
    } catch (const bron::InvalidConfig& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const bron::MalformedInput& e) {
        std::cerr << "error: " << e.what() << " (at " << e.location() << ")\n";
        return kDataError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDataError;
    }
    return 0;
}
