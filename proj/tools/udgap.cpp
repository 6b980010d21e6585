// udgap: reconstruct elided predicates in gapping constructions.
// Subcommands: enhance (basic tree -> enhanced graph with copy nodes),
// convert (enhanced graph -> one of the basic encodings), evaluate
// (system vs gold scoring), stats (corpus tallies).

#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "udgap/conllu.hpp"
#include "udgap/convert.hpp"
#include "udgap/embeddings.hpp"
#include "udgap/eval.hpp"
#include "udgap/orphan.hpp"

namespace {

udgap::Document read_document(const std::string& path) {
    if (path == "-") return udgap::parse_document(std::cin);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return udgap::parse_document(in);
}

void write_document(const std::string& path, const udgap::Document& doc) {
    std::string text = udgap::serialize(doc);
    if (path == "-") {
        std::cout << text << std::flush;
        if (!std::cout) throw std::runtime_error("cannot write to standard output");
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("cannot write " + path);
}

// bounded parallelism over sentences; order is preserved because every
// worker writes only its own sentence slots
template <class Fn>
udgap::EnhanceStats for_each_sentence(udgap::Document& doc, int jobs, Fn fn) {
    std::size_t n = doc.sentences.size();
    if (jobs <= 0) {
        unsigned hw = std::thread::hardware_concurrency();
        jobs = hw ? static_cast<int>(hw) : 1;
    }
    if (static_cast<std::size_t>(jobs) > n) jobs = n ? static_cast<int>(n) : 1;

    udgap::EnhanceStats total;
    if (jobs <= 1) {
        for (udgap::Sentence& s : doc.sentences) fn(s, total);
        return total;
    }

    std::atomic<std::size_t> next{0};
    std::vector<udgap::EnhanceStats> parts(static_cast<std::size_t>(jobs));
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int t = 0; t < jobs; ++t)
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = next++; i < n; i = next++)
                    fn(doc.sentences[i], parts[static_cast<std::size_t>(t)]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                next = n;
            }
        });
    for (std::thread& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    for (const udgap::EnhanceStats& p : parts) {
        total.sentences += p.sentences;
        total.gapped_sentences += p.gapped_sentences;
        total.gaps_resolved += p.gaps_resolved;
        total.copies_added += p.copies_added;
        total.unresolved += p.unresolved;
    }
    return total;
}

std::string score_cell(double value, bool vacuous) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f%s", value, vacuous ? " (vacuous)" : "");
    return buf;
}

void table_row(const std::string& key, const std::string& value) {
    std::printf("%-22s %s\n", key.c_str(), value.c_str());
}

void print_enhanced_report(const udgap::EvalReport& r) {
    table_row("UP", score_cell(r.up, r.up_vacuous));
    table_row("UR", score_cell(r.ur, r.ur_vacuous));
    table_row("LP", score_cell(r.lp, r.lp_vacuous));
    table_row("LR", score_cell(r.lr, r.lr_vacuous));
    table_row("SAcc", score_cell(r.sentence_accuracy, r.sacc_vacuous));
    table_row("matched unlabeled", std::to_string(r.matched_unlabeled));
    table_row("matched labeled", std::to_string(r.matched_labeled));
    table_row("system edges", std::to_string(r.system_edges));
    table_row("gold edges", std::to_string(r.gold_edges));
    table_row("gapped sentences", std::to_string(r.gapped_sentences));
    table_row("correct sentences", std::to_string(r.correct_sentences));
    std::printf("\n");
    std::printf("up=%.10g\n", r.up);
    std::printf("ur=%.10g\n", r.ur);
    std::printf("lp=%.10g\n", r.lp);
    std::printf("lr=%.10g\n", r.lr);
    std::printf("sacc=%.10g\n", r.sentence_accuracy);
    std::printf("matched_unlabeled=%ld\n", r.matched_unlabeled);
    std::printf("matched_labeled=%ld\n", r.matched_labeled);
    std::printf("system_edges=%ld\n", r.system_edges);
    std::printf("gold_edges=%ld\n", r.gold_edges);
    std::printf("gapped_sentences=%ld\n", r.gapped_sentences);
    std::printf("correct_sentences=%ld\n", r.correct_sentences);
    std::printf("up_vacuous=%d\n", r.up_vacuous ? 1 : 0);
    std::printf("ur_vacuous=%d\n", r.ur_vacuous ? 1 : 0);
    std::printf("lp_vacuous=%d\n", r.lp_vacuous ? 1 : 0);
    std::printf("lr_vacuous=%d\n", r.lr_vacuous ? 1 : 0);
    std::printf("sacc_vacuous=%d\n", r.sacc_vacuous ? 1 : 0);
}

void print_remnant_report(const udgap::RemnantReport& r) {
    table_row("UAS_g", score_cell(r.uas, r.vacuous));
    table_row("LAS_g", score_cell(r.las, r.vacuous));
    table_row("remnant heads", std::to_string(r.remnant_heads));
    table_row("correct heads", std::to_string(r.correct_heads));
    table_row("correct labeled", std::to_string(r.correct_labeled));
    std::printf("\n");
    std::printf("uas_g=%.10g\n", r.uas);
    std::printf("las_g=%.10g\n", r.las);
    std::printf("remnant_heads=%ld\n", r.remnant_heads);
    std::printf("correct_heads=%ld\n", r.correct_heads);
    std::printf("correct_labeled=%ld\n", r.correct_labeled);
    std::printf("vacuous=%d\n", r.vacuous ? 1 : 0);
}

void print_stats(const udgap::CorpusStats& st) {
    table_row("sentences", std::to_string(st.sentences));
    table_row("tokens", std::to_string(st.tokens));
    table_row("gapped sentences", std::to_string(st.gapped_sentences));
    table_row("copy nodes", std::to_string(st.copy_nodes));
    table_row("composite labels", std::to_string(st.composite_labels.size()));
    for (const std::string& label : st.composite_labels) table_row("  " + label, "");
    for (const auto& [type, count] : st.gap_types)
        table_row("gap type " + type, std::to_string(count));
    std::printf("\n");
    std::printf("sentences=%ld\n", st.sentences);
    std::printf("tokens=%ld\n", st.tokens);
    std::printf("gapped_sentences=%ld\n", st.gapped_sentences);
    std::printf("copy_nodes=%ld\n", st.copy_nodes);
    std::printf("composite_labels=%zu\n", st.composite_labels.size());
    for (const std::string& label : st.composite_labels)
        std::printf("composite_label=%s\n", label.c_str());
    for (const auto& [type, count] : st.gap_types)
        std::printf("gap_type.%s=%ld\n", type.c_str(), count);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"reconstructs elided predicates in gapping constructions"};
    app.require_subcommand(1);

    std::string input = "-";
    std::string output = "-";
    std::string embeddings;
    std::string method = "orphan";
    double pos_penalty = -2.0;
    double gap_penalty = -4.0;
    bool literal_indicator = false;
    bool pos_only = false;
    int jobs = 0;

    CLI::App* enhance = app.add_subcommand(
        "enhance", "rebuild elided predicates as copy nodes in the enhanced graph");
    enhance->add_option("--method", method, "gap encoding of the input")
        ->check(CLI::IsMember({"orphan", "composite"}))
        ->capture_default_str();
    enhance->add_option("-i,--input", input, "CoNLL-U input file, - for stdin")
        ->capture_default_str();
    enhance->add_option("-o,--output", output, "CoNLL-U output file, - for stdout")
        ->capture_default_str();
    enhance->add_option("-e,--embeddings", embeddings,
                        "word embedding table (GloVe or word2vec text, optionally .gz)");
    enhance->add_option("--pos-penalty", pos_penalty, "similarity penalty on a POS mismatch")
        ->capture_default_str();
    enhance->add_option("--gap-penalty", gap_penalty, "alignment penalty for skipping a slot")
        ->capture_default_str();
    enhance->add_flag("--literal-indicator", literal_indicator,
                      "penalize POS matches instead of mismatches");
    enhance->add_flag("--pos-only", pos_only,
                      "score alignments without the embedding distance term");
    enhance->add_option("-j,--jobs", jobs, "worker threads, 0 for one per core")
        ->capture_default_str();

    std::string to = "composite";
    CLI::App* convert = app.add_subcommand(
        "convert", "project an enhanced graph onto a basic-only gap encoding");
    convert->add_option("--to", to, "target encoding")
        ->check(CLI::IsMember({"composite", "orphan"}))
        ->required();
    convert->add_option("-i,--input", input, "CoNLL-U input file, - for stdin")
        ->capture_default_str();
    convert->add_option("-o,--output", output, "CoNLL-U output file, - for stdout")
        ->capture_default_str();

    std::string system_path;
    std::string gold_path;
    std::string metric = "enhanced";
    CLI::App* evaluate = app.add_subcommand("evaluate", "score a system document against gold");
    evaluate->add_option("--system", system_path, "system CoNLL-U file")->required();
    evaluate->add_option("--gold", gold_path, "gold CoNLL-U file")->required();
    evaluate->add_option("--metric", metric, "what to score")
        ->check(CLI::IsMember({"enhanced", "remnant"}))
        ->capture_default_str();

    CLI::App* stats = app.add_subcommand("stats", "tally gapping material in a corpus");
    stats->add_option("-i,--input", input, "CoNLL-U input file, - for stdin")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*enhance) {
            udgap::Document doc = read_document(input);
            udgap::EnhanceStats total;
            if (method == "orphan") {
                if (embeddings.empty() && !pos_only)
                    throw std::runtime_error(
                        "enhance --method orphan needs --embeddings (or --pos-only)");
                udgap::EmbeddingTable table;
                if (!embeddings.empty()) table = udgap::load_embeddings(embeddings);
                udgap::SimilarityParams params;
                params.pos_mismatch_penalty = pos_penalty;
                params.gap_penalty = gap_penalty;
                params.literal_indicator = literal_indicator;
                params.pos_only = pos_only;
                total = for_each_sentence(
                    doc, jobs, [&](udgap::Sentence& s, udgap::EnhanceStats& st) {
                        udgap::enhance_sentence_orphan(s, table, params, &st);
                    });
            } else {
                total = for_each_sentence(
                    doc, jobs, [](udgap::Sentence& s, udgap::EnhanceStats& st) {
                        udgap::enhance_sentence_composite(s, &st);
                    });
            }
            write_document(output, doc);
            std::cerr << "enhance: " << total.sentences << " sentences, "
                      << total.gapped_sentences << " with gaps; " << total.gaps_resolved
                      << " gaps resolved, " << total.unresolved << " unresolved; "
                      << total.copies_added << " copies inserted\n";
        } else if (*convert) {
            udgap::Document doc = read_document(input);
            if (to == "composite")
                udgap::enhanced_to_composite(doc);
            else
                udgap::enhanced_to_basic_orphan(doc);
            write_document(output, doc);
        } else if (*evaluate) {
            udgap::Document system = read_document(system_path);
            udgap::Document gold = read_document(gold_path);
            if (metric == "enhanced")
                print_enhanced_report(udgap::score_enhanced(system, gold));
            else
                print_remnant_report(udgap::score_remnant_attachment(system, gold));
        } else if (*stats) {
            print_stats(udgap::corpus_stats(read_document(input)));
        }
    } catch (const std::exception& e) {
        std::cerr << "udgap: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
