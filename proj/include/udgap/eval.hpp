#pragma once

// Scoring for reconstructed gapping graphs. score_enhanced compares the
// copy nodes and their edges between a system and a gold document,
// score_remnant_attachment checks the basic-tree rows of remnant heads,
// and corpus_stats tallies gapping material in a single document.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "udgap/conllu.hpp"

namespace udgap {

namespace detail {

// value of one key in a MISC column, "" when absent
inline std::string misc_value(const std::string& misc, const std::string& key) {
    if (misc == "_") return "";
    std::size_t pos = 0;
    while (pos < misc.size()) {
        std::size_t end = misc.find('|', pos);
        if (end == std::string::npos) end = misc.size();
        std::size_t eq = misc.find('=', pos);
        if (eq != std::string::npos && eq < end &&
            eq - pos == key.size() && misc.compare(pos, eq - pos, key) == 0)
            return misc.substr(eq + 1, end - eq - 1);
        pos = end + 1;
    }
    return "";
}

inline void require_same_tokens(const Document& system, const Document& gold) {
    if (system.sentences.size() != gold.sentences.size())
        throw format_error("documents differ: " + std::to_string(system.sentences.size()) +
                           " vs " + std::to_string(gold.sentences.size()) + " sentences");
    for (std::size_t i = 0; i < gold.sentences.size(); ++i) {
        std::vector<const Token*> a, b;
        for (const Token& t : system.sentences[i].tokens)
            if (!t.is_empty_node()) a.push_back(&t);
        for (const Token& t : gold.sentences[i].tokens)
            if (!t.is_empty_node()) b.push_back(&t);
        bool same = a.size() == b.size();
        for (std::size_t k = 0; same && k < a.size(); ++k)
            same = a[k]->id == b[k]->id && a[k]->form == b[k]->form;
        if (!same)
            throw format_error("sentence " + std::to_string(i + 1) +
                               ": token mismatch between system and gold");
    }
}

// copies pair up by (source token, position in the chain); when one key
// names several copies they pair up in order of appearance
inline std::map<NodeId, NodeId> match_copies(const Sentence& system, const Sentence& gold) {
    auto keyed = [](const Sentence& s) {
        std::map<std::pair<int, int>, std::vector<NodeId>> m;
        for (const Token& t : s.tokens) {
            if (!t.is_empty_node()) continue;
            std::string v = misc_value(t.misc, "CopyOf");
            int source = all_digits(v) && v.size() <= 9 ? std::stoi(v) : 0;
            m[{source, t.id.minor}].push_back(t.id);
        }
        return m;
    };
    auto gold_keys = keyed(gold);
    auto system_keys = keyed(system);
    std::map<NodeId, NodeId> remap;
    int unmatched = 0;
    for (const auto& [key, ids] : system_keys) {
        auto it = gold_keys.find(key);
        for (std::size_t i = 0; i < ids.size(); ++i) {
            if (it != gold_keys.end() && i < it->second.size())
                remap[ids[i]] = it->second[i];
            else
                remap[ids[i]] = NodeId{-(++unmatched), 1};
        }
    }
    return remap;
}

using ScoredEdge = std::tuple<int, int, int, int, std::string>;

// an edge counts when a copy node is on either end and the dependent is
// neither punctuation nor a coordinating conjunction
inline void collect_scored(const Sentence& s, const std::map<NodeId, NodeId>* remap,
                           std::vector<ScoredEdge>& out) {
    for (const Token& t : s.tokens)
        for (const Dep& d : t.deps) {
            if (!t.is_empty_node() && !d.head.is_empty_node()) continue;
            std::string base = atom_base(d.rel);
            if (base == "punct" || base == "cc") continue;
            NodeId h = d.head;
            NodeId c = t.id;
            if (remap) {
                if (auto it = remap->find(h); it != remap->end()) h = it->second;
                if (auto it = remap->find(c); it != remap->end()) c = it->second;
            }
            out.emplace_back(h.major, h.minor, c.major, c.minor, d.rel);
        }
}

template <class T>
long sorted_intersection_size(const std::vector<T>& a, const std::vector<T>& b) {
    long n = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j])
            ++i;
        else if (b[j] < a[i])
            ++j;
        else {
            ++n;
            ++i;
            ++j;
        }
    }
    return n;
}

}  // namespace detail

struct EvalReport {
    double up = 100.0;
    double ur = 100.0;
    double lp = 100.0;
    double lr = 100.0;
    double sentence_accuracy = 100.0;
    long matched_unlabeled = 0;
    long matched_labeled = 0;
    long system_edges = 0;
    long gold_edges = 0;
    long gapped_sentences = 0;
    long correct_sentences = 0;
    // set when the corresponding denominator was zero and the score is
    // vacuously 100
    bool up_vacuous = false;
    bool ur_vacuous = false;
    bool lp_vacuous = false;
    bool lr_vacuous = false;
    bool sacc_vacuous = false;
    std::vector<bool> sentence_correct;  // one entry per sentence pair
};

inline EvalReport score_enhanced(const Document& system, const Document& gold) {
    detail::require_same_tokens(system, gold);
    EvalReport r;
    for (std::size_t i = 0; i < gold.sentences.size(); ++i) {
        const Sentence& sys = system.sentences[i];
        const Sentence& gld = gold.sentences[i];
        auto remap = detail::match_copies(sys, gld);
        std::vector<detail::ScoredEdge> se, ge;
        detail::collect_scored(sys, &remap, se);
        detail::collect_scored(gld, nullptr, ge);
        std::sort(se.begin(), se.end());
        std::sort(ge.begin(), ge.end());

        std::vector<std::tuple<int, int, int, int>> su, gu;
        su.reserve(se.size());
        gu.reserve(ge.size());
        for (const auto& [hm, hn, cm, cn, rel] : se) su.emplace_back(hm, hn, cm, cn);
        for (const auto& [hm, hn, cm, cn, rel] : ge) gu.emplace_back(hm, hn, cm, cn);

        r.system_edges += static_cast<long>(se.size());
        r.gold_edges += static_cast<long>(ge.size());
        r.matched_labeled += detail::sorted_intersection_size(se, ge);
        r.matched_unlabeled += detail::sorted_intersection_size(su, gu);

        bool gapped = false;
        for (const Token& t : gld.tokens)
            if (t.is_empty_node()) gapped = true;
        bool correct = se == ge;
        r.sentence_correct.push_back(correct);
        if (gapped) {
            ++r.gapped_sentences;
            if (correct) ++r.correct_sentences;
        }
    }
    auto pct = [](long num, long den, double& out, bool& vacuous) {
        if (den == 0)
            vacuous = true;  // out stays 100
        else
            out = 100.0 * static_cast<double>(num) / static_cast<double>(den);
    };
    pct(r.matched_unlabeled, r.system_edges, r.up, r.up_vacuous);
    pct(r.matched_unlabeled, r.gold_edges, r.ur, r.ur_vacuous);
    pct(r.matched_labeled, r.system_edges, r.lp, r.lp_vacuous);
    pct(r.matched_labeled, r.gold_edges, r.lr, r.lr_vacuous);
    pct(r.correct_sentences, r.gapped_sentences, r.sentence_accuracy, r.sacc_vacuous);
    return r;
}

struct RemnantReport {
    double uas = 100.0;
    double las = 100.0;
    long remnant_heads = 0;
    long correct_heads = 0;
    long correct_labeled = 0;
    bool vacuous = false;
};

// attachment accuracy over the gold remnant heads: orphan dependents plus
// the promoted conjunct heads they hang off (tokens with an orphan
// dependent and a non-root head); punctuation never counts
inline RemnantReport score_remnant_attachment(const Document& system, const Document& gold) {
    detail::require_same_tokens(system, gold);
    RemnantReport r;
    for (std::size_t i = 0; i < gold.sentences.size(); ++i) {
        const Sentence& gld = gold.sentences[i];
        const Sentence& sys = system.sentences[i];
        std::set<int> has_orphan_dependent;
        for (const Token& t : gld.tokens)
            if (!t.is_empty_node() && t.head && atom_base(t.deprel) == "orphan")
                has_orphan_dependent.insert(*t.head);
        for (const Token& t : gld.tokens) {
            if (t.is_empty_node()) continue;
            std::string base = atom_base(t.deprel);
            if (base == "punct") continue;
            bool remnant = base == "orphan" ||
                           (has_orphan_dependent.count(t.id.major) && t.head && *t.head != 0);
            if (!remnant) continue;
            ++r.remnant_heads;
            const Token* st = sys.find(t.id);
            if (!st || st->head != t.head) continue;
            ++r.correct_heads;
            if (st->deprel == t.deprel) ++r.correct_labeled;
        }
    }
    if (r.remnant_heads == 0) {
        r.vacuous = true;  // scores stay 100
    } else {
        r.uas = 100.0 * static_cast<double>(r.correct_heads) / static_cast<double>(r.remnant_heads);
        r.las = 100.0 * static_cast<double>(r.correct_labeled) / static_cast<double>(r.remnant_heads);
    }
    return r;
}

struct CorpusStats {
    long sentences = 0;
    long tokens = 0;
    long gapped_sentences = 0;
    long copy_nodes = 0;
    std::set<std::string> composite_labels;
    std::map<std::string, long> gap_types;  // from GapType MISC annotations
};

inline CorpusStats corpus_stats(const Document& doc) {
    CorpusStats st;
    st.sentences = static_cast<long>(doc.sentences.size());
    for (const Sentence& s : doc.sentences) {
        bool gapped = false;
        for (const Token& t : s.tokens) {
            if (t.is_empty_node()) {
                ++st.copy_nodes;
                gapped = true;
            } else {
                ++st.tokens;
                if (atom_base(t.deprel) == "orphan") gapped = true;
                if (is_composite(t.deprel)) {
                    st.composite_labels.insert(t.deprel);
                    gapped = true;
                }
            }
            std::string gt = detail::misc_value(t.misc, "GapType");
            if (!gt.empty()) ++st.gap_types[gt];
        }
        if (gapped) ++st.gapped_sentences;
    }
    return st;
}

}  // namespace udgap
