#pragma once

// Gapping resolution over basic trees annotated with orphan relations.
// Each gapped conjunct gets copy nodes for the elided predicate (and any
// embedded predicate chain), remnants are re-attached by aligning them
// against the arguments of the full conjunct, and arguments shared with
// the full conjunct receive extra edges from the copies.

#include <algorithm>
#include <cstddef>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "udgap/align.hpp"
#include "udgap/argument.hpp"
#include "udgap/conllu.hpp"
#include "udgap/embeddings.hpp"

namespace udgap {

inline bool is_alignable_argument(const std::string& label) {
    static const std::set<std::string> kinds = {
        "nsubj", "obj",    "iobj",       "csubj",    "ccomp", "xcomp",
        "obl",   "advcl",  "advmod",     "dislocated", "vocative", "expl"};
    return kinds.count(atom_base(first_atom(label))) > 0;
}

inline bool is_core_argument(const std::string& label) {
    static const std::set<std::string> kinds = {"nsubj", "obj",   "iobj",
                                                "csubj", "ccomp", "xcomp"};
    return kinds.count(atom_base(first_atom(label))) > 0;
}

// arguments of the full conjunct for one choice of embedded predicates
struct CandidateArgumentList {
    std::vector<int> chain;          // embedded predicates copied along with the head
    std::vector<ArgumentSpan> args;  // alignable arguments, surface order
};

struct CopyNode {
    int source = 0;  // basic token the copy duplicates
    NodeId id;       // empty node id the copy will occupy
};

struct GapResolution {
    int conjunct_head = 0;  // promoted remnant heading the gapped conjunct
    int full_head = 0;      // predicate of the full conjunct
    std::vector<CopyNode> copies;
    std::vector<std::pair<NodeId, Dep>> attachments;  // node -> sole incoming edge
    std::vector<std::pair<NodeId, Dep>> shared_edges; // extra edges to shared arguments
    double score = 0.0;
};

struct EnhanceStats {
    std::size_t sentences = 0;
    std::size_t gapped_sentences = 0;
    std::size_t gaps_resolved = 0;
    std::size_t copies_added = 0;
    std::size_t unresolved = 0;
};

// surface tokens with at least one orphan dependent, in surface order
inline std::vector<int> find_gapped_conjuncts(const BasicTree& tree) {
    std::vector<int> out;
    for (int v = 1; v <= tree.size(); ++v) {
        for (int c : tree.children(v)) {
            if (atom_base(first_atom(tree.token(c).deprel)) == "orphan") {
                out.push_back(v);
                break;
            }
        }
    }
    return out;
}

namespace detail {

inline bool has_orphan_child(const BasicTree& tree, int v) {
    for (int c : tree.children(v))
        if (atom_base(first_atom(tree.token(c).deprel)) == "orphan") return true;
    return false;
}

// the full conjunct's predicate: the gapped head's parent, climbing further
// up while the parent is itself gapped (chained conjuncts attach to each
// other, but every copy must duplicate the one overt predicate)
inline std::optional<int> full_head_of(const BasicTree& tree, int gapped_head) {
    int full = tree.head_of(gapped_head);
    while (full > 0 && has_orphan_child(tree, full)) full = tree.head_of(full);
    if (full <= 0) return std::nullopt;
    return full;
}

inline ArgumentSpan make_argument(const BasicTree& tree, int head, int parent,
                                  const EmbeddingTable& table,
                                  const SimilarityParams& params) {
    ArgumentSpan a;
    a.head = NodeId{head, 0};
    a.relation = tree.token(head).deprel;
    a.parent = NodeId{parent, 0};
    a.span = tree.subtree(head);
    a.head_upos = tree.token(head).upos;
    std::vector<std::string> forms;
    forms.reserve(a.span.size());
    for (int i : a.span) forms.push_back(tree.token(i).form);
    a.vec = phrase_vector(forms, table, params.lowercase_fallback);
    a.start = a.span.front();
    return a;
}

inline int leftmost_xcomp_child(const BasicTree& tree, int v) {
    for (int c : tree.children(v))
        if (atom_base(first_atom(tree.token(c).deprel)) == "xcomp") return c;
    return 0;
}

inline bool has_alignable_child(const BasicTree& tree, int v) {
    for (int c : tree.children(v))
        if (is_alignable_argument(tree.token(c).deprel)) return true;
    return false;
}

}  // namespace detail

// alignable arguments of the full head alone, surface order
inline std::vector<ArgumentSpan> extract_full_arguments(const BasicTree& tree, int full_head,
                                                        const EmbeddingTable& table,
                                                        const SimilarityParams& params) {
    std::vector<ArgumentSpan> out;
    for (int c : tree.children(full_head))
        if (is_alignable_argument(tree.token(c).deprel))
            out.push_back(detail::make_argument(tree, c, full_head, table, params));
    std::sort(out.begin(), out.end(),
              [](const ArgumentSpan& a, const ArgumentSpan& b) { return a.start < b.start; });
    return out;
}

// candidate argument lists: the full head's own arguments, then one more
// candidate per prefix of its xcomp chain, where the clausal argument is
// replaced by the embedded predicate's arguments. The chain only descends
// into predicates that bring alignable arguments of their own, and stops
// after five embedded predicates.
inline std::vector<CandidateArgumentList> expand_partial_arguments(
    const BasicTree& tree, int full_head, const EmbeddingTable& table,
    const SimilarityParams& params) {
    auto args_for_chain = [&](const std::vector<int>& chain) {
        std::vector<ArgumentSpan> elems;
        for (std::size_t k = 0; k <= chain.size(); ++k) {
            int node = k == 0 ? full_head : chain[k - 1];
            int next = k < chain.size() ? chain[k] : 0;
            for (int c : tree.children(node))
                if (c != next && is_alignable_argument(tree.token(c).deprel))
                    elems.push_back(detail::make_argument(tree, c, node, table, params));
        }
        std::sort(elems.begin(), elems.end(),
                  [](const ArgumentSpan& a, const ArgumentSpan& b) { return a.start < b.start; });
        return elems;
    };

    std::vector<CandidateArgumentList> cands;
    cands.push_back(CandidateArgumentList{{}, args_for_chain({})});
    std::vector<int> chain;
    int cur = full_head;
    while (chain.size() < 5) {
        int next = detail::leftmost_xcomp_child(tree, cur);
        if (next == 0 || !detail::has_alignable_child(tree, next)) break;
        chain.push_back(next);
        cands.push_back(CandidateArgumentList{chain, args_for_chain(chain)});
        cur = next;
    }
    return cands;
}

// remnants of a gapped conjunct: the promoted head itself (its span leaves
// out coordination material and any orphans) plus each orphan dependent,
// surface order
inline std::vector<ArgumentSpan> extract_remnants(const BasicTree& tree, int gapped_head,
                                                  const EmbeddingTable& table,
                                                  const SimilarityParams& params) {
    static const std::set<std::string> skip = {"orphan", "cc", "punct", "conj"};
    std::vector<int> excluded;
    std::vector<int> orphans;
    for (int c : tree.children(gapped_head)) {
        const std::string base = atom_base(first_atom(tree.token(c).deprel));
        if (skip.count(base)) {
            std::vector<int> sub = tree.subtree(c);
            excluded.insert(excluded.end(), sub.begin(), sub.end());
        }
        if (base == "orphan") orphans.push_back(c);
    }
    std::sort(excluded.begin(), excluded.end());

    ArgumentSpan head_arg;
    head_arg.head = NodeId{gapped_head, 0};
    head_arg.relation = tree.token(gapped_head).deprel;
    head_arg.parent = NodeId{tree.head_of(gapped_head), 0};
    for (int i : tree.subtree(gapped_head))
        if (!std::binary_search(excluded.begin(), excluded.end(), i))
            head_arg.span.push_back(i);
    head_arg.head_upos = tree.token(gapped_head).upos;
    std::vector<std::string> forms;
    for (int i : head_arg.span) forms.push_back(tree.token(i).form);
    head_arg.vec = phrase_vector(forms, table, params.lowercase_fallback);
    head_arg.start = head_arg.span.front();

    std::vector<ArgumentSpan> out{head_arg};
    for (int o : orphans)
        out.push_back(detail::make_argument(tree, o, gapped_head, table, params));
    std::sort(out.begin(), out.end(),
              [](const ArgumentSpan& a, const ArgumentSpan& b) { return a.start < b.start; });
    return out;
}

// pick the best-scoring candidate (ties go to fewer copies), then derive
// copy nodes, remnant attachments and shared-argument edges
inline GapResolution resolve_gap(const BasicTree& tree, int gapped_head, int full_head,
                                 const EmbeddingTable& table, const SimilarityParams& params) {
    std::vector<CandidateArgumentList> cands =
        expand_partial_arguments(tree, full_head, table, params);
    std::vector<ArgumentSpan> remnants = extract_remnants(tree, gapped_head, table, params);

    const CandidateArgumentList* best_cand = nullptr;
    Alignment best_aln;
    for (const CandidateArgumentList& cand : cands) {
        Alignment aln = align(
            remnants.size(), cand.args.size(),
            [&](std::size_t i, std::size_t j) { return sim(remnants[i], cand.args[j], params); },
            params.gap_penalty);
        if (!best_cand || aln.score > best_aln.score) {
            best_cand = &cand;
            best_aln = aln;
        }
    }

    GapResolution res;
    res.conjunct_head = gapped_head;
    res.full_head = full_head;
    res.score = best_aln.score;

    std::vector<int> sources{full_head};
    sources.insert(sources.end(), best_cand->chain.begin(), best_cand->chain.end());
    for (std::size_t k = 0; k < sources.size(); ++k)
        res.copies.push_back(CopyNode{sources[k], NodeId{gapped_head, static_cast<int>(k) + 1}});

    res.attachments.emplace_back(res.copies[0].id,
                                 Dep{NodeId{full_head, 0}, tree.token(gapped_head).deprel});
    for (std::size_t k = 1; k < sources.size(); ++k)
        res.attachments.emplace_back(res.copies[k].id,
                                     Dep{res.copies[k - 1].id, tree.token(sources[k]).deprel});

    std::vector<std::pair<int, NodeId>> copy_of_source;
    for (const CopyNode& c : res.copies) copy_of_source.emplace_back(c.source, c.id);
    auto copy_for = [&](NodeId parent) {
        for (const auto& [src, id] : copy_of_source)
            if (src == parent.major) return id;
        return res.copies[0].id;
    };

    std::set<int> claimed;    // full-conjunct arguments matched by a remnant
    std::set<int> aligned_g;  // remnant heads that found a correspondent
    for (const auto& [gi, fj] : best_aln.pairs) {
        const ArgumentSpan& g = remnants[gi];
        const ArgumentSpan& f = best_cand->args[fj];
        res.attachments.emplace_back(g.head, Dep{copy_for(f.parent), f.relation});
        claimed.insert(f.head.major);
        aligned_g.insert(g.head.major);
    }
    for (const ArgumentSpan& g : remnants)
        if (!aligned_g.count(g.head.major))
            res.attachments.emplace_back(g.head, Dep{res.copies[0].id, "dep"});
    for (int c : tree.children(gapped_head))
        if (atom_base(first_atom(tree.token(c).deprel)) == "cc")
            res.attachments.emplace_back(NodeId{c, 0},
                                         Dep{res.copies[0].id, tree.token(c).deprel});

    for (std::size_t k = 0; k < sources.size(); ++k) {
        int chain_next = k + 1 < sources.size() ? sources[k + 1] : 0;
        for (int c : tree.children(sources[k])) {
            if (c == chain_next || claimed.count(c)) continue;
            if (!is_core_argument(tree.token(c).deprel)) continue;
            res.shared_edges.emplace_back(NodeId{c, 0},
                                          Dep{res.copies[k].id, tree.token(c).deprel});
        }
    }
    return res;
}

namespace detail {

inline std::string sent_label(const Sentence& s) {
    for (const std::string& c : s.comments) {
        const std::string key = "# sent_id = ";
        if (c.compare(0, key.size(), key) == 0) return c.substr(key.size());
    }
    return "(no sent_id)";
}

}  // namespace detail

// rebuild the enhanced layer of one sentence: mirror the basic tree, then
// apply one resolution per gapped conjunct
inline void enhance_sentence_orphan(Sentence& s, const EmbeddingTable& table,
                                    const SimilarityParams& params,
                                    EnhanceStats* stats = nullptr) {
    s.strip_empty_nodes();
    s.clear_deps();
    for (Token& t : s.tokens)
        if (t.head) t.deps.push_back(Dep{NodeId{*t.head, 0}, t.deprel});

    if (stats) ++stats->sentences;
    std::vector<GapResolution> resolutions;
    std::vector<std::vector<Token>> copy_tokens;
    {
        BasicTree tree(s);
        std::vector<int> gapped = find_gapped_conjuncts(tree);
        if (stats && !gapped.empty()) ++stats->gapped_sentences;
        for (int gh : gapped) {
            std::optional<int> full = detail::full_head_of(tree, gh);
            if (!full) {
                std::cerr << "udgap: sentence " << detail::sent_label(s) << ": token " << gh
                          << " has orphan dependents but no governing conjunct; leaving the gap"
                          << " unresolved\n";
                if (stats) ++stats->unresolved;
                continue;
            }
            GapResolution res = resolve_gap(tree, gh, *full, table, params);
            std::vector<Token> copies;
            for (const CopyNode& c : res.copies) {
                const Token& src = tree.token(c.source);
                Token t;
                t.form = src.form;
                t.lemma = src.lemma;
                t.upos = src.upos;
                t.xpos = src.xpos;
                t.feats = src.feats;
                t.misc = "CopyOf=" + std::to_string(c.source);
                copies.push_back(std::move(t));
            }
            copy_tokens.push_back(std::move(copies));
            resolutions.push_back(std::move(res));
        }
    }

    for (std::size_t r = 0; r < resolutions.size(); ++r) {
        const GapResolution& res = resolutions[r];
        for (Token& t : copy_tokens[r])
            s.insert_empty_after(res.conjunct_head, std::move(t));
        for (const auto& [node, dep] : res.attachments) {
            Token* t = s.find(node);
            t->deps.assign(1, dep);
        }
        for (const auto& [node, dep] : res.shared_edges) s.find(node)->deps.push_back(dep);
        if (stats) {
            ++stats->gaps_resolved;
            stats->copies_added += res.copies.size();
        }
    }
}

inline EnhanceStats enhance_document_orphan(Document& doc, const EmbeddingTable& table,
                                            const SimilarityParams& params) {
    EnhanceStats stats;
    for (Sentence& s : doc.sentences) enhance_sentence_orphan(s, table, params, &stats);
    return stats;
}

}  // namespace udgap
