#pragma once

// Gapping resolution over basic trees that encode gapped conjuncts with
// composite labels such as "conj>nsubj": dependents of the full head whose
// label spells out the path the edge would take through the elided
// predicates. Segmentation splits those dependents into conjunct groups,
// each group gets a copy chain by walking its longest path, and the basic
// columns are rewritten to the equivalent orphan analysis.

#include <algorithm>
#include <cstddef>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "udgap/conllu.hpp"
#include "udgap/orphan.hpp"

namespace udgap {

// precedence when choosing which remnant heads the gapped conjunct
inline int promotion_rank(const std::string& base_atom) {
    static const std::vector<std::string> order = {"nsubj", "obj",   "iobj",   "csubj", "ccomp",
                                                   "xcomp", "obl",   "advmod", "advcl"};
    for (std::size_t i = 0; i < order.size(); ++i)
        if (base_atom == order[i]) return static_cast<int>(i);
    return static_cast<int>(order.size());
}

struct ConjunctGroup {
    int head = 0;              // token the composite-labeled dependents hang off
    std::vector<int> members;  // surface order
};

// split the composite-labeled dependents of each head into conjunct groups,
// left to right: a new group starts when the member's final relation already
// occurs in the current group, or on a bare "conj>cc" after a started group
inline std::vector<ConjunctGroup> segment_conjuncts(const BasicTree& tree) {
    std::vector<ConjunctGroup> groups;
    for (int v = 1; v <= tree.size(); ++v) {
        ConjunctGroup cur{v, {}};
        std::vector<std::string> finals;
        for (int c : tree.children(v)) {
            const std::string& label = tree.token(c).deprel;
            if (!is_composite(label)) continue;
            const std::string fin = last_atom(label);
            bool repeat = std::find(finals.begin(), finals.end(), fin) != finals.end();
            if (!cur.members.empty() && (repeat || label == "conj>cc")) {
                groups.push_back(cur);
                cur.members.clear();
                finals.clear();
            }
            cur.members.push_back(c);
            finals.push_back(fin);
        }
        if (!cur.members.empty()) groups.push_back(cur);
    }
    return groups;
}

struct CompositeResolution {
    int full_head = 0;
    int promoted = 0;  // member whose final relation ranks highest; anchors the copies
    std::vector<CopyNode> copies;
    std::vector<std::pair<NodeId, Dep>> attachments;
    std::vector<std::pair<NodeId, Dep>> shared_edges;
    std::vector<int> unwalkable;  // members whose path is deeper than the copy chain
};

namespace detail {

inline int leftmost_child_with_label(const BasicTree& tree, int v, const std::string& label) {
    for (int c : tree.children(v))
        if (tree.token(c).deprel == label) return c;
    return 0;
}

}  // namespace detail

inline CompositeResolution resolve_conjunct_group(const BasicTree& tree,
                                                  const ConjunctGroup& group) {
    CompositeResolution res;
    res.full_head = group.head;

    res.promoted = group.members.front();
    int best_rank = promotion_rank(atom_base(last_atom(tree.token(res.promoted).deprel)));
    for (int m : group.members) {
        int rank = promotion_rank(atom_base(last_atom(tree.token(m).deprel)));
        if (rank < best_rank) {
            best_rank = rank;
            res.promoted = m;
        }
    }

    const std::vector<std::string>* longest = nullptr;
    std::vector<std::vector<std::string>> paths;
    for (int m : group.members) paths.push_back(split_label(tree.token(m).deprel));
    for (const auto& p : paths)
        if (!longest || p.size() > longest->size()) longest = &p;

    // one copy per proper prefix of the longest path, walking the basic tree
    // from the full head along the path's atoms
    std::vector<int> sources{group.head};
    for (std::size_t d = 1; d + 1 < longest->size(); ++d) {
        int next = detail::leftmost_child_with_label(tree, sources.back(), (*longest)[d]);
        if (next == 0) break;
        sources.push_back(next);
    }
    for (std::size_t k = 0; k < sources.size(); ++k)
        res.copies.push_back(CopyNode{sources[k], NodeId{res.promoted, static_cast<int>(k) + 1}});

    res.attachments.emplace_back(res.copies[0].id,
                                 Dep{NodeId{group.head, 0}, (*longest)[0]});
    for (std::size_t k = 1; k < sources.size(); ++k)
        res.attachments.emplace_back(res.copies[k].id, Dep{res.copies[k - 1].id, (*longest)[k]});

    // members attach to the copy at their path's depth with their final relation
    std::vector<std::vector<std::string>> rels_on_copy(res.copies.size());
    for (std::size_t i = 0; i < group.members.size(); ++i) {
        int m = group.members[i];
        std::size_t depth = paths[i].size() - 1;
        if (depth > res.copies.size()) {
            res.unwalkable.push_back(m);
            res.attachments.emplace_back(NodeId{m, 0}, Dep{res.copies.back().id, "dep"});
            continue;
        }
        res.attachments.emplace_back(NodeId{m, 0},
                                     Dep{res.copies[depth - 1].id, paths[i].back()});
        rels_on_copy[depth - 1].push_back(paths[i].back());
    }

    // shared core arguments of each copied predicate, unless the relation is
    // already filled by a member on that copy or leads to the next copy
    for (std::size_t k = 0; k < sources.size(); ++k) {
        int chain_next = k + 1 < sources.size() ? sources[k + 1] : 0;
        for (int c : tree.children(sources[k])) {
            if (c == chain_next) continue;
            const std::string& rel = tree.token(c).deprel;
            if (!is_core_argument(rel) || is_composite(rel)) continue;
            if (std::find(rels_on_copy[k].begin(), rels_on_copy[k].end(), rel) !=
                rels_on_copy[k].end())
                continue;
            res.shared_edges.emplace_back(NodeId{c, 0}, Dep{res.copies[k].id, rel});
        }
    }
    return res;
}

// rebuild the enhanced layer from the composite encoding and rewrite the
// basic columns of the group members to the orphan analysis
inline void enhance_sentence_composite(Sentence& s, EnhanceStats* stats = nullptr) {
    s.strip_empty_nodes();
    s.clear_deps();
    for (Token& t : s.tokens)
        if (t.head && !is_composite(t.deprel)) t.deps.push_back(Dep{NodeId{*t.head, 0}, t.deprel});

    if (stats) ++stats->sentences;
    std::vector<CompositeResolution> resolutions;
    std::vector<std::vector<Token>> copy_tokens;
    {
        BasicTree tree(s);
        std::vector<ConjunctGroup> groups = segment_conjuncts(tree);
        if (stats && !groups.empty()) ++stats->gapped_sentences;
        for (const ConjunctGroup& g : groups) {
            CompositeResolution res = resolve_conjunct_group(tree, g);
            for (int m : res.unwalkable)
                std::cerr << "udgap: sentence " << detail::sent_label(s) << ": token " << m
                          << " has relation path '" << tree.token(m).deprel
                          << "' deeper than the recoverable predicate chain; attaching dep\n";
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
        const CompositeResolution& res = resolutions[r];
        for (Token& t : copy_tokens[r]) s.insert_empty_after(res.promoted, std::move(t));
        for (const auto& [node, dep] : res.attachments) s.find(node)->deps.assign(1, dep);
        for (const auto& [node, dep] : res.shared_edges) s.find(node)->deps.push_back(dep);

        // basic rewrite: the promoted member heads the conjunct, the others
        // become its orphans (or keep their coordinating relation)
        Token* prom = s.find(NodeId{res.promoted, 0});
        prom->deprel = first_atom(prom->deprel);
        for (const auto& [node, dep] : res.attachments) {
            if (node.is_empty_node() || node.major == res.promoted) continue;
            Token* t = s.find(node);
            const std::string fin = last_atom(t->deprel);
            t->head = res.promoted;
            t->deprel = atom_base(fin) == "cc" ? fin : "orphan";
        }
        if (stats) {
            ++stats->gaps_resolved;
            stats->copies_added += res.copies.size();
            stats->unresolved += res.unwalkable.size();
        }
    }
}

inline EnhanceStats enhance_document_composite(Document& doc) {
    EnhanceStats stats;
    for (Sentence& s : doc.sentences) enhance_sentence_composite(s, &stats);
    return stats;
}

}  // namespace udgap
