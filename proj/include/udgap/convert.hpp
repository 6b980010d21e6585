#pragma once

// Inverse converters: project an enhanced graph with copy nodes back onto
// one of the two basic-only encodings of gapping. The composite encoding
// flattens every remnant onto the overt head with a relation path label;
// the orphan encoding promotes one remnant per gap and attaches the rest
// to it. Both drop the copy nodes and the enhanced layer.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "udgap/composite.hpp"
#include "udgap/conllu.hpp"

namespace udgap {

namespace detail {

// true when every incoming enhanced edge of the token comes from a copy
// node; shared arguments keep their surface edge and stay where they are
inline bool only_copy_heads(const Token& t) {
    if (t.deps.empty()) return false;
    for (const Dep& d : t.deps)
        if (!d.head.is_empty_node()) return false;
    return true;
}

}  // namespace detail

inline void enhanced_to_composite(Sentence& s) {
    struct Rewrite {
        int token = 0;
        int head = 0;
        std::string label;
    };
    std::vector<Rewrite> rewrites;
    for (const Token& t : s.tokens) {
        if (t.is_empty_node() || !detail::only_copy_heads(t)) continue;
        const Dep& d = t.deps.front();
        std::vector<std::string> labels{d.rel};
        NodeId cur = d.head;
        int guard = 0;
        while (cur.is_empty_node() && ++guard < 64) {
            const Token* c = s.find(cur);
            if (!c || c->deps.empty()) break;
            labels.insert(labels.begin(), c->deps.front().rel);
            cur = c->deps.front().head;
        }
        rewrites.push_back(Rewrite{t.id.major, cur.major, join_label(labels)});
    }
    for (const Rewrite& r : rewrites) {
        Token* t = s.find(NodeId{r.token, 0});
        t->head = r.head;
        t->deprel = r.label;
    }
    s.strip_empty_nodes();
    s.clear_deps();
}

inline void enhanced_to_basic_orphan(Sentence& s) {
    struct Remnant {
        int token = 0;
        std::string rel;  // relation on the copy edge
    };
    struct Gap {
        int surface_head = 0;   // node the first copy attaches to
        std::string chain_rel;  // relation of the first copy's incoming edge
        std::vector<Remnant> remnants;
    };
    std::map<int, Gap> gaps;  // keyed by the copies' anchor token

    for (const Token& t : s.tokens) {
        if (!t.is_empty_node() || t.deps.empty()) continue;
        if (t.id.minor == 1) {
            Gap& g = gaps[t.id.major];
            g.surface_head = t.deps.front().head.major;
            g.chain_rel = t.deps.front().rel;
        } else {
            gaps[t.id.major];
        }
    }
    for (const Token& t : s.tokens) {
        if (t.is_empty_node() || !detail::only_copy_heads(t)) continue;
        const Dep& d = t.deps.front();
        auto it = gaps.find(d.head.major);
        if (it == gaps.end()) continue;
        it->second.remnants.push_back(Remnant{t.id.major, d.rel});
    }

    for (const auto& [anchor, gap] : gaps) {
        if (gap.remnants.empty() || gap.chain_rel.empty()) continue;
        const Remnant* promoted = &gap.remnants.front();
        for (const Remnant& r : gap.remnants)
            if (promotion_rank(atom_base(first_atom(r.rel))) <
                promotion_rank(atom_base(first_atom(promoted->rel))))
                promoted = &r;
        Token* prom = s.find(NodeId{promoted->token, 0});
        prom->head = gap.surface_head;
        prom->deprel = gap.chain_rel;
        for (const Remnant& r : gap.remnants) {
            if (r.token == promoted->token) continue;
            Token* t = s.find(NodeId{r.token, 0});
            t->head = promoted->token;
            t->deprel = atom_base(first_atom(r.rel)) == "cc" ? r.rel : "orphan";
        }
    }
    s.strip_empty_nodes();
    s.clear_deps();
}

inline void enhanced_to_composite(Document& doc) {
    for (Sentence& s : doc.sentences) enhanced_to_composite(s);
}

inline void enhanced_to_basic_orphan(Document& doc) {
    for (Sentence& s : doc.sentences) enhanced_to_basic_orphan(s);
}

}  // namespace udgap
