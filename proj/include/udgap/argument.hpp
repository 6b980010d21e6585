#pragma once

// Argument spans: the units compared when aligning the remnants of a
// gapped conjunct against the arguments of the full conjunct's head.

#include <string>
#include <vector>

#include "udgap/conllu.hpp"

namespace udgap {

struct ArgumentSpan {
    NodeId head;                    // head token of the argument phrase
    std::string relation;           // incoming relation of the head (full label)
    NodeId parent;                  // predicate the argument attaches to
    std::vector<int> span;          // surface token ids of the phrase, ascending
    std::string head_upos;
    std::vector<double> vec;        // phrase vector; empty when none was computed
    int start = 0;                  // surface position of the first span token
};

}  // namespace udgap
