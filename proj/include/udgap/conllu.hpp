#pragma once

// CoNLL-U documents: basic trees plus enhanced dependency graphs with
// empty nodes. Round-trips files byte-exactly and knows how to split
// composite relation labels such as "conj>obj".

#include <algorithm>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace udgap {

class parse_error : public std::runtime_error {
public:
    parse_error(std::size_t line, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class format_error : public std::runtime_error {
public:
    explicit format_error(const std::string& msg) : std::runtime_error(msg) {}
};

class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// id of a surface token (minor == 0) or of an empty node i.j (minor == j >= 1)
struct NodeId {
    int major = 0;
    int minor = 0;

    bool is_empty_node() const { return minor > 0; }

    std::string str() const {
        if (minor == 0) return std::to_string(major);
        return std::to_string(major) + "." + std::to_string(minor);
    }

    friend bool operator==(const NodeId& a, const NodeId& b) {
        return a.major == b.major && a.minor == b.minor;
    }
    friend bool operator!=(const NodeId& a, const NodeId& b) { return !(a == b); }
    friend bool operator<(const NodeId& a, const NodeId& b) {
        if (a.major != b.major) return a.major < b.major;
        return a.minor < b.minor;
    }
};

inline bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

inline std::optional<NodeId> try_parse_node_id(const std::string& s) {
    std::size_t dot = s.find('.');
    if (dot == std::string::npos) {
        if (!all_digits(s) || s.size() > 9) return std::nullopt;
        return NodeId{std::stoi(s), 0};
    }
    std::string major = s.substr(0, dot);
    std::string minor = s.substr(dot + 1);
    if (!all_digits(major) || !all_digits(minor) || major.size() > 9 || minor.size() > 9)
        return std::nullopt;
    NodeId id{std::stoi(major), std::stoi(minor)};
    if (id.minor == 0) return std::nullopt;  // "6.0" is not a legal empty node id
    return id;
}

// one entry of the DEPS column: an incoming edge head:rel
struct Dep {
    NodeId head;
    std::string rel;

    friend bool operator==(const Dep& a, const Dep& b) { return a.head == b.head && a.rel == b.rel; }
    friend bool operator<(const Dep& a, const Dep& b) {
        if (!(a.head == b.head)) return a.head < b.head;
        return a.rel < b.rel;
    }
};

struct Token {
    NodeId id;
    std::string form = "_";
    std::string lemma = "_";
    std::string upos = "_";
    std::string xpos = "_";
    std::string feats = "_";
    std::optional<int> head;     // basic head token id, 0 for root, nullopt for "_"
    std::string deprel = "_";
    std::vector<Dep> deps;       // incoming enhanced edges; empty means "_"
    std::string misc = "_";

    bool is_empty_node() const { return id.is_empty_node(); }

    friend bool operator==(const Token& a, const Token& b) {
        auto da = a.deps, db = b.deps;
        std::sort(da.begin(), da.end());
        std::sort(db.begin(), db.end());
        return a.id == b.id && a.form == b.form && a.lemma == b.lemma && a.upos == b.upos &&
               a.xpos == b.xpos && a.feats == b.feats && a.head == b.head &&
               a.deprel == b.deprel && da == db && a.misc == b.misc;
    }
    friend bool operator!=(const Token& a, const Token& b) { return !(a == b); }
};

struct Sentence {
    std::vector<std::string> comments;            // verbatim "#..." lines
    std::vector<Token> tokens;                    // file order: token i, then i.1, i.2, ...
    std::map<int, std::vector<std::string>> mwt;  // raw multiword range lines, keyed by range start

    std::size_t surface_size() const {
        std::size_t n = 0;
        for (const Token& t : tokens)
            if (!t.is_empty_node()) ++n;
        return n;
    }

    const Token* find(NodeId id) const {
        for (const Token& t : tokens)
            if (t.id == id) return &t;
        return nullptr;
    }
    Token* find(NodeId id) {
        for (Token& t : tokens)
            if (t.id == id) return &t;
        return nullptr;
    }

    bool has_enhanced() const {
        for (const Token& t : tokens)
            if (!t.deps.empty()) return true;
        return false;
    }

    bool has_empty_nodes() const {
        for (const Token& t : tokens)
            if (t.is_empty_node()) return true;
        return false;
    }

    void strip_empty_nodes() {
        tokens.erase(std::remove_if(tokens.begin(), tokens.end(),
                                    [](const Token& t) { return t.is_empty_node(); }),
                     tokens.end());
    }

    void clear_deps() {
        for (Token& t : tokens) t.deps.clear();
    }

    // insert an empty node after surface token `anchor` and any existing
    // empty nodes anchored there; assigns the next free minor id
    Token& insert_empty_after(int anchor, Token t) {
        int minor = 0;
        std::size_t pos = tokens.size();
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (tokens[i].id.major == anchor) {
                pos = i + 1;
                if (tokens[i].id.minor > minor) minor = tokens[i].id.minor;
            } else if (tokens[i].id.major > anchor) {
                break;
            }
        }
        if (anchor == 0) pos = 0;
        t.id = NodeId{anchor, minor + 1};
        return *tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(pos), std::move(t));
    }

    friend bool operator==(const Sentence& a, const Sentence& b) {
        return a.comments == b.comments && a.tokens == b.tokens && a.mwt == b.mwt;
    }
    friend bool operator!=(const Sentence& a, const Sentence& b) { return !(a == b); }
};

struct Document {
    std::vector<Sentence> sentences;

    friend bool operator==(const Document& a, const Document& b) {
        return a.sentences == b.sentences;
    }
};

// ---- relation labels ------------------------------------------------------

// split a (possibly composite) label at '>'
inline std::vector<std::string> split_label(const std::string& label) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t gt = label.find('>', start);
        std::string part = label.substr(start, gt == std::string::npos ? gt : gt - start);
        if (part.empty()) throw format_error("empty part in relation label '" + label + "'");
        parts.push_back(part);
        if (gt == std::string::npos) break;
        start = gt + 1;
    }
    return parts;
}

inline std::string join_label(const std::vector<std::string>& parts) {
    if (parts.empty()) throw format_error("cannot join an empty relation label");
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i].empty()) throw format_error("empty part in relation label");
        if (i) out += '>';
        out += parts[i];
    }
    return out;
}

inline bool is_composite(const std::string& label) {
    return label.find('>') != std::string::npos;
}

// "nsubj:pass" -> "nsubj"; atomic labels only
inline std::string atom_base(const std::string& atom) {
    return atom.substr(0, atom.find(':'));
}

inline std::string first_atom(const std::string& label) {
    return label.substr(0, label.find('>'));
}

inline std::string last_atom(const std::string& label) {
    std::size_t gt = label.rfind('>');
    return gt == std::string::npos ? label : label.substr(gt + 1);
}

// ---- parsing --------------------------------------------------------------

namespace detail {

inline std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        fields.push_back(line.substr(start, tab == std::string::npos ? tab : tab - start));
        if (tab == std::string::npos) break;
        start = tab + 1;
    }
    return fields;
}

inline bool is_mwt_range(const std::string& s) {
    std::size_t dash = s.find('-');
    if (dash == std::string::npos) return false;
    return all_digits(s.substr(0, dash)) && all_digits(s.substr(dash + 1));
}

inline std::vector<Dep> parse_deps(const std::string& field, std::size_t lineno) {
    std::vector<Dep> deps;
    if (field == "_") return deps;
    std::size_t start = 0;
    while (start <= field.size()) {
        std::size_t bar = field.find('|', start);
        std::string item = field.substr(start, bar == std::string::npos ? bar : bar - start);
        std::size_t colon = item.find(':');
        if (colon == std::string::npos)
            throw parse_error(lineno, "malformed deps entry '" + item + "'");
        // the head may itself contain a dot, so the split point is the first
        // ':' after the numeric id, and the relation keeps any further ':'
        auto head = try_parse_node_id(item.substr(0, colon));
        std::string rel = item.substr(colon + 1);
        if (!head || rel.empty())
            throw parse_error(lineno, "malformed deps entry '" + item + "'");
        deps.push_back(Dep{*head, rel});
        if (bar == std::string::npos) break;
        start = bar + 1;
    }
    return deps;
}

// throws if the basic heads of surface tokens contain a cycle
inline void check_basic_cycles(const Sentence& s, const std::map<int, std::size_t>& line_of) {
    int n = static_cast<int>(s.surface_size());
    std::vector<int> head(static_cast<std::size_t>(n) + 1, -1);
    for (const Token& t : s.tokens)
        if (!t.is_empty_node() && t.head) head[static_cast<std::size_t>(t.id.major)] = *t.head;
    std::vector<int> state(static_cast<std::size_t>(n) + 1, 0);  // 0 new, 1 open, 2 done
    for (int v = 1; v <= n; ++v) {
        int u = v;
        std::vector<int> path;
        while (u > 0 && head[static_cast<std::size_t>(u)] >= 0 &&
               state[static_cast<std::size_t>(u)] == 0) {
            state[static_cast<std::size_t>(u)] = 1;
            path.push_back(u);
            u = head[static_cast<std::size_t>(u)];
        }
        if (u > 0 && u <= n && state[static_cast<std::size_t>(u)] == 1) {
            auto it = line_of.find(u);
            throw parse_error(it == line_of.end() ? 0 : it->second, "cyclic basic tree");
        }
        for (int w : path) state[static_cast<std::size_t>(w)] = 2;
    }
}

inline void finish_sentence(Sentence& s, Document& doc, std::map<int, std::size_t>& line_of,
                            std::map<NodeId, std::size_t>& line_of_node) {
    if (s.comments.empty() && s.tokens.empty() && s.mwt.empty()) return;
    // heads and deps must refer to nodes that exist
    int n = static_cast<int>(s.surface_size());
    for (const Token& t : s.tokens) {
        std::size_t lineno = line_of_node.count(t.id) ? line_of_node[t.id] : 0;
        if (t.head && (*t.head < 0 || *t.head > n))
            throw parse_error(lineno, "head " + std::to_string(*t.head) + " does not exist");
        for (const Dep& d : t.deps) {
            if (d.head.major == 0 && d.head.minor == 0) continue;  // root
            if (!s.find(d.head))
                throw validation_error("line " + std::to_string(lineno) + ": deps head " +
                                       d.head.str() + " does not exist");
        }
    }
    check_basic_cycles(s, line_of);
    doc.sentences.push_back(std::move(s));
    s = Sentence{};
    line_of.clear();
    line_of_node.clear();
}

}  // namespace detail

inline Document parse_document(std::istream& in) {
    Document doc;
    Sentence cur;
    std::map<int, std::size_t> line_of;            // surface token id -> line number
    std::map<NodeId, std::size_t> line_of_node;    // any node id -> line number
    std::string line;
    std::size_t lineno = 0;
    int last_major = 0;
    int last_minor = 0;

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            detail::finish_sentence(cur, doc, line_of, line_of_node);
            last_major = 0;
            last_minor = 0;
            continue;
        }
        if (line[0] == '#') {
            cur.comments.push_back(line);
            continue;
        }
        std::vector<std::string> f = detail::split_tabs(line);
        if (f.size() != 10)
            throw parse_error(lineno, "expected 10 tab-separated fields, got " +
                                          std::to_string(f.size()));
        if (detail::is_mwt_range(f[0])) {
            int start = std::stoi(f[0].substr(0, f[0].find('-')));
            cur.mwt[start].push_back(line);
            continue;
        }
        auto id = try_parse_node_id(f[0]);
        if (!id) throw parse_error(lineno, "unparsable id '" + f[0] + "'");
        if (id->minor == 0) {
            if (id->major != last_major + 1)
                throw parse_error(lineno, "token id " + id->str() + " out of order");
            last_major = id->major;
            last_minor = 0;
        } else {
            if (id->major != last_major || id->minor != last_minor + 1)
                throw parse_error(lineno, "empty node id " + id->str() + " out of order");
            last_minor = id->minor;
        }

        Token t;
        t.id = *id;
        t.form = f[1];
        t.lemma = f[2];
        t.upos = f[3];
        t.xpos = f[4];
        t.feats = f[5];
        if (f[6] == "_") {
            t.head = std::nullopt;
        } else if (all_digits(f[6])) {
            t.head = std::stoi(f[6]);
        } else {
            throw parse_error(lineno, "unparsable head '" + f[6] + "'");
        }
        if (t.is_empty_node() && t.head)
            throw parse_error(lineno, "empty node " + t.id.str() + " must have head _");
        t.deprel = f[7];
        t.deps = detail::parse_deps(f[8], lineno);
        t.misc = f[9];
        if (!t.is_empty_node()) line_of[t.id.major] = lineno;
        line_of_node[t.id] = lineno;
        cur.tokens.push_back(std::move(t));
    }
    detail::finish_sentence(cur, doc, line_of, line_of_node);
    return doc;
}

inline Document parse_document(const std::string& text) {
    std::istringstream in(text);
    return parse_document(in);
}

// ---- serialization --------------------------------------------------------

inline std::string serialize(const Sentence& s) {
    std::string out;
    for (const std::string& c : s.comments) {
        out += c;
        out += '\n';
    }
    for (const Token& t : s.tokens) {
        if (!t.is_empty_node()) {
            auto it = s.mwt.find(t.id.major);
            if (it != s.mwt.end())
                for (const std::string& raw : it->second) {
                    out += raw;
                    out += '\n';
                }
        }
        out += t.id.str();
        out += '\t';
        out += t.form;
        out += '\t';
        out += t.lemma;
        out += '\t';
        out += t.upos;
        out += '\t';
        out += t.xpos;
        out += '\t';
        out += t.feats;
        out += '\t';
        out += t.head ? std::to_string(*t.head) : "_";
        out += '\t';
        out += t.deprel;
        out += '\t';
        if (t.deps.empty()) {
            out += '_';
        } else {
            std::vector<Dep> deps = t.deps;
            std::sort(deps.begin(), deps.end());
            for (std::size_t i = 0; i < deps.size(); ++i) {
                if (i) out += '|';
                out += deps[i].head.str();
                out += ':';
                out += deps[i].rel;
            }
        }
        out += '\t';
        out += t.misc;
        out += '\n';
    }
    out += '\n';
    return out;
}

inline std::string serialize(const Document& doc) {
    std::string out;
    for (const Sentence& s : doc.sentences) out += serialize(s);
    return out;
}

// ---- basic tree view ------------------------------------------------------

// children lists and subtree yields over the surface tokens of one sentence
struct BasicTree {
    explicit BasicTree(const Sentence& s) : sentence(&s) {
        n = static_cast<int>(s.surface_size());
        heads.assign(static_cast<std::size_t>(n) + 1, -1);
        kids.assign(static_cast<std::size_t>(n) + 1, {});
        by_major.assign(static_cast<std::size_t>(n) + 1, nullptr);
        for (const Token& t : s.tokens) {
            if (t.is_empty_node()) continue;
            by_major[static_cast<std::size_t>(t.id.major)] = &t;
            if (t.head) {
                heads[static_cast<std::size_t>(t.id.major)] = *t.head;
                if (*t.head >= 0 && *t.head <= n)
                    kids[static_cast<std::size_t>(*t.head)].push_back(t.id.major);
            }
        }
        for (auto& k : kids) std::sort(k.begin(), k.end());
    }

    int size() const { return n; }
    int head_of(int major) const { return heads[static_cast<std::size_t>(major)]; }
    const std::vector<int>& children(int major) const {
        return kids[static_cast<std::size_t>(major)];
    }
    const Token& token(int major) const { return *by_major[static_cast<std::size_t>(major)]; }

    // all surface tokens of the subtree rooted at major, sorted by position
    std::vector<int> subtree(int major) const {
        std::vector<int> out;
        std::vector<int> stack{major};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            out.push_back(v);
            for (int c : kids[static_cast<std::size_t>(v)]) stack.push_back(c);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    const Sentence* sentence;
    int n = 0;
    std::vector<int> heads;
    std::vector<std::vector<int>> kids;
    std::vector<const Token*> by_major;
};

// ---- validation -----------------------------------------------------------

inline std::vector<std::string> validate(const Sentence& s) {
    std::vector<std::string> v;
    int n = 0;
    int last_major = 0;
    int last_minor = 0;
    for (const Token& t : s.tokens) {
        if (!t.is_empty_node()) {
            if (t.id.major != last_major + 1)
                v.push_back("token id " + t.id.str() + " out of order");
            last_major = t.id.major;
            last_minor = 0;
            ++n;
        } else {
            if (t.id.major != last_major || t.id.minor != last_minor + 1)
                v.push_back("empty node id " + t.id.str() + " out of order");
            last_minor = t.id.minor;
        }
    }

    // basic layer: a single tree rooted at 0 over the surface tokens
    int roots = 0;
    for (const Token& t : s.tokens) {
        if (t.is_empty_node()) continue;
        if (!t.head) {
            v.push_back("token " + t.id.str() + " has no basic head");
            continue;
        }
        if (*t.head == 0) ++roots;
        if (*t.head < 0 || *t.head > n)
            v.push_back("token " + t.id.str() + " head " + std::to_string(*t.head) +
                        " does not exist");
    }
    if (roots == 0 && n > 0) v.push_back("no root");
    if (roots > 1) v.push_back("multiple roots");
    {
        std::vector<int> state(static_cast<std::size_t>(n) + 1, 0);  // 0 new, 1 open, 2 done
        for (const Token& t : s.tokens) {
            if (t.is_empty_node()) continue;
            int u = t.id.major;
            std::vector<int> path;
            while (u > 0 && u <= n && state[static_cast<std::size_t>(u)] == 0) {
                state[static_cast<std::size_t>(u)] = 1;
                path.push_back(u);
                const Token* tok = s.find(NodeId{u, 0});
                if (!tok || !tok->head) break;
                u = *tok->head;
            }
            // open nodes are always on the current walk, so landing on one is a loop
            bool cyclic = u > 0 && u <= n && state[static_cast<std::size_t>(u)] == 1;
            for (int w : path) state[static_cast<std::size_t>(w)] = 2;
            if (cyclic) {
                v.push_back("cyclic basic tree at token " + std::to_string(u));
                break;
            }
        }
    }

    // deps must resolve, and composite labels are legal only in the basic tree
    for (const Token& t : s.tokens) {
        for (const Dep& d : t.deps) {
            bool is_root = d.head.major == 0 && d.head.minor == 0;
            if (!is_root && !s.find(d.head))
                v.push_back("deps of " + t.id.str() + " reference nonexistent node " +
                            d.head.str());
            if (is_composite(d.rel))
                v.push_back("composite label '" + d.rel + "' in deps of " + t.id.str());
        }
    }

    // enhanced layer, when present: connected and covering all non-punct nodes
    if (s.has_enhanced()) {
        for (const Token& t : s.tokens) {
            bool punct = !t.is_empty_node() && atom_base(t.deprel) == "punct";
            if (t.deps.empty() && !punct) {
                v.push_back("disconnected node " + t.id.str());
            }
        }
        // reachability from the root over head -> dependent edges
        std::vector<NodeId> reach;
        std::vector<NodeId> frontier;
        for (const Token& t : s.tokens)
            for (const Dep& d : t.deps)
                if (d.head.major == 0 && d.head.minor == 0) frontier.push_back(t.id);
        reach = frontier;
        while (!frontier.empty()) {
            NodeId h = frontier.back();
            frontier.pop_back();
            for (const Token& t : s.tokens) {
                if (std::find(reach.begin(), reach.end(), t.id) != reach.end()) continue;
                for (const Dep& d : t.deps)
                    if (d.head == h) {
                        reach.push_back(t.id);
                        frontier.push_back(t.id);
                        break;
                    }
            }
        }
        for (const Token& t : s.tokens) {
            if (t.deps.empty()) continue;
            if (std::find(reach.begin(), reach.end(), t.id) == reach.end())
                v.push_back("disconnected node " + t.id.str());
        }
    }
    return v;
}

inline std::vector<std::string> validate(const Document& doc) {
    std::vector<std::string> all;
    for (std::size_t i = 0; i < doc.sentences.size(); ++i)
        for (const std::string& msg : validate(doc.sentences[i]))
            all.push_back("sentence " + std::to_string(i + 1) + ": " + msg);
    return all;
}

}  // namespace udgap
