#pragma once

// Word embedding tables in GloVe/word2vec text format, phrase vectors,
// and the argument similarity score used for remnant alignment.

#include <zlib.h>

#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "udgap/argument.hpp"

namespace udgap {

struct SimilarityParams {
    double pos_mismatch_penalty = -2.0;
    double gap_penalty = -4.0;
    bool lowercase_fallback = true;
    bool literal_indicator = false;  // apply the penalty on matching tags instead
    bool pos_only = false;           // drop the distance term entirely
};

inline std::string ascii_lower(const std::string& s) {
    std::string out = s;
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

class EmbeddingTable {
public:
    std::size_t dim() const { return dim_; }
    std::size_t size() const { return vectors_.size(); }

    const std::vector<double>* lookup(const std::string& word,
                                      bool lowercase_fallback = true) const {
        auto it = vectors_.find(word);
        if (it != vectors_.end()) return &it->second;
        if (lowercase_fallback) {
            std::string lower = ascii_lower(word);
            if (lower != word) {
                it = vectors_.find(lower);
                if (it != vectors_.end()) return &it->second;
            }
        }
        return nullptr;
    }

    void insert(const std::string& word, std::vector<double> vec) {
        if (vectors_.empty()) dim_ = vec.size();
        vectors_.emplace(word, std::move(vec));  // duplicates keep the first entry
    }

private:
    std::size_t dim_ = 0;
    std::unordered_map<std::string, std::vector<double>> vectors_;
};

namespace detail {

inline bool looks_like_w2v_header(const std::string& line) {
    std::istringstream in(line);
    std::string a, b, extra;
    if (!(in >> a >> b) || (in >> extra)) return false;
    return all_digits(a) && all_digits(b);
}

inline std::string gunzip_file(const std::string& path) {
    gzFile f = gzopen(path.c_str(), "rb");
    if (!f) throw format_error("cannot open '" + path + "'");
    std::string out;
    char buf[1 << 15];
    int n;
    while ((n = gzread(f, buf, sizeof buf)) > 0) out.append(buf, static_cast<std::size_t>(n));
    bool bad = n < 0;
    gzclose(f);
    if (bad) throw format_error("gzip read error in '" + path + "'");
    return out;
}

}  // namespace detail

inline EmbeddingTable load_embeddings_text(std::istream& in) {
    EmbeddingTable table;
    std::string line;
    std::size_t lineno = 0;
    std::size_t expect_dim = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (detail::looks_like_w2v_header(line)) {
                std::istringstream h(line);
                std::size_t vocab;
                h >> vocab >> expect_dim;
                continue;
            }
        }
        std::istringstream fields(line);
        std::string word;
        fields >> word;
        std::vector<double> vec;
        std::string item;
        while (fields >> item) {
            try {
                std::size_t used = 0;
                double v = std::stod(item, &used);
                if (used != item.size()) throw std::invalid_argument(item);
                vec.push_back(v);
            } catch (const std::exception&) {
                throw format_error("line " + std::to_string(lineno) +
                                   ": non-numeric vector component '" + item + "'");
            }
        }
        if (vec.empty())
            throw format_error("line " + std::to_string(lineno) + ": no vector components");
        if (expect_dim == 0) expect_dim = vec.size();
        if (vec.size() != expect_dim)
            throw format_error("line " + std::to_string(lineno) +
                               ": inconsistent dimensionality (expected " +
                               std::to_string(expect_dim) + ", got " +
                               std::to_string(vec.size()) + ")");
        table.insert(word, std::move(vec));
    }
    return table;
}

inline EmbeddingTable load_embeddings(const std::string& path) {
    if (path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0) {
        std::istringstream in(detail::gunzip_file(path));
        return load_embeddings_text(in);
    }
    std::ifstream in(path);
    if (!in.good()) throw format_error("cannot open '" + path + "'");
    return load_embeddings_text(in);
}

// mean of the vectors of the forms found in the table; forms without an
// entry are skipped, and a span with no entries at all maps to the zero
// vector so distances stay defined
inline std::vector<double> phrase_vector(const std::vector<std::string>& forms,
                                         const EmbeddingTable& table,
                                         bool lowercase_fallback = true) {
    std::vector<double> sum(table.dim(), 0.0);
    std::size_t found = 0;
    for (const std::string& form : forms) {
        const std::vector<double>* v = table.lookup(form, lowercase_fallback);
        if (!v) continue;
        ++found;
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += (*v)[i];
    }
    if (found > 0)
        for (double& x : sum) x /= static_cast<double>(found);
    return sum;
}

// similarity of a gapped-conjunct argument g and a full-conjunct argument f:
// negative euclidean distance of the phrase vectors, plus the penalty when
// the head POS tags differ
inline double sim(const ArgumentSpan& g, const ArgumentSpan& f, const SimilarityParams& params) {
    double score = 0.0;
    if (!params.pos_only) {
        if (g.vec.size() != f.vec.size())
            throw std::invalid_argument("phrase vector dimensions differ: " +
                                        std::to_string(g.vec.size()) + " vs " +
                                        std::to_string(f.vec.size()));
        double sq = 0.0;
        for (std::size_t i = 0; i < g.vec.size(); ++i) {
            double d = g.vec[i] - f.vec[i];
            sq += d * d;
        }
        score -= std::sqrt(sq);
    }
    bool tags_equal = g.head_upos == f.head_upos;
    if (params.literal_indicator ? tags_equal : !tags_equal)
        score += params.pos_mismatch_penalty;
    return score;
}

}  // namespace udgap
