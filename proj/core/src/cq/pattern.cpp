#include "treemeasure/cq/pattern.hpp"

#include "treemeasure/error.hpp"
#include "treemeasure/safety/automaton.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <sstream>

namespace treemeasure::cq {

char edge_letter(EdgeKind k) {
    switch (k) {
        case EdgeKind::Left:
            return 'L';
        case EdgeKind::Right:
            return 'R';
        case EdgeKind::Child:
            return 'S';
        case EdgeKind::Descendant:
            return 'D';
    }
    return '?';
}

namespace {

std::optional<EdgeKind> edge_kind(std::string_view s) {
    if (s == "L") return EdgeKind::Left;
    if (s == "R") return EdgeKind::Right;
    if (s == "S") return EdgeKind::Child;
    if (s == "D") return EdgeKind::Descendant;
    return std::nullopt;
}

}  // namespace

Pattern::Pattern(AlphabetPtr alphabet, std::vector<Vertex> vertices, std::vector<Edge> edges)
    : alphabet_(std::move(alphabet)), vertices_(std::move(vertices)), edges_(std::move(edges)) {
    if (!alphabet_) throw InputError("pattern needs an alphabet");
    for (const auto& v : vertices_)
        for (Symbol s : v.labels)
            if (s >= alphabet_->size()) throw InputError("label outside alphabet");
    for (const auto& e : edges_)
        if (e.source >= vertices_.size() || e.target >= vertices_.size()) throw InputError("edge endpoint out of range");
}

bool Pattern::has_root_mark() const {
    return std::any_of(vertices_.begin(), vertices_.end(), [](const Vertex& v) { return v.root; });
}

bool Pattern::has_label_conflict() const {
    for (const auto& v : vertices_)
        for (Symbol s : v.labels)
            if (s != v.labels.front()) return true;
    return false;
}

std::optional<Symbol> Pattern::label(std::size_t v) const {
    if (vertices_.at(v).labels.empty()) return std::nullopt;
    return vertices_[v].labels.front();
}

bool Pattern::label_allows(std::size_t v, Symbol a) const {
    for (Symbol s : vertices_[v].labels)
        if (s != a) return false;
    return true;
}

std::optional<std::size_t> Pattern::find_vertex(std::string_view name) const {
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        if (vertices_[i].name == name) return i;
    return std::nullopt;
}

Pattern Pattern::induced(const std::vector<std::size_t>& members) const {
    std::vector<std::size_t> index(vertices_.size(), SIZE_MAX);
    std::vector<Vertex> vs;
    std::vector<std::size_t> sorted = members;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t v : sorted) {
        index[v] = vs.size();
        vs.push_back(vertices_.at(v));
    }
    std::vector<Edge> es;
    for (const auto& e : edges_)
        if (index[e.source] != SIZE_MAX && index[e.target] != SIZE_MAX)
            es.push_back({index[e.source], e.kind, index[e.target]});
    return Pattern(alphabet_, std::move(vs), std::move(es));
}

std::string Pattern::to_text() const {
    std::ostringstream os;
    os << "alphabet:";
    for (const auto& a : alphabet_->names()) os << ' ' << a;
    os << '\n';
    for (const auto& v : vertices_) {
        os << "vertex: " << v.name;
        for (Symbol s : v.labels) os << " label=" << alphabet_->name(s);
        if (v.root) os << " root";
        os << '\n';
    }
    for (const auto& e : edges_)
        os << "edge: " << vertices_[e.source].name << ' ' << edge_letter(e.kind) << ' ' << vertices_[e.target].name
           << '\n';
    return os.str();
}

namespace {

struct PatternBuilder {
    AlphabetPtr alphabet;
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;

    std::size_t index(const std::string& name, std::size_t line, std::size_t col) const {
        for (std::size_t i = 0; i < vertices.size(); ++i)
            if (vertices[i].name == name) return i;
        throw InputError("undeclared vertex '" + name + "'", line, col);
    }
    void vertex(const std::vector<std::string>& words, std::size_t line, std::size_t col) {
        if (words.empty()) throw InputError("vertex needs a name", line, col);
        for (const auto& v : vertices)
            if (v.name == words[0]) throw InputError("duplicate vertex '" + words[0] + "'", line, col);
        Vertex v{words[0], {}, false};
        for (std::size_t i = 1; i < words.size(); ++i) {
            if (words[i] == "root") {
                v.root = true;
            } else if (words[i].rfind("label=", 0) == 0) {
                auto s = alphabet->find(words[i].substr(6));
                if (!s) throw InputError("unknown symbol '" + words[i].substr(6) + "'", line, col);
                v.labels.push_back(*s);
            } else {
                throw InputError("unexpected '" + words[i] + "' in vertex", line, col);
            }
        }
        vertices.push_back(std::move(v));
    }
    void edge(const std::vector<std::string>& words, std::size_t line, std::size_t col) {
        if (words.size() != 3) throw InputError("edge needs 'x KIND y'", line, col);
        auto kind = edge_kind(words[1]);
        if (!kind) throw InputError("edge kind must be L, R, S or D", line, col);
        edges.push_back({index(words[0], line, col), *kind, index(words[2], line, col)});
    }
};

}  // namespace

Pattern parse_pattern(std::string_view text) {
    std::istringstream in{std::string(text)};
    PatternBuilder b;
    struct Deferred {
        std::string key;
        std::vector<std::string> words;
        std::size_t line, col;
    };
    std::vector<Deferred> rows;
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto colon = line.find(':');
        if (colon == std::string::npos) throw InputError("expected 'key: value'", line_no, first + 1);
        std::string key = line.substr(first, colon - first);
        std::istringstream ws(line.substr(colon + 1));
        std::vector<std::string> words;
        for (std::string w; ws >> w;) words.push_back(w);
        if (key == "alphabet") {
            b.alphabet = Alphabet::make(words);
        } else if (key == "vertex" || key == "edge") {
            rows.push_back({key, words, line_no, colon + 2});
        } else {
            throw InputError("unknown key '" + key + "'", line_no, first + 1);
        }
    }
    if (!b.alphabet) throw InputError("missing 'alphabet:' line");
    for (const auto& r : rows)
        if (r.key == "vertex") b.vertex(r.words, r.line, r.col);
    for (const auto& r : rows)
        if (r.key == "edge") b.edge(r.words, r.line, r.col);
    return Pattern(b.alphabet, std::move(b.vertices), std::move(b.edges));
}

Pattern load_pattern(const std::string& path) { return parse_pattern(safety::read_file(path)); }

Pattern pattern_from_sexpr(const SExpr& e, const AlphabetPtr& alphabet) {
    PatternBuilder b;
    b.alphabet = alphabet;
    auto words_of = [](const SExpr& item) {
        std::vector<std::string> words;
        for (std::size_t i = 1; i < item.items.size(); ++i) {
            if (!item.items[i].is_symbol()) fail_at(item.items[i], "expected a symbol");
            words.push_back(item.items[i].text);
        }
        return words;
    };
    for (std::size_t i = 1; i < e.items.size(); ++i)
        if (e.items[i].head() == "vertex") b.vertex(words_of(e.items[i]), e.items[i].line, e.items[i].column);
    for (std::size_t i = 1; i < e.items.size(); ++i) {
        const auto head = e.items[i].head();
        if (head == "edge")
            b.edge(words_of(e.items[i]), e.items[i].line, e.items[i].column);
        else if (head != "vertex")
            fail_at(e.items[i], "expected (vertex ...) or (edge ...)");
    }
    return Pattern(alphabet, std::move(b.vertices), std::move(b.edges));
}

namespace {

BccqFormula bccq_from_sexpr(const SExpr& e, const AlphabetPtr& alphabet, const std::string& base_dir) {
    if (e.is_symbol("true")) return BccqFormula::constant(true);
    if (e.is_symbol("false")) return BccqFormula::constant(false);
    const auto head = e.head();
    if (head == "true" && e.items.size() == 1) return BccqFormula::constant(true);
    if (head == "false" && e.items.size() == 1) return BccqFormula::constant(false);
    if (head == "not") {
        if (e.items.size() != 2) fail_at(e, "not takes one argument");
        return BccqFormula::negate(bccq_from_sexpr(e.items[1], alphabet, base_dir));
    }
    if (head == "and" || head == "or") {
        std::vector<BccqFormula> args;
        for (std::size_t i = 1; i < e.items.size(); ++i) args.push_back(bccq_from_sexpr(e.items[i], alphabet, base_dir));
        return head == "and" ? BccqFormula::conjunction(std::move(args)) : BccqFormula::disjunction(std::move(args));
    }
    if (head == "pattern") {
        if (e.items.size() == 2 && e.items[1].kind == SExpr::Kind::String) {
            std::filesystem::path file(e.items[1].text);
            if (file.is_relative()) file = std::filesystem::path(base_dir) / file;
            Pattern p = load_pattern(file.string());
            if (!(*p.alphabet() == *alphabet)) fail_at(e, "pattern file alphabet differs from the formula's");
            return BccqFormula::leaf(Pattern(alphabet, p.vertices(), p.edges()));
        }
        return BccqFormula::leaf(pattern_from_sexpr(e, alphabet));
    }
    fail_at(e, "expected and/or/not/true/false/pattern");
}

}  // namespace

BccqInput parse_bccq(std::string_view text, const std::string& base_dir) {
    auto src = parse_headered(text);
    auto alphabet = Alphabet::make(src.alphabet);
    if (src.body.size() != 1) throw InputError("expected exactly one formula");
    return {alphabet, bccq_from_sexpr(src.body.front(), alphabet, base_dir)};
}

BccqInput load_bccq(const std::string& path) {
    return parse_bccq(safety::read_file(path), std::filesystem::path(path).parent_path().string());
}

}  // namespace treemeasure::cq
