#pragma once

// Line-oriented workspace files and the built-in catalog.
//
//   field <degree> <modulus>
//   algebra <name> super|graded
//     basis <name> even|odd
//     bracket <x> <y> = <element>
//     square <odd element> = <element>
//   end
//   form <name> on <algebra> even|odd|mixed      rows of literals, then end
//   operator <name> on <algebra> even|odd        rows of literals, then end
//   tensor <name> on <algebra>                   rows of literals, then end
//   subspace <name> on <algebra>                 spanning rows, then end
//   dualpair <g> <gstar>                         map <x> <x'> lines, then end
//   manin <algebra> <form> <subspace> <subspace>
//
// Elements are sums of terms "name" or "0x..*name", or "0". A square line whose
// left side is not a basis vector is a constraint checked against polarization.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "catalog.hpp"
#include "forms.hpp"
#include "manin.hpp"
#include "superalgebra.hpp"
#include "tensor.hpp"

namespace lsa::io {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t line, std::size_t column)
        : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
          line_(line), column_(column), message_(msg) {}
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    const std::string& message() const { return message_; }

private:
    std::size_t line_, column_;
    std::string message_;
};

template <class T>
struct Named {
    std::string name;
    std::string on;  // owning algebra, empty for algebras
    T value;
};

struct DualPairEntry {
    std::string g, gstar;
    std::vector<std::size_t> map;  // basis i of g is paired with basis map[i] of gstar
};

struct TripleEntry {
    std::string h, form, g, k;
};

struct Workspace {
    const Field* field = nullptr;
    std::vector<Named<LieSuperAlgebra>> algebras;
    std::vector<Named<BilinearForm>> forms;
    std::vector<Named<GradedOperator>> operators;
    std::vector<Named<Tensor2>> tensors;
    std::vector<Named<Subspace>> subspaces;
    std::vector<DualPairEntry> dual_pairs;
    std::vector<TripleEntry> triples;

    bool has_name(const std::string& n) const {
        auto in = [&](const auto& v) {
            for (auto& e : v)
                if (e.name == n) return true;
            return false;
        };
        return in(algebras) || in(forms) || in(operators) || in(tensors) || in(subspaces);
    }

    template <class T>
    static const Named<T>* find_in(const std::vector<Named<T>>& v, const std::string& n) {
        for (auto& e : v)
            if (e.name == n) return &e;
        return nullptr;
    }
    const Named<LieSuperAlgebra>* find_algebra(const std::string& n) const { return find_in(algebras, n); }
    const Named<BilinearForm>* find_form(const std::string& n) const { return find_in(forms, n); }
    const Named<GradedOperator>* find_operator(const std::string& n) const { return find_in(operators, n); }
    const Named<Tensor2>* find_tensor(const std::string& n) const { return find_in(tensors, n); }
    const Named<Subspace>* find_subspace(const std::string& n) const { return find_in(subspaces, n); }

    const LieSuperAlgebra& algebra(const std::string& n) const {
        auto* a = find_algebra(n);
        if (!a) throw std::invalid_argument("no algebra named '" + n + "'");
        return a->value;
    }

    void add_algebra(std::string n, LieSuperAlgebra g) {
        claim(n);
        if (!field) field = &g.field();
        if (&g.field() != field) throw std::invalid_argument("algebra '" + n + "' is over a different field");
        algebras.push_back({std::move(n), "", std::move(g)});
    }
    void add_form(std::string n, std::string on, BilinearForm b) {
        claim(n);
        check_on(on, b.dim());
        forms.push_back({std::move(n), std::move(on), std::move(b)});
    }
    void add_operator(std::string n, std::string on, GradedOperator d) {
        claim(n);
        check_on(on, d.matrix.rows());
        operators.push_back({std::move(n), std::move(on), std::move(d)});
    }
    void add_tensor(std::string n, std::string on, Tensor2 t) {
        claim(n);
        check_on(on, t.dim());
        tensors.push_back({std::move(n), std::move(on), std::move(t)});
    }
    void add_subspace(std::string n, std::string on, Subspace s) {
        claim(n);
        check_on(on, s.ambient());
        subspaces.push_back({std::move(n), std::move(on), std::move(s)});
    }
    void add_dual_pair(std::string g, std::string gstar) {
        std::size_t n = algebra(g).dim();
        if (algebra(gstar).dim() != n) throw std::invalid_argument("dual pair of algebras of different dimensions");
        std::vector<std::size_t> id(n);
        for (std::size_t i = 0; i < n; ++i) id[i] = i;
        dual_pairs.push_back({std::move(g), std::move(gstar), std::move(id)});
    }
    void add_triple(TripleEntry t) { triples.push_back(std::move(t)); }

    // gstar reordered so that its basis i is dual to basis i of g.
    DualPair dual_pair(const DualPairEntry& e) const {
        const LieSuperAlgebra& g = algebra(e.g);
        const LieSuperAlgebra& k = algebra(e.gstar);
        return {g, reindex(k, e.map)};
    }

    ManinTriple triple(const TripleEntry& t) const {
        return {algebra(t.h), find_form(t.form)->value, find_subspace(t.g)->value, find_subspace(t.k)->value};
    }

private:
    void claim(const std::string& n) const {
        if (has_name(n)) throw std::invalid_argument("name '" + n + "' is already used");
    }
    void check_on(const std::string& on, std::size_t dim) const {
        if (algebra(on).dim() != dim) throw std::invalid_argument("shape does not match algebra '" + on + "'");
    }
    static LieSuperAlgebra reindex(const LieSuperAlgebra& k, const std::vector<std::size_t>& map) {
        bool identity = true;
        for (std::size_t i = 0; i < map.size(); ++i) identity = identity && map[i] == i;
        if (identity) return k;
        std::vector<BasisVector> basis;
        for (std::size_t i = 0; i < map.size(); ++i) basis.push_back(k.basis()[map[i]]);
        LieSuperAlgebra out(k.field(), basis, k.is_super());
        auto pull = [&](const Vector& v) {
            Vector w(k.field(), v.size());
            for (std::size_t i = 0; i < map.size(); ++i) w[i] = v[map[i]];
            return w;
        };
        for (std::size_t i = 0; i < map.size(); ++i) {
            for (std::size_t j = i + 1; j < map.size(); ++j) out.set_bracket(i, j, pull(k.bracket_basis(map[i], map[j])));
            if (k.is_super() && k.parity(map[i]) == Parity::Odd) out.set_square(i, pull(k.square_basis(map[i])));
        }
        return out;
    }
};

namespace detail {

inline bool valid_name(std::string_view s) {
    if (s.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '*' || c == '\'' || c == '.')) return false;
    return true;
}

struct Token {
    std::string text;
    std::size_t column;  // 1-based
};

inline std::vector<Token> split(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i >= line.size()) break;
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        out.push_back({std::string(line.substr(start, i - start)), start + 1});
    }
    return out;
}

}  // namespace detail

// Parses an element expression; column is the 1-based position of text[0].
inline Vector parse_element(const LieSuperAlgebra& g, std::string_view text, std::size_t line = 0, std::size_t column = 1) {
    const Field& f = g.field();
    Vector v = g.zero();
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip();
    if (i == text.size()) throw ParseError("expected an element", line, column + i);
    {
        std::size_t end = text.size();
        while (end > i && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
        if (text.substr(i, end - i) == "0") return v;
    }
    while (true) {
        skip();
        std::size_t start = i;
        while (i < text.size() && text[i] != '+' && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::string_view term = text.substr(start, i - start);
        if (term.empty()) throw ParseError("expected a term", line, column + start);
        Bits coef = 1;
        std::string_view name = term;
        if (term.size() > 2 && term[0] == '0' && term[1] == 'x') {
            auto star = term.find('*');
            if (star == std::string_view::npos) throw ParseError("coefficient without a basis vector", line, column + start);
            try {
                coef = f.parse(term.substr(0, star));
            } catch (const FieldError& e) {
                throw ParseError(e.what(), line, column + start);
            }
            name = term.substr(star + 1);
        }
        auto idx = g.index_of(std::string(name));
        if (!idx) throw ParseError("unknown basis vector '" + std::string(name) + "'", line, column + start + (term.size() - name.size()));
        v[*idx] ^= coef;
        skip();
        if (i == text.size()) break;
        if (text[i] != '+') throw ParseError("expected '+'", line, column + i);
        ++i;
    }
    return v;
}

inline std::string format_element(const LieSuperAlgebra& g, const Vector& v) { return g.show(v); }

namespace detail {

class Parser {
public:
    explicit Parser(std::istream& in) {
        std::string s;
        while (std::getline(in, s)) {
            if (!s.empty() && s.back() == '\r') s.pop_back();
            auto hash = s.find('#');
            if (hash != std::string::npos) s.erase(hash);
            lines_.push_back(s);
        }
    }

    Workspace run() {
        for (ln_ = 0; ln_ < lines_.size(); ++ln_) {
            auto t = split(lines_[ln_]);
            if (t.empty()) continue;
            const std::string& key = t[0].text;
            if (key == "field") field_line(t);
            else if (!ws_.field) fail("the first entry must be a field line", t[0]);
            else if (key == "algebra") algebra_block(t);
            else if (key == "form" || key == "operator" || key == "tensor" || key == "subspace") matrix_block(t);
            else if (key == "dualpair") dualpair_block(t);
            else if (key == "manin") manin_line(t);
            else fail("unknown key '" + key + "'", t[0]);
        }
        if (!ws_.field) throw ParseError("missing field line", lines_.size() + 1, 1);
        return std::move(ws_);
    }

private:
    [[noreturn]] void fail(const std::string& msg, const Token& at) const { throw ParseError(msg, ln_ + 1, at.column); }
    [[noreturn]] void fail_col(const std::string& msg, std::size_t col) const { throw ParseError(msg, ln_ + 1, col); }

    void arity(const std::vector<Token>& t, std::size_t n, const char* form) const {
        if (t.size() != n) fail(std::string("expected: ") + form, t[std::min(t.size(), n) - (t.size() < n ? 1 : 0)]);
    }

    void new_name(const Token& t) const {
        if (!valid_name(t.text)) fail("invalid name '" + t.text + "'", t);
        if (ws_.has_name(t.text)) fail("name '" + t.text + "' is already used", t);
    }

    const LieSuperAlgebra& owner(const Token& t) const {
        auto* a = ws_.find_algebra(t.text);
        if (!a) fail("no algebra named '" + t.text + "'", t);
        return a->value;
    }

    // Next non-blank line of the current block; fails at end of file.
    std::vector<Token> next(const char* block) {
        while (++ln_ < lines_.size()) {
            auto t = split(lines_[ln_]);
            if (!t.empty()) return t;
        }
        throw ParseError(std::string("unterminated ") + block + " block", lines_.size(), 1);
    }

    void field_line(const std::vector<Token>& t) {
        if (ws_.field) fail("duplicate field line", t[0]);
        arity(t, 3, "field <degree> <modulus>");
        unsigned degree = 0;
        try {
            std::size_t used = 0;
            degree = static_cast<unsigned>(std::stoul(t[1].text, &used));
            if (used != t[1].text.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            fail("bad field degree '" + t[1].text + "'", t[1]);
        }
        try {
            ws_.field = &Field::get(degree, Field::parse_literal(t[2].text));
        } catch (const FieldError& e) {
            fail(e.what(), t[2]);
        }
    }

    void algebra_block(const std::vector<Token>& head) {
        arity(head, 3, "algebra <name> super|graded");
        new_name(head[1]);
        bool super;
        if (head[2].text == "super") super = true;
        else if (head[2].text == "graded") super = false;
        else fail("expected 'super' or 'graded'", head[2]);

        std::vector<BasisVector> basis;
        std::optional<LieSuperAlgebra> g;
        std::map<std::pair<std::size_t, std::size_t>, bool> seen_bracket;
        std::vector<bool> seen_square;
        struct Constraint {
            std::size_t line, column;
            Vector x, value;
        };
        std::vector<Constraint> constraints;
        auto ensure = [&] {
            if (!g) {
                try {
                    g.emplace(*ws_.field, basis, super);
                } catch (const InvariantError& e) {
                    fail(e.what(), head[1]);
                }
                seen_square.assign(basis.size(), false);
            }
        };
        while (true) {
            auto t = next("algebra");
            const std::string& key = t[0].text;
            if (key == "end") {
                arity(t, 1, "end");
                break;
            }
            if (key == "basis") {
                if (g) fail("basis lines must precede brackets and squares", t[0]);
                arity(t, 3, "basis <name> even|odd");
                if (!valid_name(t[1].text)) fail("invalid basis name '" + t[1].text + "'", t[1]);
                for (auto& b : basis)
                    if (b.name == t[1].text) fail("duplicate basis name '" + t[1].text + "'", t[1]);
                Parity p;
                if (t[2].text == "even") p = Parity::Even;
                else if (t[2].text == "odd") p = Parity::Odd;
                else fail("expected 'even' or 'odd'", t[2]);
                basis.push_back({t[1].text, p});
                continue;
            }
            if (key != "bracket" && key != "square") fail("unknown key '" + key + "' in algebra block", t[0]);
            ensure();
            const std::string& line = lines_[ln_];
            auto eq = line.find('=');
            if (eq == std::string::npos) fail("expected '='", t.back());
            std::size_t lhs_start = t[0].column - 1 + key.size();
            std::string_view lhs = std::string_view(line).substr(lhs_start, eq - lhs_start);
            std::string_view rhs = std::string_view(line).substr(eq + 1);
            Vector value = parse_element(*g, rhs, ln_ + 1, eq + 2);
            if (key == "bracket") {
                auto args = split(lhs);
                if (args.size() != 2) fail("expected: bracket <x> <y> = <element>", t[0]);
                std::size_t ij[2];
                for (int a = 0; a < 2; ++a) {
                    auto idx = g->index_of(args[a].text);
                    if (!idx) fail_col("unknown basis vector '" + args[a].text + "'", lhs_start + args[a].column);
                    ij[a] = *idx;
                }
                auto [i, j] = std::minmax(ij[0], ij[1]);
                if (i == j) {
                    if (value.is_zero()) continue;
                    fail_col("[" + g->name(i) + "," + g->name(i) + "] must vanish" +
                                 (g->parity(i) == Parity::Odd ? "; use a square line for odd vectors" : ""),
                             t[1].column);
                }
                if (seen_bracket[{i, j}]) fail("duplicate bracket [" + g->name(i) + "," + g->name(j) + "]", t[0]);
                seen_bracket[{i, j}] = true;
                if (!g->is_homogeneous(value, g->parity(i) + g->parity(j)))
                    fail_col("[" + g->name(i) + "," + g->name(j) + "] = " + g->show(value) + " has the wrong parity", eq + 2);
                g->set_bracket(i, j, value);
            } else {
                if (!super) fail("a graded algebra carries no squaring", t[0]);
                Vector x = parse_element(*g, lhs, ln_ + 1, lhs_start + 1);
                if (!g->is_homogeneous(x, Parity::Odd) || x.is_zero())
                    fail_col("squares are defined on nonzero odd elements", lhs_start + 2);
                if (!g->is_homogeneous(value, Parity::Even))
                    fail_col("s(" + g->show(x) + ") = " + g->show(value) + " is not even", eq + 2);
                std::optional<std::size_t> single;
                std::size_t nz = 0;
                for (std::size_t k = 0; k < x.size(); ++k)
                    if (x[k]) ++nz, single = k;
                if (nz == 1 && x[*single] == 1) {
                    if (seen_square[*single]) fail("duplicate square of '" + g->name(*single) + "'", t[0]);
                    seen_square[*single] = true;
                    g->set_square(*single, value);
                } else {
                    constraints.push_back({ln_ + 1, lhs_start + 2, x, value});
                }
            }
        }
        ensure();
        try {
            g->validate();
        } catch (const InvariantError& e) {
            fail(std::string("invariant violation: ") + e.what(), head[0]);
        }
        for (auto& c : constraints) {
            Vector expect = g->squaring(c.x);
            if (expect == c.value) continue;
            // name a basis pair whose bracket disagrees, if the sum has two or more terms
            std::vector<std::size_t> terms;
            for (std::size_t k = 0; k < c.x.size(); ++k)
                if (c.x[k]) terms.push_back(k);
            std::string witness = terms.size() >= 2 ? " (pair " + g->name(terms[0]) + ", " + g->name(terms[1]) + ")" : "";
            throw ParseError("s(" + g->show(c.x) + ") = " + g->show(c.value) + " contradicts polarization, which gives " +
                                 g->show(expect) + witness,
                             c.line, c.column);
        }
        ws_.add_algebra(head[1].text, std::move(*g));
    }

    Matrix rows_block(const std::vector<Token>& head, std::size_t cols, std::optional<std::size_t> rows) {
        std::vector<std::vector<Bits>> data;
        while (true) {
            auto t = next(head[0].text.c_str());
            if (t[0].text == "end") {
                arity(t, 1, "end");
                break;
            }
            if (t[0].text != "row") fail("unknown key '" + t[0].text + "' in " + head[0].text + " block", t[0]);
            if (t.size() != cols + 1) fail("expected " + std::to_string(cols) + " entries", t[0]);
            std::vector<Bits> r;
            for (std::size_t k = 1; k < t.size(); ++k) {
                try {
                    r.push_back(ws_.field->parse(t[k].text));
                } catch (const FieldError& e) {
                    fail(e.what(), t[k]);
                }
            }
            data.push_back(std::move(r));
            if (rows && data.size() > *rows) fail("too many rows", t[0]);
        }
        if (rows && data.size() != *rows)
            fail("expected " + std::to_string(*rows) + " rows, got " + std::to_string(data.size()), head[0]);
        Matrix m(*ws_.field, data.size(), cols);
        for (std::size_t i = 0; i < data.size(); ++i)
            for (std::size_t j = 0; j < cols; ++j) m.set(i, j, data[i][j]);
        return m;
    }

    void matrix_block(const std::vector<Token>& head) {
        const std::string& kind = head[0].text;
        bool tagged = kind == "form" || kind == "operator";
        if (tagged) arity(head, 5, (kind + " <name> on <algebra> <parity>").c_str());
        else arity(head, 4, (kind + " <name> on <algebra>").c_str());
        new_name(head[1]);
        if (head[2].text != "on") fail("expected 'on'", head[2]);
        const LieSuperAlgebra& g = owner(head[3]);
        std::size_t ln = ln_;
        auto at_head = [&](const std::string& msg, const Token& tok) { throw ParseError(msg, ln + 1, tok.column); };
        if (kind == "form") {
            std::optional<FormParity> p;
            if (head[4].text == "even") p = FormParity::Even;
            else if (head[4].text == "odd") p = FormParity::Odd;
            else if (head[4].text == "mixed") p = FormParity::Mixed;
            else fail("expected 'even', 'odd' or 'mixed'", head[4]);
            Matrix m = rows_block(head, g.dim(), g.dim());
            try {
                ws_.add_form(head[1].text, head[3].text, make_form(g, m, p));
            } catch (const InvariantError& e) {
                at_head(std::string("invariant violation: ") + e.what(), head[4]);
            }
        } else if (kind == "operator") {
            Parity p;
            if (head[4].text == "even") p = Parity::Even;
            else if (head[4].text == "odd") p = Parity::Odd;
            else fail("expected 'even' or 'odd'", head[4]);
            Matrix m = rows_block(head, g.dim(), g.dim());
            auto actual = operator_parity(g.parities(), g.parities(), m);
            if (!m.is_zero() && actual != p)
                at_head(std::string("invariant violation: operator is not ") + to_string(p), head[4]);
            ws_.add_operator(head[1].text, head[3].text, {m, p});
        } else if (kind == "tensor") {
            ws_.add_tensor(head[1].text, head[3].text, Tensor2(rows_block(head, g.dim(), g.dim())));
        } else {
            Matrix m = rows_block(head, g.dim(), std::nullopt);
            std::vector<Vector> vs;
            for (std::size_t i = 0; i < m.rows(); ++i) vs.push_back(m.row(i));
            ws_.add_subspace(head[1].text, head[3].text, Subspace::span(*ws_.field, g.dim(), vs));
        }
    }

    void dualpair_block(const std::vector<Token>& head) {
        arity(head, 3, "dualpair <g> <gstar>");
        const LieSuperAlgebra& g = owner(head[1]);
        const LieSuperAlgebra& k = owner(head[2]);
        if (head[1].text == head[2].text) fail("a dual pair needs two algebras", head[2]);
        if (g.dim() != k.dim()) fail("dimensions differ", head[2]);
        std::size_t ln = ln_;
        std::vector<std::optional<std::size_t>> map(g.dim());
        std::vector<bool> hit(k.dim(), false);
        while (true) {
            auto t = next("dualpair");
            if (t[0].text == "end") {
                arity(t, 1, "end");
                break;
            }
            if (t[0].text != "map") fail("unknown key '" + t[0].text + "' in dualpair block", t[0]);
            arity(t, 3, "map <x> <x*>");
            auto i = g.index_of(t[1].text);
            if (!i) fail("unknown basis vector '" + t[1].text + "' of " + head[1].text, t[1]);
            auto j = k.index_of(t[2].text);
            if (!j) fail("unknown basis vector '" + t[2].text + "' of " + head[2].text, t[2]);
            if (map[*i]) fail("'" + t[1].text + "' is mapped twice", t[1]);
            if (hit[*j]) fail("'" + t[2].text + "' is mapped twice", t[2]);
            if (g.parity(*i) != k.parity(*j)) fail("paired basis vectors differ in parity", t[2]);
            map[*i] = *j;
            hit[*j] = true;
        }
        DualPairEntry e{head[1].text, head[2].text, {}};
        for (std::size_t i = 0; i < map.size(); ++i) {
            if (!map[i]) throw ParseError("'" + g.name(i) + "' is not mapped", ln + 1, head[1].column);
            e.map.push_back(*map[i]);
        }
        ws_.dual_pairs.push_back(std::move(e));
    }

    void manin_line(const std::vector<Token>& t) {
        arity(t, 5, "manin <algebra> <form> <subspace> <subspace>");
        owner(t[1]);
        auto* b = ws_.find_form(t[2].text);
        if (!b) fail("no form named '" + t[2].text + "'", t[2]);
        if (b->on != t[1].text) fail("form '" + t[2].text + "' is not on '" + t[1].text + "'", t[2]);
        for (int k : {3, 4}) {
            auto* s = ws_.find_subspace(t[k].text);
            if (!s) fail("no subspace named '" + t[k].text + "'", t[k]);
            if (s->on != t[1].text) fail("subspace '" + t[k].text + "' is not in '" + t[1].text + "'", t[k]);
        }
        ws_.add_triple({t[1].text, t[2].text, t[3].text, t[4].text});
    }

    std::vector<std::string> lines_;
    std::size_t ln_ = 0;
    Workspace ws_;
};

inline void rows(std::ostream& out, const Matrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        out << "  row";
        for (std::size_t j = 0; j < m.cols(); ++j) out << ' ' << m.field().literal(m.at(i, j));
        out << '\n';
    }
}

}  // namespace detail

inline Workspace load(std::istream& in) { return detail::Parser(in).run(); }

inline Workspace load_string(const std::string& s) {
    std::istringstream in(s);
    return load(in);
}

inline Workspace load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return load(in);
}

inline std::string save(const Workspace& ws) {
    std::ostringstream out;
    if (!ws.field) throw std::invalid_argument("workspace has no field");
    out << "field " << ws.field->degree() << ' ' << ws.field->literal(ws.field->modulus()) << '\n';
    for (auto& [name, on, g] : ws.algebras) {
        out << "algebra " << name << (g.is_super() ? " super" : " graded") << '\n';
        for (auto& b : g.basis()) out << "  basis " << b.name << ' ' << to_string(b.parity) << '\n';
        for (std::size_t i = 0; i < g.dim(); ++i)
            for (std::size_t j = i + 1; j < g.dim(); ++j) {
                Vector v = g.bracket_basis(i, j);
                if (!v.is_zero()) out << "  bracket " << g.name(i) << ' ' << g.name(j) << " = " << g.show(v) << '\n';
            }
        if (g.is_super())
            for (std::size_t i : g.indices(Parity::Odd)) {
                Vector v = g.square_basis(i);
                if (!v.is_zero()) out << "  square " << g.name(i) << " = " << g.show(v) << '\n';
            }
        out << "end\n";
    }
    for (auto& [name, on, b] : ws.forms) {
        out << "form " << name << " on " << on << ' ' << to_string(b.parity) << '\n';
        detail::rows(out, b.gram);
        out << "end\n";
    }
    for (auto& [name, on, d] : ws.operators) {
        out << "operator " << name << " on " << on << ' ' << to_string(d.parity) << '\n';
        detail::rows(out, d.matrix);
        out << "end\n";
    }
    for (auto& [name, on, t] : ws.tensors) {
        out << "tensor " << name << " on " << on << '\n';
        detail::rows(out, t.matrix());
        out << "end\n";
    }
    for (auto& [name, on, s] : ws.subspaces) {
        out << "subspace " << name << " on " << on << '\n';
        Matrix m = Matrix::from_row_vectors(*ws.field, s.ambient(), s.basis());
        detail::rows(out, m);
        out << "end\n";
    }
    for (auto& d : ws.dual_pairs) {
        const LieSuperAlgebra& g = ws.algebra(d.g);
        const LieSuperAlgebra& k = ws.algebra(d.gstar);
        out << "dualpair " << d.g << ' ' << d.gstar << '\n';
        for (std::size_t i = 0; i < d.map.size(); ++i) out << "  map " << g.name(i) << ' ' << k.name(d.map[i]) << '\n';
        out << "end\n";
    }
    for (auto& t : ws.triples) out << "manin " << t.h << ' ' << t.form << ' ' << t.g << ' ' << t.k << '\n';
    return out.str();
}

inline void save_file(const Workspace& ws, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << save(ws);
}

// Adds h, its form and wings, the dual pair and the triple record for a dual pair.
inline void add_manin(Workspace& ws, const std::string& g, const std::string& gstar, const ManinTriple& t) {
    ws.add_dual_pair(g, gstar);
    ws.add_algebra("h", t.h);
    ws.add_form("B", "h", t.b);
    ws.add_subspace("g_in_h", "h", t.g);
    ws.add_subspace("k_in_h", "h", t.k);
    ws.add_triple({"h", "B", "g_in_h", "k_in_h"});
}

// ---- catalog ----

struct CatalogEntry {
    std::string name;
    std::string params;  // schema shown by `catalog list`
    std::string about;
    std::function<Workspace(const std::vector<Bits>&, const Field&)> make;
    std::size_t arity = 0;
};

namespace detail {

inline void check_params(const Field& f, const std::vector<Bits>& p) {
    for (Bits b : p)
        if (!f.contains(b)) throw std::invalid_argument("parameter " + f.literal(b) + " is not in " + f.describe());
}

}  // namespace detail

inline const std::vector<CatalogEntry>& catalog_entries() {
    static const std::vector<CatalogEntry> entries = {
        {"hei2", "", "hei(0|2): p, q odd, z even, [p,q] = z",
         [](const std::vector<Bits>&, const Field& f) {
             Workspace ws;
             ws.add_algebra("g", catalog::hei2(f));
             return ws;
         },
         0},
        {"hei2-dual", "s,t,u,v", "dual structure [p*,z*] = s q* + t p*, [q*,z*] = u q* + v p*",
         [](const std::vector<Bits>& p, const Field& f) {
             detail::check_params(f, p);
             Workspace ws;
             ws.add_algebra("gs", catalog::hei2_dual(f, p[0], p[1], p[2], p[3]));
             return ws;
         },
         4},
        {"hei2-manin", "s,t,u,v", "Manin triple of hei(0|2) and hei2-dual(s,t,u,v)",
         [](const std::vector<Bits>& p, const Field& f) {
             detail::check_params(f, p);
             Workspace ws;
             ws.add_algebra("g", catalog::hei2(f));
             ws.add_algebra("gs", catalog::hei2_dual(f, p[0], p[1], p[2], p[3]));
             add_manin(ws, "g", "gs", catalog::hei2_manin(f, p[0], p[1], p[2], p[3]));
             return ws;
         },
         4},
        {"hei2-deriv-gf4", "a2,a4,a9,a10",
         "dual-abelian Heisenberg triple over GF(4) with the even derivation D; a9, a10 outside {0,1}",
         [](const std::vector<Bits>& p, const Field&) {
             const Field& f = Field::gf(2);
             detail::check_params(f, p);
             Workspace ws;
             ws.add_algebra("g", catalog::hei2(f));
             ws.add_algebra("gs", catalog::hei2_dual(f, 0, 0, 0, 0));
             add_manin(ws, "g", "gs", catalog::hei2_manin(f, 0, 0, 0, 0));
             ws.add_operator("D", "h", catalog::hei2_deriv(f, p[0], p[1], p[2], p[3]));
             return ws;
         },
         4},
        {"abelian", "m,n", "abelian(m|n): even e0.., odd o0.., zero structure",
         [](const std::vector<Bits>& p, const Field& f) {
             if (p[0] + p[1] > 64) throw std::invalid_argument("abelian: dimension too large");
             Workspace ws;
             ws.add_algebra("g", catalog::abelian(p[0], p[1], f));
             return ws;
         },
         2},
        {"oddpair", "", "1|1 abelian seed u even, v odd, with the odd form B(u,v) = 1",
         [](const std::vector<Bits>&, const Field& f) {
             Workspace ws;
             ws.add_algebra("a", catalog::oddpair(f));
             ws.add_form("B", "a", catalog::oddpair_form(ws.algebra("a")));
             return ws;
         },
         0},
    };
    return entries;
}

// Parameters are decimal or 0x literals separated by commas.
inline std::vector<Bits> parse_params(const std::string& text) {
    std::vector<Bits> out;
    if (text.empty()) return out;
    std::size_t start = 0;
    while (true) {
        auto comma = text.find(',', start);
        std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.erase(item.begin());
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.pop_back();
        if (item.rfind("0x", 0) == 0) {
            out.push_back(Field::parse_literal(item));
        } else {
            std::size_t used = 0;
            unsigned long v = 0;
            try {
                v = std::stoul(item, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (item.empty() || used != item.size() || v > 0xffffffffUL)
                throw std::invalid_argument("bad parameter '" + item + "'");
            out.push_back(static_cast<Bits>(v));
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

inline Workspace catalog_workspace(const std::string& name, const std::vector<Bits>& params,
                                   const Field& f = Field::gf(1)) {
    for (auto& e : catalog_entries()) {
        if (e.name != name) continue;
        if (params.size() != e.arity)
            throw std::invalid_argument(name + " takes " + std::to_string(e.arity) + " parameters (" + e.params + "), got " +
                                        std::to_string(params.size()));
        return e.make(params, f);
    }
    throw std::invalid_argument("unknown catalog entry '" + name + "'");
}

}  // namespace lsa::io
