// lsa: command-line driver over workspace files.
// Exit status: 0 all checks pass, 1 a mathematical check failed, 2 input error.

#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lsa/derivations.hpp"
#include "lsa/doubleext.hpp"
#include "lsa/forms.hpp"
#include "lsa/io.hpp"
#include "lsa/manin.hpp"
#include "lsa/rmatrix.hpp"
#include "lsa/vinberg.hpp"

using namespace lsa;
using io::Workspace;

namespace {

// Input problems detected after parsing (missing names, bad flag values).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Opts {
    std::string file, output, algebra, form, omega, op, delta, tensor, parity = "even", variant;
    std::string alpha, a0, shift, m = "0x0", c = "0x0", lambda = "0x1", mu = "0x0";
    std::string name, params, constraints = "even,symmetric,cybe";
    unsigned field = 1;
    std::uint64_t budget = 1u << 20;
    bool conditions = false;
};

int status(const Report& rep) { return rep.ok() ? 0 : 1; }

int emit(const Report& rep) {
    std::cout << rep.render();
    return status(rep);
}

template <class T>
const io::Named<T>& pick(const std::vector<io::Named<T>>& items, const std::string& name, const char* kind) {
    if (name.empty()) {
        if (items.size() == 1) return items.front();
        throw InputError(std::string(items.empty() ? "the file has no " : "several candidates; name one with --") + kind);
    }
    for (auto& e : items)
        if (e.name == name) return e;
    throw InputError(std::string("no ") + kind + " named '" + name + "'");
}

const io::Named<LieSuperAlgebra>& pick_algebra(const Workspace& ws, const std::string& name) {
    if (name.empty() && !ws.algebras.empty()) return ws.algebras.front();
    return pick(ws.algebras, name, "algebra");
}

Parity parse_parity(const std::string& s) {
    if (s == "even") return Parity::Even;
    if (s == "odd") return Parity::Odd;
    throw InputError("parity must be 'even' or 'odd', got '" + s + "'");
}

DextVariant parse_variant(const std::string& s) {
    for (auto v : {DextVariant::EvenEven, DextVariant::OddEven, DextVariant::OddOdd, DextVariant::EvenOdd})
        if (s == to_string(v)) return v;
    throw InputError("variant must be one of even-even, odd-even, odd-odd, even-odd");
}

Bits literal(const Field& f, const std::string& s) { return f.parse(s); }

Vector element(const LieSuperAlgebra& g, const std::string& text) {
    if (text.empty()) return g.zero();
    return io::parse_element(g, text);
}

void print_matrix_block(const char* kind, const std::string& name, const std::string& on, const std::string& tag,
                        const Matrix& m) {
    std::cout << kind << ' ' << name << " on " << on << (tag.empty() ? "" : " " + tag) << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::cout << "  row";
        for (std::size_t j = 0; j < m.cols(); ++j) std::cout << ' ' << m.field().literal(m.at(i, j));
        std::cout << '\n';
    }
    std::cout << "end\n";
}

void write(const Workspace& ws, const std::string& path) {
    if (!path.empty()) io::save_file(ws, path);
}

Workspace load(const Opts& o) { return io::load_file(o.file); }

// ---- commands ----

int cmd_verify(const Opts& o) {
    Workspace ws = load(o);
    Report rep;
    for (auto& a : ws.algebras)
        if (o.algebra.empty() || a.name == o.algebra) rep.merge(verify(a.value), a.name + ".");
    if (rep.checks().empty()) throw InputError(o.algebra.empty() ? "the file has no algebra" : "no algebra named '" + o.algebra + "'");
    return emit(rep);
}

int cmd_forms_classify(const Opts& o) {
    Workspace ws = load(o);
    auto& b = pick(ws.forms, o.form, "form");
    std::cout << "FORM " << b.name << " on " << b.on << '\n';
    std::cout << "PARITY " << to_string(b.value.parity) << '\n';
    for (auto& l : classify_symmetry(b.value).labels()) std::cout << "CLASS " << l << '\n';
    std::cout << "NONDEGENERATE " << (is_nondegenerate(b.value) ? "yes" : "no") << '\n';
    return 0;
}

int cmd_forms_check(const Opts& o) {
    Workspace ws = load(o);
    auto& b = pick(ws.forms, o.form, "form");
    return emit(nis_report(b.value, ws.algebra(b.on)));
}

int cmd_deriv_space(const Opts& o) {
    Workspace ws = load(o);
    auto& a = pick_algebra(ws, o.algebra);
    Parity p = parse_parity(o.parity);
    auto basis = derivation_space(a.value, p);
    std::cout << "DIM " << basis.size() << '\n';
    for (std::size_t k = 0; k < basis.size(); ++k)
        print_matrix_block("operator", "D" + std::to_string(k), a.name, to_string(p), basis[k].matrix);
    return 0;
}

int cmd_deriv_check(const Opts& o) {
    Workspace ws = load(o);
    auto& d = pick(ws.operators, o.op, "operator");
    return emit(derivation_report(d.value, ws.algebra(d.on)));
}

DoubleExtension build_dext(const Workspace& ws, const Opts& o) {
    auto& a = pick_algebra(ws, o.algebra);
    auto& b = pick(ws.forms, o.form, "form");
    auto& d = pick(ws.operators, o.op, "operator");
    if (b.on != a.name || d.on != a.name) throw InputError("form and operator must live on '" + a.name + "'");
    const LieSuperAlgebra& g = a.value;
    DextVariant v = parse_variant(o.variant);
    DextSeed seed{v, g, b.value, d.value, element(g, o.alpha), element(g, o.a0), literal(g.field(), o.m),
                  literal(g.field(), o.c)};
    Report pre = dext_preconditions(seed);
    if (!pre.ok()) {
        std::cout << pre.render();
        throw PreconditionError("dext: " + pre.first_failure());
    }
    return double_extend(seed);
}

Workspace extension_workspace(const DoubleExtension& ext) {
    Workspace out;
    out.add_algebra("g", ext.g);
    out.add_form("B", "g", ext.b);
    return out;
}

int cmd_dext_build(const Opts& o) {
    Workspace ws = load(o);
    DoubleExtension ext = build_dext(ws, o);
    Report rep;
    rep.merge(verify(ext.g), "g.");
    rep.merge(nis_report(ext.b, ext.g), "B.");
    write(extension_workspace(ext), o.output);
    return emit(rep);
}

int cmd_dext_lift(const Opts& o) {
    Workspace ws = load(o);
    DoubleExtension ext = build_dext(ws, o);
    auto& dt = pick(ws.operators, o.delta, "operator (--delta)");
    const Field& f = ext.g.field();
    LiftData l{dt.value, literal(f, o.lambda), element(ext.seed.a, o.shift), literal(f, o.mu)};
    Report pre = lift_preconditions(ext, l);
    if (!pre.ok()) {
        std::cout << pre.render();
        throw PreconditionError("lift: " + pre.first_failure());
    }
    LiftedExtension lifted = lift_delta(ext, l);
    Report rep = pre;
    rep.merge(derivation_report(lifted.delta, ext.g), "Delta.");
    rep.merge(closed_report(lifted.omega, ext.g), "omega.");
    Workspace out = extension_workspace(ext);
    out.add_operator("Delta", "g", lifted.delta);
    out.add_form("omega", "g", lifted.omega);
    write(out, o.output);
    return emit(rep);
}

int cmd_dext_reduce(const Opts& o) {
    Workspace ws = load(o);
    auto& a = pick_algebra(ws, o.algebra);
    auto& b = pick(ws.forms, o.form, "form");
    if (o.omega.empty()) throw InputError("--omega is required");
    auto& w = pick(ws.forms, o.omega, "form");
    Reconstruction r = reconstruct(a.value, b.value, w.value, parse_variant(o.variant));
    Report rep;
    rep.check("reconstruct", r.ok, [&] { return r.diagnostic; });
    if (r.ok) {
        const LiftedExtension& le = *r.lifted;
        std::cout << "EIGENVALUE " << a.value.field().literal(r.eigenvalue) << '\n';
        Workspace out;
        out.add_algebra("a", le.ext.seed.a);
        out.add_form("B", "a", le.ext.seed.b);
        out.add_operator("D", "a", le.ext.seed.d);
        out.add_operator("Delta", "a", le.data.delta_a);
        write(out, o.output);
    }
    return emit(rep);
}

ManinTriple pick_triple(const Workspace& ws) {
    if (!ws.triples.empty()) return ws.triple(ws.triples.front());
    if (!ws.dual_pairs.empty()) return build_manin(ws.dual_pair(ws.dual_pairs.front()));
    throw InputError("the file has neither a manin line nor a dual pair");
}

Workspace triple_workspace(const ManinTriple& t) {
    Workspace out;
    out.add_algebra("h", t.h);
    out.add_form("B", "h", t.b);
    out.add_subspace("g_in_h", "h", t.g);
    out.add_subspace("k_in_h", "h", t.k);
    out.add_triple({"h", "B", "g_in_h", "k_in_h"});
    return out;
}

DualPair pick_pair(const Workspace& ws) {
    if (ws.dual_pairs.empty()) throw InputError("the file has no dualpair block");
    return ws.dual_pair(ws.dual_pairs.front());
}

int cmd_manin_build(const Opts& o) {
    Workspace ws = load(o);
    DualPair p = pick_pair(ws);
    Report rep = check_manin_conditions(p);
    if (rep.ok()) {
        ManinTriple t = build_manin(p);
        rep.merge(manin_triple_report(t), "triple.");
        Workspace out;
        out.add_algebra(ws.dual_pairs.front().g, p.g);
        out.add_algebra(ws.dual_pairs.front().gstar, p.gstar);
        io::add_manin(out, ws.dual_pairs.front().g, ws.dual_pairs.front().gstar, t);
        write(out, o.output);
    }
    return emit(rep);
}

int cmd_manin_check(const Opts& o) {
    Workspace ws = load(o);
    DualPair p = pick_pair(ws);
    Report conditions = check_manin_conditions(p);
    Report cocycle = cocycle_check(p);
    Report rep = conditions;
    rep.merge(cocycle, "cocycle.");
    rep.check("agreement", conditions.ok() == cocycle.ok(), [] { return std::string("condition and cocycle verdicts differ"); });
    return emit(rep);
}

int cmd_manin_dext(const Opts& o) {
    Workspace ws = load(o);
    ManinTriple t = pick_triple(ws);
    auto& d = pick(ws.operators, o.op, "operator");
    if (d.value.matrix.rows() != t.h.dim()) throw InputError("operator does not act on the triple's algebra");
    Parity p = parse_parity(o.parity);
    ManinExtension e = p == Parity::Even ? manin_dext_even(t, d.value, element(t.h, o.alpha))
                                         : manin_dext_odd(t, d.value, element(t.h, o.a0));
    write(triple_workspace(e.triple), o.output);
    return emit(e.checks);
}

int cmd_manin_reduce(const Opts& o) {
    Workspace ws = load(o);
    ManinTriple t = pick_triple(ws);
    ManinReduction r = manin_reduce(t, parse_parity(o.parity));
    Report rep;
    rep.check("reduce", r.ok, [&] { return r.diagnostic; });
    if (r.ok) {
        std::cout << "CENTRAL-IN " << (r.x_in_k ? "k" : "g") << '\n';
        Workspace out = triple_workspace(r.reduced);
        out.add_operator("D", "h", r.seed.d);
        write(out, o.output);
        rep.merge(manin_triple_report(r.reduced), "reduced.");
    }
    return emit(rep);
}

int cmd_rmatrix_check(const Opts& o) {
    Workspace ws = load(o);
    auto& r = pick(ws.tensors, o.tensor, "tensor");
    const LieSuperAlgebra& g = ws.algebra(r.on);
    Report rep;
    Tensor3 c = cybo(g, r.value);
    rep.check("cybe", c.is_zero(), [&] { return "coefficient " + c.first_nonzero(basis_names(g)); });
    rep.merge(jacobi_obstruction(g, r.value));
    if (is_even_tensor(g, r.value) && r.value.is_symmetric()) rep.merge(ijr_check(g, r_to_R(r.value)), "ijr.");
    else std::cout << "INFO ijr skipped: r is not even and symmetric\n";
    if (o.conditions) rep.merge(quasitriangular_conditions(g, r.value), "cond.");
    return emit(rep);
}

int cmd_rmatrix_search(const Opts& o) {
    Workspace ws = load(o);
    auto& a = pick_algebra(ws, o.algebra);
    std::vector<std::string> names;
    std::stringstream ss(o.constraints);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) names.push_back(item);
    RConstraints c = RConstraints::parse(names);
    auto found = search_r_matrices(a.value, c, o.budget);
    std::cout << "COUNT " << found.size() << '\n';
    for (std::size_t k = 0; k < found.size(); ++k) print_matrix_block("tensor", "r" + std::to_string(k), a.name, "", found[k].matrix());
    return 0;
}

int cmd_rmatrix_deform(const Opts& o) {
    Workspace ws = load(o);
    auto& r = pick(ws.tensors, o.tensor, "tensor");
    auto& b = pick(ws.forms, o.form, "form");
    if (b.on != r.on) throw InputError("form and tensor must live on the same algebra");
    Deformation d = deform(ws.algebra(r.on), b.value, r.value);
    Workspace out;
    out.add_algebra("deformed", d.algebra);
    out.add_operator("U", "deformed", GradedOperator{d.U, Parity::Even});
    out.add_operator("R", "deformed", GradedOperator{d.R, Parity::Even});
    write(out, o.output);
    return emit(d.checks);
}

StarProduct make_star(const Workspace& ws, const Opts& o, const LieSuperAlgebra*& g) {
    auto& d = pick(ws.operators, o.op, "operator");
    g = &ws.algebra(d.on);
    return StarProduct(desuperize(*g), d.value);
}

int cmd_vinberg_star(const Opts& o) {
    Workspace ws = load(o);
    const LieSuperAlgebra* g = nullptr;
    StarProduct s = make_star(ws, o, g);
    for (std::size_t i = 0; i < g->dim(); ++i)
        for (std::size_t j = 0; j < g->dim(); ++j) {
            const Vector& v = s.table().at(i, j);
            if (!v.is_zero()) std::cout << "STAR " << g->name(i) << ' ' << g->name(j) << " = " << g->show(v) << '\n';
        }
    return 0;
}

int cmd_vinberg_check(const Opts& o) {
    Workspace ws = load(o);
    const LieSuperAlgebra* g = nullptr;
    StarProduct s = make_star(ws, o, g);
    std::cout << "INFO left-alternating " << (is_left_alternating(s.table()) ? "yes" : "no") << '\n';
    return emit(left_symmetry_report(s.table()));
}

int cmd_vinberg_superize(const Opts& o) {
    Workspace ws = load(o);
    auto& d = pick(ws.operators, o.op, "operator");
    Superization s = superize(ws.algebra(d.on), d.value);
    if (s.algebra) {
        Workspace out;
        out.add_algebra("s", *s.algebra);
        write(out, o.output);
    }
    return emit(s.checks);
}

int cmd_catalog_list(const Opts&) {
    for (auto& e : io::catalog_entries())
        std::cout << e.name << (e.params.empty() ? "" : "(" + e.params + ")") << "  " << e.about << '\n';
    return 0;
}

int cmd_catalog_emit(const Opts& o) {
    Workspace ws = io::catalog_workspace(o.name, io::parse_params(o.params), Field::gf(o.field));
    if (o.output.empty()) std::cout << io::save(ws);
    else io::save_file(ws, o.output);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lie superalgebras over GF(2^k): verification and constructions"};
    app.require_subcommand(1);
    Opts o;
    std::function<int(const Opts&)> action;

    auto leaf = [&](CLI::App* parent, const char* name, const char* about, int (*fn)(const Opts&), bool file = true) {
        CLI::App* c = parent->add_subcommand(name, about);
        if (file) c->add_option("file", o.file, "workspace file")->required()->check(CLI::ExistingFile);
        c->callback([&action, fn] { action = fn; });
        return c;
    };
    auto group = [&](const char* name, const char* about) {
        CLI::App* c = app.add_subcommand(name, about);
        c->require_subcommand(1);
        return c;
    };
    auto out = [&](CLI::App* c) { c->add_option("-o,--output", o.output, "write the resulting workspace here"); };
    auto alg = [&](CLI::App* c) { c->add_option("--algebra", o.algebra, "algebra name (default: the first)"); };

    alg(leaf(&app, "verify", "bracket symmetry, Jacobi and squaring identities", cmd_verify));

    auto* forms = group("forms", "bilinear forms");
    leaf(forms, "classify", "symmetry classes and parity of a form", cmd_forms_classify)->add_option("--form", o.form);
    leaf(forms, "check", "non-degenerate invariant form check", cmd_forms_check)->add_option("--form", o.form);

    auto* deriv = group("deriv", "derivations");
    auto* ds = leaf(deriv, "space", "basis of the derivations of one parity", cmd_deriv_space);
    alg(ds);
    ds->add_option("--parity", o.parity, "even or odd");
    leaf(deriv, "check", "derivation identities for an operator", cmd_deriv_check)->add_option("--operator", o.op);

    auto* dext = group("dext", "double extensions");
    auto dext_opts = [&](CLI::App* c) {
        alg(c);
        c->add_option("--form", o.form, "NIS on the algebra");
        c->add_option("--operator", o.op, "derivation D");
        c->add_option("--variant", o.variant, "even-even, odd-even, odd-odd or even-odd")->required();
        c->add_option("--alpha", o.alpha, "alpha on odd basis vectors, as an element");
        c->add_option("--a0", o.a0, "a0 as an element");
        c->add_option("--m", o.m, "x-coefficient of s(e) (odd-odd)");
        c->add_option("--c", o.c, "B(x*,x*) (even-even)");
        out(c);
    };
    dext_opts(leaf(dext, "build", "double extension of (a, B) by D", cmd_dext_build));
    auto* dl = leaf(dext, "lift", "double extension with a lifted invertible derivation", cmd_dext_lift);
    dext_opts(dl);
    dl->add_option("--delta", o.delta, "invertible derivation of a to lift");
    dl->add_option("--lambda", o.lambda, "eigenvalue on x");
    dl->add_option("--shift", o.shift, "shift element");
    dl->add_option("--mu", o.mu, "x-coefficient (odd-even)");
    auto* dr = leaf(dext, "reduce", "recover the double extension data from (g, B, omega)", cmd_dext_reduce);
    alg(dr);
    dr->add_option("--form", o.form, "NIS B");
    dr->add_option("--omega", o.omega, "closed form omega");
    dr->add_option("--variant", o.variant, "even-even, odd-even, odd-odd or even-odd")->required();
    out(dr);

    auto* manin = group("manin", "Manin triples");
    out(leaf(manin, "build", "assemble the Manin triple of the first dual pair", cmd_manin_build));
    leaf(manin, "check", "Manin conditions and the cocycle characterization", cmd_manin_check);
    auto* md = leaf(manin, "dext", "double extension of a Manin triple", cmd_manin_dext);
    md->add_option("--parity", o.parity, "even or odd");
    md->add_option("--operator", o.op, "derivation of h");
    md->add_option("--alpha", o.alpha, "alpha values (even)");
    md->add_option("--a0", o.a0, "a0 (odd)");
    out(md);
    auto* mr = leaf(manin, "reduce", "reduce a Manin triple along a central vector in a wing", cmd_manin_reduce);
    mr->add_option("--parity", o.parity, "even or odd");
    out(mr);

    auto* rm = group("rmatrix", "r-matrices");
    auto* rc = leaf(rm, "check", "classical Yang-Baxter, dual Jacobi and IJR checks", cmd_rmatrix_check);
    rc->add_option("--tensor", o.tensor);
    rc->add_flag("--conditions", o.conditions, "also report the quasitriangular conditions");
    auto* rs = leaf(rm, "search", "exhaustive search for r-matrices", cmd_rmatrix_search);
    alg(rs);
    rs->add_option("--constraints", o.constraints, "comma list of even, symmetric, cybe, hajj, feldvoss");
    rs->add_option("--budget", o.budget, "maximum number of tensors to enumerate");
    auto* rd = leaf(rm, "deform", "deformation through U = R o B", cmd_rmatrix_deform);
    rd->add_option("--tensor", o.tensor);
    rd->add_option("--form", o.form);
    out(rd);

    auto* vb = group("vinberg", "left-symmetric structures");
    leaf(vb, "star", "star product table of an invertible derivation", cmd_vinberg_star)->add_option("--operator", o.op);
    leaf(vb, "check", "left-symmetry of the star product", cmd_vinberg_check)->add_option("--operator", o.op);
    auto* vs = leaf(vb, "superize", "squaring s(x) = x*x on the odd part", cmd_vinberg_superize);
    vs->add_option("--operator", o.op);
    out(vs);

    auto* cat = group("catalog", "built-in examples");
    leaf(cat, "list", "list catalog entries", cmd_catalog_list, false);
    auto* ce = leaf(cat, "emit", "write a catalog entry as a workspace file", cmd_catalog_emit, false);
    ce->add_option("name", o.name, "entry name")->required();
    ce->add_option("--params", o.params, "comma-separated parameters");
    ce->add_option("--field", o.field, "field degree k of GF(2^k)");
    out(ce);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        return action(o);
    } catch (const io::ParseError& e) {
        std::cerr << "error: " << o.file << ": " << e.what() << '\n';
    } catch (const PreconditionError& e) {
        std::cout << "CHECK precondition FAIL " << e.what() << '\n';
        return 1;
    } catch (const ManinError& e) {
        std::cout << "CHECK precondition FAIL " << e.what() << '\n';
        return 1;
    } catch (const ConsistencyError& e) {
        std::cout << "CHECK consistency FAIL " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
    }
    return 2;
}
