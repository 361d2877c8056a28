#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <milnor/bounds.hpp>
#include <milnor/json_io.hpp>
#include <milnor/lie_coalgebra.hpp>
#include <milnor/massey.hpp>

#ifndef MILNOR_FIXTURE_DIR
#define MILNOR_FIXTURE_DIR ""
#endif

namespace {

using namespace milnor;

enum class Format { json, csv, text };

Format parse_format(const std::string& s) {
    if (s == "json") return Format::json;
    if (s == "csv") return Format::csv;
    if (s == "text") return Format::text;
    throw std::invalid_argument("field \"format\": expected json, csv or text");
}

void print_json(const Json& payload) { std::cout << payload.dump(2) << "\n"; }

// Text mode flattens the top level; nested values print compactly.
void print_text(const Json& payload) {
    for (const auto& [key, value] : payload.items()) {
        if (key == "schema" || key == "kind" || key == "command") continue;
        if (value.is_string())
            std::cout << key << " " << value.get<std::string>() << "\n";
        else
            std::cout << key << " " << value.dump() << "\n";
    }
}

// Subcommands with a CSV rendering return before reaching here.
int emit(const Json& payload, Format f, int code) {
    if (f == Format::csv)
        throw std::invalid_argument("field \"format\": csv not supported for this output");
    if (f == Format::text)
        print_text(payload);
    else
        print_json(payload);
    return code;
}

int emit_error(const std::string& message, int code) {
    Json j;
    j["schema"] = schema_version;
    j["error"] = message;
    print_json(j);
    return code;
}

// Inline JSON is detected by a leading brace or bracket; otherwise the
// argument is a path, tried literally, then under $MILNOR_FIXTURES, then
// under the build-time fixture directory.
Json load_input(const std::string& arg) {
    const auto first = arg.find_first_not_of(" \t\n");
    if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) {
        return Json::parse(arg);
    }
    std::vector<std::string> candidates{arg};
    if (const char* env = std::getenv("MILNOR_FIXTURES"))
        candidates.push_back(std::string(env) + "/" + arg);
    if (std::string dir = MILNOR_FIXTURE_DIR; !dir.empty())
        candidates.push_back(dir + "/" + arg);
    for (const std::string& path : candidates) {
        std::ifstream in(path);
        if (!in) continue;
        std::stringstream buf;
        buf << in.rdbuf();
        if (buf.str().empty()) throw std::invalid_argument("empty input file: " + path);
        return Json::parse(buf.str());
    }
    throw std::invalid_argument("input not found: " + arg);
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw std::invalid_argument("empty entry in integer list");
        std::size_t used = 0;
        out.push_back(std::stoi(item, &used));
        if (used != item.size()) throw std::invalid_argument("bad integer list entry: " + item);
    }
    if (out.empty()) throw std::invalid_argument("empty integer list");
    return out;
}

Json json_of_bound(const BoundValue& b) {
    Json j;
    j["finite"] = !b.is_exponential;
    if (b.is_exponential)
        j["natural_exponent"] = json_of_rat(b.natural_exponent);
    else
        j["value"] = json_of_rat(b.value);
    j["log2"] = log2_estimate(b);
    return j;
}

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const nlohmann::json::exception& e) {
        return emit_error(std::string("parse error: ") + e.what(), 2);
    } catch (const std::invalid_argument& e) {
        return emit_error(e.what(), 2);
    } catch (const std::length_error& e) {
        return emit_error(e.what(), 2);
    } catch (const std::domain_error& e) {
        return emit_error(e.what(), 2);
    } catch (const std::exception& e) {
        return emit_error(std::string("internal error: ") + e.what(), 2);
    }
}

Json header(const char* command) {
    Json j;
    j["schema"] = schema_version;
    j["command"] = command;
    return j;
}

// ---- subcommand bodies ----------------------------------------------------

int run_mu(const std::string& link_arg, const std::string& indices_arg, int maxdeg, Format f) {
    const LinkSystem L = link_system_from_json(load_input(link_arg));
    const std::vector<int> I = parse_int_list(indices_arg);
    const MuResult r = mu_bar(L, I, maxdeg);
    Json j = header("mu");
    j["indices"] = I;
    j["defined"] = r.defined;
    j["value"] = json_of_int(r.value);
    Json obs = Json::array();
    for (const auto& w : r.obstructions) obs.push_back(w);
    j["obstructions"] = std::move(obs);
    return emit(j, f, r.defined ? 0 : 1);
}

int run_expand(const std::string& word_arg, int maxdeg, bool squarefree, Format f) {
    const Word w = word_from_json(load_input(word_arg));
    const NcSeries s = expand(w, maxdeg, squarefree);
    if (f == Format::csv) {
        std::cout << "monomial,coefficient\n";
        for (const auto& [mon, c] : s.terms) {
            std::string key;
            for (std::size_t i = 0; i < mon.size(); ++i)
                key += (i ? " " : "") + std::to_string(mon[i]);
            std::cout << "\"" << key << "\"," << int_to_string(c) << "\n";
        }
        return 0;
    }
    Json j = header("expand");
    j["rank"] = s.rank;
    j["maxdeg"] = s.maxdeg;
    j["squarefree"] = s.squarefree_mode;
    Json terms = Json::array();
    for (const auto& [mon, c] : s.terms) terms.push_back({Json(mon), json_of_int(c)});
    j["terms"] = std::move(terms);
    return emit(j, f, 0);
}

int run_shuffle_check(const std::string& word_arg, const std::string& i_arg,
                      const std::string& j_arg, int maxdeg, Format f) {
    const Word w = word_from_json(load_input(word_arg));
    const std::vector<int> I = parse_int_list(i_arg);
    const std::vector<int> J = parse_int_list(j_arg);
    if (maxdeg == 0) maxdeg = static_cast<int>(I.size() + J.size());
    const NcSeries s = expand(w, maxdeg);
    const Int residual = shuffle_residual(s, I, J);
    Json j = header("shuffle-check");
    j["I"] = I;
    j["J"] = J;
    j["residual"] = json_of_int(residual);
    j["holds"] = residual == 0;
    return emit(j, f, residual == 0 ? 0 : 1);
}

BracketTree tree_from_json(const Json& j) {
    if (j.is_number_integer()) return leaf(j.get<int>());
    if (j.is_array() && j.size() == 2)
        return node(tree_from_json(j.at(0)), tree_from_json(j.at(1)));
    throw std::invalid_argument("field \"tree\": expected a leaf index or a pair");
}

int run_pair(const std::string& degrees_arg, const std::string& indices_arg,
             const std::string& tree_arg, Format f) {
    const GradedGenerators g = make_generators(parse_int_list(degrees_arg));
    const std::vector<int> I = parse_int_list(indices_arg);
    const BracketTree b = tree_from_json(Json::parse(tree_arg));
    const Int v = pair(g, I, b);
    Json j = header("pair");
    j["indices"] = I;
    j["functional_degree"] = functional_degree(g, I);
    j["tree_degree"] = tree_degree(g, b);
    j["value"] = json_of_int(v);
    return emit(j, f, 0);
}

int run_dual_basis(const std::string& degrees_arg, Format f) {
    const GradedGenerators g = make_generators(parse_int_list(degrees_arg));
    const DualBasisMatrix M = dual_basis_matrix(g);
    const std::size_t n = M.permutations.size();
    bool diagonal = true;
    std::vector<Int> diag;
    for (std::size_t r = 0; r < n; ++r) {
        diag.push_back(M.entries[r][r]);
        for (std::size_t c = 0; c < n; ++c)
            if (r != c && M.entries[r][c] != 0) diagonal = false;
    }
    if (f == Format::csv) {
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c)
                std::cout << (c ? "," : "") << int_to_string(M.entries[r][c]);
            std::cout << "\n";
        }
        return 0;
    }
    Json j = header("dual-basis");
    Json perms = Json::array();
    for (const auto& p : M.permutations) perms.push_back(p);
    j["permutations"] = std::move(perms);
    Json rows = Json::array();
    for (const auto& row : M.entries) {
        Json r = Json::array();
        for (const Int& v : row) r.push_back(json_of_int(v));
        rows.push_back(std::move(r));
    }
    j["entries"] = std::move(rows);
    j["diagonal"] = diagonal;
    Json d = Json::array();
    for (const Int& v : diag) d.push_back(json_of_int(v));
    j["diagonal_entries"] = std::move(d);
    return emit(j, f, 0);
}

int run_massey(const std::string& dga_arg, const std::string& classes_arg, int perturbations,
               std::uint64_t seed, const std::string& extract_name, Format f) {
    const Dga D = exterior_dga_from_json(load_input(dga_arg));
    std::vector<CohomClass> classes;
    if (!classes_arg.empty() && classes_arg.front() == '[') {
        for (const Json& cj : Json::parse(classes_arg))
            classes.push_back(cohom_class(D, chain_from_json(D, cj)));
    } else {
        std::stringstream ss(classes_arg);
        std::string name;
        while (std::getline(ss, name, ','))
            classes.push_back(cohom_class(D, basis_chain(D, D.index_of(name))));
    }
    const MasseyOutcome out = massey_product(D, classes, perturbations, seed);
    Json j = header("massey");
    j["defined"] = out.defined();
    j["seed"] = seed;
    if (out.defined()) {
        j["degree"] = out.cls->degree;
        j["representative"] = json_of_chain(D, out.cls->representative);
        j["class_is_zero"] = class_is_zero(D, *out.cls);
        Json pert;
        pert["requested"] = out.perturbations_requested;
        pert["same"] = out.perturbations_same;
        j["perturbations"] = std::move(pert);
        if (!extract_name.empty()) {
            const Chain dual = basis_chain(D, D.index_of(extract_name));
            j["coefficient"] = json_of_rat(coefficient_extract(D, out, dual));
        }
        return emit(j, f, 0);
    }
    Json ob;
    ob["i"] = out.obstruction->i;
    ob["j"] = out.obstruction->j;
    ob["degree"] = out.obstruction->cls.degree;
    ob["class"] = json_of_chain(D, out.obstruction->cls.representative);
    j["obstruction"] = std::move(ob);
    return emit(j, f, 1);
}

int solve_payload(const char* command, const SparseSignMatrix& A, const std::vector<Rat>& b,
                  Format f) {
    const SolveResult r = solve_bounded(A, b);
    Json j = header(command);
    if (const auto* sol = std::get_if<BoundedSolution>(&r)) {
        j["feasible"] = true;
        j["x"] = json_of_rat_vector(sol->x);
        j["inf_norm"] = json_of_rat(sol->inf_norm);
        j["certified_bound"] = json_of_rat(sol->certified_bound);
        return emit(j, f, 0);
    }
    j["feasible"] = false;
    j["certificate"] = json_of_rat_vector(std::get<InconsistencyCertificate>(r).lambda);
    return emit(j, f, 1);
}

int run_coiso_solve(const std::string& matrix_arg, const std::string& rhs_arg, Format f) {
    const SparseSignMatrix A = sign_matrix_from_json(load_input(matrix_arg));
    const std::vector<Rat> b = rat_vector_from_json(load_input(rhs_arg));
    return solve_payload("coiso-solve", A, b, f);
}

int run_coboundary(const std::string& complex_arg, int q, const std::string& rhs_arg,
                   bool matrix_only, Format f) {
    const SimplicialComplex K = complex_from_json(load_input(complex_arg));
    const SparseSignMatrix delta = coboundary_matrix(K, q);
    if (matrix_only) {
        Json j = json_of_sign_matrix(delta);
        j["command"] = "coboundary";
        return emit(j, f, 0);
    }
    if (rhs_arg.empty())
        throw std::invalid_argument("field \"rhs\": required unless --matrix-only is given");
    const std::vector<Rat> b = rat_vector_from_json(load_input(rhs_arg));
    return solve_payload("coboundary", delta, b, f);
}

int run_bounds(int m, const std::string& dims_arg, const std::string& indices_arg,
               const std::string& tau_arg, const std::string& bilip_arg,
               const std::string& cm_arg, const std::string& cmd_arg, Format f) {
    const LinkDimensions L =
        make_link_dimensions(m, parse_int_list(dims_arg), parse_int_list(indices_arg));
    Json j = header("bounds");
    const DimensionCheck check = check_dimension(L);
    Json cj;
    cj["p_form"] = check.p_form;
    cj["q_form"] = check.q_form;
    j["dimension_check"] = std::move(cj);
    if (!check.holds()) return emit(j, f, 1);

    BoundConstants constants;
    if (!cm_arg.empty()) constants.c_m = parse_rational(cm_arg);
    if (!cmd_arg.empty()) constants.c_md = parse_rational(cmd_arg);
    const Rat tau = parse_rational(tau_arg);

    const Regime regime = classify_regime(L);
    j["regime"] = regime_name(regime.kind);
    j["tau_exponent"] = json_of_int(regime.tau_exponent);
    j["bound"] = json_of_bound(upper_bound(regime, tau, std::nullopt, constants));
    if (!bilip_arg.empty()) {
        const Regime br = bilipschitz_regime(L);
        Json bj;
        bj["tau_exponent"] = json_of_int(br.tau_exponent);
        bj["l_exponent"] = json_of_int(br.l_exponent);
        bj["bound"] = json_of_bound(upper_bound(br, tau, parse_rational(bilip_arg), constants));
        j["bilipschitz"] = std::move(bj);
    }
    return emit(j, f, 0);
}

int run_dichotomy(int m, int d, int n_min, int n_max, const std::string& cm_arg,
                  const std::string& cmd_arg, Format f) {
    BoundConstants constants;
    if (!cm_arg.empty()) constants.c_m = parse_rational(cm_arg);
    if (!cmd_arg.empty()) constants.c_md = parse_rational(cmd_arg);
    const DichotomyTable t = dichotomy_table(m, d, n_min, n_max, constants);
    bool all_consistent = true;
    for (const DichotomyRow& row : t.rows)
        all_consistent = all_consistent && row.poly_consistent && row.exp_consistent;

    if (f == Format::csv) {
        std::cout << "n,tau,poly_value,exp_value,poly_bound_log2,exp_bound_log2,"
                     "poly_consistent,exp_consistent\n";
        for (const DichotomyRow& row : t.rows) {
            std::cout << row.n << "," << to_string(row.tau) << ","
                      << (row.poly_value ? int_to_string(*row.poly_value) : "") << ","
                      << (row.exp_value ? int_to_string(*row.exp_value) : "") << ","
                      << log2_estimate(row.poly_bound) << "," << log2_estimate(row.exp_bound)
                      << "," << (row.poly_consistent ? 1 : 0) << ","
                      << (row.exp_consistent ? 1 : 0) << "\n";
        }
        return all_consistent ? 0 : 1;
    }

    Json j = header("dichotomy");
    j["m"] = t.m;
    j["d"] = t.d;
    j["poly_applies"] = t.poly_applies;
    j["exp_applies"] = t.exp_applies;
    Json rows = Json::array();
    for (const DichotomyRow& row : t.rows) {
        Json rj;
        rj["n"] = row.n;
        rj["tau"] = json_of_rat(row.tau);
        if (row.poly_value) rj["poly_value"] = json_of_int(*row.poly_value);
        if (row.exp_value) rj["exp_value"] = json_of_int(*row.exp_value);
        rj["poly_bound"] = json_of_bound(row.poly_bound);
        rj["exp_bound"] = json_of_bound(row.exp_bound);
        rj["poly_consistent"] = row.poly_consistent;
        rj["exp_consistent"] = row.exp_consistent;
        rows.push_back(std::move(rj));
    }
    j["rows"] = std::move(rows);
    if (t.crossover) j["crossover"] = *t.crossover;
    j["all_consistent"] = all_consistent;
    return emit(j, f, all_consistent ? 0 : 1);
}

int run_fk(int q, const std::string& variant_arg, bool length_only, int l, bool thickness,
           const std::string& c_arg, const std::string& C_arg, Format f) {
    FkVariant variant;
    if (variant_arg == "single")
        variant = FkVariant::Single;
    else if (variant_arg == "multi")
        variant = FkVariant::Multi;
    else
        throw std::invalid_argument("field \"variant\": expected single or multi");
    if (q > 20) throw std::invalid_argument("field \"q\": capped at 20");

    if (thickness) {
        const Rat c = c_arg.empty() ? Rat(1) : parse_rational(c_arg);
        const Rat C = C_arg.empty() ? Rat(1) : parse_rational(C_arg);
        const FkThicknessBound b = fk_thickness_bound(q, l, c, C);
        Json j = header("fk");
        j["q"] = b.q;
        j["l"] = b.l;
        j["root"] = b.root;
        j["rhs"] = json_of_rat(b.rhs);
        if (b.exact_log2) j["log2_tau_bound"] = json_of_rat(*b.exact_log2);
        j["log2_tau_estimate"] = b.log2_bound_estimate();
        return emit(j, f, 0);
    }
    if (length_only) {
        const Word w = fk_word(q, variant);
        if (f == Format::text) {
            std::cout << w.letters.size() << "\n";
            return 0;
        }
        Json j = header("fk");
        j["q"] = q;
        j["variant"] = variant_arg;
        j["length"] = w.letters.size();
        return emit(j, f, 0);
    }
    if (l >= 0) {
        if (q > 5)
            throw std::invalid_argument("field \"q\": telescope coefficients capped at q = 5");
        const Int coeff = fk_telescope_coefficient(q, l, variant);
        if (f == Format::text) {
            std::cout << int_to_string(coeff) << "\n";
            return 0;
        }
        Json j = header("fk");
        j["q"] = q;
        j["l"] = l;
        j["variant"] = variant_arg;
        j["coefficient"] = json_of_int(coeff);
        return emit(j, f, 0);
    }
    const Word w = fk_word(q, variant);
    Json j = header("fk");
    j["q"] = q;
    j["variant"] = variant_arg;
    j["length"] = w.letters.size();
    j["word"] = json_of_word(w);
    return emit(j, f, 0);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Milnor-invariant and thickness-bound toolkit"};
    app.require_subcommand(1);
    int exit_code = 0;
    std::string format_str = "json";

    auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", format_str, "output format: json, csv or text");
    };

    // mu
    auto* mu = app.add_subcommand("mu", "Milnor invariant of a longitude system");
    std::string mu_link, mu_indices;
    int mu_maxdeg = 0;
    mu->add_option("--link", mu_link, "link system JSON, file or fixture name")->required();
    mu->add_option("--indices", mu_indices, "comma-separated component indices")->required();
    mu->add_option("--maxdeg", mu_maxdeg, "truncation degree, 0 for automatic");
    add_format(mu);
    mu->callback([&] {
        exit_code = guarded(
            [&] { return run_mu(mu_link, mu_indices, mu_maxdeg, parse_format(format_str)); });
    });

    // expand
    auto* ex = app.add_subcommand("expand", "Magnus expansion of a word");
    std::string ex_word;
    int ex_maxdeg = 0;
    bool ex_squarefree = false;
    ex->add_option("--word", ex_word, "word JSON or file")->required();
    ex->add_option("--maxdeg", ex_maxdeg, "truncation degree")->required();
    ex->add_flag("--squarefree", ex_squarefree, "kill repeated-index monomials");
    add_format(ex);
    ex->callback([&] {
        exit_code = guarded([&] {
            return run_expand(ex_word, ex_maxdeg, ex_squarefree, parse_format(format_str));
        });
    });

    // shuffle-check
    auto* sh = app.add_subcommand("shuffle-check", "overlapping-shuffle relation residual");
    std::string sh_word, sh_i, sh_j;
    int sh_maxdeg = 0;
    sh->add_option("--word", sh_word, "word JSON or file")->required();
    sh->add_option("--I", sh_i, "first index sequence")->required();
    sh->add_option("--J", sh_j, "second index sequence")->required();
    sh->add_option("--maxdeg", sh_maxdeg, "truncation degree, 0 for len(I)+len(J)");
    add_format(sh);
    sh->callback([&] {
        exit_code = guarded([&] {
            return run_shuffle_check(sh_word, sh_i, sh_j, sh_maxdeg, parse_format(format_str));
        });
    });

    // pair
    auto* pr = app.add_subcommand("pair", "pairing of a functional with a bracket tree");
    std::string pr_degrees, pr_indices, pr_tree;
    pr->add_option("--degrees", pr_degrees, "generator degrees")->required();
    pr->add_option("--indices", pr_indices, "functional index sequence")->required();
    pr->add_option("--tree", pr_tree, "bracket tree as nested pairs, e.g. [1,[2,3]]")
        ->required();
    add_format(pr);
    pr->callback([&] {
        exit_code = guarded(
            [&] { return run_pair(pr_degrees, pr_indices, pr_tree, parse_format(format_str)); });
    });

    // dual-basis
    auto* db = app.add_subcommand("dual-basis", "pairing matrix of permutation functionals");
    std::string db_degrees;
    db->add_option("--degrees", db_degrees, "generator degrees")->required();
    add_format(db);
    db->callback([&] {
        exit_code = guarded([&] { return run_dual_basis(db_degrees, parse_format(format_str)); });
    });

    // massey
    auto* ms = app.add_subcommand("massey", "Massey product on an exterior algebra");
    std::string ms_dga, ms_classes, ms_extract;
    int ms_pert = 100;
    std::uint64_t ms_seed = 0;
    ms->add_option("--dga", ms_dga, "exterior-dga JSON, file or fixture name")->required();
    ms->add_option("--classes", ms_classes, "generator names or JSON chain array")->required();
    ms->add_option("--perturbations", ms_pert, "number of perturbed defining systems");
    ms->add_option("--seed", ms_seed, "perturbation seed");
    ms->add_option("--extract", ms_extract, "basis monomial whose dual reads the coefficient");
    add_format(ms);
    ms->callback([&] {
        exit_code = guarded([&] {
            return run_massey(ms_dga, ms_classes, ms_pert, ms_seed, ms_extract,
                              parse_format(format_str));
        });
    });

    // coiso-solve
    auto* cs = app.add_subcommand("coiso-solve", "bounded solution of a sign system");
    std::string cs_matrix, cs_rhs;
    cs->add_option("--matrix", cs_matrix, "sign-matrix JSON or file")->required();
    cs->add_option("--rhs", cs_rhs, "right-hand side as a JSON array or file")->required();
    add_format(cs);
    cs->callback([&] {
        exit_code = guarded(
            [&] { return run_coiso_solve(cs_matrix, cs_rhs, parse_format(format_str)); });
    });

    // coboundary
    auto* cb = app.add_subcommand("coboundary", "coboundary matrix and primitives");
    std::string cb_complex, cb_rhs;
    int cb_q = 0;
    bool cb_matrix_only = false;
    cb->add_option("--complex", cb_complex, "complex JSON or file")->required();
    cb->add_option("--q", cb_q, "cochain degree of the right-hand side")->required();
    cb->add_option("--rhs", cb_rhs, "q-cochain as a JSON array or file");
    cb->add_flag("--matrix-only", cb_matrix_only, "emit the coboundary matrix only");
    add_format(cb);
    cb->callback([&] {
        exit_code = guarded([&] {
            return run_coboundary(cb_complex, cb_q, cb_rhs, cb_matrix_only,
                                  parse_format(format_str));
        });
    });

    // bounds
    auto* bd = app.add_subcommand("bounds", "thickness-to-invariant upper bounds");
    std::string bd_dims, bd_indices, bd_tau, bd_bilip, bd_cm, bd_cmd;
    int bd_m = 0;
    bd->add_option("--m", bd_m, "ambient sphere dimension")->required();
    bd->add_option("--dims", bd_dims, "component dimensions")->required();
    bd->add_option("--indices", bd_indices, "invariant index sequence")->required();
    bd->add_option("--tau", bd_tau, "thickness as a rational, e.g. 1/10")->required();
    bd->add_option("--bilip", bd_bilip, "bilipschitz constant, enables the extra bound");
    bd->add_option("--c-m", bd_cm, "two-index regime constant");
    bd->add_option("--c-md", bd_cmd, "general regime constant");
    add_format(bd);
    bd->callback([&] {
        exit_code = guarded([&] {
            return run_bounds(bd_m, bd_dims, bd_indices, bd_tau, bd_bilip, bd_cm, bd_cmd,
                              parse_format(format_str));
        });
    });

    // dichotomy
    auto* dc = app.add_subcommand("dichotomy", "family values against regime bounds");
    int dc_m = 0, dc_d = 0, dc_min = 1, dc_max = 1;
    std::string dc_cm, dc_cmd;
    dc->add_option("--m", dc_m, "ambient sphere dimension")->required();
    dc->add_option("--d", dc_d, "number of components")->required();
    dc->add_option("--n-min", dc_min, "first lattice parameter");
    dc->add_option("--n-max", dc_max, "last lattice parameter")->required();
    dc->add_option("--c-m", dc_cm, "two-index regime constant");
    dc->add_option("--c-md", dc_cmd, "general regime constant");
    add_format(dc);
    dc->callback([&] {
        exit_code = guarded([&] {
            return run_dichotomy(dc_m, dc_d, dc_min, dc_max, dc_cm, dc_cmd,
                                 parse_format(format_str));
        });
    });

    // fk
    auto* fk = app.add_subcommand("fk", "telescope words, coefficients and bounds");
    int fk_q = 0, fk_l = -1;
    std::string fk_variant = "multi", fk_c, fk_C;
    bool fk_length_only = false, fk_thickness = false;
    fk->add_option("--q", fk_q, "commutator depth")->required();
    fk->add_option("--variant", fk_variant, "single or multi");
    fk->add_option("--l", fk_l, "number of doublings");
    fk->add_flag("--length-only", fk_length_only, "emit the reduced word length only");
    fk->add_flag("--thickness", fk_thickness, "emit the thickness bound for q and l");
    fk->add_option("--c", fk_c, "lower constant");
    fk->add_option("--C", fk_C, "upper constant");
    add_format(fk);
    fk->callback([&] {
        exit_code = guarded([&] {
            return run_fk(fk_q, fk_variant, fk_length_only, fk_l, fk_thickness, fk_c, fk_C,
                          parse_format(format_str));
        });
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return emit_error(std::string("argument error: ") + e.what(), 2);
    }
    return exit_code;
}
