#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "milnor/dga.hpp"
#include "milnor/massey.hpp"

using namespace milnor;

namespace {

// Row rank over the rationals, straight elimination.  Independent of the
// echelon machinery under test.
int rat_rank(std::vector<std::vector<Rat>> m) {
    if (m.empty()) return 0;
    const std::size_t rows = m.size(), cols = m[0].size();
    int rank = 0;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        for (std::size_t t = 0; t < rows; ++t) {
            if (t == r || m[t][c] == 0) continue;
            const Rat f = m[t][c] / m[r][c];
            for (std::size_t cc = c; cc < cols; ++cc) m[t][cc] -= f * m[r][cc];
        }
        ++rank;
        ++r;
    }
    return rank;
}

int diff_rank(const Dga& D, int k) {
    std::vector<std::vector<Rat>> m;
    for (int i = 0; i < D.dim(); ++i)
        if (D.degrees[static_cast<std::size_t>(i)] == k) m.push_back(apply_diff(D, basis_chain(D, i)));
    return rat_rank(std::move(m));
}

int degree_count(const Dga& D, int k) {
    int n = 0;
    for (int d : D.degrees) n += (d == k);
    return n;
}

CohomClass cls_of(const Dga& D, const std::string& name) {
    return cohom_class(D, basis_chain(D, D.index_of(name)));
}

// Re-derives every interval identity of a defining system from scratch.
void check_system_identities(const Dga& D, const std::vector<CohomClass>& u,
                             const DefiningSystem& sys) {
    for (const auto& [ij, a] : sys.cochain) {
        const auto [i, j] = ij;
        if (i == j) continue;
        Chain rhs = zero_chain(D);
        for (int k = i; k < j; ++k) {
            int dl = -(k - i);
            for (int t = i; t <= k; ++t) dl += u[static_cast<std::size_t>(t - 1)].degree;
            chain_add_scaled(rhs, dl % 2 == 0 ? 1 : -1,
                             multiply(D, sys.at(i, k), sys.at(k + 1, j)));
        }
        Chain lhs = apply_diff(D, a);
        chain_add_scaled(lhs, -1, rhs);
        REQUIRE(chain_is_zero(lhs));
    }
}

// Zero differential, one degree-1 generator per name, free exterior products.
Dga free_exterior(const std::vector<std::string>& gens, int truncation) {
    return exterior_algebra(gens, std::vector<std::vector<ExteriorDiffTerm>>(gens.size()),
                            truncation);
}

// Degree-2 generators u, v with uv = vu = w and all other products zero.
Dga even_square_free() {
    Dga D;
    D.names = {"u", "v", "w"};
    D.degrees = {2, 2, 4};
    D.truncation = 4;
    D.graded_commutative = true;
    D.diff.assign(3, {});
    D.mult.assign(3, std::vector<std::vector<std::pair<int, Rat>>>(3));
    D.mult[0][1] = {{2, Rat(1)}};
    D.mult[1][0] = {{2, Rat(1)}};
    return D;
}

// Degree-1 generators a, b, c with ab = bc = 0 and ac = -ca the only nonzero
// product; zero differential.  The triple product of a, b, c is defined but
// different defining systems give genuinely different classes.
Dga collapsed_triple() {
    Dga D;
    D.names = {"a", "b", "c", "m"};
    D.degrees = {1, 1, 1, 2};
    D.truncation = 2;
    D.graded_commutative = true;
    D.diff.assign(4, {});
    D.mult.assign(4, std::vector<std::vector<std::pair<int, Rat>>>(4));
    D.mult[0][2] = {{3, Rat(1)}};
    D.mult[2][0] = {{3, Rat(-1)}};
    return D;
}

}  // namespace

TEST_CASE("borromean fixture has the expected basis and validates") {
    const Dga D = borromean_fixture();
    REQUIRE(D.dim() == 42);
    REQUIRE(degree_count(D, 0) == 1);
    REQUIRE(degree_count(D, 1) == 6);
    REQUIRE(degree_count(D, 2) == 15);
    REQUIRE(degree_count(D, 3) == 20);
    REQUIRE(D.names[0] == "1");
    REQUIRE(D.index_of("x1y1") > 0);
    REQUIRE_THROWS_AS(D.index_of("zz"), std::invalid_argument);
    REQUIRE(validate_dga(D).empty());

    const Chain dy1 = apply_diff(D, basis_chain(D, D.index_of("y1")));
    REQUIRE(dy1 == chain_of(D, {{"x2x3", 1}}));
    const Chain dy2 = apply_diff(D, basis_chain(D, D.index_of("y2")));
    REQUIRE(dy2 == chain_of(D, {{"x1x3", -1}}));
    const Chain dy3 = apply_diff(D, basis_chain(D, D.index_of("y3")));
    REQUIRE(dy3 == chain_of(D, {{"x1x2", 1}}));
}

TEST_CASE("one-generator exterior algebra") {
    const Dga D = free_exterior({"x"}, 1);
    REQUIRE(validate_dga(D).empty());
    REQUIRE(cohomology(D, 0).size() == 1);
    REQUIRE(cohomology(D, 1).size() == 1);
    REQUIRE(cohomology(D, 2).empty());
    REQUIRE(cohomology(D, -1).empty());
}

TEST_CASE("validator reports planted violations") {
    SECTION("d^2 != 0") {
        Dga D;
        D.names = {"e0", "e1", "e2"};
        D.degrees = {0, 1, 2};
        D.truncation = 2;
        D.diff = {{{1, Rat(1)}}, {{2, Rat(1)}}, {}};
        D.mult.assign(3, std::vector<std::vector<std::pair<int, Rat>>>(3));
        const auto v = validate_dga(D);
        REQUIRE(v.size() == 1);
        REQUIRE(v[0] == "d^2 != 0 on e0");
    }
    SECTION("Leibniz failure") {
        Dga D;
        D.names = {"a", "b", "ab", "m"};
        D.degrees = {1, 1, 2, 3};
        D.truncation = 3;
        D.diff = {{}, {}, {{3, Rat(1)}}, {}};
        D.mult.assign(4, std::vector<std::vector<std::pair<int, Rat>>>(4));
        D.mult[0][1] = {{2, Rat(1)}};
        D.mult[1][0] = {{2, Rat(-1)}};
        const auto v = validate_dga(D);
        REQUIRE_FALSE(v.empty());
        REQUIRE(v[0] == "Leibniz fails on a * b");
    }
    SECTION("graded commutativity failure") {
        Dga D;
        D.names = {"a", "b", "m"};
        D.degrees = {1, 1, 2};
        D.truncation = 2;
        D.graded_commutative = true;
        D.diff.assign(3, {});
        D.mult.assign(3, std::vector<std::vector<std::pair<int, Rat>>>(3));
        D.mult[0][1] = {{2, Rat(1)}};
        D.mult[1][0] = {{2, Rat(1)}};
        const auto v = validate_dga(D);
        REQUIRE_FALSE(v.empty());
        REQUIRE(v[0] == "graded commutativity fails on a * b");
    }
    SECTION("differential of wrong degree") {
        Dga D;
        D.names = {"a", "b"};
        D.degrees = {1, 1};
        D.truncation = 1;
        D.diff = {{{1, Rat(1)}}, {}};
        D.mult.assign(2, std::vector<std::vector<std::pair<int, Rat>>>(2));
        const auto v = validate_dga(D);
        REQUIRE(v.size() == 1);
        REQUIRE(v[0] == "differential is not of degree +1 on a");
    }
}

TEST_CASE("fixture cohomology dimensions match a rank oracle") {
    const Dga D = borromean_fixture();
    for (int k = 0; k <= 3; ++k) {
        const int expected = degree_count(D, k) - diff_rank(D, k) - (k ? diff_rank(D, k - 1) : 0);
        REQUIRE(static_cast<int>(cohomology(D, k).size()) == expected);
    }
    REQUIRE(cohomology(D, 1).size() == 3);
    REQUIRE(cohomology(D, 2).size() == 8);
    REQUIRE(cohomology(D, 3).size() == 16);
    REQUIRE(cohomology(D, 4).empty());

    const auto h1 = cohomology(D, 1);
    REQUIRE(h1[0] == chain_of(D, {{"x1", 1}}));
    REQUIRE(h1[1] == chain_of(D, {{"x2", 1}}));
    REQUIRE(h1[2] == chain_of(D, {{"x3", 1}}));
    for (int k = 0; k <= 3; ++k)
        for (const Chain& rep : cohomology(D, k)) REQUIRE(chain_is_zero(apply_diff(D, rep)));
}

TEST_CASE("massey_degree") {
    REQUIRE(massey_degree({1, 1}) == 2);
    REQUIRE(massey_degree({1, 1, 1}) == 2);
    REQUIRE(massey_degree({2, 2, 3}) == 6);
    REQUIRE_THROWS_AS(massey_degree({5}), std::invalid_argument);
}

TEST_CASE("class helpers") {
    const Dga D = borromean_fixture();
    REQUIRE_THROWS_AS(cohom_class(D, basis_chain(D, D.index_of("y1"))), std::invalid_argument);
    REQUIRE(cohom_class(D, zero_chain(D)).degree == 0);
    REQUIRE(class_is_zero(D, CohomClass{2, zero_chain(D)}));
    REQUIRE(class_is_zero(D, cohom_class(D, chain_of(D, {{"x1x2", 1}}))));
    REQUIRE_FALSE(class_is_zero(D, cls_of(D, "x1")));
    REQUIRE(classes_equal(D, cls_of(D, "x1"), cls_of(D, "x1")));
    REQUIRE_FALSE(classes_equal(D, cls_of(D, "x1"), cls_of(D, "x2")));
}

TEST_CASE("defining system on the fixture") {
    const Dga D = borromean_fixture();
    const std::vector<CohomClass> xs = {cls_of(D, "x1"), cls_of(D, "x2"), cls_of(D, "x3")};
    const auto res = defining_system(D, xs);
    REQUIRE(std::holds_alternative<DefiningSystem>(res));
    const auto& sys = std::get<DefiningSystem>(res);
    REQUIRE(sys.cochain.size() == 5);
    REQUIRE(sys.at(1, 2) == chain_of(D, {{"y3", -1}}));
    REQUIRE(sys.at(2, 3) == chain_of(D, {{"y1", -1}}));
    check_system_identities(D, xs, sys);

    SECTION("two classes give a trivial system") {
        const auto r2 = defining_system(D, {cls_of(D, "x1"), cls_of(D, "x2")});
        REQUIRE(std::get<DefiningSystem>(r2).cochain.size() == 2);
    }
    SECTION("non-closed input throws") {
        std::vector<CohomClass> bad = xs;
        bad[0].representative = basis_chain(D, D.index_of("y1"));
        REQUIRE_THROWS_AS(defining_system(D, bad), std::invalid_argument);
    }
    SECTION("fewer than two classes throws") {
        REQUIRE_THROWS_AS(defining_system(D, {cls_of(D, "x1")}), std::invalid_argument);
    }
}

TEST_CASE("cup products of the circle classes are exact") {
    const Dga D = borromean_fixture();
    detail::DiffSolver sv(D, 1);
    for (const char* name : {"x1x2", "x1x3", "x2x3"})
        REQUIRE(sv.solve(basis_chain(D, D.index_of(name))).has_value());
}

TEST_CASE("triple product on the fixture") {
    const Dga D = borromean_fixture();
    const std::vector<CohomClass> xs = {cls_of(D, "x1"), cls_of(D, "x2"), cls_of(D, "x3")};
    const MasseyOutcome out = massey_product(D, xs, 100, 20260825);
    REQUIRE(out.defined());
    REQUIRE(out.cls->degree == 2);
    REQUIRE(out.cls->degree == massey_degree({1, 1, 1}));
    REQUIRE(out.cls->representative == chain_of(D, {{"x1y1", 1}, {"x3y3", -1}}));
    REQUIRE(chain_is_zero(apply_diff(D, out.cls->representative)));
    REQUIRE_FALSE(class_is_zero(D, *out.cls));
    REQUIRE(out.perturbations_requested == 100);
    REQUIRE(out.perturbations_same == 100);
    REQUIRE(out.seed == 20260825);

    SECTION("deterministic across runs and seeds") {
        const MasseyOutcome again = massey_product(D, xs, 100, 20260825);
        REQUIRE(again.cls->representative == out.cls->representative);
        REQUIRE(again.perturbations_same == 100);
        const MasseyOutcome other = massey_product(D, xs, 50, 7);
        REQUIRE(other.cls->representative == out.cls->representative);
        REQUIRE(other.perturbations_same == 50);
    }
}

TEST_CASE("coefficient extraction") {
    const Dga D = borromean_fixture();
    const std::vector<CohomClass> xs = {cls_of(D, "x1"), cls_of(D, "x2"), cls_of(D, "x3")};
    const MasseyOutcome out = massey_product(D, xs, 0, 0);
    const Chain dual = chain_of(D, {{"x1y1", 1}});
    REQUIRE(coefficient_extract(D, out, dual) == 1);

    SECTION("value is zero on a trivial class") {
        const MasseyOutcome cup = massey_product(D, {cls_of(D, "x1"), cls_of(D, "x2")}, 0, 0);
        REQUIRE(class_is_zero(D, *cup.cls));
        REQUIRE(coefficient_extract(D, cup, dual) == 0);
    }
    SECTION("functional must annihilate exact chains") {
        const Chain bad = chain_of(D, {{"x1y1", 1}, {"x1x2", 1}});
        REQUIRE_THROWS_AS(coefficient_extract(D, out, bad), std::invalid_argument);
    }
    SECTION("obstructed outcome carries no class") {
        const Dga F = free_exterior({"a", "b", "c"}, 3);
        const MasseyOutcome blocked =
            massey_product(F, {cls_of(F, "a"), cls_of(F, "b"), cls_of(F, "c")}, 0, 0);
        REQUIRE_THROWS_AS(coefficient_extract(F, blocked, zero_chain(F)), std::invalid_argument);
    }
}

TEST_CASE("two-fold products reduce to the signed cup product") {
    SECTION("even degrees, sign +1") {
        const Dga D = even_square_free();
        REQUIRE(validate_dga(D).empty());
        const MasseyOutcome out = massey_product(D, {cls_of(D, "u"), cls_of(D, "v")}, 5, 1);
        REQUIRE(out.defined());
        REQUIRE(out.cls->degree == 4);
        REQUIRE(out.cls->representative == chain_of(D, {{"w", 1}}));
        const Chain direct = multiply(D, basis_chain(D, 0), basis_chain(D, 1));
        REQUIRE(classes_equal(D, *out.cls, cohom_class(D, direct)));
        REQUIRE(out.perturbations_same == 5);
    }
    SECTION("odd degrees, sign -1") {
        const Dga D = free_exterior({"a", "b"}, 2);
        const MasseyOutcome out = massey_product(D, {cls_of(D, "a"), cls_of(D, "b")}, 0, 0);
        REQUIRE(out.cls->representative == chain_of(D, {{"ab", -1}}));
        Chain direct = multiply(D, basis_chain(D, D.index_of("a")), basis_chain(D, D.index_of("b")));
        REQUIRE_FALSE(classes_equal(D, *out.cls, cohom_class(D, direct)));
        for (Rat& x : direct) x = -x;
        REQUIRE(classes_equal(D, *out.cls, cohom_class(D, direct)));
    }
}

TEST_CASE("nonvanishing cup product obstructs at the first interval") {
    const Dga D = free_exterior({"a", "b", "c"}, 3);
    REQUIRE(validate_dga(D).empty());
    const auto res = defining_system(D, {cls_of(D, "a"), cls_of(D, "b"), cls_of(D, "c")});
    REQUIRE(std::holds_alternative<Obstruction>(res));
    const auto& ob = std::get<Obstruction>(res);
    REQUIRE(ob.i == 1);
    REQUIRE(ob.j == 2);
    REQUIRE(ob.cls.degree == 2);
    REQUIRE(ob.cls.representative == chain_of(D, {{"ab", -1}}));
    REQUIRE_FALSE(class_is_zero(D, ob.cls));

    const MasseyOutcome out =
        massey_product(D, {cls_of(D, "a"), cls_of(D, "b"), cls_of(D, "c")}, 10, 0);
    REQUIRE_FALSE(out.defined());
    REQUIRE(out.obstruction.has_value());
    REQUIRE(out.obstruction->i == 1);
    REQUIRE(out.obstruction->j == 2);
}

TEST_CASE("repeated input classes are permitted") {
    const Dga D = borromean_fixture();
    const std::vector<CohomClass> u = {cls_of(D, "x1"), cls_of(D, "x1"), cls_of(D, "x2")};
    const MasseyOutcome out = massey_product(D, u, 25, 3);
    REQUIRE(out.defined());
    REQUIRE(out.cls->representative == chain_of(D, {{"x1y3", 1}}));
    REQUIRE(chain_is_zero(apply_diff(D, out.cls->representative)));
    REQUIRE_FALSE(class_is_zero(D, *out.cls));
    REQUIRE(out.system.at(1, 2) == zero_chain(D));
    REQUIRE(out.system.at(2, 3) == chain_of(D, {{"y3", -1}}));
    REQUIRE(out.perturbations_same == 25);
}

TEST_CASE("four-fold product obstructed by the nonzero triple product") {
    const Dga D = borromean_fixture();
    const std::vector<CohomClass> u = {cls_of(D, "x1"), cls_of(D, "x2"), cls_of(D, "x3"),
                                       cls_of(D, "x1")};
    const auto res = defining_system(D, u);
    REQUIRE(std::holds_alternative<Obstruction>(res));
    const auto& ob = std::get<Obstruction>(res);
    REQUIRE(ob.i == 1);
    REQUIRE(ob.j == 3);
    const MasseyOutcome triple = massey_product(
        D, {cls_of(D, "x1"), cls_of(D, "x2"), cls_of(D, "x3")}, 0, 0);
    REQUIRE(classes_equal(D, ob.cls, *triple.cls));
}

TEST_CASE("genuine indeterminacy shows up in the perturbation evidence") {
    const Dga D = collapsed_triple();
    REQUIRE(validate_dga(D).empty());
    const std::vector<CohomClass> u = {cls_of(D, "a"), cls_of(D, "b"), cls_of(D, "c")};
    const MasseyOutcome out = massey_product(D, u, 100, 11);
    REQUIRE(out.defined());
    REQUIRE(class_is_zero(D, *out.cls));
    REQUIRE(out.perturbations_same < out.perturbations_requested);
    check_system_identities(D, u, out.system);
}

TEST_CASE("exterior_algebra input validation") {
    REQUIRE_THROWS_AS(exterior_algebra({"a"}, {}, 2), std::invalid_argument);
    REQUIRE_THROWS_AS(exterior_algebra({"a", "b"}, {{ExteriorDiffTerm{1, 1, Rat(1)}}, {}}, 2),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(exterior_algebra({"a"}, {{}}, -1), std::invalid_argument);
}
