#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "milnor/coiso.hpp"

using namespace milnor;

namespace {

std::vector<std::vector<Rat>> dense_of(const SparseSignMatrix& A, const std::vector<Rat>* b) {
    std::vector<std::vector<Rat>> m(static_cast<std::size_t>(A.rows),
                                    std::vector<Rat>(static_cast<std::size_t>(A.cols) + (b ? 1 : 0),
                                                     Rat(0)));
    for (const SignEntry& e : A.entries)
        m[static_cast<std::size_t>(e.row)][static_cast<std::size_t>(e.col)] = e.value;
    if (b)
        for (int r = 0; r < A.rows; ++r)
            m[static_cast<std::size_t>(r)][static_cast<std::size_t>(A.cols)] =
                (*b)[static_cast<std::size_t>(r)];
    return m;
}

// Textbook row-echelon rank, written independently of the solver under test.
int oracle_rank(std::vector<std::vector<Rat>> m) {
    if (m.empty()) return 0;
    const std::size_t rows = m.size(), cols = m[0].size();
    int rank = 0;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        for (std::size_t t = r + 1; t < rows; ++t) {
            if (m[t][c] == 0) continue;
            const Rat f = m[t][c] / m[r][c];
            for (std::size_t cc = c; cc < cols; ++cc) m[t][cc] -= f * m[r][cc];
        }
        ++rank;
        ++r;
    }
    return rank;
}

bool oracle_feasible(const SparseSignMatrix& A, const std::vector<Rat>& b) {
    return oracle_rank(dense_of(A, nullptr)) == oracle_rank(dense_of(A, &b));
}

SparseSignMatrix random_matrix(std::mt19937& rng, int max_mn, int max_p) {
    std::uniform_int_distribution<int> dm(1, max_mn);
    const int M = dm(rng), N = dm(rng);
    std::uniform_int_distribution<int> dp(0, max_p);
    std::bernoulli_distribution flip;
    std::vector<SignEntry> es;
    std::vector<int> cols(static_cast<std::size_t>(N));
    std::iota(cols.begin(), cols.end(), 0);
    for (int r = 0; r < M; ++r) {
        std::shuffle(cols.begin(), cols.end(), rng);
        const int k = std::min(dp(rng), N);
        for (int t = 0; t < k; ++t)
            es.push_back(SignEntry{r, cols[static_cast<std::size_t>(t)], flip(rng) ? 1 : -1});
    }
    return make_sign_matrix(M, N, std::move(es));
}

int count_nonzero(const std::vector<Rat>& v) {
    int n = 0;
    for (const Rat& x : v) n += (x != 0);
    return n;
}

void check_certificate(const SparseSignMatrix& A, const std::vector<Rat>& b,
                       const InconsistencyCertificate& cert) {
    const std::vector<Rat> lta = matvec_transpose(A, cert.lambda);
    for (const Rat& v : lta) REQUIRE(v == 0);
    Rat dot = 0;
    for (std::size_t i = 0; i < cert.lambda.size(); ++i) dot += cert.lambda[i] * b[i];
    REQUIRE(dot != 0);
}

SimplicialComplex octahedron() {
    // Vertex pairs (0,1), (2,3), (4,5) are antipodal; every mixed pair is an
    // edge and every one-per-pair triple is a face.
    std::vector<std::vector<int>> vertices, edges, faces;
    for (int v = 0; v < 6; ++v) vertices.push_back({v});
    for (int a = 0; a < 6; ++a)
        for (int b = a + 1; b < 6; ++b)
            if (a / 2 != b / 2) edges.push_back({a, b});
    for (int a : {0, 1})
        for (int b : {2, 3})
            for (int c : {4, 5}) faces.push_back({a, b, c});
    return make_complex({vertices, edges, faces});
}

SimplicialComplex torus_grid() {
    const auto v = [](int i, int j) { return 3 * ((i + 3) % 3) + ((j + 3) % 3); };
    std::set<std::vector<int>> edges, faces;
    const auto sorted = [](std::vector<int> s) {
        std::sort(s.begin(), s.end());
        return s;
    };
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const int a = v(i, j), b = v(i, j + 1), c = v(i + 1, j), d = v(i + 1, j + 1);
            faces.insert(sorted({a, b, d}));
            faces.insert(sorted({a, c, d}));
            for (auto e : {std::pair{a, b}, {b, d}, {a, d}, {a, c}, {c, d}})
                edges.insert(sorted({e.first, e.second}));
        }
    }
    std::vector<std::vector<int>> vertices;
    for (int t = 0; t < 9; ++t) vertices.push_back({t});
    return make_complex({vertices,
                         std::vector<std::vector<int>>(edges.begin(), edges.end()),
                         std::vector<std::vector<int>>(faces.begin(), faces.end())});
}

SimplicialComplex circle() {
    return make_complex({{{0}, {1}, {2}}, {{0, 1}, {0, 2}, {1, 2}}});
}

}  // namespace

TEST_CASE("sign matrix construction and validation") {
    const auto A = make_sign_matrix(2, 3, {{0, 0, 1}, {0, 2, -1}, {1, 1, 1}});
    REQUIRE(A.p == 2);
    REQUIRE_THROWS_AS(make_sign_matrix(2, 3, {{2, 0, 1}}), std::invalid_argument);
    REQUIRE_THROWS_AS(make_sign_matrix(2, 3, {{0, 0, 2}}), std::invalid_argument);
    REQUIRE_THROWS_AS(make_sign_matrix(2, 3, {{0, 0, 1}, {0, 0, -1}}), std::invalid_argument);
    REQUIRE(make_sign_matrix(0, 0, {}).p == 0);
}

TEST_CASE("identity system") {
    const auto A = make_sign_matrix(3, 3, {{0, 0, 1}, {1, 1, 1}, {2, 2, 1}});
    const std::vector<Rat> b = {5, -2, 0};
    const auto res = solve_bounded(A, b);
    REQUIRE(std::holds_alternative<BoundedSolution>(res));
    const auto& sol = std::get<BoundedSolution>(res);
    REQUIRE(sol.x == b);
    REQUIRE(sol.inf_norm == 5);
    REQUIRE(sol.certified_bound == 15);
}

TEST_CASE("rank-deficient two-by-two") {
    const auto A = make_sign_matrix(2, 2, {{0, 0, 1}, {0, 1, 1}, {1, 0, -1}, {1, 1, -1}});
    REQUIRE(A.p == 2);
    SECTION("consistent") {
        const auto res = solve_bounded(A, {1, -1});
        REQUIRE(std::holds_alternative<BoundedSolution>(res));
        const auto& sol = std::get<BoundedSolution>(res);
        REQUIRE(sol.x == std::vector<Rat>{1, 0});
        REQUIRE(sol.inf_norm == 1);
        REQUIRE(sol.certified_bound == 4);
    }
    SECTION("inconsistent") {
        const auto res = solve_bounded(A, {1, 1});
        REQUIRE(std::holds_alternative<InconsistencyCertificate>(res));
        check_certificate(A, {1, 1}, std::get<InconsistencyCertificate>(res));
    }
}

TEST_CASE("degenerate shapes") {
    const auto wide = make_sign_matrix(0, 3, {});
    const auto res = solve_bounded(wide, {});
    REQUIRE(std::get<BoundedSolution>(res).x == std::vector<Rat>(3, Rat(0)));

    const auto tall = make_sign_matrix(2, 0, {});
    REQUIRE(std::holds_alternative<BoundedSolution>(solve_bounded(tall, {0, 0})));
    const auto bad = solve_bounded(tall, {1, 0});
    REQUIRE(std::holds_alternative<InconsistencyCertificate>(bad));
    check_certificate(tall, {1, 0}, std::get<InconsistencyCertificate>(bad));

    REQUIRE_THROWS_AS(solve_bounded(wide, {1}), std::invalid_argument);
}

TEST_CASE("random solvable systems satisfy the certified bound") {
    std::mt19937 rng(515001);
    std::uniform_int_distribution<int> dx(-3, 3);
    for (int trial = 0; trial < 300; ++trial) {
        const SparseSignMatrix A = random_matrix(rng, 8, 4);
        std::vector<Rat> x0(static_cast<std::size_t>(A.cols));
        for (Rat& v : x0) v = dx(rng);
        const std::vector<Rat> b = matvec(A, x0);
        const auto res = solve_bounded(A, b);
        REQUIRE(std::holds_alternative<BoundedSolution>(res));
        const auto& sol = std::get<BoundedSolution>(res);
        REQUIRE(matvec(A, sol.x) == b);
        REQUIRE(sol.inf_norm <= sol.certified_bound);
        REQUIRE(count_nonzero(sol.x) <= oracle_rank(dense_of(A, nullptr)));
    }
}

TEST_CASE("feasibility verdict matches the rank oracle") {
    std::mt19937 rng(515002);
    std::uniform_int_distribution<int> db(-2, 2);
    int infeasible_seen = 0;
    for (int trial = 0; trial < 250; ++trial) {
        const SparseSignMatrix A = random_matrix(rng, 6, 3);
        std::vector<Rat> b(static_cast<std::size_t>(A.rows));
        for (Rat& v : b) v = db(rng);
        const auto res = solve_bounded(A, b);
        if (oracle_feasible(A, b)) {
            REQUIRE(std::holds_alternative<BoundedSolution>(res));
            REQUIRE(matvec(A, std::get<BoundedSolution>(res).x) == b);
        } else {
            ++infeasible_seen;
            REQUIRE(std::holds_alternative<InconsistencyCertificate>(res));
            check_certificate(A, b, std::get<InconsistencyCertificate>(res));
        }
    }
    REQUIRE(infeasible_seen > 50);  // the sweep exercises both verdicts
}

TEST_CASE("triangle coboundary matrix") {
    const SimplicialComplex K = circle();
    const SparseSignMatrix d0 = coboundary_matrix(K, 1);
    REQUIRE(d0.rows == 3);
    REQUIRE(d0.cols == 3);
    REQUIRE(d0.p == 2);
    std::vector<int> per_row(3, 0);
    for (const SignEntry& e : d0.entries) ++per_row[static_cast<std::size_t>(e.row)];
    REQUIRE(per_row == std::vector<int>{2, 2, 2});
}

TEST_CASE("single simplex coboundary row") {
    const SimplicialComplex K = make_complex({{{0}, {1}, {2}, {3}},
                                              {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}},
                                              {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}},
                                              {{0, 1, 2, 3}}});
    const SparseSignMatrix d = coboundary_matrix(K, 3);
    REQUIRE(d.rows == 1);
    REQUIRE(d.cols == 4);
    REQUIRE(d.p == 4);
    REQUIRE(d.entries.size() == 4);
}

TEST_CASE("octahedron coboundary and composition") {
    const SimplicialComplex K = octahedron();
    REQUIRE(K.count(0) == 6);
    REQUIRE(K.count(1) == 12);
    REQUIRE(K.count(2) == 8);
    const SparseSignMatrix d1 = coboundary_matrix(K, 1);
    const SparseSignMatrix d2 = coboundary_matrix(K, 2);
    REQUIRE(d2.rows == 8);
    REQUIRE(d2.cols == 12);
    REQUIRE(d2.p == 3);
    std::vector<int> per_row(8, 0);
    for (const SignEntry& e : d2.entries) ++per_row[static_cast<std::size_t>(e.row)];
    for (int n : per_row) REQUIRE(n == 3);
    for (int vtx = 0; vtx < 6; ++vtx) {
        std::vector<Rat> e(6, Rat(0));
        e[static_cast<std::size_t>(vtx)] = 1;
        const std::vector<Rat> dd = matvec(d2, matvec(d1, e));
        for (const Rat& v : dd) REQUIRE(v == 0);
    }

    SECTION("primitive of a constructed coboundary") {
        std::mt19937 rng(515003);
        std::uniform_int_distribution<int> dc(-2, 2);
        std::vector<Rat> c0(12);
        for (Rat& v : c0) v = dc(rng);
        const std::vector<Rat> b = matvec(d2, c0);
        const auto res = coboundary_primitive(K, 2, b);
        REQUIRE(std::holds_alternative<BoundedSolution>(res));
        REQUIRE(matvec(d2, std::get<BoundedSolution>(res).x) == b);
    }
}

TEST_CASE("circle detects a nontrivial cocycle") {
    const SimplicialComplex K = circle();
    const std::vector<Rat> b = {1, 0, 0};
    const auto res = coboundary_primitive(K, 1, b);
    REQUIRE(std::holds_alternative<InconsistencyCertificate>(res));
    check_certificate(coboundary_matrix(K, 1), b, std::get<InconsistencyCertificate>(res));

    SECTION("an actual coboundary is recovered") {
        const SparseSignMatrix d0 = coboundary_matrix(K, 1);
        const std::vector<Rat> c0 = {2, -1, 0};
        const std::vector<Rat> db = matvec(d0, c0);
        const auto ok = coboundary_primitive(K, 1, db);
        REQUIRE(matvec(d0, std::get<BoundedSolution>(ok).x) == db);
    }
}

TEST_CASE("torus grid primitive with the expected bound") {
    const SimplicialComplex K = torus_grid();
    REQUIRE(K.count(0) == 9);
    REQUIRE(K.count(1) == 27);
    REQUIRE(K.count(2) == 18);
    const SparseSignMatrix d2 = coboundary_matrix(K, 2);
    REQUIRE(d2.p == 3);  // row support is q+1

    std::mt19937 rng(515004);
    std::uniform_int_distribution<int> dc(-1, 1);
    std::vector<Rat> c0(27);
    for (Rat& v : c0) v = dc(rng);
    const std::vector<Rat> b = matvec(d2, c0);
    const auto res = coboundary_primitive(K, 2, b);
    REQUIRE(std::holds_alternative<BoundedSolution>(res));
    const auto& sol = std::get<BoundedSolution>(res);
    REQUIRE(matvec(d2, sol.x) == b);
    Rat bnorm = 0;
    for (const Rat& v : b) bnorm = std::max(bnorm, static_cast<Rat>(abs(v)));
    const Rat expected = Rat(18) * Rat(pow(Int(3), 17)) * bnorm;
    REQUIRE(sol.certified_bound == expected);
    REQUIRE(sol.inf_norm <= sol.certified_bound);
}

TEST_CASE("complex validation") {
    REQUIRE_THROWS_AS(make_complex({{{0}, {1}}, {{0, 1}, {0, 1}}}), std::invalid_argument);
    REQUIRE_THROWS_AS(make_complex({{{0}, {1}}, {{1, 0}}}), std::invalid_argument);
    REQUIRE_THROWS_AS(make_complex({{{0}}, {{0, 1}}}), std::invalid_argument);
    REQUIRE_THROWS_AS(make_complex({{{0}, {1}, {2}}, {{0, 1}}, {{0, 1, 2}}}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(make_complex({{{0, 1}}}), std::invalid_argument);

    const SimplicialComplex K = circle();
    REQUIRE_THROWS_AS(coboundary_matrix(K, 0), std::invalid_argument);
    REQUIRE_THROWS_AS(coboundary_matrix(K, 2), std::invalid_argument);
}
