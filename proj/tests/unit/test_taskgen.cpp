#include <doctest.h>

#include "latex_reparse.hpp"
#include "mathforge/taskgen.hpp"
#include "oracles.hpp"

using namespace mathforge;

namespace {

const WorksheetStrings& uk() { return worksheet_strings("uk"); }

const Segment& first_math(const TaskInstance& t) {
    for (const auto& s : t.statement)
        if (s.kind == Segment::Kind::Math || s.kind == Segment::Kind::DisplayMath) return s;
    throw std::runtime_error("statement has no math");
}

// Matrices listed in a statement, in order of appearance.
std::vector<RatMatrix> statement_matrices(const TaskInstance& t) {
    std::vector<RatMatrix> out;
    for (const auto& s : t.statement) {
        if (s.kind != Segment::Kind::Math) continue;
        std::string_view rest = s.text;
        for (auto pos = rest.find("\\left"); pos != std::string_view::npos; pos = rest.find("\\left")) {
            auto end = rest.find("\\end{array}", pos);
            if (end == std::string_view::npos) break;
            out.push_back(oracle::parse_matrix(rest.substr(pos, end + 11 - pos)));
            rest = rest.substr(end + 11);
        }
    }
    return out;
}

const RatMatrix& matrix_of(const Answer& a) { return std::get<MatrixAnswer>(a).value; }

}  // namespace

TEST_CASE("rng is the standard MT19937-64 stream") {
    Rng rng(5489);
    std::uint64_t x = 0;
    for (int i = 0; i < 10000; ++i) x = rng.next();
    CHECK(x == 9981545732273789042ull);

    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) {
        auto v = a.uniform_int(-5, 5);
        CHECK(v == b.uniform_int(-5, 5));
        CHECK(v >= -5);
        CHECK(v <= 5);
    }
    Rng c(1);
    CHECK(c.uniform_int(3, 3) == 3);
}

TEST_CASE("kind names round-trip") {
    for (auto k : kAllTaskKinds) CHECK(task_kind_from_name(task_kind_name(k)) == k);
    CHECK_FALSE(task_kind_from_name("no_such").has_value());
}

TEST_CASE("determinant task from the worksheet matrix") {
    RatMatrix m{{-1, 1, -2}, {-2, 2, -1}, {-1, 3, 4}};
    auto t = build_determinant_task(m, uk());
    REQUIRE(t.answers.size() == 1);
    CHECK(t.answers[0] == Answer{ScalarAnswer{6}});
    CHECK(first_math(t).text.starts_with("\\left|"));
    CHECK(t.statement.front().text == "Обчисліть визначник ");

    GeneratorParams zero;
    zero.entry_lo = zero.entry_hi = 0;
    Rng rng(9);
    CHECK(gen_determinant_task(rng, zero, uk()).answers[0] == Answer{ScalarAnswer{0}});

    Rng seeded(1);
    auto drawn = gen_determinant_task(seeded, {}, uk());
    auto mats = statement_matrices(drawn);
    REQUIRE(mats.size() == 1);
    CHECK(drawn.answers[0] == Answer{ScalarAnswer{oracle::triangle_rule(mats[0])}});
}

TEST_CASE("product task") {
    RatMatrix a{{-4, -4}};
    RatMatrix b{{0, 4, 3}, {3, 2, 1}};
    auto t = build_product_task(a, b, uk());
    REQUIRE(t.answers.size() == 2);
    CHECK(t.answers[0] == Answer{MatrixAnswer{RatMatrix{{-12, -24, -16}}}});
    CHECK(t.answers[1] == Answer{MessageAnswer{"Добуток ВА не існує"}});

    auto sq = build_product_task(RatMatrix{{1, 2}, {3, 4}}, RatMatrix{{0, 1}, {1, 0}}, uk());
    CHECK(std::holds_alternative<MatrixAnswer>(sq.answers[0]));
    CHECK(std::holds_alternative<MatrixAnswer>(sq.answers[1]));

    auto neither = build_product_task(RatMatrix(1, 2), RatMatrix(1, 3), uk());
    CHECK(neither.answers[0] == Answer{MessageAnswer{"Добуток АВ не існує"}});
    CHECK(neither.answers[1] == Answer{MessageAnswer{"Добуток ВА не існує"}});
}

TEST_CASE("product answers are messages exactly for non-conformable shapes") {
    GeneratorParams p;
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        Rng rng(seed);
        auto t = gen_product_task(rng, p, uk());
        auto mats = statement_matrices(t);
        REQUIRE(mats.size() == 2);
        const auto& a = mats[0];
        const auto& b = mats[1];
        CHECK(a.rows() >= p.dim_lo);
        CHECK(a.rows() <= p.dim_hi);
        CHECK(b.cols() <= p.dim_hi);
        CHECK(std::holds_alternative<MessageAnswer>(t.answers[0]) == (a.cols() != b.rows()));
        CHECK(std::holds_alternative<MessageAnswer>(t.answers[1]) == (b.cols() != a.rows()));
        if (a.cols() == b.rows()) CHECK(matrix_of(t.answers[0]) == oracle::naive_mul(a, b));
    }
}

TEST_CASE("inverse task") {
    RatMatrix m{{-4, -2, -1}, {2, -3, -4}, {3, 4, -3}};
    auto t = build_inverse_task(m, uk());
    CHECK(oracle::naive_mul(m, matrix_of(t.answers[0])) == RatMatrix::identity(3));

    GeneratorParams zero;
    zero.entry_lo = zero.entry_hi = 0;
    zero.max_attempts = 50;
    Rng rng(1);
    try {
        gen_inverse_task(rng, zero, uk());
        FAIL("expected NonGenerable");
    } catch (const TaskError& e) {
        CHECK(e.code() == TaskErrc::NonGenerable);
    }

    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng r(seed);
        auto task = gen_inverse_task(r, {}, uk());
        auto mats = statement_matrices(task);
        REQUIRE(mats.size() == 1);
        CHECK_FALSE(oracle::perm_det(mats[0]).is_zero());
        CHECK(matrix_of(task.answers[0]) == oracle::adjugate_inverse(mats[0]));
    }
}

TEST_CASE("matrix equation task") {
    RatMatrix a{{5, -5}, {-2, 4}}, b{{2, -2}, {-3, -4}}, c{{-4, 3}, {1, 0}};
    auto t = build_matrix_eq_task(a, b, c, uk());
    CHECK(oracle::naive_mul(oracle::naive_mul(a, b), matrix_of(t.answers[0])) == c);

    auto id = RatMatrix::identity(2);
    CHECK(matrix_of(build_matrix_eq_task(id, id, id, uk()).answers[0]) == id);

    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng r(seed);
        auto task = gen_matrix_eq_task(r, {}, uk());
        auto mats = statement_matrices(task);
        REQUIRE(mats.size() == 3);
        CHECK(oracle::naive_mul(oracle::naive_mul(mats[0], mats[1]), matrix_of(task.answers[0])) == mats[2]);
    }
}

TEST_CASE("matrix polynomial task") {
    RatMatrix m{{4, 2, 1}, {4, -2, -1}, {0, -5, -4}};
    std::vector<Rational> f{-3, 5, -5};
    auto t = build_matpoly_task(f, m, uk());
    CHECK(matrix_of(t.answers[0]) == oracle::power_sum(f, m));
    CHECK(first_math(t).text == "f(A)");
    CHECK(t.statement.back().text.ends_with("f(x)=-3x^{2}+5x-5"));

    std::vector<Rational> identity_poly{1, 0};
    CHECK(matrix_of(build_matpoly_task(identity_poly, m, uk()).answers[0]) == m);

    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        Rng r(seed);
        auto task = gen_matpoly_task(r, {}, uk());
        const auto& last = task.statement.back().text;
        auto f_pos = last.find("f(x)=");
        REQUIRE(f_pos != std::string::npos);
        // a zero leading coefficient would drop the x^{2} term
        CHECK(last.find("x^{2}", f_pos) != std::string::npos);
    }
}

TEST_CASE("system task is built roots first") {
    RatMatrix a{{3, -2, -5}, {4, -4, -3}, {-5, -4, 0}};
    std::vector<Rational> roots{-1, -2, 5};
    auto t = build_system_task(roots, a, uk());
    CHECK(t.answers[0] == Answer{VectorAnswer{roots}});
    auto [pa, pb] = oracle::parse_system(t.statement.back().text, 3);
    CHECK(pa == a);
    CHECK(pb == RatMatrix{{-24}, {-11}, {13}});

    std::vector<Rational> zeros{0, 0, 0};
    auto z = build_system_task(zeros, a, uk());
    CHECK(oracle::parse_system(z.statement.back().text, 3).second == RatMatrix(3, 1));

    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng r(seed);
        auto task = gen_system_task(r, {}, uk());
        auto [sa, sb] = oracle::parse_system(task.statement.back().text, 3);
        LinSystem sys(sa, sb);
        auto expected = RatMatrix::column(std::get<VectorAnswer>(task.answers[0]).value);
        CHECK(solve(sys, SolveMethod::Cramer) == expected);
        CHECK(solve(sys, SolveMethod::Gauss) == expected);
        for (const auto& e : expected.entries()) {
            CHECK(e.is_integer());
            CHECK(e >= Rational(-5));
            CHECK(e <= Rational(5));
        }
    }
}

TEST_CASE("generation is reproducible and stays in range") {
    GeneratorParams p;
    p.entry_lo = -2;
    p.entry_hi = 7;
    for (auto kind : kAllTaskKinds) {
        for (std::uint64_t seed = 0; seed < 40; ++seed) {
            Rng r1(seed), r2(seed);
            auto t1 = gen_task(kind, r1, p, uk());
            CHECK(t1 == gen_task(kind, r2, p, uk()));
            CHECK(t1.answers.size() == answer_count(kind));
            for (const auto& m : statement_matrices(t1))
                for (const auto& e : m.entries()) {
                    CHECK(e >= Rational(p.entry_lo));
                    CHECK(e <= Rational(p.entry_hi));
                }
        }
    }
}

TEST_CASE("bad params are rejected") {
    GeneratorParams p;
    p.entry_lo = 3;
    p.entry_hi = 2;
    CHECK_THROWS_AS(p.validate(), TaskError);
    GeneratorParams big;
    big.dim_hi = 6;
    CHECK_THROWS_AS(big.validate(), TaskError);
    GeneratorParams zero_dim;
    zero_dim.dim_lo = 0;
    Rng r(0);
    CHECK_THROWS_AS(gen_product_task(r, zero_dim, uk()), TaskError);
}
