#include <catch2/catch_amalgamated.hpp>

#include "resym/cli.hpp"
#include "resym/format.hpp"
#include "resym/parse.hpp"

using namespace resym;
using resym::cli::Json;

namespace {
ContextPtr qq_xy() { return make_context(CoeffField::rationals(), {"x", "y"}, 0); }
} // namespace

TEST_CASE("expression grammar") {
    auto ctx = qq_xy();
    Poly p = parse_poly("x^2*y - 1/2", ctx);
    CHECK(p.coefficient_of({2, 1}) == Coeff(1));
    CHECK(p.coefficient_of({0, 0}) == Coeff(-1, 2));

    DiffForm f = parse_form("x*d(x)/\\d(y)", ctx);
    CHECK(f == DiffForm::from_component(parse_poly("x", ctx), {0, 1}));

    CHECK_THROWS_AS(parse_expression("d(x) + 1", ctx), Error);
    CHECK_THROWS_AS(parse_expression("x +* y", ctx), Error);
    CHECK_THROWS_AS(parse_expression("q + 1", ctx), Error);
    CHECK_THROWS_AS(parse_expression("x^(1/2)", ctx), Error);

    // error positions are reported
    try {
        parse_expression("x + $", ctx);
        FAIL("expected a syntax error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("1:5") != std::string::npos);
        CHECK(e.code() == ErrorCode::SyntaxError);
    }
}

TEST_CASE("format and parse round-trip") {
    auto ctx = qq_xy();
    Rng rng(113);
    for (int rep = 0; rep < 20; ++rep) {
        Poly p = gen::sparse_poly(rng, ctx, 3, 4);
        std::string s = poly_to_string(p);
        CHECK(parse_poly(s, ctx) == p);
        CHECK(poly_to_string(parse_poly(s, ctx)) == s);
    }
    DiffForm f = parse_form("(x + y)*d(x)/\\d(y) - d(x)/\\d(y)", ctx);
    CHECK(parse_form(form_to_string(f), ctx) == f);
}

TEST_CASE("ring specs") {
    cli::RingSpec r1 = cli::parse_ring("QQ[x,y]");
    CHECK(r1.field.is_rationals());
    CHECK(r1.fiber == std::vector<std::string>{"x", "y"});
    CHECK(r1.base.empty());

    cli::RingSpec r2 = cli::parse_ring("QQ[y][T]");
    CHECK(r2.base == std::vector<std::string>{"y"});
    CHECK(r2.fiber == std::vector<std::string>{"T"});
    CHECK(r2.context()->base_block == 1);

    cli::RingSpec r3 = cli::parse_ring("Fp:7[x]");
    CHECK(r3.field.modulus() == 7);

    cli::RingSpec r4 = cli::parse_ring("[x]", std::string("Fp:11"));
    CHECK(r4.field.modulus() == 11);

    CHECK_THROWS_AS(cli::parse_ring("QQ"), Error);
    CHECK_THROWS_AS(cli::parse_ring("ZZ[x]"), Error);
    CHECK_THROWS_AS(cli::parse_ring("Fp:6[x]"), Error);
}

TEST_CASE("the documented example queries") {
    cli::RingSpec ring = cli::parse_ring("QQ[x,y]");
    Json q1 = {{"cmd", "residue"}, {"form", "d(x)/\\d(y)"}, {"denoms", Json::array({"x", "y"})}};
    Json rec1 = cli::execute(q1, ring);
    CHECK(rec1.at("status") == "ok");
    CHECK(rec1.at("value") == "1");
    CHECK(cli::record_ok(rec1));

    cli::RingSpec ring_t = cli::parse_ring("QQ[T]");
    Json q2 = {{"cmd", "residue"}, {"form", "d(T)"}, {"denoms", Json::array({"T^2-1"})}};
    Json rec2 = cli::execute(q2, ring_t);
    CHECK(rec2.at("value") == "0");

    Json q3 = {{"cmd", "verify"}, {"rule", "R6"}, {"trials", 5}, {"seed", 7}};
    Json rec3 = cli::execute(q3, ring);
    CHECK(rec3.at("status") == "ok");
    CHECK(rec3.at("value").at("failed") == 0);
    CHECK(cli::record_ok(rec3));
}

TEST_CASE("structured errors surface stable codes") {
    cli::RingSpec ring = cli::parse_ring("QQ[x,y]");
    Json q = {{"cmd", "residue"}, {"form", "d(x)/\\d(y)"}, {"denoms", Json::array({"x*y", "x"})}};
    Json rec = cli::execute(q, ring);
    CHECK(rec.at("status") == "error");
    CHECK(rec.at("code") == "NOT_ZERO_DIMENSIONAL");
    CHECK_FALSE(cli::record_ok(rec));

    Json q2 = {{"cmd", "residue"}, {"form", "d(x) + 1"}, {"denoms", Json::array({"x", "y"})}};
    CHECK(cli::execute(q2, ring).at("code") == "MIXED_DEGREE");

    Json q3 = {{"cmd", "trace"}, {"of", "1"}, {"denoms", Json::array({"x*y", "x"})}};
    CHECK(cli::execute(q3, ring).at("code") == "NOT_ZERO_DIMENSIONAL");
}

TEST_CASE("more commands through the dispatcher") {
    cli::RingSpec ring = cli::parse_ring("QQ[x,y]");
    Json gb = cli::execute({{"cmd", "groebner"}, {"gens", Json::array({"x^2+y", "y"})}}, ring);
    CHECK(gb.at("value") == Json::array({"y", "x^2"}));

    Json q = cli::execute({{"cmd", "quotient"}, {"gens", Json::array({"x^2+y", "y"})}}, ring);
    CHECK(q.at("value").at("rank") == 2);

    Json tr = cli::execute({{"cmd", "trace"}, {"of", "x"}, {"denoms", Json::array({"x^2-1", "y"})}}, ring);
    CHECK(tr.at("value") == "0");

    cli::RingSpec ring_t = cli::parse_ring("QQ[T]");
    Json tl = cli::execute({{"cmd", "tate-lambda"}, {"of", "T"}, {"denoms", Json::array({"T^2-1"})}}, ring_t);
    CHECK(tl.at("value") == "1");

    cli::RingSpec rel = cli::parse_ring("QQ[y][T]");
    Json klt = cli::execute({{"cmd", "klt"}, {"relations", Json::array({"T^2-y"})}, {"eta", "T*d(T)"}}, rel);
    CHECK(klt.at("value") == "d(y)");

    Json rres = cli::execute({{"cmd", "residue-rel"}, {"form", "T*d(T)"}, {"denoms", Json::array({"T^2-y"})}}, rel);
    CHECK(rres.at("value") == "1");
    Json rres2 = cli::execute({{"cmd", "residue-rel"}, {"form", "d(T)"}, {"denoms", Json::array({"T^2-y"})}}, ring);
    CHECK(rres2.at("code") == "BAD_ARGUMENT"); // no base block declared

    Json fr = cli::execute({{"cmd", "fraction"},
                            {"op", "residue"},
                            {"num", "d(x)/\\d(y)"},
                            {"denoms", Json::array({"x", "y"})},
                            {"exponents", Json::array({1, 1})}},
                           ring);
    CHECK(fr.at("value") == "1");

    Json cech = cli::execute({{"cmd", "cech"}, {"op", "dim"}, {"r", 2}, {"d", -3}, {"q", 2}}, ring);
    CHECK(cech.at("value") == 1);

    Json cech2 = cli::execute({{"cmd", "cech"}, {"op", "integral"}, {"r", 2}, {"alpha", Json::array({1, 1})}}, ring);
    CHECK(cech2.at("value") == "1");
}

TEST_CASE("output formatting modes") {
    cli::RingSpec ring = cli::parse_ring("QQ[x,y]");
    Json rec = cli::execute({{"cmd", "residue"}, {"form", "d(x)/\\d(y)"}, {"denoms", Json::array({"x+y", "x-y"})}},
                            ring);
    CHECK(cli::format_output(rec, "text") == "-1/2");
    std::string j = cli::format_output(rec, "json");
    CHECK(Json::parse(j).at("value") == "-1/2");
    CHECK(Json::parse(j).at("status") == "ok");
    // byte-identical on repeated execution
    Json rec2 = cli::execute({{"cmd", "residue"}, {"form", "d(x)/\\d(y)"}, {"denoms", Json::array({"x+y", "x-y"})}},
                             ring);
    CHECK(cli::format_output(rec2, "json") == j);
}
