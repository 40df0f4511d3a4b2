#include <catch2/catch_amalgamated.hpp>

#include "resym/fractions.hpp"
#include "resym/parse.hpp"
#include "resym/verify.hpp"

using namespace resym;

namespace {
ContextPtr qq(const std::vector<std::string>& vars) { return make_context(CoeffField::rationals(), vars, 0); }

DiffForm top(const Poly& g) {
    IndexTuple fiber;
    for (std::size_t i = 0; i < g.ctx()->nvars(); ++i) fiber.push_back(static_cast<int>(i));
    return DiffForm::from_component(g, fiber);
}

GenFraction frac(const ContextPtr& ctx, const std::string& num, const std::vector<std::string>& denoms,
                 std::vector<int> exps) {
    std::vector<Poly> fs;
    for (const auto& d : denoms) fs.push_back(parse_poly(d, ctx));
    return make_fraction(parse_form(num, ctx), make_denom_tuple(fs), std::move(exps));
}
} // namespace

TEST_CASE("zero tests") {
    auto ctx = qq({"x", "y"});
    CHECK(fraction_is_zero(frac(ctx, "y*d(x)/\\d(y)", {"x", "y"}, {1, 1})));
    CHECK_FALSE(fraction_is_zero(frac(ctx, "d(x)/\\d(y)", {"x", "y"}, {1, 1})));
    auto cx = qq({"x"});
    CHECK(fraction_is_zero(frac(cx, "x^2*d(x)", {"x"}, {2})));
}

TEST_CASE("rescaling preserves class and residue") {
    auto ctx = qq({"x", "y"});
    GenFraction fr = frac(ctx, "d(x)/\\d(y)", {"x", "y"}, {1, 1});
    GenFraction up = fraction_rescale(fr, {1, 2});
    CHECK(up.numerator == parse_form("y*d(x)/\\d(y)", ctx));
    CHECK(residue_of_fraction(up).value == residue_of_fraction(fr).value);

    auto cx = qq({"x"});
    GenFraction f1 = frac(cx, "d(x)", {"x"}, {1});
    GenFraction f2 = fraction_rescale(f1, {2});
    CHECK(f2.numerator == parse_form("x*d(x)", cx));
    CHECK_THROWS_AS(fraction_rescale(f2, {1}), Error);

    Rng rng(71);
    for (int rep = 0; rep < 6; ++rep) {
        DenomTuple t = gen::zero_dim_ci(rng, ctx, 3);
        GenFraction g{top(gen::sparse_poly(rng, ctx, 2, 3)), t, {1, static_cast<int>(rng.range(1, 2))}};
        std::vector<int> gamma{g.exponents[0] + static_cast<int>(rng.range(0, 2)),
                               g.exponents[1] + static_cast<int>(rng.range(0, 2))};
        CHECK(residue_of_fraction(fraction_rescale(g, gamma)).value == residue_of_fraction(g).value);
    }
}

TEST_CASE("fraction equality across generating sequences") {
    auto ctx = qq({"x", "y"});
    GenFraction a = frac(ctx, "-2*d(x)/\\d(y)", {"x+y", "x-y"}, {1, 1});
    GenFraction b = frac(ctx, "d(x)/\\d(y)", {"x", "y"}, {1, 1});
    CHECK(fraction_equal(a, b));

    GenFraction c = frac(ctx, "d(x)/\\d(y)", {"x", "y"}, {1, 1});
    GenFraction d = frac(ctx, "x*d(x)/\\d(y)", {"x", "y"}, {2, 1});
    CHECK(fraction_equal(c, d));

    GenFraction e = frac(ctx, "d(x)/\\d(y)", {"x", "y"}, {2, 1});
    CHECK_FALSE(fraction_equal(c, e)); // residues 1 vs 0

    // equivalence relation on random triples with a common ideal
    Rng rng(73);
    for (int rep = 0; rep < 4; ++rep) {
        DenomTuple t = gen::zero_dim_ci(rng, ctx, 3);
        Poly g = gen::sparse_poly(rng, ctx, 2, 2);
        GenFraction x{top(g), t, {1, 1}};
        GenFraction y = fraction_rescale(x, {2, 1});
        GenFraction z = fraction_rescale(x, {2, 2});
        CHECK(fraction_equal(x, x));
        CHECK(fraction_equal(x, y));
        CHECK(fraction_equal(y, z));
        CHECK(fraction_equal(x, z));
    }
}

TEST_CASE("exterior-derivative action") {
    auto cx = qq({"x"});
    {
        // [1; x] -> -[dx; x^2]
        GenFraction fr = frac(cx, "1", {"x"}, {1});
        auto out = d_fraction(fr);
        REQUIRE(out.size() == 1);
        CHECK(out[0].numerator == parse_form("-d(x)", cx));
        CHECK(out[0].exponents == std::vector<int>{2});
    }
    {
        GenFraction fr = frac(cx, "0", {"x"}, {1});
        CHECK(d_fraction(fr).empty());
    }
    {
        // [x; x^2] -> [dx; x^2] - 2 [x dx; x^3]
        GenFraction fr = frac(cx, "x", {"x"}, {2});
        auto out = d_fraction(fr);
        REQUIRE(out.size() == 2);
        CHECK(out[0].numerator == parse_form("d(x)", cx));
        CHECK(out[0].exponents == std::vector<int>{2});
        CHECK(out[1].numerator == parse_form("-2*x*d(x)", cx));
        CHECK(out[1].exponents == std::vector<int>{3});
    }
}

TEST_CASE("residues of fractions") {
    auto ctx = qq({"x", "y"});
    CHECK(residue_of_fraction(frac(ctx, "d(x)/\\d(y)", {"x", "y"}, {1, 1})).value == parse_poly("1", ctx));
    auto cx = qq({"x"});
    CHECK(residue_of_fraction(frac(cx, "d(x)", {"x"}, {2})).value.is_zero());
    CHECK(residue_of_fraction(frac(cx, "x*d(x)", {"x"}, {2})).value == parse_poly("1", cx));
}

TEST_CASE("residue annihilates the exterior-derivative image") {
    auto ctx = qq({"x", "y"});
    Rng rng(79);
    for (int rep = 0; rep < 8; ++rep) {
        DenomTuple t = gen::zero_dim_ci(rng, ctx, 3);
        DiffForm eta(ctx, 1);
        eta.add_component({0}, gen::sparse_poly(rng, ctx, 2, 2));
        eta.add_component({1}, gen::sparse_poly(rng, ctx, 2, 2));
        GenFraction fr{eta, t, {static_cast<int>(rng.range(1, 3)), static_cast<int>(rng.range(1, 3))}};
        Poly total = Poly::zero(ctx);
        for (const auto& piece : d_fraction(fr)) total = total + residue_of_fraction(piece).value;
        CHECK(total.is_zero());
    }
}

TEST_CASE("zero fractions kill residues under multipliers") {
    auto ctx = qq({"x", "y"});
    Rng rng(83);
    for (int rep = 0; rep < 6; ++rep) {
        DenomTuple t = gen::zero_dim_ci(rng, ctx, 3);
        std::vector<int> beta{static_cast<int>(rng.range(1, 2)), 1};
        Poly powered = t.denoms[0].pow(beta[0]);
        Poly member = powered * gen::sparse_poly(rng, ctx, 1, 2) +
                      t.denoms[1] * gen::sparse_poly(rng, ctx, 1, 2);
        GenFraction fr{top(member), t, beta};
        REQUIRE(fraction_is_zero(fr));
        CHECK(residue_of_fraction(fr).value.is_zero());
        Poly g = gen::sparse_poly(rng, ctx, 2, 2);
        GenFraction scaled{fr.numerator.scaled_by(g), t, beta};
        CHECK(residue_of_fraction(scaled).value.is_zero());
    }
}
