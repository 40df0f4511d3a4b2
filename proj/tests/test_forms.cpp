#include <catch2/catch_amalgamated.hpp>

#include "resym/forms.hpp"
#include "resym/parse.hpp"
#include "resym/verify.hpp"

using namespace resym;

namespace {
ContextPtr qq_xy() { return make_context(CoeffField::rationals(), {"x", "y"}, 0); }

DiffForm random_form(Rng& rng, const ContextPtr& ctx, int degree) {
    DiffForm f(ctx, degree);
    auto subsets = [&](auto&& self, IndexTuple cur, int start) -> void {
        if (static_cast<int>(cur.size()) == degree) {
            f.add_component(cur, gen::sparse_poly(rng, ctx, 2, 2));
            return;
        }
        for (int i = start; i < static_cast<int>(ctx->nvars()); ++i) {
            IndexTuple next = cur;
            next.push_back(i);
            self(self, next, i + 1);
        }
    };
    subsets(subsets, {}, 0);
    return f;
}
} // namespace

TEST_CASE("wedge basics") {
    auto ctx = qq_xy();
    DiffForm dx = DiffForm::d_var(ctx, 0), dy = DiffForm::d_var(ctx, 1);
    CHECK(wedge(dx, dy) == DiffForm::from_component(parse_poly("1", ctx), {0, 1}));
    CHECK(wedge(dy, dx) == DiffForm::from_component(parse_poly("-1", ctx), {0, 1}));
    CHECK(wedge(dx, dx).is_zero());
}

TEST_CASE("exterior derivative") {
    auto ctx = qq_xy();
    CHECK(exterior_derivative(DiffForm::from_poly(parse_poly("x^2", ctx))) ==
          DiffForm::from_component(parse_poly("2*x", ctx), {0}));
    DiffForm xdy = DiffForm::from_component(parse_poly("x", ctx), {1});
    CHECK(exterior_derivative(xdy) == DiffForm::from_component(parse_poly("1", ctx), {0, 1}));
    DiffForm closed = parse_form("x*d(y) + y*d(x)", ctx);
    CHECK(exterior_derivative(closed).is_zero());
}

TEST_CASE("pullback examples") {
    auto ctx = qq_xy();
    auto ctx_x = make_context(CoeffField::rationals(), {"x"}, 0);
    // dy under y -> x^2 is 2x dx
    std::vector<Poly> images(2);
    images[1] = parse_poly("x^2", ctx_x);
    CHECK(pullback(DiffForm::d_var(ctx, 1), images, ctx_x) ==
          DiffForm::from_component(parse_poly("2*x", ctx_x), {0}));

    auto ctx_uv = make_context(CoeffField::rationals(), {"u", "v"}, 0);
    std::vector<Poly> ren{parse_poly("u", ctx_uv), parse_poly("v", ctx_uv)};
    CHECK(pullback(parse_form("d(x)/\\d(y)", ctx), ren, ctx_uv) == parse_form("d(u)/\\d(v)", ctx_uv));

    std::vector<Poly> cst(2);
    cst[1] = parse_poly("1", ctx_x);
    CHECK(pullback(DiffForm::d_var(ctx, 1), cst, ctx_x).is_zero());
}

TEST_CASE("transitivity wedge puts the fiber part first") {
    auto rel = make_context(CoeffField::rationals(), {"u", "T"}, 1);
    DiffForm du = DiffForm::d_var(rel, 0), dT = DiffForm::d_var(rel, 1);
    CHECK(transitivity_wedge(du, dT) == wedge(dT, du));
    CHECK(transitivity_wedge(DiffForm::from_poly(parse_poly("1", rel)), dT) == dT);
    CHECK_THROWS_AS(transitivity_wedge(dT, dT), Error);

    auto rel2 = make_context(CoeffField::rationals(), {"u", "v", "T"}, 2);
    DiffForm nu = parse_form("d(u)/\\d(v)", rel2);
    DiffForm mu = DiffForm::d_var(rel2, 2);
    CHECK(transitivity_wedge(nu, mu) == wedge(mu, nu));
}

TEST_CASE("graded commutativity and Leibniz on random forms") {
    auto ctx = make_context(CoeffField::rationals(), {"x", "y", "z"}, 0);
    Rng rng(9);
    for (int p = 0; p <= 2; ++p)
        for (int q = 0; q <= 2; ++q) {
            DiffForm a = random_form(rng, ctx, p);
            DiffForm b = random_form(rng, ctx, q);
            DiffForm ab = wedge(a, b);
            DiffForm ba = wedge(b, a);
            DiffForm signed_ba = (p * q) % 2 == 0 ? ba : ba.scaled(Coeff(-1));
            CHECK(ab == signed_ba);
            if (p + q + 1 <= 3) {
                DiffForm lhs = exterior_derivative(ab);
                DiffForm rhs = wedge(exterior_derivative(a), b) +
                               (p % 2 == 0 ? wedge(a, exterior_derivative(b))
                                           : wedge(a, exterior_derivative(b)).scaled(Coeff(-1)));
                CHECK(lhs == rhs);
            }
            CHECK(exterior_derivative(exterior_derivative(a)).is_zero());
        }
}

TEST_CASE("pullback commutes with wedge and d") {
    auto src = make_context(CoeffField::rationals(), {"x", "y"}, 0);
    auto dst = make_context(CoeffField::rationals(), {"u", "v"}, 0);
    Rng rng(31);
    for (int rep = 0; rep < 8; ++rep) {
        std::vector<Poly> images{gen::sparse_poly(rng, dst, 2, 2), gen::sparse_poly(rng, dst, 2, 2)};
        DiffForm a = random_form(rng, src, 1);
        DiffForm b = random_form(rng, src, 1);
        CHECK(pullback(wedge(a, b), images, dst) == wedge(pullback(a, images, dst), pullback(b, images, dst)));
        CHECK(pullback(exterior_derivative(a), images, dst) == exterior_derivative(pullback(a, images, dst)));
        DiffForm f0 = random_form(rng, src, 0);
        CHECK(pullback(exterior_derivative(f0), images, dst) == exterior_derivative(pullback(f0, images, dst)));
    }
}
