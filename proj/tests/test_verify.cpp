#include <catch2/catch_amalgamated.hpp>

#include "resym/verify.hpp"

using namespace resym;

namespace {
InstanceSpec spec_with(std::uint64_t seed, int fiber_n = 2) {
    InstanceSpec s;
    s.fiber_n = fiber_n;
    s.degree_bound = 3;
    s.seed = seed;
    return s;
}
} // namespace

TEST_CASE("generated instances satisfy the shape contract") {
    auto ctx = make_context(CoeffField::rationals(), {"x", "y"}, 0);
    InstanceSpec spec = spec_with(42);
    for (std::uint64_t trial = 0; trial < 10; ++trial) {
        DenomTuple f = gen_zero_dim_ci(spec, ctx, trial);
        REQUIRE(f.denoms.size() == 2);
        GroebnerBasis gb = buchberger(f.denoms, MonomialOrder::degrevlex());
        CHECK(certify_zero_dimensional(gb).has_value());
        for (std::size_t i = 0; i < 2; ++i) {
            int d = f.denoms[i].degree_in(i);
            CHECK(d >= 2);
            CHECK(d <= spec.degree_bound);
        }
    }
}

TEST_CASE("generation is deterministic in the seed") {
    auto ctx = make_context(CoeffField::rationals(), {"x", "y"}, 0);
    InstanceSpec spec = spec_with(7);
    DenomTuple a = gen_zero_dim_ci(spec, ctx, 3);
    DenomTuple b = gen_zero_dim_ci(spec, ctx, 3);
    CHECK(a.denoms == b.denoms);
    DenomTuple c = gen_zero_dim_ci(spec, ctx, 4);
    CHECK(a.denoms != c.denoms);
}

TEST_CASE("reports are deterministic and balanced") {
    VerifyReport r1 = run_rule("R6", 5, spec_with(11));
    VerifyReport r2 = run_rule("R6", 5, spec_with(11));
    CHECK(r1.attempted == r2.attempted);
    CHECK(r1.passed == r2.passed);
    CHECK(r1.failed == r2.failed);
    CHECK(r1.passed + r1.failed + r1.skipped == r1.attempted);
    CHECK(r1.failed == 0);
}

TEST_CASE("every rule passes a short run") {
    for (const auto& rule : all_rules()) {
        VerifyReport rep = run_rule(rule, 3, spec_with(2024));
        INFO(rule << ": " << rep.failed << " failures of " << rep.attempted);
        CHECK(rep.failed == 0);
        CHECK(rep.attempted > 0);
        for (const auto& f : rep.failures) {
            INFO("instance: " << f.instance << " lhs=" << f.lhs << " rhs=" << f.rhs);
            CHECK(false);
        }
    }
}

TEST_CASE("rules run over a prime field too") {
    InstanceSpec spec = spec_with(5);
    spec.field = CoeffField::prime_field(101);
    for (const auto& rule : {"R1", "R6", "R9", "sum", "tate"}) {
        VerifyReport rep = run_rule(rule, 2, spec);
        INFO(rule);
        CHECK(rep.failed == 0);
    }
}

TEST_CASE("cross-oracle on the worked instances") {
    auto ct = make_context(CoeffField::rationals(), {"T"}, 0);
    Poly f = Poly::variable(ct, 0, 2) - Poly::constant(ct, Coeff(1));
    CHECK(cross_oracle_residue(make_denom_tuple({f}), Poly::constant(ct, Coeff(1))));
    CHECK(cross_oracle_residue(make_denom_tuple({Poly::variable(ct, 0)}), Poly::constant(ct, Coeff(1))));
}
