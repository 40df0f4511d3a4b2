#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "finite_trace.hpp"
#include "format.hpp"
#include "fractions.hpp"
#include "parse.hpp"
#include "projective.hpp"
#include "residue.hpp"
#include "verify.hpp"

namespace resym::cli {

using Json = nlohmann::ordered_json;

/// Ring declaration: field plus base/fiber variable groups.
/// Text syntax: "QQ[x,y]", "Fp:7[x,y]", "QQ[u][T,S]" (base group first).
struct RingSpec {
    CoeffField field = CoeffField::rationals();
    std::vector<std::string> base;
    std::vector<std::string> fiber;

    ContextPtr context() const {
        std::vector<std::string> vars = base;
        vars.insert(vars.end(), fiber.begin(), fiber.end());
        return make_context(field, std::move(vars), base.size());
    }
};

inline CoeffField parse_field(const std::string& s) {
    if (s == "QQ") return CoeffField::rationals();
    if (s.rfind("Fp:", 0) == 0) {
        try {
            return CoeffField::prime_field(std::stoull(s.substr(3)));
        } catch (const Error&) {
            throw;
        } catch (...) {
            fail(ErrorCode::SyntaxError, "bad prime in field spec '" + s + "'");
        }
    }
    fail(ErrorCode::SyntaxError, "unknown field '" + s + "' (expected QQ or Fp:<p>)");
}

inline RingSpec parse_ring(const std::string& text, const std::optional<std::string>& field_override = std::nullopt) {
    RingSpec spec;
    std::size_t bracket = text.find('[');
    require(bracket != std::string::npos, ErrorCode::SyntaxError, "ring spec needs a variable list: QQ[x,y]");
    std::string field_part = text.substr(0, bracket);
    if (field_override)
        spec.field = parse_field(*field_override);
    else if (!field_part.empty())
        spec.field = parse_field(field_part);

    std::vector<std::vector<std::string>> groups;
    std::size_t pos = bracket;
    while (pos < text.size()) {
        require(text[pos] == '[', ErrorCode::SyntaxError, "expected '[' in ring spec");
        std::size_t close = text.find(']', pos);
        require(close != std::string::npos, ErrorCode::SyntaxError, "unbalanced '[' in ring spec");
        std::string inner = text.substr(pos + 1, close - pos - 1);
        std::vector<std::string> names;
        std::string cur;
        for (char c : inner) {
            if (c == ',') {
                if (!cur.empty()) names.push_back(cur);
                cur.clear();
            } else if (!std::isspace(static_cast<unsigned char>(c))) {
                cur += c;
            }
        }
        if (!cur.empty()) names.push_back(cur);
        require(!names.empty(), ErrorCode::SyntaxError, "empty variable group in ring spec");
        groups.push_back(std::move(names));
        pos = close + 1;
    }
    require(groups.size() == 1 || groups.size() == 2, ErrorCode::SyntaxError,
            "ring spec takes one or two variable groups");
    if (groups.size() == 1) {
        spec.fiber = groups[0];
    } else {
        spec.base = groups[0];
        spec.fiber = groups[1];
    }
    return spec;
}

namespace detail_cli {

inline std::vector<Poly> parse_poly_list(const Json& arr, const ContextPtr& ctx) {
    require(arr.is_array() && !arr.empty(), ErrorCode::BadArgument, "expected a non-empty list of polynomials");
    std::vector<Poly> out;
    for (const auto& item : arr) out.push_back(parse_poly(item.get<std::string>(), ctx));
    return out;
}

inline ContextPtr absolute_view(const ContextPtr& ctx) {
    if (ctx->base_block == 0) return ctx;
    return make_context(ctx->field, ctx->vars, 0);
}

inline Json value_record(const Json& query, Json value) {
    Json rec;
    rec["query"] = query;
    rec["status"] = "ok";
    rec["value"] = std::move(value);
    return rec;
}

} // namespace detail_cli

/// Executes a single query against the shared ring; returns the output
/// record. Computation failures become structured error records, never
/// exceptions.
inline Json execute(const Json& query, const RingSpec& ring) {
    using detail_cli::parse_poly_list;
    using detail_cli::value_record;
    try {
        require(query.is_object() && query.contains("cmd"), ErrorCode::BadArgument, "query needs a 'cmd'");
        std::string cmd = query.at("cmd").get<std::string>();
        ContextPtr ctx = ring.context();

        if (cmd == "residue" || cmd == "residue-rel") {
            ContextPtr rctx = cmd == "residue" ? detail_cli::absolute_view(ctx) : ctx;
            if (cmd == "residue-rel")
                require(rctx->base_block > 0, ErrorCode::BadArgument, "residue-rel needs a base block");
            DiffForm w = parse_form(query.at("form").get<std::string>(), rctx);
            auto denoms = parse_poly_list(query.at("denoms"), rctx);
            ResidueValue v = residue_symbol(w, make_denom_tuple(std::move(denoms)));
            return value_record(query, residue_value_to_string(v.value));
        }
        if (cmd == "trace") {
            auto denoms = parse_poly_list(query.at("denoms"), ctx);
            Poly of = parse_poly(query.at("of").get<std::string>(), ctx);
            QuotientAlgebra q = quotient_algebra(buchberger(denoms, MonomialOrder::natural(*ctx)));
            return value_record(query, residue_value_to_string(canonical_trace(q, of)));
        }
        if (cmd == "tate-lambda") {
            ContextPtr actx = detail_cli::absolute_view(ctx);
            auto denoms = parse_poly_list(query.at("denoms"), actx);
            Poly of = parse_poly(query.at("of").get<std::string>(), actx);
            TatePresentation pres = tate_presentation(denoms);
            return value_record(query, coeff_to_string(tate_lambda(pres, of)));
        }
        if (cmd == "klt") {
            require(ctx->base_block > 0, ErrorCode::BadArgument, "klt needs a base block");
            auto relations = parse_poly_list(query.at("relations"), ctx);
            DiffForm eta = parse_form(query.at("eta").get<std::string>(), ctx);
            FinitePresentation pres = make_finite_presentation(std::move(relations));
            return value_record(query, form_to_string(klt_trace(pres, eta)));
        }
        if (cmd == "groebner") {
            auto gens = parse_poly_list(query.at("gens"), ctx);
            GroebnerBasis gb = buchberger(gens, MonomialOrder::natural(*ctx));
            Json basis = Json::array();
            for (const auto& g : gb.basis) basis.push_back(poly_to_string(g));
            return value_record(query, basis);
        }
        if (cmd == "quotient") {
            auto gens = parse_poly_list(query.at("gens"), ctx);
            QuotientAlgebra q = quotient_algebra(buchberger(gens, MonomialOrder::natural(*ctx)));
            Json out;
            out["rank"] = q.rank;
            Json monos = Json::array();
            for (const auto& e : q.std_monomials)
                monos.push_back(poly_to_string(Poly::monomial(ctx, e, Coeff(1))));
            out["std_monomials"] = monos;
            return value_record(query, out);
        }
        if (cmd == "fraction") {
            std::string op = query.value("op", "residue");
            ContextPtr actx = detail_cli::absolute_view(ctx);
            auto denoms = parse_poly_list(query.at("denoms"), actx);
            std::vector<int> exps;
            if (query.contains("exponents"))
                for (const auto& e : query.at("exponents")) exps.push_back(e.get<int>());
            else
                exps.assign(denoms.size(), 1);
            DiffForm num = parse_form(query.at("num").get<std::string>(), actx);
            GenFraction fr = make_fraction(num, make_denom_tuple(std::move(denoms)), exps);
            if (op == "residue") return value_record(query, residue_value_to_string(residue_of_fraction(fr).value));
            if (op == "zero") return value_record(query, fraction_is_zero(fr));
            if (op == "d") {
                Json parts = Json::array();
                for (const auto& piece : d_fraction(fr)) {
                    Json p;
                    p["num"] = form_to_string(piece.numerator);
                    Json ex = Json::array();
                    for (int b : piece.exponents) ex.push_back(b);
                    p["exponents"] = ex;
                    parts.push_back(p);
                }
                return value_record(query, parts);
            }
            fail(ErrorCode::BadArgument, "unknown fraction op '" + op + "'");
        }
        if (cmd == "cech") {
            std::string op = query.value("op", "dim");
            int r = query.at("r").get<int>();
            if (op == "dim") {
                int d = query.at("d").get<int>();
                int q = query.at("q").get<int>();
                return value_record(query, cohomology_dim(r, d, q));
            }
            std::vector<int> alpha;
            for (const auto& a : query.at("alpha")) alpha.push_back(a.get<int>());
            CechCochain cls = fraction_to_cech_class(ring.field, r, alpha);
            if (op == "integral") return value_record(query, coeff_to_string(pn_integral(cls)));
            if (op == "zero") {
                auto [is_zero, witness] = class_is_zero(cls);
                return value_record(query, is_zero);
            }
            fail(ErrorCode::BadArgument, "unknown cech op '" + op + "'");
        }
        if (cmd == "verify") {
            std::string rule = query.at("rule").get<std::string>();
            std::uint64_t trials = query.value("trials", 25ull);
            InstanceSpec spec;
            spec.field = ring.field;
            spec.seed = query.value("seed", 0ull);
            if (query.contains("fiber_n")) spec.fiber_n = query.at("fiber_n").get<int>();
            if (query.contains("degree_bound")) spec.degree_bound = query.at("degree_bound").get<int>();
            VerifyReport rep = run_rule(rule, trials, spec);
            Json out;
            out["rule"] = rep.rule;
            out["attempted"] = rep.attempted;
            out["passed"] = rep.passed;
            out["failed"] = rep.failed;
            out["skipped"] = rep.skipped;
            Json fails = Json::array();
            for (const auto& f : rep.failures) {
                Json jf;
                jf["trial"] = f.trial;
                jf["instance"] = f.instance;
                jf["lhs"] = f.lhs;
                jf["rhs"] = f.rhs;
                fails.push_back(jf);
            }
            out["failures"] = fails;
            return value_record(query, out);
        }
        fail(ErrorCode::BadArgument, "unknown command '" + cmd + "'");
    } catch (const Error& e) {
        Json rec;
        rec["query"] = query;
        rec["status"] = "error";
        rec["code"] = e.code_name();
        rec["message"] = e.what();
        return rec;
    } catch (const Json::exception& e) {
        Json rec;
        rec["query"] = query;
        rec["status"] = "error";
        rec["code"] = "BAD_ARGUMENT";
        rec["message"] = e.what();
        return rec;
    } catch (const std::exception& e) {
        Json rec;
        rec["query"] = query;
        rec["status"] = "error";
        rec["code"] = "INTERNAL";
        rec["message"] = e.what();
        return rec;
    }
}

/// True when the record reports success; verify queries additionally demand
/// zero failed trials.
inline bool record_ok(const Json& rec) {
    if (rec.value("status", "") != "ok") return false;
    const Json& q = rec.at("query");
    if (q.value("cmd", "") == "verify") return rec.at("value").at("failed").get<std::uint64_t>() == 0;
    return true;
}

/// Renders one record per line: NDJSON in json mode, bare values in text
/// mode. Byte-identical for identical inputs.
inline std::string format_output(const Json& rec, const std::string& mode) {
    if (mode == "json") return rec.dump();
    if (rec.value("status", "") == "ok") {
        const Json& v = rec.at("value");
        if (v.is_string()) return v.get<std::string>();
        return v.dump();
    }
    return std::string("error[") + rec.value("code", "INTERNAL") + "] " + rec.value("message", "");
}

} // namespace resym::cli
