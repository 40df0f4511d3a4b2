// Acceptance suite: one line per criterion, exact checks, wall-clock budgets
// pinned in code. Exits nonzero if any criterion fails. argv[1] must name
// the CLI binary (wired up by ctest).

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "resym/resym.hpp"

using namespace resym;
using Json = nlohmann::ordered_json;

namespace {

std::string g_cli_path;

struct CmdResult {
    int exit_code;
    std::string out;
};

CmdResult run_cmd(const std::string& cmd) {
    std::string full = cmd + " 2>/dev/null";
    FILE* pipe = popen(full.c_str(), "r");
    if (!pipe) return {-1, ""};
    std::string out;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    int status = pclose(pipe);
    int code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
    return {code, out};
}

std::size_t binom(int n, int k) {
    if (n < 0 || k < 0 || k > n) return 0;
    std::size_t acc = 1;
    for (int i = 0; i < k; ++i) acc = acc * static_cast<std::size_t>(n - i) / static_cast<std::size_t>(i + 1);
    return acc;
}

InstanceSpec make_spec(int fiber_n, int degree_bound, std::uint64_t seed) {
    InstanceSpec s;
    s.fiber_n = fiber_n;
    s.degree_bound = degree_bound;
    s.seed = seed;
    return s;
}

bool rule_clean(const std::string& rule, std::uint64_t trials, const InstanceSpec& spec, std::string& detail,
                std::uint64_t* skipped = nullptr) {
    VerifyReport rep = run_rule(rule, trials, spec);
    if (skipped) *skipped += rep.skipped;
    if (rep.failed != 0) {
        detail += rule + ": " + std::to_string(rep.failed) + "/" + std::to_string(rep.attempted) + " failed";
        if (!rep.failures.empty())
            detail += " [first: " + rep.failures.front().instance + " lhs=" + rep.failures.front().lhs +
                      " rhs=" + rep.failures.front().rhs + "]";
        return false;
    }
    return true;
}

// --- criteria ------------------------------------------------------------

bool crit_base_residues(std::string& detail) {
    static const char* names[] = {"x1", "x2", "x3"};
    for (int n = 1; n <= 3; ++n) {
        std::vector<std::string> vars(names, names + n);
        auto ctx = make_context(CoeffField::rationals(), vars, 0);
        std::vector<Poly> denoms;
        IndexTuple all;
        DiffForm w = DiffForm::from_poly(Poly::constant(ctx, Coeff(1)));
        for (int i = 0; i < n; ++i) {
            denoms.push_back(Poly::variable(ctx, static_cast<std::size_t>(i)));
            w = wedge(w, DiffForm::d_var(ctx, static_cast<std::size_t>(i)));
        }
        ResidueValue r = residue_symbol(w, make_denom_tuple(denoms));
        if (r.value != Poly::constant(ctx, Coeff(1))) {
            detail = "n=" + std::to_string(n) + " gave " + poly_to_string(r.value);
            return false;
        }
    }
    return true;
}

bool crit_r7(std::string& detail) {
    bool ok = true;
    for (int n = 1; n <= 3; ++n) ok = ok && rule_clean("R7", 1, make_spec(n, 3, 7), detail);
    return ok;
}

bool crit_r6(std::string& detail) {
    return rule_clean("R6", 50, make_spec(1, 4, 601), detail) && rule_clean("R6", 50, make_spec(2, 4, 602), detail);
}

bool crit_r1(std::string& detail) {
    return rule_clean("R1", 50, make_spec(1, 4, 101), detail) && rule_clean("R1", 50, make_spec(2, 3, 102), detail);
}

bool crit_tate(std::string& detail) {
    return rule_clean("tate", 25, make_spec(1, 4, 501), detail) && rule_clean("tate", 25, make_spec(2, 3, 502), detail);
}

bool crit_jacobian(std::string& detail) {
    return rule_clean("jacobian", 25, make_spec(1, 4, 361), detail) &&
           rule_clean("jacobian", 25, make_spec(2, 3, 362), detail);
}

bool crit_r9(std::string& detail) {
    return rule_clean("R9", 25, make_spec(1, 3, 901), detail) && rule_clean("R9", 25, make_spec(2, 3, 902), detail);
}

bool crit_r4(std::string& detail) {
    return rule_clean("R4", 13, make_spec(1, 3, 401), detail) && rule_clean("R4", 12, make_spec(2, 3, 402), detail);
}

bool crit_r10_kunz(std::string& detail) {
    // worked family y = x^k: integral of x^j dx is y^((j+1-k)/k) dy when
    // k | j+1, else 0; cross-checked against the trace formula
    auto ctx = make_context(CoeffField::rationals(), {"y", "T"}, 1);
    for (int k = 1; k <= 4; ++k) {
        Poly f = Poly::variable(ctx, 1, k) - Poly::variable(ctx, 0);
        FinitePresentation pres = make_finite_presentation({f});
        for (int j = 0; j <= 2 * k + 1; ++j) {
            DiffForm eta = DiffForm::from_component(Poly::variable(ctx, 1, j), {1});
            DiffForm traced = klt_trace(pres, eta);
            DiffForm expected = DiffForm::zero(ctx, 1);
            if ((j + 1) % k == 0)
                expected.add_component({0}, Poly::variable(ctx, 0, (j + 1 - k) / k));
            if (traced != expected) {
                detail = "family k=" + std::to_string(k) + " j=" + std::to_string(j) + " gave " +
                         form_to_string(traced);
                return false;
            }
            if (j >= k - 1) { // x^j dx = (x^(j-k+1)/k) h*(dy)
                Poly s = Poly::variable(ctx, 1, j - k + 1).scaled(Coeff(1, k));
                Poly tr = trace_function(pres, s);
                if (traced.component({0}) != tr) {
                    detail = "trace formula mismatch at k=" + std::to_string(k) + " j=" + std::to_string(j);
                    return false;
                }
            }
        }
    }
    return rule_clean("R10", 13, make_spec(1, 3, 1001), detail) &&
           rule_clean("R10", 12, make_spec(2, 3, 1002), detail);
}

bool crit_r5(std::string& detail) {
    std::uint64_t skipped = 0;
    bool ok = rule_clean("R5", 13, make_spec(1, 3, 2001), detail, &skipped) &&
              rule_clean("R5", 12, make_spec(2, 3, 2002), detail, &skipped);
    detail += (detail.empty() ? "" : "; ") + std::string("skipped specializations: ") + std::to_string(skipped);
    return ok;
}

bool crit_r8(std::string& detail) {
    return rule_clean("R8", 13, make_spec(1, 4, 801), detail) && rule_clean("R8", 12, make_spec(2, 3, 802), detail) &&
           rule_clean("pairing", 13, make_spec(1, 4, 811), detail) &&
           rule_clean("pairing", 12, make_spec(2, 3, 812), detail);
}

bool crit_projective(std::string& detail) {
    for (int r = 1; r <= 3; ++r)
        for (int d = -6; d <= 6; ++d)
            for (int q = 0; q <= r; ++q) {
                std::size_t expected = 0;
                if (q == 0 && d >= 0) expected = binom(d + r, r);
                if (q == r && d <= -r - 1) expected = binom(-d - 1, r);
                if (cohomology_dim(r, d, q) != expected) {
                    detail = "dim mismatch at r=" + std::to_string(r) + " d=" + std::to_string(d) +
                             " q=" + std::to_string(q);
                    return false;
                }
            }
    const CoeffField QQ = CoeffField::rationals();
    for (int r = 1; r <= 2; ++r) {
        std::vector<std::string> names;
        for (int i = 0; i < r; ++i) names.push_back("t" + std::to_string(i + 1));
        auto ctx = make_context(QQ, names, 0);
        std::vector<Poly> denoms;
        IndexTuple all;
        for (int i = 0; i < r; ++i) {
            denoms.push_back(Poly::variable(ctx, static_cast<std::size_t>(i)));
            all.push_back(i);
        }
        std::vector<int> alpha(static_cast<std::size_t>(r), 1);
        std::function<bool(int)> walk = [&](int pos) -> bool {
            if (pos == r) {
                CechCochain cls = fraction_to_cech_class(QQ, r, alpha);
                Coeff integral = pn_integral(cls);
                GenFraction fr = make_fraction(DiffForm::from_component(Poly::constant(ctx, Coeff(1)), all),
                                               make_denom_tuple(denoms), alpha);
                Coeff affine = residue_of_fraction(fr).value.constant_value();
                bool all_one = std::all_of(alpha.begin(), alpha.end(), [](int a) { return a == 1; });
                auto [is_zero, witness] = class_is_zero(cls);
                bool ok = integral == affine && integral == (all_one ? Coeff(1) : Coeff(0)) &&
                          is_zero == !all_one && (!is_zero || witness.has_value());
                if (is_zero && witness && coboundary(*witness) != cls) ok = false;
                if (!ok) {
                    detail = "alpha case failed at r=" + std::to_string(r);
                    return false;
                }
                return true;
            }
            for (int a = 1; a <= 3; ++a) {
                alpha[static_cast<std::size_t>(pos)] = a;
                if (!walk(pos + 1)) return false;
            }
            return true;
        };
        if (!walk(0)) return false;
    }
    return true;
}

bool crit_cli(std::string& detail) {
    if (g_cli_path.empty()) {
        detail = "no CLI path given";
        return false;
    }
    // canonical job serialization is a fixed point (byte-identical round trip)
    Json job;
    job["ring"] = Json{{"field", "QQ"}, {"base", Json::array()}, {"fiber", Json::array({"x", "y"})}};
    job["queries"] = Json::array({Json{{"cmd", "residue"}, {"form", "d(x)/\\d(y)"}, {"denoms", Json::array({"x", "y"})}},
                                  Json{{"cmd", "verify"}, {"rule", "R6"}, {"trials", 25}, {"seed", 7}}});
    std::string dump1 = job.dump();
    std::string dump2 = Json::parse(dump1).dump();
    if (dump1 != dump2) {
        detail = "job serialization is not a fixed point";
        return false;
    }
    const std::string job_path = "acceptance_job.json";
    {
        std::ofstream out(job_path);
        out << dump1;
    }
    CmdResult run1 = run_cmd(g_cli_path + " --job " + job_path + " --output json");
    CmdResult run2 = run_cmd(g_cli_path + " --job " + job_path + " --output json");
    std::remove(job_path.c_str());
    if (run1.exit_code != 0 || run1.out != run2.out) {
        detail = "job run not byte-identical or nonzero exit (" + std::to_string(run1.exit_code) + ")";
        return false;
    }
    std::istringstream lines(run1.out);
    std::string line1, line2;
    std::getline(lines, line1);
    std::getline(lines, line2);
    Json rec1 = Json::parse(line1), rec2 = Json::parse(line2);
    if (rec1.at("value") != "1" || rec2.at("value").at("failed") != 0) {
        detail = "documented query values wrong: " + line1;
        return false;
    }

    // documented single queries and exit codes
    CmdResult q1 = run_cmd(g_cli_path + " --ring 'QQ[x,y]' residue --form 'd(x)/\\d(y)' --denoms 'x,y'");
    if (q1.exit_code != 0 || q1.out != "1\n") {
        detail = "query 1 gave exit " + std::to_string(q1.exit_code) + " output '" + q1.out + "'";
        return false;
    }
    CmdResult q2 = run_cmd(g_cli_path + " --ring 'QQ[T]' residue --form 'd(T)' --denoms 'T^2-1'");
    if (q2.exit_code != 0 || q2.out != "0\n") {
        detail = "query 2 gave '" + q2.out + "'";
        return false;
    }
    CmdResult q3 = run_cmd(g_cli_path + " --ring 'QQ[x,y]' --trials 25 --seed 7 --output json verify --rule R6");
    if (q3.exit_code != 0 || Json::parse(q3.out).at("value").at("failed") != 0) {
        detail = "verify query failed";
        return false;
    }
    CmdResult bad = run_cmd(g_cli_path + " --ring 'QQ[x,y]' residue --form 'd(x)/\\d(y)' --denoms 'x*y,x'");
    if (bad.exit_code != 1) {
        detail = "computation failure should exit 1, got " + std::to_string(bad.exit_code);
        return false;
    }
    CmdResult usage = run_cmd(g_cli_path + " --ring 'ZZ[x]' residue --form 'd(x)' --denoms 'x'");
    if (usage.exit_code != 2) {
        detail = "usage error should exit 2, got " + std::to_string(usage.exit_code);
        return false;
    }
    return true;
}

struct Criterion {
    int id;
    const char* name;
    double limit_ms;
    std::function<bool(std::string&)> run;
};

} // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_cli_path = argv[1];

    std::vector<Criterion> criteria = {
        {1, "base residues Res[dx; x] = 1 for n <= 3", 100.0, crit_base_residues},
        {2, "(R7) exhaustive monomial denominators", 5000.0, crit_r7},
        {3, "(R6) residue equals trace on 100 instances", 120000.0, crit_r6},
        {4, "(R1) transformation law and alternation, 100 instances", 120000.0, crit_r1},
        {5, "Tate suite: tr = lambda(m(Delta-bar) . ), 50 instances", 120000.0, crit_tate},
        {6, "Jacobian identity on 50 instances", 60000.0, crit_jacobian},
        {7, "(R9) exterior differentiation, 50 fraction instances", 60000.0, crit_r9},
        {8, "(R4) iterated residue equals wedge residue, 25 towers", 120000.0, crit_r4},
        {9, "(R10) Kunz-Lipman: worked family and 25 presentations", 120000.0, crit_r10_kunz},
        {10, "(R5) specialization commutes, 25 relative instances", 60000.0, crit_r5},
        {11, "(R8) vanishing and nondegenerate pairing, 25 + 25", 60000.0, crit_r8},
        {12, "projective dims and the local-to-global diagram", 60000.0, crit_projective},
        {13, "CLI round trip, documented queries, exit codes", 60000.0, crit_cli},
    };

    int failures = 0;
    for (auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        if (ms > c.limit_ms) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + std::string("over budget");
        }
        std::printf("%s %2d  %-58s %9.1f ms / %8.0f ms%s%s\n", ok ? "PASS" : "FAIL", c.id, c.name, ms, c.limit_ms,
                    detail.empty() ? "" : "  -- ", detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    if (failures) std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    else std::printf("all %zu criteria passed\n", criteria.size());
    return failures == 0 ? 0 : 1;
}
