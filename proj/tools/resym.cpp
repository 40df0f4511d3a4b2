// Batch front end: single queries from flags, or a JSON job file with a
// shared ring declaration. One output record per query, in input order.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "resym/cli.hpp"

namespace {

using resym::cli::Json;

// timings are opt-in: default output is byte-identical across runs
int run_records(const std::vector<Json>& queries, const resym::cli::RingSpec& ring, const std::string& mode,
                bool timings) {
    bool all_ok = true;
    for (const auto& q : queries) {
        auto t0 = std::chrono::steady_clock::now();
        Json rec = resym::cli::execute(q, ring);
        if (timings)
            rec["ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        std::cout << resym::cli::format_output(rec, mode) << "\n";
        all_ok = all_ok && resym::cli::record_ok(rec);
    }
    return all_ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact residue symbols, traces, and local cohomology"};
    app.require_subcommand(0, 1);

    std::string ring_text = "QQ[x,y]";
    std::optional<std::string> field_text;
    std::string job_path;
    std::string output_mode = "text";
    std::uint64_t seed = 0;
    std::uint64_t trials = 25;
    bool timings = false;
    app.add_option("--ring", ring_text, "ring spec, e.g. QQ[x,y] or QQ[u][T]");
    app.add_option("--field", field_text, "coefficient field override: QQ or Fp:<p>");
    app.add_option("--job", job_path, "JSON job file with a shared ring and a query list");
    app.add_option("--output", output_mode, "output mode: text or json")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--seed", seed, "seed for verify queries");
    app.add_option("--trials", trials, "trial count for verify queries");
    app.add_flag("--timings", timings, "append wall-clock timings to records");

    std::string form_text, of_text, eta_text, rule, frac_op = "residue", cech_op = "dim", num_text;
    std::vector<std::string> denom_texts, gen_texts, relation_texts;
    std::vector<int> exponents, alpha;
    int cech_r = 1, cech_d = 0, cech_q = 0;

    auto add_denoms = [&](CLI::App* cmd) {
        cmd->add_option("--denoms", denom_texts, "comma-separated denominators (order matters)")
            ->required()
            ->delimiter(',');
    };

    CLI::App* c_res = app.add_subcommand("residue", "absolute residue symbol");
    c_res->add_option("--form", form_text, "top differential form")->required();
    add_denoms(c_res);

    CLI::App* c_rel = app.add_subcommand("residue-rel", "relative residue symbol over the base block");
    c_rel->add_option("--form", form_text, "top fiber form")->required();
    add_denoms(c_rel);

    CLI::App* c_tr = app.add_subcommand("trace", "canonical trace on the quotient algebra");
    c_tr->add_option("--of", of_text, "element to trace")->required();
    add_denoms(c_tr);

    CLI::App* c_tl = app.add_subcommand("tate-lambda", "Tate trace from the Bezoutian");
    c_tl->add_option("--of", of_text, "element to evaluate")->required();
    add_denoms(c_tl);

    CLI::App* c_klt = app.add_subcommand("klt", "trace of forms along a finite flat presentation");
    c_klt->add_option("--relations", relation_texts, "presentation relations")->required()->delimiter(',');
    c_klt->add_option("--eta", eta_text, "lift of the form to trace")->required();

    CLI::App* c_gb = app.add_subcommand("groebner", "reduced Groebner basis");
    c_gb->add_option("--gens", gen_texts, "ideal generators")->required()->delimiter(',');

    CLI::App* c_q = app.add_subcommand("quotient", "zero-dimensional quotient algebra");
    c_q->add_option("--gens", gen_texts, "ideal generators")->required()->delimiter(',');

    CLI::App* c_fr = app.add_subcommand("fraction", "generalized-fraction operations");
    c_fr->add_option("--op", frac_op, "residue | zero | d");
    c_fr->add_option("--num", num_text, "numerator form")->required();
    add_denoms(c_fr);
    c_fr->add_option("--exponents", exponents, "denominator exponents")->delimiter(',');

    CLI::App* c_cech = app.add_subcommand("cech", "Cech cohomology on projective space");
    c_cech->add_option("--op", cech_op, "dim | integral | zero");
    c_cech->add_option("--r", cech_r, "projective dimension")->required();
    c_cech->add_option("--d", cech_d, "twist (dim only)");
    c_cech->add_option("--q", cech_q, "cohomology degree (dim only)");
    c_cech->add_option("--alpha", alpha, "fraction exponents (integral/zero)")->delimiter(',');

    CLI::App* c_ver = app.add_subcommand("verify", "randomized conformance suite");
    c_ver->add_option("--rule", rule, "R1..R10 | jacobian | tate | pairing | sum | cech")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (!job_path.empty()) {
            std::ifstream in(job_path);
            if (!in) {
                std::cerr << "cannot open job file: " << job_path << "\n";
                return 2;
            }
            Json job = Json::parse(in);
            resym::cli::RingSpec ring;
            if (job.contains("ring")) {
                const Json& r = job.at("ring");
                ring.field = resym::cli::parse_field(r.value("field", "QQ"));
                for (const auto& v : r.value("base", Json::array())) ring.base.push_back(v.get<std::string>());
                for (const auto& v : r.at("fiber")) ring.fiber.push_back(v.get<std::string>());
            } else {
                ring = resym::cli::parse_ring(ring_text, field_text);
            }
            std::vector<Json> queries;
            for (const auto& q : job.at("queries")) queries.push_back(q);
            return run_records(queries, ring, output_mode, timings);
        }

        resym::cli::RingSpec ring = resym::cli::parse_ring(ring_text, field_text);
        Json q;
        if (c_res->parsed() || c_rel->parsed()) {
            q["cmd"] = c_rel->parsed() ? "residue-rel" : "residue";
            q["form"] = form_text;
            q["denoms"] = denom_texts;
        } else if (c_tr->parsed() || c_tl->parsed()) {
            q["cmd"] = c_tl->parsed() ? "tate-lambda" : "trace";
            q["of"] = of_text;
            q["denoms"] = denom_texts;
        } else if (c_klt->parsed()) {
            q["cmd"] = "klt";
            q["relations"] = relation_texts;
            q["eta"] = eta_text;
        } else if (c_gb->parsed() || c_q->parsed()) {
            q["cmd"] = c_q->parsed() ? "quotient" : "groebner";
            q["gens"] = gen_texts;
        } else if (c_fr->parsed()) {
            q["cmd"] = "fraction";
            q["op"] = frac_op;
            q["num"] = num_text;
            q["denoms"] = denom_texts;
            if (!exponents.empty()) q["exponents"] = exponents;
        } else if (c_cech->parsed()) {
            q["cmd"] = "cech";
            q["op"] = cech_op;
            q["r"] = cech_r;
            if (cech_op == "dim") {
                q["d"] = cech_d;
                q["q"] = cech_q;
            } else {
                q["alpha"] = alpha;
            }
        } else if (c_ver->parsed()) {
            q["cmd"] = "verify";
            q["rule"] = rule;
            q["trials"] = trials;
            q["seed"] = seed;
        } else {
            std::cerr << app.help();
            return 2;
        }
        return run_records({q}, ring, output_mode, timings);
    } catch (const resym::Error& e) {
        std::cerr << "error[" << e.code_name() << "] " << e.what() << "\n";
        return 2;
    } catch (const Json::exception& e) {
        std::cerr << "job file error: " << e.what() << "\n";
        return 2;
    }
}
