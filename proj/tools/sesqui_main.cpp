// Command-line front end; talks to the library exclusively through the C
// API in sesqui.h.  Exit codes: 0 success/PASS, 2 attack ran but failed
// against sealed truth, 3 malformed instance, 4 budget exceeded.

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "sesqui.h"

namespace {

using nlohmann::json;

struct CtxDeleter {
    void operator()(sesqui_ctx *c) const { sesqui_ctx_free(c); }
};
using Ctx = std::unique_ptr<sesqui_ctx, CtxDeleter>;

struct StrDeleter {
    void operator()(char *s) const { sesqui_string_free(s); }
};
using CStr = std::unique_ptr<char, StrDeleter>;

int map_exit(int code) {
    switch (code) {
    case SESQUI_OK:
        return 0;
    case SESQUI_E_BAD_INSTANCE:
    case SESQUI_E_PARSE:
        return 3;
    case SESQUI_E_BUDGET_EXCEEDED:
        return 4;
    default:
        return 1;
    }
}

int report_error(const Ctx &ctx) {
    std::cerr << "error " << sesqui_last_error_code(ctx.get()) << ": "
              << sesqui_last_error_message(ctx.get()) << "\n";
    return map_exit(sesqui_last_error_code(ctx.get()));
}

std::string read_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw CLI::ValidationError("--in", "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void maybe_write(const std::string &path, const std::string &content) {
    if (path.empty())
        return;
    std::ofstream out(path);
    out << content << "\n";
}

void print_matrix(const json &mat, const char *title) {
    std::cout << title << "\n";
    for (const auto &row : mat) {
        std::cout << "  ";
        for (const auto &v : row) {
            if (v.is_string())
                std::cout << v.get<std::string>() << " ";
            else
                std::cout << v << " ";
        }
        std::cout << "\n";
    }
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"sesquilinear pairings on oriented curves: worked examples, "
                 "instance generation and attacks"};
    app.require_subcommand(1);

    std::string name = "f541";
    int wr = 3;
    std::string json_out;
    auto *verify = app.add_subcommand("verify-example", "run the golden checks for an example");
    verify->add_option("--name", name, "f541 | f101 | wouter")->required();
    verify->add_option("--r", wr, "wouter family exponent");
    verify->add_option("--json", json_out, "write the structured report to a file");

    std::string family, variant = "norm", out_path;
    std::string p_str = "0", m_str = "0", degree_str = "2";
    uint64_t seed = 0;
    int gr = 3;
    auto *gen = app.add_subcommand("gen", "generate an attack instance");
    gen->add_option("--family", family, "f541 | f101 | wouter | gaussian | custom")->required();
    gen->add_option("--p", p_str, "prime (gaussian/custom families)");
    gen->add_option("--m", m_str, "torsion level");
    gen->add_option("--r", gr, "wouter family exponent");
    gen->add_option("--degree", degree_str, "hidden isogeny degree");
    gen->add_option("--variant", variant, "norm | sidh1 | diagonal | ramified | two-orient");
    gen->add_option("--seed", seed, "deterministic seed");
    gen->add_option("--out", out_path, "output instance file")->required();

    std::string in_path;
    bool reveal = false;
    std::string attack_json;
    auto *attack = app.add_subcommand("attack", "run the attack an instance calls for");
    attack->add_option("--in", in_path, "instance file")->required();
    attack->add_flag("--reveal", reveal, "compare against the sealed block when present");
    attack->add_option("--json", attack_json, "write the structured report to a file");

    std::string pair_in, pair_op, pspec, qspec, pair_json;
    auto *pair = app.add_subcommand("pair", "one-off pairing evaluation on an instance");
    pair->add_option("--in", pair_in, "instance file")->required();
    pair->add_option("--op", pair_op, "tate | sesqui | tprime")->required();
    pair->add_option("--P", pspec, "first point as a,b over the stored basis")->required();
    pair->add_option("--Q", qspec, "second point as a,b")->required();
    pair->add_option("--json", pair_json, "write the structured report to a file");

    CLI11_PARSE(app, argc, argv);

    Ctx ctx(sesqui_ctx_new());
    if (!ctx) {
        std::cerr << "error: out of memory\n";
        return 1;
    }

    if (verify->parsed()) {
        char *raw = nullptr;
        int rc = sesqui_verify_example(ctx.get(), name.c_str(), wr, &raw);
        CStr report(raw);
        if (!report)
            return report_error(ctx);
        json rep = json::parse(report.get());
        if (name == "f541" && rep.contains("left")) {
            print_matrix(rep["left"], "self-pairing logs, first coordinate:");
            print_matrix(rep["right"], "self-pairing logs, second coordinate:");
            std::cout << "unit exponent u = " << rep["unit"].get<int>() << "\n";
        }
        for (auto &[key, val] : rep.items()) {
            if (val.is_boolean())
                std::cout << key << ": " << (val.get<bool>() ? "ok" : "MISMATCH") << "\n";
        }
        maybe_write(json_out, rep.dump(2));
        std::cout << (rc == SESQUI_OK ? "PASS" : "FAIL") << "\n";
        return rc == SESQUI_OK ? 0 : 2;
    }

    if (gen->parsed()) {
        json params{{"family", family}, {"variant", variant}, {"seed", seed},
                    {"degree", degree_str}, {"r", gr}};
        if (p_str != "0")
            params["p"] = p_str;
        if (m_str != "0")
            params["m"] = m_str;
        char *raw = nullptr;
        if (sesqui_gen_instance(ctx.get(), params.dump().c_str(), &raw) != SESQUI_OK)
            return report_error(ctx);
        CStr instance(raw);
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "error: cannot write " << out_path << "\n";
            return 1;
        }
        out << instance.get() << "\n";
        std::cout << "wrote " << out_path << "\n";
        return 0;
    }

    if (attack->parsed()) {
        std::string doc = read_file(in_path);
        char *raw = nullptr;
        if (sesqui_attack(ctx.get(), doc.c_str(), reveal ? 1 : 0, &raw) != SESQUI_OK)
            return report_error(ctx);
        CStr report(raw);
        json rep = json::parse(report.get());
        std::cout << "variant: " << rep["variant"].get<std::string>() << "\n";
        for (const char *key : {"n_lambda", "lambda_sq", "accepted", "m_prime"})
            if (rep.contains(key) && rep[key].is_string())
                std::cout << key << ": " << rep[key].get<std::string>() << "\n";
        if (rep.contains("candidate_count"))
            std::cout << "candidates: " << rep["candidate_count"] << "\n";
        if (rep.contains("matrix"))
            print_matrix(rep["matrix"], "recovered torsion action:");
        maybe_write(attack_json, rep.dump(2));
        if (rep.contains("pass")) {
            bool ok = rep["pass"].get<bool>();
            std::cout << (ok ? "PASS" : "FAIL") << "\n";
            return ok ? 0 : 2;
        }
        std::cout << "done (no sealed truth to compare)\n";
        return 0;
    }

    if (pair->parsed()) {
        std::string doc = read_file(pair_in);
        char *raw = nullptr;
        if (sesqui_pair_eval(ctx.get(), doc.c_str(), pair_op.c_str(), pspec.c_str(),
                             qspec.c_str(), &raw) != SESQUI_OK)
            return report_error(ctx);
        CStr report(raw);
        std::cout << report.get() << "\n";
        maybe_write(pair_json, report.get());
        return 0;
    }

    return 1;
}
