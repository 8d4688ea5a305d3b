#include "sesqui.h"

#include <cstdlib>
#include <cstring>

#include "sesqui/golden.hpp"

using namespace sesqui;

struct sesqui_ctx {
    int code = 0;
    std::string message;
};

namespace {

char *dup_string(const std::string &s) {
    char *out = static_cast<char *>(std::malloc(s.size() + 1));
    if (out)
        std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void clear_error(sesqui_ctx *ctx) {
    ctx->code = 0;
    ctx->message.clear();
}

template <typename Fn> int guarded(sesqui_ctx *ctx, Fn &&fn) {
    if (!ctx)
        return SESQUI_E_INTERNAL;
    clear_error(ctx);
    try {
        return fn();
    } catch (const Error &e) {
        ctx->code = static_cast<int>(e.code());
        ctx->message = e.what();
        return ctx->code;
    } catch (const std::exception &e) {
        ctx->code = SESQUI_E_INTERNAL;
        ctx->message = e.what();
        return ctx->code;
    }
}

json attack_report(const AttackInstance &inst, bool reveal) {
    Rng rng(0xa77acc);
    const PublicInstance &pub = inst.pub;
    json rep{{"variant", pub.variant},
             {"m", int_to_json(pub.m)},
             {"degree", int_to_json(pub.degree)}};
    bool can_reveal = reveal && inst.sealed.has_value();

    auto sealed_image = [&](const Point &X) {
        auto [u, v] = coords(pub.orE, X, rng);
        const Mat2 &M = inst.sealed->matrix;
        Int a = mod_reduce(M.a * u + M.b * v, pub.m);
        Int b = mod_reduce(M.c * u + M.d * v, pub.m);
        return scalar_mul(a, pub.orEp.P) + scalar_mul(b, pub.orEp.Q);
    };

    if (pub.variant == "norm") {
        Int nval = recover_norm_lambda(pub, rng);
        auto cands = candidate_images(pub, nval, rng);
        rep["n_lambda"] = int_to_json(nval);
        rep["candidate_count"] = cands.size();
        json list = json::array();
        for (const auto &c : cands)
            list.push_back(oelem_to_json(c.mu));
        rep["candidates"] = list;
        if (can_reveal) {
            Int want = mod_reduce(oe_norm(*inst.sealed->lambda, pub.orE.ord), pub.m);
            Point truth = sealed_image(*pub.genE);
            bool member = false;
            for (const auto &c : cands)
                if (c.image == truth)
                    member = true;
            rep["pass"] = (nval == want) && member;
        }
    } else if (pub.variant == "sidh1") {
        Sidh1Report r = attack_sidh1(pub, rng);
        rep["matrix"] = mat_to_json(r.matrix);
        rep["oracle_accepted"] = r.oracle.chain.has_value();
        if (!r.oracle.chain)
            rep["oracle_reject"] = r.oracle.reject_reason;
        if (can_reveal)
            rep["pass"] = r.matrix == inst.sealed->matrix.mod(pub.m) && r.oracle.chain &&
                          oracle_kernel_matches(r.oracle, inst);
    } else if (pub.variant == "diagonal") {
        DiagonalReport r = attack_diagonal(pub, rng);
        rep["lambda_sq"] = int_to_json(r.lambda_sq);
        json tried = json::array();
        for (const Int &t : r.tried)
            tried.push_back(int_to_json(t));
        rep["tried"] = tried;
        rep["accepted"] = int_to_json(r.accepted);
        rep["matrix"] = mat_to_json(r.matrix);
        if (can_reveal)
            rep["pass"] = oracle_kernel_matches(r.oracle, inst) &&
                          matrix_matches_up_to_automorphism(r.matrix, inst.sealed->matrix,
                                                            pub.orEp, rng);
    } else if (pub.variant == "ramified") {
        RamifiedReport r = attack_ramified(pub, rng);
        rep["n_lambda"] = int_to_json(r.n_lambda);
        rep["m_prime"] = int_to_json(r.tau.m_prime);
        rep["tau_prime"] = oelem_to_json(r.tau.tau_prime);
        json sc = json::array();
        for (const Int &a : r.sqrt_cands)
            sc.push_back(int_to_json(a));
        rep["sqrt_candidates"] = sc;
        rep["Q"] = point_to_json(r.Q);
        rep["candidate_count"] = r.candidates.size();
        if (can_reveal) {
            Point truth = sealed_image(r.Q);
            bool member = false;
            for (const Point &c : r.candidates)
                if (c == truth)
                    member = true;
            rep["pass"] = member;
        }
    } else if (pub.variant == "two-orient") {
        TwoOrientReport r = attack_two_orient(pub, rng);
        rep["n_lambda"] = int_to_json(r.n_lambda);
        rep["lambda_sq"] = oelem_to_json(r.lambda_sq);
        rep["lambda"] = oelem_to_json(r.accepted);
        rep["matrix"] = mat_to_json(r.matrix);
        if (can_reveal)
            rep["pass"] = oracle_kernel_matches(r.oracle, inst) &&
                          matrix_matches_up_to_automorphism(r.matrix, inst.sealed->matrix,
                                                            pub.orEp, rng);
    } else {
        fail(errc::bad_instance, "unknown variant " + pub.variant);
    }
    return rep;
}

} // namespace

extern "C" {

sesqui_ctx *sesqui_ctx_new(void) { return new (std::nothrow) sesqui_ctx; }

void sesqui_ctx_free(sesqui_ctx *ctx) { delete ctx; }

int sesqui_last_error_code(const sesqui_ctx *ctx) { return ctx ? ctx->code : SESQUI_E_INTERNAL; }

const char *sesqui_last_error_message(const sesqui_ctx *ctx) {
    return ctx ? ctx->message.c_str() : "null context";
}

void sesqui_string_free(char *s) { std::free(s); }

int sesqui_verify_example(sesqui_ctx *ctx, const char *name, int r, char **report_json) {
    return guarded(ctx, [&]() -> int {
        if (!name || !report_json)
            fail(errc::bad_instance, "null argument");
        GoldenReport rep = run_golden(name, r);
        json out = rep.detail;
        out["name"] = name;
        out["pass"] = rep.pass;
        *report_json = dup_string(out.dump(2));
        if (!rep.pass) {
            ctx->code = SESQUI_E_VERIFY_FAILED;
            ctx->message = "golden checks failed for " + std::string(name);
            return SESQUI_E_VERIFY_FAILED;
        }
        return SESQUI_OK;
    });
}

int sesqui_gen_instance(sesqui_ctx *ctx, const char *params_json, char **instance_json) {
    return guarded(ctx, [&]() -> int {
        if (!params_json || !instance_json)
            fail(errc::bad_instance, "null argument");
        json params = json::parse(params_json, nullptr, false);
        if (params.is_discarded())
            fail(errc::parse_error, "params are not valid JSON");
        GenSpec spec;
        spec.family = params.value("family", "");
        spec.variant = params.value("variant", "norm");
        spec.seed = params.value("seed", 0ull);
        if (params.contains("degree"))
            spec.degree = int_from_json(params.at("degree"));
        if (params.contains("p"))
            spec.p = int_from_json(params.at("p"));
        if (params.contains("m"))
            spec.m = int_from_json(params.at("m"));
        if (params.contains("r"))
            spec.r = params.at("r").get<int>();
        AttackInstance inst = gen_instance(spec);
        *instance_json = dup_string(instance_to_json(inst).dump(2));
        return SESQUI_OK;
    });
}

int sesqui_attack(sesqui_ctx *ctx, const char *instance_json, int reveal, char **report_json) {
    return guarded(ctx, [&]() -> int {
        if (!instance_json || !report_json)
            fail(errc::bad_instance, "null argument");
        json doc = json::parse(instance_json, nullptr, false);
        if (doc.is_discarded())
            fail(errc::parse_error, "instance is not valid JSON");
        AttackInstance inst = instance_from_json(doc);
        json rep = attack_report(inst, reveal != 0);
        *report_json = dup_string(rep.dump(2));
        return SESQUI_OK;
    });
}

int sesqui_pair_eval(sesqui_ctx *ctx, const char *instance_json, const char *op,
                     const char *p_spec, const char *q_spec, char **report_json) {
    return guarded(ctx, [&]() -> int {
        if (!instance_json || !op || !p_spec || !q_spec || !report_json)
            fail(errc::bad_instance, "null argument");
        json doc = json::parse(instance_json, nullptr, false);
        if (doc.is_discarded())
            fail(errc::parse_error, "instance is not valid JSON");
        AttackInstance inst = instance_from_json(doc);
        const Orientation &o = inst.pub.orE;

        auto parse_combo = [&](const std::string &s) {
            auto comma = s.find(',');
            if (comma == std::string::npos)
                fail(errc::parse_error, "point spec must be 'a,b'");
            Int a(s.substr(0, comma)), b(s.substr(comma + 1));
            return scalar_mul(a, o.P) + scalar_mul(b, o.Q);
        };
        Point P = parse_combo(p_spec);
        Point Q = parse_combo(q_spec);
        Rng rng(0x9a13);
        json rep{{"op", op}, {"m", int_to_json(o.m)}};
        std::string opname = op;
        if (opname == "tate") {
            FieldElement t = tate_reduced(P, Q, o.m, rng);
            FieldElement g = mu_generator(inst.pub.E->f, o.m);
            rep["g"] = felem_to_json(g);
            rep["log"] = int_to_json(dlog_mu(g, t, o.m));
        } else if (opname == "sesqui") {
            rep["value"] = reduced_value_to_json(sesqui_T(P, Q, o.m, o, rng));
        } else if (opname == "tprime") {
            rep["value"] = reduced_value_to_json(tprime(P, Q, o.m, o, rng));
        } else {
            fail(errc::bad_instance, "unknown pairing op " + opname);
        }
        *report_json = dup_string(rep.dump(2));
        return SESQUI_OK;
    });
}

} // extern "C"
