#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <memory>
#include <string>

#include "json.hpp"

#include "sesqui.h"

using nlohmann::json;

namespace {

struct Fixture {
    sesqui_ctx *ctx = sesqui_ctx_new();
    ~Fixture() { sesqui_ctx_free(ctx); }
};

std::string take(char *raw) {
    REQUIRE(raw != nullptr);
    std::string out = raw;
    sesqui_string_free(raw);
    return out;
}

} // namespace

TEST_CASE("verify-example via the C API") {
    Fixture fx;
    char *raw = nullptr;
    CHECK(sesqui_verify_example(fx.ctx, "f541", 0, &raw) == SESQUI_OK);
    json rep = json::parse(take(raw));
    CHECK(rep["pass"].get<bool>());
    CHECK(rep["unit"].get<int>() == 1);

    raw = nullptr;
    CHECK(sesqui_verify_example(fx.ctx, "nope", 0, &raw) == SESQUI_E_BAD_INSTANCE);
    CHECK(raw == nullptr);
    CHECK(sesqui_last_error_code(fx.ctx) == SESQUI_E_BAD_INSTANCE);
    CHECK(std::string(sesqui_last_error_message(fx.ctx)).find("unknown example") !=
          std::string::npos);
}

TEST_CASE("gen + attack round trip via the C API") {
    Fixture fx;
    json params{{"family", "f541"}, {"variant", "norm"}, {"seed", 5},
                {"degree", "2"},    {"m", "5"}};
    char *raw = nullptr;
    REQUIRE(sesqui_gen_instance(fx.ctx, params.dump().c_str(), &raw) == SESQUI_OK);
    std::string instance = take(raw);

    raw = nullptr;
    REQUIRE(sesqui_attack(fx.ctx, instance.c_str(), 1, &raw) == SESQUI_OK);
    json rep = json::parse(take(raw));
    CHECK(rep["variant"] == "norm");
    CHECK(rep["pass"].get<bool>());

    // malformed instance
    raw = nullptr;
    CHECK(sesqui_attack(fx.ctx, "{not json", 1, &raw) == SESQUI_E_PARSE);
    CHECK(sesqui_attack(fx.ctx, "{}", 1, &raw) == SESQUI_E_BAD_INSTANCE);
}

TEST_CASE("pair evaluation via the C API") {
    Fixture fx;
    json params{{"family", "f541"}, {"variant", "norm"}, {"seed", 6}, {"degree", "2"}};
    char *raw = nullptr;
    REQUIRE(sesqui_gen_instance(fx.ctx, params.dump().c_str(), &raw) == SESQUI_OK);
    std::string instance = take(raw);

    raw = nullptr;
    REQUIRE(sesqui_pair_eval(fx.ctx, instance.c_str(), "sesqui", "1,1", "1,1", &raw) == SESQUI_OK);
    json rep = json::parse(take(raw));
    CHECK(rep["value"]["logs"].size() == 2);

    raw = nullptr;
    REQUIRE(sesqui_pair_eval(fx.ctx, instance.c_str(), "tate", "1,0", "0,1", &raw) == SESQUI_OK);
    json trep = json::parse(take(raw));
    CHECK(trep.contains("log"));

    raw = nullptr;
    CHECK(sesqui_pair_eval(fx.ctx, instance.c_str(), "weird", "1,0", "0,1", &raw) ==
          SESQUI_E_BAD_INSTANCE);
    CHECK(sesqui_pair_eval(fx.ctx, instance.c_str(), "tate", "garbage", "0,1", &raw) ==
          SESQUI_E_PARSE);
}

TEST_CASE("gen rejects impossible degrees with the diagnosis") {
    Fixture fx;
    json params{{"family", "f541"}, {"variant", "norm"}, {"seed", 1}, {"degree", "3"}};
    char *raw = nullptr;
    CHECK(sesqui_gen_instance(fx.ctx, params.dump().c_str(), &raw) ==
          SESQUI_E_NO_SPLIT_PRIME_KERNEL);
    CHECK(std::string(sesqui_last_error_message(fx.ctx)).find("inert") != std::string::npos);
}
