#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ramify/cli.hpp"
#include "ramify/report.hpp"

using namespace ramify;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = std::string("/tmp/ramify_test_") + name;
    std::ofstream f(path, std::ios::binary);
    f << content;
    return path;
}

std::string emit_entry(const std::string& name) {
    std::ostringstream os, es;
    REQUIRE(cmd_catalog(false, name, "", os, es) == 0);
    return os.str();
}

} // namespace

TEST_CASE("catalog listing has all shipped entries") {
    std::ostringstream os, es;
    CHECK(cmd_catalog(true, "", "", os, es) == 0);
    std::string text = os.str();
    int lines = 0;
    for (char c : text)
        if (c == '\n') ++lines;
    CHECK(lines >= 8);
    CHECK(text.find("e4_case3") != std::string::npos);
}

TEST_CASE("emit / report round trip with exit code 0") {
    for (auto& entry : catalog_list()) {
        std::string spec_text = emit_entry(entry.name);
        std::string path = write_temp(entry.name + ".json", spec_text);
        std::ostringstream os, es;
        ReportOptions opt;
        int rc = cmd_report(path, opt, os, es);
        INFO(entry.name, " stderr: ", es.str());
        CHECK(rc == 0);
        Json rep = Json::parse(os.str());
        CHECK(rep.at("schema") == "ramify/1");
        CHECK(rep.at("checks").at("well_ramified") == true);
    }
}

TEST_CASE("flagship report carries the expected headline values") {
    std::string path = write_temp("e4.json", emit_entry("e4_case3"));
    std::ostringstream os, es;
    ReportOptions opt;
    REQUIRE(cmd_report(path, opt, os, es) == 0);
    Json rep = Json::parse(os.str());
    CHECK(rep.at("case") == "III");
    CHECK(rep.at("conductors").at("ksw") == 5);
    CHECK(rep.at("conductors").at("sw") == rat_json(Rat(6)));
    CHECK(rep.at("depth").at("d_K") == rat_json(make_rat(7, 2)));
    CHECK(rep.at("different").at("v_L") == 8);
}

TEST_CASE("reports are byte-identical across runs, emit round-trips") {
    std::string spec1 = emit_entry("e4_case3");
    std::string spec2 = emit_entry("e4_case3");
    CHECK(spec1 == spec2);
    std::string path = write_temp("det.json", spec1);
    std::ostringstream o1, o2, es;
    ReportOptions opt;
    REQUIRE(cmd_report(path, opt, o1, es) == 0);
    REQUIRE(cmd_report(path, opt, o2, es) == 0);
    CHECK(o1.str() == o2.str());
    // emit -> parse -> emit is byte-identical
    ExtensionSpec spec = spec_from_json(Json::parse(spec1), Precision{});
    CHECK(spec_to_json(spec).dump(2) + "\n" == spec1);
}

TEST_CASE("malformed inputs exit with code 1 and a diagnostic") {
    std::ostringstream os, es;
    ReportOptions opt;
    CHECK(cmd_report(write_temp("garbage.json", "{ not json"), opt, os, es) == 1);
    CHECK(es.str().find("JSON") != std::string::npos);

    // structurally valid JSON, but the action polynomial is not a root
    Json j = Json::parse(emit_entry("e4_case3"));
    j["action"] = Json{{"explicit", Json{{"gen_images", Json::array({Json{{"0", 1}, {"1", 1}}})}}}};
    std::ostringstream os2, es2;
    CHECK(cmd_report(write_temp("notroot.json", j.dump()), opt, os2, es2) == 1);
    CHECK(es2.str().find("root") != std::string::npos);

    // wrong schema
    Json j2 = Json::parse(emit_entry("e1_as_p3_n2"));
    j2["schema"] = "other/9";
    std::ostringstream os3, es3;
    CHECK(cmd_report(write_temp("schema.json", j2.dump()), opt, os3, es3) == 1);
}

TEST_CASE("starved precision exits with code 2, never a different value") {
    std::string path = write_temp("e4b.json", emit_entry("e4_case3"));
    std::ostringstream os, es;
    ReportOptions opt;
    opt.precision = 2;
    int rc = cmd_report(path, opt, os, es);
    CHECK(rc == 2);
    CHECK(es.str().find("precision") != std::string::npos);
    CHECK(os.str().empty());
}

TEST_CASE("metamorphic: doubled precision changes no reported invariant") {
    for (auto& entry : catalog_list()) {
        std::string path = write_temp(entry.name + "_m.json", emit_entry(entry.name));
        std::ostringstream o1, o2, es;
        ReportOptions low, high;
        low.precision = 64;
        high.precision = 128;
        REQUIRE(cmd_report(path, low, o1, es) == 0);
        REQUIRE(cmd_report(path, high, o2, es) == 0);
        Json r1 = Json::parse(o1.str());
        Json r2 = Json::parse(o2.str());
        r1.erase("precision");
        r2.erase("precision");
        INFO(entry.name);
        CHECK(r1 == r2);
    }
}

TEST_CASE("check command: suites, exit codes, unknown suite") {
    std::ostringstream os, es;
    CHECK(cmd_check("", true, "borger", 0, os, es) == 0);
    std::ostringstream os2, es2;
    CHECK(cmd_check("", true, "nope", 0, os2, es2) == 1);
    CHECK(es2.str().find("unknown suite") != std::string::npos);
    // single-file check
    std::string path = write_temp("chk.json", emit_entry("e2_ferocious_p3"));
    std::ostringstream os3, es3;
    CHECK(cmd_check(path, false, "theorem1", 0, os3, es3) == 0);
    CHECK(os3.str().find("hilbert") != std::string::npos);
}

TEST_CASE("unknown catalog names exit with code 1") {
    std::ostringstream os, es;
    CHECK(cmd_catalog(false, "nonsense", "", os, es) == 1);
    CHECK(es.str().find("unknown catalog entry") != std::string::npos);
}

TEST_CASE("precision resolution order: flag over environment over default") {
    unsetenv("RAMIFY_PRECISION");
    CHECK(resolve_precision(0).Np == 64);
    setenv("RAMIFY_PRECISION", "96", 1);
    CHECK(resolve_precision(0).Np == 96);
    CHECK(resolve_precision(32).Np == 32);
    setenv("RAMIFY_PRECISION", "junk", 1);
    CHECK_THROWS_AS(resolve_precision(0), ValidationError);
    unsetenv("RAMIFY_PRECISION");
}
