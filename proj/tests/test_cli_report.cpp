#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "bpl/model.hpp"
#include "bpl/report.hpp"

using namespace bpl;

TEST_CASE("reports carry the envelope fields") {
    nlohmann::json cfg = {{"lambda", 1000.0}};
    nlohmann::json res = {{"ok", true}};
    nlohmann::json r = make_report("solve", cfg, res, 42);
    CHECK(r["format_version"] == kReportFormatVersion);
    CHECK(r["command"] == "solve");
    CHECK(r["seed"] == 42);
    CHECK(r["config"]["lambda"] == 1000.0);
    CHECK(r["results"]["ok"] == true);
    CHECK(r.contains("meta"));
}

TEST_CASE("report comparison tolerates numeric noise and ignores meta") {
    nlohmann::json a = make_report("x", {}, {{"v", 1.0}, {"arr", {1.0, 2.0}}}, 1);
    nlohmann::json b = a;
    CHECK(compare_reports(a, b, 0.0).empty());

    b["results"]["v"] = 1.0 + 1e-9;
    CHECK(compare_reports(a, b, 1e-8).empty());
    CHECK(!compare_reports(a, b, 1e-12).empty());

    // relative scaling: big values get proportionally more slack
    nlohmann::json c = a, d = a;
    c["results"]["v"] = 1e12;
    d["results"]["v"] = 1e12 * (1.0 + 1e-9);
    CHECK(compare_reports(c, d, 1e-8).empty());

    // meta differences never count
    b = a;
    b["meta"]["wall_ms"] = 99999;
    CHECK(compare_reports(a, b, 0.0).empty());

    // shape mismatches are reported with a path
    b = a;
    b["results"]["arr"] = {1.0, 2.0, 3.0};
    auto diffs = compare_reports(a, b, 1e-6);
    REQUIRE(!diffs.empty());
    CHECK(diffs[0].path.find("arr") != std::string::npos);

    // missing keys on either side
    b = a;
    b["results"].erase("v");
    CHECK(!compare_reports(a, b, 1e-6).empty());
    CHECK(!compare_reports(b, a, 1e-6).empty());
}

TEST_CASE("flat toml parsing") {
    const std::string text =
        "# experiment description\n"
        "lambda = 1000.0   # trailing comment\n"
        "K_trunc = 8\n"
        "reversible = true\n"
        "name = \"run # one\"\n"
        "lambdas = [300.0, 1000.0, 3000.0]\n"
        "wave_vectors = [[1, 0], [0, 1]]\n"
        "\n"
        "[sweep]\n"
        "n_omega = 3\n";
    nlohmann::json j = toml_lite_parse(text);
    CHECK(j["lambda"] == 1000.0);
    CHECK(j["K_trunc"] == 8);
    CHECK(j["K_trunc"].is_number_integer());
    CHECK(j["reversible"] == true);
    CHECK(j["name"] == "run # one");
    CHECK(j["lambdas"] == nlohmann::json({300.0, 1000.0, 3000.0}));
    CHECK(j["wave_vectors"] == nlohmann::json({{1, 0}, {0, 1}}));
    CHECK(j["sweep.n_omega"] == 3);

    CHECK_THROWS_AS(toml_lite_parse("lambda 1000"), std::runtime_error);
    CHECK_THROWS_AS(toml_lite_parse("x = [1, 2"), std::runtime_error);
    CHECK_THROWS_AS(toml_lite_parse("x = 1 junk"), std::runtime_error);
}

TEST_CASE("config files round trip through both formats") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path();

    ProblemConfig cfg;
    cfg.K_trunc = 4;
    cfg.lambda = 500.0;
    nlohmann::json j = cfg.to_json();
    j.erase("derived");

    fs::path pj = dir / "bpl_cfg_test.json";
    write_json_file(pj.string(), j);
    ProblemConfig back = ProblemConfig::from_json(read_config_file(pj.string()));
    CHECK(back.lambda == 500.0);
    CHECK(back.K_trunc == 4);

    fs::path pt = dir / "bpl_cfg_test.toml";
    {
        std::ofstream out(pt);
        out << "lambda = 500.0\nK_trunc = 4\nalpha = 1.5\n";
    }
    nlohmann::json jt = read_config_file(pt.string());
    CHECK(jt["lambda"] == 500.0);
    CHECK(jt["K_trunc"] == 4);

    fs::remove(pj);
    fs::remove(pt);

    CHECK_THROWS_AS(read_config_file((dir / "bpl_missing.json").string()), std::runtime_error);
    CHECK_THROWS_AS(read_config_file("config.yaml"), std::runtime_error);
}
