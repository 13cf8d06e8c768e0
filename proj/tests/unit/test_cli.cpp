#include <doctest.h>

#include "tscalc/cli.hpp"
#include "tscalc/serialize.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace tscalc;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const char* name) { return std::string(TSCALC_TEST_DATA) + "/" + name; }

Json load(const std::string& path) {
    std::ifstream in(path);
    return Json::parse(in);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("eval integral and derivative") {
    auto r = run({"eval", "integral", "--scale", "[[0,0],[1,1],[2,2],[3,3]]", "--mode", "diamond:0.5", "--fn", "t",
                  "--from", "0", "--to", "3"});
    CHECK(r.code == 0);
    CHECK(r.out == "4.5\n");

    r = run({"eval", "derivative", "--scale", "[[0,0],[1,1],[2,2],[3,3]]", "--fn", "t^2", "--at", "1"});
    CHECK(r.code == 0);
    CHECK(r.out == "3\n");
}

TEST_CASE("eval reports bad input with exit code 2") {
    auto r = run({"eval", "integral", "--scale", "[[0,0],[1,1]]", "--fn", "t +", "--from", "0", "--to", "1"});
    CHECK(r.code == 2);
    CHECK(r.err.find("at position 3") != std::string::npos);

    r = run({"eval", "integral", "--scale", "[[0,0],[1,1]]", "--fn", "x", "--from", "0", "--to", "1"});
    CHECK(r.code == 2);

    r = run({"eval", "integral", "--scale", "[[0,0],[1", "--fn", "t", "--from", "0", "--to", "1"});
    CHECK(r.code == 2);
    CHECK(r.err.find("--scale") != std::string::npos);

    r = run({"eval", "derivative", "--scale", "[[0,0],[1,1]]", "--fn", "t", "--at", "1"});
    CHECK(r.code == 2);  // 1 is not in the upper kappa set

    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("check on the unit Hardy instance") {
    const auto r = run({"check", data("hardy_unit.json")});
    CHECK(r.code == 0);
    const auto j = Json::parse(r.out);
    CHECK(j.at("holds") == true);
    CHECK(j.at("inequality") == "hardy_pair");
    CHECK(j.at("reports").at("bilinear").at("lhs").get<double>() == doctest::Approx(4.0));
    CHECK(j.at("instance").at("functions").at("K") == "1");
}

TEST_CASE("check points at the broken field") {
    const auto r = run({"check", data("broken.json")});
    CHECK(r.code == 2);
    CHECK(r.err.find("field 'f'") != std::string::npos);
    CHECK(r.err.find("at position 3") != std::string::npos);
}

TEST_CASE("check exits 1 on a violated instance") {
    const auto r = run({"check", data("violation.json")});
    CHECK(r.code == 1);
    CHECK(Json::parse(r.out).at("holds") == false);
}

TEST_CASE("check on a missing file") { CHECK(run({"check", data("no_such_file.json")}).code == 2); }

TEST_CASE("check is a thin adapter over the library") {
    const auto doc = load(data("cauchy_schwarz.json"));
    const auto res = cli::check_instance(doc, {});
    const auto ts = TimeScale::build({{0, 1}, {2, 2}, {3, 3}});
    const auto direct = cauchy_schwarz_2d(
        ts, 0, 3, Alpha(0.3), [](double x, double y) { return 1 + x * y; },
        [](double x, double y) { return std::exp(-x) + y; }, [](double x, double y) { return 2 + x - y / 4; }, {});
    CHECK(res.output.at("reports").at("cauchy_schwarz_2d").dump() == to_json(direct).dump());
    CHECK(res.all_hold == direct.holds);

    const auto unit = cli::check_instance(load(data("hardy_unit.json")), {});
    const auto one = [](double) { return 1.0; };
    const auto pair = hardy_pair(TimeScale::integers(0, 2), 0, 2, Alpha(1.0), Kernel([](double, double) { return 1.0; }),
                                 one, one, {one, one}, HolderPair(2.0));
    CHECK(unit.output.at("reports").at("bilinear").dump() == to_json(pair.first).dump());
    CHECK(unit.output.at("reports").at("dual").dump() == to_json(pair.second).dump());
}

TEST_CASE("every listed inequality name is accepted") {
    for (const auto& name : cli::inequality_names()) {
        Json doc = {{"inequality", name}};
        try {
            cli::check_instance(doc, {});
        } catch (const std::exception& e) {
            CHECK_MESSAGE(std::string(e.what()).find("unknown inequality") == std::string::npos, name);
        }
    }
    CHECK_THROWS(cli::check_instance(Json{{"inequality", "nope"}}, {}));
}

TEST_CASE("fuzz and report") {
    const std::string path = (std::filesystem::temp_directory_path() / "tscalc_cli_fuzz_summary.json").string();
    auto r = run({"fuzz", "--seed", "5", "--instances", "30", "--checks", "young,hardy_pair", "--json", path});
    CHECK(r.code == 0);
    CHECK(r.out.find("0 violation(s)") != std::string::npos);
    const auto j = load(path);
    CHECK(j.at("seed") == 5);
    CHECK(j.at("total") == 30);

    r = run({"report", path});
    CHECK(r.code == 0);
    CHECK(r.out.find("hardy_pair") != std::string::npos);

    CHECK(run({"fuzz", "--checks", "bogus"}).code == 2);
    std::filesystem::remove(path);
}

}  // TEST_SUITE
