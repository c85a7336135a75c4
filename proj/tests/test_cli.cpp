#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <json.hpp>
#include <sstream>

#include "rlcdae/cli.hpp"
#include "support.hpp"

using namespace rlcdae;
using nlohmann::json;

namespace {

std::string path(const std::string& name) { return std::string(RLCDAE_FIXTURES) + "/" + name; }

struct Result {
    int code;
    std::string out;
};

Result run_cmd(RunConfig cfg)
{
    std::ostringstream s;
    int code = run(cfg, s);
    return {code, s.str()};
}

RunConfig cfg_for(const std::string& sub, const std::string& file)
{
    RunConfig c;
    c.subcommand = sub;
    c.input = path(file);
    return c;
}

}  // namespace

TEST_CASE("classify series V-R-C")
{
    Result r = run_cmd(cfg_for("classify", "vrc.net"));
    REQUIRE(r.code == kOk);
    json j = json::parse(r.out);
    CHECK(j["topological"] == 1);
    CHECK(j["algebraic"] == 1);
    CHECK(j["agree"] == true);
    CHECK(j["well_posed"] == true);
}

TEST_CASE("classify agrees on every fixture")
{
    for (const char* name : {"rc.net", "lc_star.net", "lc_no_ctree.net", "vrc.net", "rc_isrc.net", "v_par_c.net",
                             "i_series_l.net", "rlc_series.net", "lc_ladder.net", "mutual.net"}) {
        CAPTURE(name);
        Result r = run_cmd(cfg_for("classify", name));
        REQUIRE(r.code == kOk);
        CHECK(json::parse(r.out)["agree"] == true);
    }
}

TEST_CASE("simulate RC discharge")
{
    RunConfig c = cfg_for("simulate", "rc.net");
    c.tfinal = 1.0;
    Result r = run_cmd(c);
    REQUIRE(r.code == kOk);
    json j = json::parse(r.out);
    CHECK(j["labels"][0] == "u(1)");
    double t = j["times"].back();
    double u = j["states"].back()[0];
    CHECK(t == doctest::Approx(1.0));
    CHECK(u == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));

    c.format = "csv";
    Result csv = run_cmd(c);
    CHECK(csv.code == kOk);
    CHECK(csv.out.rfind("t,u(1)", 0) == 0);
}

TEST_CASE("parse errors exit with input failure")
{
    Result r = run_cmd(cfg_for("parse", "bad.net"));
    CHECK(r.code == kInputError);
    json j = json::parse(r.out);
    CHECK(j.contains("error"));
    CHECK(j["line"] == 3);
    CHECK(j["column"] == 10);

    Result missing = run_cmd(cfg_for("parse", "does_not_exist.net"));
    CHECK(missing.code == kInputError);
    CHECK(json::parse(missing.out).contains("error"));

    RunConfig neg = cfg_for("simulate", "rc.net");
    neg.tfinal = -1;
    CHECK(run_cmd(neg).code == kInputError);
}

TEST_CASE("parse echoes a canonical netlist")
{
    Result r = run_cmd(cfg_for("parse", "mutual.net"));
    REQUIRE(r.code == kOk);
    CHECK(parse_netlist(r.out) == fixture("mutual.net"));
}

TEST_CASE("every subcommand is deterministic")
{
    std::vector<RunConfig> cfgs;
    cfgs.push_back(cfg_for("parse", "rc.net"));
    cfgs.push_back(cfg_for("classify", "v_par_c.net"));
    RunConfig sim = cfg_for("simulate", "vrc.net");
    sim.tfinal = 2.0;
    cfgs.push_back(sim);
    RunConfig hist = cfg_for("history", "rlc_series.net");
    hist.tfinal = 1.0;
    cfgs.push_back(hist);
    RunConfig b = cfg_for("bounds", "lc_star.net");
    b.tfinal = 2.0;
    cfgs.push_back(b);
    RunConfig e = cfg_for("energy", "rlc_series.net");
    e.tfinal = 1.0;
    cfgs.push_back(e);
    cfgs.push_back(cfg_for("reduce", "chain3.json"));
    for (const auto& c : cfgs) {
        CAPTURE(c.subcommand);
        Result a = run_cmd(c), b2 = run_cmd(c);
        CHECK(a.code == kOk);
        CHECK(a.out == b2.out);
        CHECK_FALSE(a.out.empty());
    }
}

TEST_CASE("history, bounds, energy and reduce outputs")
{
    RunConfig h = cfg_for("history", "rc.net");
    h.tfinal = 1.0;
    json hj = json::parse(run_cmd(h).out);
    CHECK(hj["distance"].get<double>() < 1e-10);
    CHECK(hj["kappa_ok"] == true);

    RunConfig b = cfg_for("bounds", "vrc.net");
    b.tfinal = 1.0;
    Result br = run_cmd(b);
    json bj = json::parse(br.out);
    CHECK(br.code == (bj["ok"].get<bool>() ? kOk : kNumericFailure));
    CHECK(bj["checks"].size() > 3);
    CHECK(bj["quantum"]["kappa"].get<double>() > 0);

    RunConfig e = cfg_for("energy", "rc.net");
    e.tfinal = 1.0;
    Result er = run_cmd(e);
    CHECK(er.out.rfind("t,E_C,E_L,P_R,E_total", 0) == 0);

    Result rr = run_cmd(cfg_for("reduce", "chain3.json"));
    REQUIRE(rr.code == kOk);
    Circuit c = parse_netlist(rr.out);
    CHECK(c.of_kind(Kind::C).size() == 3);
    CHECK(c.of_kind(Kind::L).size() == 4);
}

TEST_CASE("dump mna")
{
    RunConfig c = cfg_for("parse", "vrc.net");
    c.dump_mna = true;
    json j = json::parse(run_cmd(c).out);
    CHECK(j["mna"]["layout"]["nv"] == 1);
    CHECK(j["mna"]["M"].size() == 3);
}

TEST_CASE("output file and the binary")
{
    auto dir = std::filesystem::temp_directory_path() / "rlcdae_cli_test";
    std::filesystem::create_directories(dir);
    RunConfig c = cfg_for("classify", "vrc.net");
    c.out = (dir / "classify.json").string();
    std::ostringstream s;
    CHECK(run(c, s) == kOk);
    std::ifstream in(c.out);
    json j = json::parse(in);
    CHECK(j["agree"] == true);

    std::string out = (dir / "bin.json").string();
    std::string cmd = std::string(RLCDAE_TOOL) + " parse " + path("bad.net") + " > " + out;
    int status = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(status) == 2);
    std::ifstream bin(out);
    CHECK(json::parse(bin)["line"] == 3);

    cmd = std::string(RLCDAE_TOOL) + " simulate " + path("rc.net") + " --tfinal 1 --format csv > " + out;
    CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    std::filesystem::remove_all(dir);
}
