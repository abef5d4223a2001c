#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "ttm/session.hpp"
#include "ttm/session_store.hpp"

using namespace ttm;
namespace fs = std::filesystem;

namespace {

struct Scratch {
    fs::path dir = fs::temp_directory_path() / ("ttm-cli-" + new_session_id());
    Scratch() { fs::create_directories(dir); }
    ~Scratch() { fs::remove_all(dir); }
    fs::path operator/(const std::string& name) const { return dir / name; }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

std::string golden(const std::string& name) { return slurp(fs::path(TTM_TEST_DATA) / name); }

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run_elicit(const cli::ElicitOptions& options, const std::string& answers) {
    std::istringstream in(answers);
    std::ostringstream out, err;
    const int code = cli::elicit(options, in, out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("name lists") {
    CHECK(cli::parse_names(" a , b,c") == std::vector<std::string>{"a", "b", "c"});
    CHECK(cli::parse_names("a,") == std::vector<std::string>{"a", ""});
}

TEST_CASE("interactive elicitation of the worked example") {
    Scratch tmp;
    cli::ElicitOptions o;
    o.objects = "a1,a2,a3,a4";
    o.out = tmp / "results.json";
    o.match_matrix_out = tmp / "L.csv";
    o.session_file = tmp / "session.json";
    const auto r = run_elicit(o, "a1\n1\na3\n0\na1\n3\n");
    CHECK(r.code == cli::exit_ok);
    CHECK(r.out.find("Round 1. Which do you prefer, a1 or a2? ") != std::string::npos);
    CHECK(r.out.find("Round 2. Which do you prefer, a1 or a3? ") != std::string::npos);
    CHECK(r.out.find("Ranking: a1 > a2 > a3 > a4") != std::string::npos);
    CHECK(r.out.find("Cards between consecutive levels: 1 1 0") != std::string::npos);
    CHECK(slurp(*o.out) == golden("example_results.json") + "\n");
    CHECK(slurp(*o.match_matrix_out) == golden("example_L.csv"));
    const auto saved = load_session(nlohmann::json::parse(slurp(o.session_file)));
    CHECK(saved.phase == Phase::results);
}

TEST_CASE("prompts repeat on bad answers") {
    Scratch tmp;
    cli::ElicitOptions o;
    o.objects = "a1,a2";
    o.session_file = tmp / "s.json";
    const auto r = run_elicit(o, "a9\n2\nmany\n-1\n4\n");
    CHECK(r.code == cli::exit_ok);
    CHECK(r.out.find("Please answer a1 (1) or a2 (2).") != std::string::npos);
    CHECK(r.out.find("Please enter a whole number of cards") != std::string::npos);
    const auto s = load_session(nlohmann::json::parse(slurp(o.session_file)));
    CHECK(s.scale->u == std::vector<Units>{0, 5});
}

TEST_CASE("ties only with the flag") {
    Scratch tmp;
    cli::ElicitOptions o;
    o.objects = "a1,a2";
    o.session_file = tmp / "s.json";
    CHECK(run_elicit(o, "tie\n").code == cli::exit_usage);
    o.allow_ties = true;
    const auto r = run_elicit(o, "tie\n");
    CHECK(r.code == cli::exit_ok);
    CHECK(r.out.find("All objects are tied") != std::string::npos);
}

TEST_CASE("end of input saves and resume continues") {
    Scratch tmp;
    cli::ElicitOptions o;
    o.objects = "a1,a2,a3,a4";
    o.session_file = tmp / "s.json";
    o.out = tmp / "results.json";
    const auto first = run_elicit(o, "a1\n1\na3\n");
    CHECK(first.code == cli::exit_usage);
    CHECK(first.err.find("ttm elicit --resume --session") != std::string::npos);
    const auto partial = load_session(nlohmann::json::parse(slurp(o.session_file)));
    CHECK(partial.tournament.history.size() == 1);

    o.resume = true;
    o.objects.clear();
    const auto second = run_elicit(o, "a3\n0\na1\n3\n");
    CHECK(second.code == cli::exit_ok);
    CHECK(second.out.find("Resuming session") != std::string::npos);
    CHECK(slurp(*o.out) == golden("example_results.json") + "\n");
}

TEST_CASE("interactive and batch paths agree") {
    Scratch tmp;
    cli::ElicitOptions o;
    o.objects = "p,q,r,s,t";
    o.session_file = tmp / "s.json";
    o.out = tmp / "interactive.json";
    o.match_matrix_out = tmp / "L.csv";
    // round 1: p/q, r/s, t bye; round 2: q/r, t bye; round 3: q/t
    REQUIRE(run_elicit(o, "q\n2\nr\n0\n1\n1\n2\n5\n").code == cli::exit_ok);

    std::ostringstream out, err;
    REQUIRE(cli::build(tmp / "L.csv", std::string("p,q,r,s,t"), tmp / "M.csv", out, err) ==
            cli::exit_ok);
    REQUIRE(cli::eval(tmp / "M.csv", std::string("p,q,r,s,t"), tmp / "batch.json", out, err) ==
            cli::exit_ok);
    CHECK(slurp(tmp / "batch.json") == slurp(*o.out));
}

TEST_CASE("explicit pairing prompts") {
    Scratch tmp;
    cli::ElicitOptions o;
    o.objects = "a,b,c";
    o.policy = PairingPolicy::explicit_pairs;
    o.session_file = tmp / "s.json";
    const auto r = run_elicit(o, "1 1, 2\n3 1, 2\nc\n0\n1 2\nc\n2\n");
    CHECK(r.code == cli::exit_ok);
    CHECK(r.out.find("Enter the pairs as position numbers") != std::string::npos);
    const auto s = load_session(nlohmann::json::parse(slurp(o.session_file)));
    CHECK(s.tournament.history.front() == MatchRecord{2, 0, 1});
}

TEST_CASE("build, eval and check on files") {
    Scratch tmp;
    spit(tmp / "L.csv", golden("example_L.csv"));
    std::ostringstream out, err;
    CHECK(cli::build(tmp / "L.csv", std::nullopt, std::nullopt, out, err) == cli::exit_ok);
    CHECK(out.str() == golden("example_M.csv"));

    std::ostringstream eval_out;
    spit(tmp / "M.csv", golden("example_M.csv"));
    CHECK(cli::eval(tmp / "M.csv", std::nullopt, std::nullopt, eval_out, err) == cli::exit_ok);
    CHECK(eval_out.str() == golden("example_results.json") + "\n");

    std::ostringstream check_out;
    CHECK(cli::check(tmp / "M.csv", std::nullopt, check_out, err) == cli::exit_ok);

    spit(tmp / "bad.csv", "0,1,5\n-1,0,1\n-5,-1,0\n");
    std::ostringstream bad_out, bad_err;
    CHECK(cli::check(tmp / "bad.csv", std::nullopt, bad_out, bad_err) == cli::exit_domain);
    CHECK(bad_out.str().find("-3") != std::string::npos);
    CHECK(cli::eval(tmp / "bad.csv", std::nullopt, std::nullopt, bad_out, bad_err) ==
          cli::exit_domain);

    spit(tmp / "nonrecip.csv", "0,1\n1,0\n");
    CHECK(cli::check(tmp / "nonrecip.csv", std::nullopt, bad_out, bad_err) == cli::exit_domain);

    std::ostringstream io_err;
    CHECK(cli::build(tmp / "missing.csv", std::nullopt, std::nullopt, out, io_err) ==
          cli::exit_usage);
    CHECK(io_err.str().find("missing.csv") != std::string::npos);

    spit(tmp / "L_bad.csv", "a1,a2,2\na3,a4,1\na1,a3,4\n");
    std::ostringstream s_err;
    CHECK(cli::build(tmp / "L_bad.csv", std::nullopt, std::nullopt, out, s_err) != cli::exit_ok);
    CHECK(s_err.str().find("L_bad.csv") != std::string::npos);
}
