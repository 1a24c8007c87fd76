#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "asianpde/cli.hpp"
#include "asianpde/config.hpp"
#include "asianpde/errors.hpp"

using namespace asianpde;
namespace fs = std::filesystem;

namespace {

const std::string kData = ASIANPDE_TEST_DATA;

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("asianpde_test_cli_" + name);
    fs::remove_all(p);
    return p;
}

std::string write_file(const std::string& name, const std::string& text) {
    const auto p = fs::temp_directory_path() / ("asianpde_test_cli_" + name + ".ini");
    std::ofstream(p) << text;
    return p.string();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("config parser") {
    const auto doc = parse_config("# comment\n[a]\nx = 1 ; trailing\ny=two words\n\n[b]\nz = 3\n");
    CHECK(doc.get("a", "x") == "1");
    CHECK(doc.get("a", "y") == "two words");
    CHECK(doc.has("b", "z"));
    CHECK(!doc.has("b", "x"));
    CHECK_THROWS_AS(doc.get("c", "x"), ConfigError);
    CHECK_THROWS_AS(parse_config("x = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[a]\nx = 1\nx = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[a]\n[a]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[a\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[a]\njunk\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[a]\nx =\n"), ConfigError);
    try {
        parse_config("[a]\n\nbad line\n");
        FAIL("expected an error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("value parsers") {
    CHECK(parse_real(" 2.5 ", "v") == 2.5);
    CHECK(parse_real("-1e-3", "v") == -1e-3);
    CHECK_THROWS_AS(parse_real("1.5x", "v"), ConfigError);
    CHECK_THROWS_AS(parse_real("nan", "v"), ConfigError);
    CHECK_THROWS_AS(parse_real("inf", "v"), ConfigError);
    CHECK(parse_u64("18446744073709551615", "v") == 18446744073709551615ULL);
    CHECK_THROWS_AS(parse_u64("-1", "v"), ConfigError);
    CHECK(parse_real_list("0.1, 0.2 0.3", "v") == std::vector<double>{0.1, 0.2, 0.3});
    CHECK_THROWS_AS(parse_real_list(" , ", "v"), ConfigError);
    const auto pieces = parse_pieces("(0, 1) (0.5, 2.5), (0.75,3)", "p");
    REQUIRE(pieces.size() == 3);
    CHECK(pieces[1].start == 0.5);
    CHECK(pieces[1].value == 2.5);
    CHECK_THROWS_AS(parse_pieces("(0, 1, 2)", "p"), ConfigError);
    CHECK_THROWS_AS(parse_pieces("(0, 1", "p"), ConfigError);
    CHECK_THROWS_AS(parse_pieces("0, 1", "p"), ConfigError);
}

TEST_CASE("market from config") {
    const auto m = market_from_config(load_config(kData + "/piecewise.ini"));
    CHECK(m.rate == 0.03);
    CHECK(m.maturity == 2.0);
    CHECK(m.dividend_density(1.5) == 0.02);
    CHECK(m.weighting_density(1.0) == 2.0);
    CHECK_THROWS_AS(market_from_config(load_config(kData + "/malformed.ini")), ConfigError);
    CHECK_THROWS_AS(market_from_config(parse_config("[market]\nrate = 0\nmaturity = 1\nfoo = 1\n")), ConfigError);
    CHECK_THROWS_AS(market_from_config(parse_config("[market]\nrate = 0\nmaturity = 1\nstrike = 1\n")), ConfigError);
    CHECK_THROWS_AS(market_from_config(parse_config("[market]\nrate = 0\n")), ConfigError);
    CHECK_THROWS_AS(load_config(kData + "/does_not_exist.ini"), ConfigError);
    const auto ref = market_from_config(parse_config("[market]\nrate = 0\nmaturity = 1\n"));
    CHECK(ref.weighting_density(0.5) == 1.0);
    CHECK(ref.dividend_density(0.5) == 0.0);
}

TEST_CASE("commands") {
    for (auto c : {Command::price, Command::verify_key_lemma, Command::verify_general, Command::barrier_table,
                   Command::convergence, Command::sweep})
        CHECK(parse_command(to_string(c)) == c);
    CHECK_THROWS_AS(parse_command("plot"), ConfigError);
}

TEST_CASE("resolve_config") {
    CliOverrides ov;
    ov.config_path = kData + "/piecewise.ini";
    const auto cfg = resolve_config(Command::price, ov);
    CHECK(cfg.market.has_value());
    CHECK(cfg.grid_nx == 513);
    CHECK(cfg.paths == 5000);
    CHECK(cfg.seed == 7);
    CHECK(cfg.seed_explicit);
    CHECK(cfg.scheme == Scheme::euler_x);
    CHECK(cfg.r_list == std::vector<double>{0.1, 0.2});

    ov.paths = 17;
    ov.seed = 99;
    ov.r_list = "0.3,0.4";
    ov.scheme = "exact-y";
    const auto over = resolve_config(Command::price, ov);
    CHECK(over.paths == 17);
    CHECK(over.seed == 99);
    CHECK(over.r_list == std::vector<double>{0.3, 0.4});
    CHECK(over.scheme == Scheme::exact_y);
    CHECK(over.hash() != cfg.hash());
    CHECK(resolve_config(Command::price, ov).hash() == over.hash());

    CHECK(!resolve_config(Command::barrier_table, {}).seed_explicit);
    CHECK_THROWS_AS(resolve_config(Command::price, {}), ConfigError);

    CliOverrides unknown;
    unknown.config_path = kData + "/unknown_key.ini";
    CHECK_THROWS_AS(resolve_config(Command::barrier_table, unknown), ConfigError);
    CliOverrides section;
    section.config_path = write_file("section", "[plotting]\ncolor = red\n");
    CHECK_THROWS_AS(resolve_config(Command::barrier_table, section), ConfigError);
}

TEST_CASE("range checks run before any computation") {
    auto expect_reject = [](const std::string& text) {
        CliOverrides ov;
        ov.config_path = write_file("range", text);
        CHECK_THROWS_AS(resolve_config(Command::barrier_table, ov), ConfigError);
    };
    expect_reject("[grid]\nnx = 2\n");
    expect_reject("[monte_carlo]\npaths = 0\n");
    expect_reject("[frame]\nmu = 1\n");
    expect_reject("[frame]\nr_list = 0.1, -0.2\n");
    expect_reject("[frame]\nlambda = 2\nLambda = 1\n");
    expect_reject("[barrier]\nR = 0\n");
    expect_reject("[barrier]\nt_list = 1, 0\n");
    expect_reject("[convergence]\nlevels = 2\n");
    expect_reject("[monte_carlo]\nscheme = midpoint\n");
    CliOverrides mu;
    mu.mu = 0.5;
    CHECK_THROWS_AS(resolve_config(Command::verify_general, mu), ConfigError);
}

TEST_CASE("barrier-table output is deterministic and carries provenance") {
    CliOverrides ov;
    const auto cfg = resolve_config(Command::barrier_table, ov);
    const auto a = run(cfg);
    const auto b = run(cfg);
    CHECK(a.exit_code == kExitOk);
    REQUIRE(a.files.count("barrier_table.csv") == 1);
    CHECK(a.files == b.files);
    const auto& csv = a.files.at("barrier_table.csv");
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(cfg.hash()));
    CHECK(csv.find(std::string("# config_hash=") + hash) != std::string::npos);
    CHECK(csv.find("# seed=") != std::string::npos);
    CHECK(csv.find("# grid") != std::string::npos);
    CHECK(csv.find("t,x,v,bound\n") != std::string::npos);
}

TEST_CASE("price and sweep") {
    CliOverrides ov;
    ov.config_path = fs::path(kData).parent_path().parent_path().string() + "/configs/reference.ini";
    ov.paths = 20000;
    ov.steps = 200;
    ov.grid_nx = 513;
    ov.grid_nt = 513;
    const auto price = run(resolve_config(Command::price, ov));
    CHECK(price.exit_code == kExitOk);
    CHECK(price.console.find("PDE: u =") != std::string::npos);
    CHECK(price.console.find("MC : u =") != std::string::npos);
    CHECK(price.console.find("discrepancy") != std::string::npos);
    ov.t = 1.0;
    CHECK_THROWS_AS(run(resolve_config(Command::price, ov)), ConfigError);
    ov.t = 0.0;
    ov.x = 50.0;
    CHECK_THROWS_AS(run(resolve_config(Command::price, ov)), ConfigError);
}

TEST_CASE("verify commands") {
    CliOverrides ov;
    ov.config_path = fs::path(kData).parent_path().parent_path().string() + "/configs/reference.ini";
    const auto key = run(resolve_config(Command::verify_key_lemma, ov));
    CHECK(key.exit_code == kExitOk);
    REQUIRE(key.files.count("key_lemma.csv") == 1);
    CHECK(key.files.at("key_lemma.csv").find("r,lhs,rhs,ratio,noise_floor,k_fit\n") != std::string::npos);

    CliOverrides gen;
    gen.grid_nx = 257;
    gen.grid_nt = 257;
    gen.mu = 1.5;
    const auto g = run(resolve_config(Command::verify_general, gen));
    CHECK(g.exit_code == kExitOk);
    CHECK(g.files.count("general_bound.csv") == 1);

    const auto conv = run(resolve_config(Command::convergence, {}));
    CHECK(conv.exit_code == kExitOk);
}

TEST_CASE("write_artifacts renames into place") {
    const auto dir = scratch("artifacts");
    RunResult r;
    r.files["a.csv"] = "x\n1\n";
    r.files["b.csv"] = "y\n2\n";
    write_artifacts(r, dir.string());
    CHECK(slurp(dir / "a.csv") == "x\n1\n");
    CHECK(slurp(dir / "b.csv") == "y\n2\n");
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(dir)) {
        CHECK(e.path().extension() == ".csv");
        ++n;
    }
    CHECK(n == 2);
    const auto empty = scratch("empty");
    write_artifacts(RunResult{}, empty.string());
    CHECK(!fs::exists(empty));
    fs::remove_all(dir);
}
