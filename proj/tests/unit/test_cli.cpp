#include "hardylab/cli.hpp"
#include "hardylab/parser.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <cstdio>
#include <fstream>
#include <sstream>

using namespace hardylab;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run_cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "hardylab");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

nlohmann::json run_json(const std::vector<std::string>& args)
{
    const Result r = run_cli(args);
    REQUIRE(r.code == 0);
    return nlohmann::json::parse(r.out);
}

std::size_t error_offset(const std::string& src)
{
    try {
        parse_function(src);
    } catch (const ParseError& e) {
        return e.offset();
    }
    FAIL("no parse error for " << src);
    return 0;
}

} // namespace

TEST_SUITE("parser")
{
    TEST_CASE("grammar examples")
    {
        const FunctionExpr k = parse_function("pow:omega=0,gamma=1");
        REQUIRE(k.single_power_term() != nullptr);
        CHECK(std::abs(k.eval(0.5) - cplx{2.0}) < 1e-15);

        const FunctionExpr poly = parse_function("poly:1,0,0.5");
        CHECK(std::abs(poly.eval(0.5) - cplx{1.125}) < 1e-15);

        const FunctionExpr two = parse_function("2*pow:omega=0.5,gamma=1.75 - poly:1");
        CHECK(two.terms().size() == 2);
        const cplx z{0.1, 0.2};
        const cplx want = 2.0 * std::pow(std::polar(1.0, 0.5) - z, -1.75) - 1.0;
        CHECK(std::abs(two.eval(z) - want) < 1e-13);
    }

    TEST_CASE("whitespace, signs and scientific notation")
    {
        const FunctionExpr a = parse_function("  - 1.5e-1 * pow : omega = -2 , gamma = 2.5E0 +poly:-1, +2 ");
        const FunctionExpr b = cplx{-0.15} * FunctionExpr::power(PowerSingularity::make(-2.0, 2.5)) +
                               FunctionExpr::polynomial({-1.0, 2.0});
        CHECK(std::abs(a.eval(0.3) - b.eval(0.3)) < 1e-15);
        CHECK(parse_function("poly:0").is_zero());
        CHECK(parse_function("poly:.5").eval(0.0) == cplx{0.5});
    }

    TEST_CASE("errors carry byte offsets")
    {
        CHECK(error_offset("") == 0);
        CHECK(error_offset("poly:") == 5);
        CHECK(error_offset("poly:1,") == 7);
        CHECK(error_offset("pow:omega=0,gamma=0") == 18);
        CHECK(error_offset("pow:omega=0,gamma=-1") == 18);
        CHECK(error_offset("pow:omega=0") == 11);
        CHECK(error_offset("poly:1 poly:2") == 7);
        CHECK(error_offset("exp:1") == 0);
        CHECK(error_offset("2 pow:omega=0,gamma=1") == 2);
        CHECK(error_offset("poly:1e999") == 5);
        CHECK_THROWS_WITH(parse_function("poly:x"), doctest::Contains("offset 5"));
    }

    TEST_CASE("exponents")
    {
        CHECK(std::isinf(parse_exponent("inf")));
        CHECK(parse_exponent(" 2.5 ") == 2.5);
        CHECK_THROWS_AS(parse_exponent("2x"), std::invalid_argument);
        CHECK_THROWS_AS(parse_exponent(""), std::invalid_argument);
    }
}

TEST_SUITE("cli")
{
    TEST_CASE("norm of the Cauchy kernel at p = 1/2 is bounded")
    {
        const auto j = run_json({"norm", "--function", "pow:omega=0,gamma=1", "--p", "0.5", "--kmax", "14"});
        CHECK(j["schema"] == "hardy-lab/1");
        CHECK(j["result"]["verdict"] == "bounded");
        CHECK(j["config"]["kmax"] == 14);
        CHECK(j["resolution_law"]["per_width"] == 64.0);
        CHECK(j["result"]["table"]["rows"].size() == 14);
    }

    TEST_CASE("norm of the zero polynomial")
    {
        const auto j = run_json({"norm", "--function", "poly:0", "--kmax", "6"});
        CHECK(j["result"]["sup"] == 0.0);
        CHECK(j["result"]["verdict"] == "bounded");
    }

    TEST_CASE("witness command")
    {
        const auto j = run_json({"witness", "--p", "0.5", "--a", "2", "--arc", "-1,1"});
        CHECK(j["result"]["omega"] == 0.0);
        CHECK(j["result"]["gamma"] == 1.75);
        CHECK(j["result"]["g_in_Hp"] == "member");
        CHECK(j["result"]["F_in_Ha"] == "non_member");
        const auto inter = run_json({"witness", "--p", "0.5", "--arc", "0,1"});
        CHECK(inter["result"]["gamma"] == 2.0);
    }

    TEST_CASE("primitive command")
    {
        const auto j = run_json({"primitive", "--function", "pow:omega=0,gamma=1", "--terms", "4"});
        const auto& c = j["result"]["primitive_coeffs"];
        REQUIRE(c.size() == 5);
        CHECK(c[0][0] == 0.0);
        CHECK(c[3][0].get<double>() == doctest::Approx(1.0 / 3.0));
    }

    TEST_CASE("output is byte-identical across runs")
    {
        const std::vector<std::string> args{"blowup", "--p", "0.5", "--a", "2,inf", "--arc", "-1,1", "--kmax", "8"};
        const Result a = run_cli(args), b = run_cli(args);
        CHECK(a.code == b.code);
        CHECK(a.out == b.out);
        const std::vector<std::string> fam{"family", "--p", "0.5", "--a", "2", "--arc", "-1,1", "--m", "2", "--kmax", "8", "--seed", "42"};
        const Result c = run_cli(fam), d = run_cli(fam);
        CHECK(c.out == d.out);
        auto csv = args;
        csv.insert(csv.end(), {"--format", "csv"});
        CHECK(run_cli(csv).out == run_cli(csv).out);
    }

    TEST_CASE("csv output carries the metadata header")
    {
        const Result r = run_cli({"norm", "--function", "poly:1,1", "--kmax", "5", "--format", "csv"});
        CHECK(r.code == 0);
        CHECK(r.out.rfind("# schema=hardy-lab/1\n# config=", 0) == 0);
        CHECK(r.out.find("# resolution_law=") != std::string::npos);
        CHECK(r.out.find("k,r,x,value\n") != std::string::npos);
    }

    TEST_CASE("config file with flag override")
    {
        const std::string path = "hardylab_test_config.ini";
        {
            std::ofstream f(path);
            f << "function=pow:omega=0,gamma=1.5\np=0.5\nkmax=7\narc=-1,1\n";
        }
        const auto j = run_json({"norm", "--config", path, "--kmax", "6"});
        CHECK(j["config"]["function"] == "pow:omega=0,gamma=1.5");
        CHECK(j["config"]["p"] == 0.5);
        CHECK(j["config"]["kmax"] == 6);
        CHECK(j["config"]["arc"][0] == -1.0);
        std::remove(path.c_str());
    }

    TEST_CASE("out file")
    {
        const std::string path = "hardylab_test_out.json";
        const Result r = run_cli({"witness", "--p", "0.5", "--a", "2", "--out", path});
        CHECK(r.code == 0);
        CHECK(r.out.empty());
        std::ifstream f(path);
        CHECK(nlohmann::json::parse(f)["result"]["gamma"] == 1.75);
        std::remove(path.c_str());
    }

    TEST_CASE("errors exit with 1")
    {
        CHECK(run_cli({"norm", "--function", "pow:omega=0,gamma=0"}).code == 1);
        CHECK(run_cli({"norm"}).code == 1);
        CHECK(run_cli({"witness", "--p", "0.5", "--a", "1"}).code == 1);
        CHECK(run_cli({"norm", "--function", "poly:1", "--kmax", "2"}).code == 1);
        CHECK(run_cli({"norm", "--function", "poly:1", "--arc", "1,0"}).code == 1);
        CHECK(run_cli({"norm", "--function", "poly:1", "--format", "xml"}).code != 0);
        CHECK(run_cli({}).code != 0);
        const Result r = run_cli({"norm", "--function", "poly:1,"});
        CHECK(r.err.find("offset 7") != std::string::npos);
    }

    TEST_CASE("inconclusive verdicts exit with 2")
    {
        RunConfig cfg;
        cfg.command = "norm";
        cfg.function = "pow:omega=0,gamma=1";
        cfg.p = 1.02; // p gamma - 1 inside the classifier's undecided band at this depth
        cfg.k_max = 6;
        std::ostringstream out, err;
        const int code = run(cfg, out, err);
        const auto j = nlohmann::json::parse(out.str());
        if (j["result"]["verdict"] == "inconclusive")
            CHECK(code == exit_inconclusive);
        else
            CHECK(code == exit_ok);
    }
}
