#include "hardylab/cli.hpp"

#include "hardylab/analysis.hpp"
#include "hardylab/hardy_spaces.hpp"
#include "hardylab/parser.hpp"
#include "hardylab/quadrature.hpp"
#include "hardylab/witnesses.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace hardylab {

namespace {

const std::vector<std::string> commands{"norm",    "primitive", "witness", "blowup",
                                        "family",  "perturb",   "scan",    "hardy-ineq"};

nlohmann::json exponent_json(double a)
{
    if (std::isinf(a))
        return "inf";
    return a;
}

std::string exponent_text(double a)
{
    return std::isinf(a) ? "inf" : format_double(a);
}

ArcSpec parse_arc(const std::string& text)
{
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("--arc expects A,B in radians");
    const double a = parse_exponent(text.substr(0, comma));
    const double b = parse_exponent(text.substr(comma + 1));
    if (!std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument("--arc endpoints must be finite");
    return ArcSpec(a, b);
}

std::vector<double> parse_exponent_list(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_exponent(item));
    return out;
}

// Uniform in [-1, 1) from the top 53 bits, so draws do not depend on the standard library.
double uniform_pm1(std::mt19937_64& rng)
{
    return std::ldexp(static_cast<double>(rng() >> 11), -52) - 1.0;
}

struct Report {
    nlohmann::json result;
    std::string csv;
    bool inconclusive = false;
};

class Runner {
public:
    explicit Runner(const RunConfig& c)
        : cfg_(c), law_{256, 64.0, c.points_scale}, sweep_(default_sweep(c.k_max))
    {
    }

    Report dispatch()
    {
        const std::string& cmd = cfg_.command;
        if (cmd == "norm")
            return norm();
        if (cmd == "primitive")
            return primitive();
        if (cmd == "witness")
            return witness();
        if (cmd == "blowup")
            return blowup();
        if (cmd == "family")
            return family();
        if (cmd == "perturb")
            return perturb();
        if (cmd == "scan")
            return scan();
        return hardy_ineq();
    }

    const ResolutionLaw& law() const { return law_; }

private:
    const RunConfig& cfg_;
    ResolutionLaw law_;
    RadialSweep sweep_;

    ArcSpec arc() const { return cfg_.arc.value_or(ArcSpec::full_circle()); }

    FunctionExpr required_function() const
    {
        if (cfg_.function.empty())
            throw std::invalid_argument(cfg_.command + ": --function is required");
        return parse_function(cfg_.function);
    }

    double first_a() const
    {
        if (cfg_.a.empty())
            throw std::invalid_argument(cfg_.command + ": --a is required");
        return cfg_.a.front();
    }

    // The given function, or the witness for (p, a, arc) when --function is absent.
    FunctionExpr function_or_witness() const
    {
        if (!cfg_.function.empty())
            return parse_function(cfg_.function);
        return build_witness(cfg_.p, first_a(), arc()).g;
    }

    Report norm()
    {
        const FunctionExpr f = required_function();
        Report rep;
        if (std::isinf(cfg_.p)) {
            const SupEstimate s = sup_on_arc(f, arc(), sweep_, law_);
            rep.result = {{"function", f.to_string()}, {"p", "inf"}, {"arc", arc_to_json(arc())},
                          {"sup", s.to_json()}};
            rep.csv = "k,r,max_modulus\n";
            for (std::size_t k = 0; k < s.per_radius.size(); ++k)
                rep.csv += std::to_string(k + 1) + ',' + format_double(sweep_.radii()[k]) + ',' +
                           format_double(s.per_radius[k]) + '\n';
            rep.inconclusive = s.growth.verdict == GrowthVerdict::Inconclusive && !s.escaping;
            return rep;
        }
        const MembershipVerdict v = classify_membership(f, cfg_.p, arc(), sweep_, law_);
        rep.result = v.to_json(true);
        rep.result["function"] = f.to_string();
        if (const PowerTerm* pt = f.single_power_term(); pt && pt->gamma > 0.0 && arc().contains_angle(pt->omega))
            rep.result["closed_form"] = std::string(
                to_string(closed_form_membership(PowerSingularity::make(pt->omega, pt->gamma), cfg_.p)));
        rep.csv = v.table.to_csv();
        rep.inconclusive = v.verdict == GrowthVerdict::Inconclusive;
        return rep;
    }

    Report primitive()
    {
        const FunctionExpr f = required_function();
        const FunctionExpr prim = primitive_expr(f);
        const int n = cfg_.terms > 0 ? cfg_.terms : 16;
        const TaylorSeries sf = taylor_series(f, n);
        const TaylorSeries sp = taylor_series(prim, n);
        auto pairs = [](const TaylorSeries& ts) {
            auto arr = nlohmann::json::array();
            for (cplx c : ts.coefficients())
                arr.push_back({c.real(), c.imag()});
            return arr;
        };
        Report rep;
        rep.result = {{"function", f.to_string()},
                      {"primitive", prim.to_string()},
                      {"terms", n},
                      {"function_coeffs", pairs(sf)},
                      {"primitive_coeffs", pairs(sp)}};
        std::ostringstream os;
        os << "n,re_f,im_f,re_F,im_F\n";
        const auto cf = sf.coefficients();
        const auto cp = sp.coefficients();
        for (std::size_t i = 0; i < cf.size() && i < cp.size(); ++i)
            os << i << ',' << format_double(cf[i].real()) << ',' << format_double(cf[i].imag()) << ','
               << format_double(cp[i].real()) << ',' << format_double(cp[i].imag()) << '\n';
        rep.csv = os.str();
        return rep;
    }

    Report witness()
    {
        const Witness w = cfg_.a.empty() ? build_intersection_witness(cfg_.p, arc())
                                         : build_witness(cfg_.p, cfg_.a.front(), arc());
        const auto ps = PowerSingularity::make(w.spec.omega, w.spec.gamma);
        Report rep;
        rep.result = w.spec.to_json();
        rep.result["function"] = w.g.to_string();
        rep.result["primitive"] = primitive_expr(w.g).to_string();
        rep.result["g_in_Hp"] = std::string(to_string(closed_form_membership(ps, w.spec.p)));
        if (w.spec.gamma > 1.0 && !std::isinf(w.spec.a))
            rep.result["F_in_Ha"] = std::string(to_string(
                closed_form_membership(PowerSingularity::make(w.spec.omega, w.spec.gamma - 1.0), w.spec.a)));
        rep.csv = "p,a,arc_a,arc_b,omega,gamma\n" + format_double(w.spec.p) + ',' +
                  exponent_text(w.spec.a) + ',' + format_double(w.spec.arc.a()) + ',' +
                  format_double(w.spec.arc.b()) + ',' + format_double(w.spec.omega) + ',' +
                  format_double(w.spec.gamma) + '\n';
        return rep;
    }

    Report blowup()
    {
        const FunctionExpr f = function_or_witness();
        const BlowupReport b = blowup_report(f, cfg_.p, cfg_.a, {arc()}, sweep_, law_, cfg_.n_arcs);
        Report rep;
        rep.result = b.to_json();
        rep.csv = b.to_csv();
        rep.inconclusive = b.q_verdict.verdict == GrowthVerdict::Inconclusive;
        for (const auto& row : b.rows)
            rep.inconclusive = rep.inconclusive || row.verdict == GrowthVerdict::Inconclusive;
        return rep;
    }

    Report family()
    {
        const double a = first_a();
        const DenseFamily fam = build_dense_family(cfg_.p, a, arc(), cfg_.m, sweep_, law_);
        std::mt19937_64 rng(cfg_.seed);
        std::vector<cplx> beta(cfg_.m);
        for (auto& b : beta)
            b = {uniform_pm1(rng), uniform_pm1(rng)};
        while (std::abs(beta.back()) < 0.1)
            beta.back() = {uniform_pm1(rng), uniform_pm1(rng)};

        const Combination comb = combine(fam, beta);
        const RadialSweep iso_sweep = scaled_sweep(std::min(1.0, comb.isolation.length()), cfg_.k_max);
        const MembershipVerdict v =
            classify_membership(primitive_expr(comb.f), a, comb.isolation, iso_sweep, law_);

        Report rep;
        rep.result = {{"family", fam.to_json()}};
        auto jb = nlohmann::json::array();
        for (cplx b : beta)
            jb.push_back({b.real(), b.imag()});
        rep.result["beta"] = jb;
        rep.result["m"] = comb.m;
        rep.result["isolation"] = arc_to_json(comb.isolation);
        rep.result["combination"] = v.to_json();
        auto others = nlohmann::json::array();
        for (const auto& e : fam.entries) {
            if (e.j == comb.m)
                continue;
            const MembershipVerdict ov =
                classify_membership(primitive_expr(e.element()), a, comb.isolation, iso_sweep, law_);
            others.push_back({{"j", e.j}, {"verdict", to_string(ov.verdict)}, {"sup", ov.sup_estimate}});
            rep.inconclusive = rep.inconclusive || ov.verdict == GrowthVerdict::Inconclusive;
        }
        rep.result["other_entries"] = others;
        rep.inconclusive = rep.inconclusive || v.verdict == GrowthVerdict::Inconclusive;

        std::ostringstream os;
        os << "j,omega,gamma,c,phi_metric,scaled_metric,re_beta,im_beta\n";
        for (std::size_t i = 0; i < fam.entries.size(); ++i) {
            const auto& e = fam.entries[i];
            os << e.j << ',' << format_double(e.omega) << ',' << format_double(e.gamma) << ','
               << format_double(e.c) << ',' << format_double(e.phi_metric) << ','
               << format_double(e.scaled_metric) << ',' << format_double(beta[i].real()) << ','
               << format_double(beta[i].imag()) << '\n';
        }
        rep.csv = os.str();
        return rep;
    }

    Report perturb()
    {
        const double a = first_a();
        const FunctionExpr f = function_or_witness();
        const FunctionExpr g = parse_function(cfg_.g);
        const PerturbationReport pr =
            perturbation_experiment(g, f, cfg_.p, a, arc(), cfg_.halvings, sweep_, law_);
        Report rep;
        rep.result = pr.to_json();
        rep.csv = pr.to_csv();
        for (const auto& s : pr.steps)
            rep.inconclusive = rep.inconclusive || s.verdict == GrowthVerdict::Inconclusive;
        return rep;
    }

    Report scan()
    {
        const FunctionExpr f = required_function();
        const FunctionExpr target = cfg_.of_primitive ? primitive_expr(f) : f;
        const ScanResult s = total_unboundedness_scan(target, cfg_.n_arcs, sweep_, law_);
        Report rep;
        rep.result = s.to_json();
        rep.result["function"] = target.to_string();
        std::ostringstream os;
        os << "arc_a,arc_b,sup,escaping\n";
        for (std::size_t i = 0; i < s.arcs.size(); ++i)
            os << format_double(s.arcs[i].a()) << ',' << format_double(s.arcs[i].b()) << ','
               << format_double(s.sups[i].value) << ',' << (s.sups[i].escaping ? 1 : 0) << '\n';
        rep.csv = os.str();
        return rep;
    }

    Report hardy_ineq()
    {
        const FunctionExpr f = required_function();
        const int n = cfg_.terms > 0 ? cfg_.terms : 4000;
        const auto full = ArcSpec::full_circle();
        const MembershipVerdict h1 = classify_membership(f, 1.0, full, sweep_, law_);
        const HardyInequality hi = hardy_inequality_check(taylor_series(f, n), h1.limit_estimate);
        const SupEstimate ps = sup_on_arc(primitive_expr(f), full, sweep_, law_);
        Report rep;
        rep.result = hi.to_json();
        rep.result["function"] = f.to_string();
        rep.result["terms"] = n;
        rep.result["h1"] = h1.to_json();
        rep.result["primitive_sup"] = ps.to_json();
        rep.csv = "lhs,tail_slack,rhs,holds,primitive_sup,primitive_escaping\n" + format_double(hi.lhs) +
                  ',' + format_double(hi.tail_slack) + ',' + format_double(hi.rhs) + ',' +
                  (hi.holds ? "1" : "0") + ',' + format_double(ps.value) + ',' +
                  (ps.escaping ? "1" : "0") + '\n';
        rep.inconclusive = h1.verdict == GrowthVerdict::Inconclusive;
        return rep;
    }
};

} // namespace

void RunConfig::validate() const
{
    if (std::find(commands.begin(), commands.end(), command) == commands.end())
        throw std::invalid_argument("unknown command '" + command + "'");
    if (!(p > 0.0))
        throw std::invalid_argument("--p must be > 0");
    for (double x : a)
        if (!(x > 0.0))
            throw std::invalid_argument("--a entries must be > 0");
    if (k_max < 4 || k_max > 40)
        throw std::invalid_argument("--kmax must lie in [4, 40]");
    if (!(points_scale > 0.0) || !std::isfinite(points_scale))
        throw std::invalid_argument("--points-scale must be > 0");
    if (n_arcs < 4)
        throw std::invalid_argument("--n-arcs must be >= 4");
    if (m < 1 || m > 30)
        throw std::invalid_argument("--m must lie in [1, 30]");
    if (halvings < 1 || halvings > 60)
        throw std::invalid_argument("--halvings must lie in [1, 60]");
    if (terms < 0)
        throw std::invalid_argument("--terms must be >= 0");
    if (!function.empty())
        parse_function(function);
    if (command == "perturb")
        parse_function(g);
}

nlohmann::json RunConfig::to_json() const
{
    auto ja = nlohmann::json::array();
    for (double x : a)
        ja.push_back(exponent_json(x));
    nlohmann::json j{{"command", command},
                     {"function", function},
                     {"p", exponent_json(p)},
                     {"a", ja},
                     {"arc", arc ? arc_to_json(*arc) : nlohmann::json(nullptr)},
                     {"kmax", k_max},
                     {"points_scale", points_scale},
                     {"n_arcs", n_arcs},
                     {"m", m},
                     {"halvings", halvings},
                     {"terms", terms},
                     {"seed", seed},
                     {"format", format == OutputFormat::Json ? "json" : "csv"}};
    if (command == "perturb")
        j["g"] = g;
    if (command == "scan")
        j["of_primitive"] = of_primitive;
    return j;
}

std::optional<RunConfig> parse_command_line(int argc, const char* const* argv, std::ostream& out,
                                            std::ostream& err, int& exit_code)
{
    CLI::App app{"Numerical experiments on Hardy spaces of the unit disc", "hardylab"};
    app.set_config("--config", "", "key=value file; flags given on the command line win");
    auto config_format = std::make_shared<CLI::ConfigBase>();
    config_format->arrayDelimiter(';'); // keep "poly:1,2" and "-1,1" as single values
    app.config_formatter(config_format);
    app.require_subcommand(1);

    RunConfig cfg;
    std::string p_text = "1", a_text, arc_text, format_text = "json";
    app.add_option("--function", cfg.function, "function expression, e.g. \"2*pow:omega=0,gamma=1.5 - poly:1\"");
    app.add_option("--g", cfg.g, "perturb: the bounded function g");
    app.add_option("--p", p_text, "membership exponent p (or inf for norm)");
    app.add_option("--a", a_text, "target exponent a, a comma list for blowup; inf allowed");
    app.add_option("--arc", arc_text, "arc A,B in radians (default: full circle)");
    app.add_option("--kmax", cfg.k_max, "sweep radii r_k = 1 - 2^-k, k = 1..kmax");
    app.add_option("--points-scale", cfg.points_scale, "multiplier of the quadrature resolution law");
    app.add_option("--n-arcs", cfg.n_arcs, "scan and blowup: number of equal arcs");
    app.add_option("--m", cfg.m, "family size");
    app.add_option("--halvings", cfg.halvings, "perturb: lambda_n = 2^-n, n = 1..halvings");
    app.add_option("--terms", cfg.terms, "series length for primitive and hardy-ineq");
    app.add_flag("--of-primitive", cfg.of_primitive, "scan: scan the primitive F(f)");
    app.add_option("--seed", cfg.seed, "seed of the random coefficients drawn by family");
    app.add_option("--out", cfg.out, "output file (default: stdout)");
    app.add_option("--format", format_text, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    const std::vector<std::pair<std::string, std::string>> help{
        {"norm", "classify membership of --function in H^p on --arc"},
        {"primitive", "closed-form primitive and Taylor coefficients"},
        {"witness", "witness in H^p whose primitive leaves H^a (no --a: intersection witness)"},
        {"blowup", "integrability of the primitive at q, at each --a on --arc, and per-arc scan"},
        {"family", "dense family of size --m and a random combination"},
        {"perturb", "unboundedness of T(g + lambda f) for lambda = 2^-n"},
        {"scan", "sup of |f| on --n-arcs equal arcs"},
        {"hardy-ineq", "sum |a_n|/(n+1) against pi times the H^1 norm"}};
    for (const auto& [name, desc] : help)
        app.add_subcommand(name, desc)->fallthrough();

    try {
        app.parse(argc, argv);
        cfg.command = app.get_subcommands().front()->get_name();
        cfg.p = parse_exponent(p_text);
        if (!a_text.empty())
            cfg.a = parse_exponent_list(a_text);
        if (!arc_text.empty())
            cfg.arc = parse_arc(arc_text);
        cfg.format = format_text == "csv" ? OutputFormat::Csv : OutputFormat::Json;
    } catch (const CLI::ParseError& e) {
        exit_code = app.exit(e, out, err);
        return std::nullopt;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        exit_code = exit_error;
        return std::nullopt;
    }
    return cfg;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    try {
        config.validate();
        Runner runner(config);
        const Report rep = runner.dispatch();

        std::ostringstream text;
        if (config.format == OutputFormat::Json) {
            const nlohmann::json doc{{"schema", report_schema},
                                     {"config", config.to_json()},
                                     {"resolution_law", runner.law().to_json()},
                                     {"result", rep.result}};
            text << doc.dump(2) << '\n';
        } else {
            text << "# schema=" << report_schema << '\n'
                 << "# config=" << config.to_json().dump() << '\n'
                 << "# resolution_law=" << runner.law().to_json().dump() << '\n'
                 << rep.csv;
        }

        if (config.out.empty()) {
            out << text.str();
        } else {
            std::ofstream file(config.out, std::ios::binary);
            if (!(file << text.str()))
                throw std::runtime_error("cannot write " + config.out);
        }
        if (rep.inconclusive) {
            err << "inconclusive verdict\n";
            return exit_inconclusive;
        }
        return exit_ok;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_error;
    }
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    int code = exit_ok;
    const auto cfg = parse_command_line(argc, argv, out, err, code);
    if (!cfg)
        return code;
    return run(*cfg, out, err);
}

} // namespace hardylab
