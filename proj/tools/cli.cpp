#include "cli.hpp"

#include "rogers/errors.hpp"
#include "rogers/fluctuation.hpp"
#include "rogers/montecarlo.hpp"
#include "rogers/spine.hpp"
#include "rogers/wiener_hopf.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <regex>
#include <set>
#include <sstream>

namespace rogers::cli {

using nlohmann::json;

namespace {

std::string num(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void dump(std::ostream& os, const json& j) {
    switch (j.type()) {
        case json::value_t::number_float: {
            double x = j.get<double>();
            os << (std::isfinite(x) ? num(x) : "null");
            break;
        }
        case json::value_t::array: {
            os << '[';
            bool first = true;
            for (const auto& e : j) {
                if (!first) os << ',';
                first = false;
                dump(os, e);
            }
            os << ']';
            break;
        }
        case json::value_t::object: {
            os << '{';
            bool first = true;
            for (const auto& [k, v] : j.items()) {
                if (!first) os << ',';
                first = false;
                os << json(k).dump() << ':';
                dump(os, v);
            }
            os << '}';
            break;
        }
        default: os << j.dump();
    }
}

double parse_real(const std::string& s, const std::string& field) {
    double x = 0;
    const char* end = s.data() + s.size();
    auto res = std::from_chars(s.data(), end, x);
    if (res.ec != std::errc() || res.ptr != end || !std::isfinite(x))
        throw ArgumentError("malformed number '" + s + "'", field);
    return x;
}

std::uint64_t parse_count(const std::string& s, const std::string& field) {
    std::uint64_t x = 0;
    const char* end = s.data() + s.size();
    auto res = std::from_chars(s.data(), end, x);
    if (res.ec != std::errc() || res.ptr != end) throw ArgumentError("malformed integer '" + s + "'", field);
    return x;
}

std::vector<double> parse_list(const std::string& s, const std::string& field) {
    std::vector<double> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');) out.push_back(parse_real(item, field));
    if (out.empty()) throw ArgumentError("empty list", field);
    return out;
}

cplx parse_complex(const std::string& s, const std::string& field) {
    auto v = parse_list(s, field);
    if (v.size() > 2) throw ArgumentError("expected re,im", field);
    return {v[0], v.size() == 2 ? v[1] : 0.0};
}

json cjson(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

struct Common {
    std::string spec_path;
    std::string out_path;
    std::string format = "json";
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--spec", c.spec_path, "spec JSON file")->required();
    sub->add_option("--out", c.out_path, "artifact path (default stdout)");
    sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

RogersSpec load(const Common& c) { return validate_spec(load_spec(c.spec_path)).spec; }

void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ArgumentError("cannot write '" + path + "'", "out");
    f << text;
}

json result(json query, json value, std::vector<std::string> chain, double err) {
    return {{"query", std::move(query)},
            {"value", std::move(value)},
            {"method_chain", std::move(chain)},
            {"err_estimate", err}};
}

// value,err_estimate table for scalar results
std::string scalar_csv(const json& r) {
    return "value,err_estimate\n" + num(r["value"].get<double>()) + "," + num(r["err_estimate"].get<double>()) +
           "\n";
}

void emit_result(const Common& c, const json& r, std::ostream& out) {
    if (c.format == "csv")
        emit(c.out_path, scalar_csv(r), out);
    else
        emit(c.out_path, dump_json(r), out);
}

json fluct_json(const json& query, const FluctResult& fr) {
    return result(query, fr.value, fr.method_chain, fr.err_estimate);
}

std::string spine_csv(const SpineTable& t) {
    std::string s = "r,theta,re_zeta,im_zeta,lambda,in_Z\n";
    for (const auto& p : t.points)
        s += num(p.r) + "," + num(p.theta) + "," + num(p.zeta.real()) + "," + num(p.zeta.imag()) + "," +
             num(p.lambda) + "," + (p.in_Z ? "1" : "0") + "\n";
    return s;
}

int exit_code(const Error& e) {
    static const std::set<std::string> input = {"argument_error", "validation_error", "domain_error",
                                                "rogers_violation", "method_unsupported",
                                                "convention_violation"};
    return input.count(e.code()) ? kBadInput : kFailed;
}

void emit_error(std::ostream& out, const std::string& code, const std::string& msg, const std::string& field) {
    out << dump_json({{"code", code}, {"message", msg}, {"field", field}});
}

}  // namespace

std::string dump_json(const json& j) {
    std::ostringstream os;
    dump(os, j);
    os << '\n';
    return os.str();
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rogers functions, Wiener-Hopf factors and fluctuation identities", "rogers-cli"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");
    std::function<int()> action;

    // eval
    Common ev;
    std::string ev_xi;
    auto* eval = app.add_subcommand("eval", "evaluate f at a point");
    add_common(eval, ev);
    eval->add_option("--xi", ev_xi, "re,im")->required();
    eval->callback([&] {
        action = [&] {
            RogersSpec spec = load(ev);
            cplx xi = parse_complex(ev_xi, "xi");
            cplx v = eval_f(spec, xi);
            json r = result({{"command", "eval"}, {"xi", cjson(xi)}}, cjson(v), {"eval_f"}, 0.0);
            if (ev.format == "csv")
                emit(ev.out_path, "re,im\n" + num(v.real()) + "," + num(v.imag()) + "\n", out);
            else
                emit(ev.out_path, dump_json(r), out);
            return kOk;
        };
    });

    // spine
    Common sp;
    std::string sp_rmin = "0.01", sp_rmax = "100", sp_n = "200", sp_regions, sp_extent = "5", sp_grid = "101";
    auto* spine = app.add_subcommand("spine", "tabulate the spine and profile; optional region grid");
    add_common(spine, sp);
    spine->add_option("--rmin", sp_rmin);
    spine->add_option("--rmax", sp_rmax);
    spine->add_option("--n", sp_n);
    spine->add_option("--regions", sp_regions, "CSV path for the D+/D- classification grid");
    spine->add_option("--extent", sp_extent, "grid half-width");
    spine->add_option("--grid", sp_grid, "grid points per axis");
    spine->callback([&] {
        action = [&] {
            RogersSpec spec = load(sp);
            double rmin = parse_real(sp_rmin, "rmin"), rmax = parse_real(sp_rmax, "rmax");
            auto n = parse_count(sp_n, "n");
            if (!(rmin > 0 && rmax > rmin)) throw ArgumentError("need 0 < rmin < rmax", "rmin");
            if (n < 2 || n > 1000000) throw ArgumentError("n must lie in [2, 1e6]", "n");
            SpineTable t = build_spine_table(spec, rmin, rmax, static_cast<int>(n));

            json z = json::array();
            for (auto [a, b] : t.z_intervals) z.push_back({a, b});
            json summary = {{"query", {{"command", "spine"}, {"rmin", rmin}, {"rmax", rmax}, {"n", n}}},
                            {"z_intervals", z},
                            {"boundary_mismatch", t.boundary_mismatch},
                            {"rows", t.points.size()}};
            if (!sp.out_path.empty()) {
                emit(sp.out_path, spine_csv(t), out);
                out << dump_json(summary);
            } else if (sp.format == "csv") {
                out << spine_csv(t);
            } else {
                json pts = json::array();
                for (const auto& p : t.points)
                    pts.push_back({{"r", p.r}, {"theta", p.theta}, {"zeta", cjson(p.zeta)},
                                   {"lambda", p.lambda}, {"in_Z", p.in_Z}});
                summary["points"] = pts;
                out << dump_json(summary);
            }

            if (!sp_regions.empty()) {
                double ext = parse_real(sp_extent, "extent");
                auto g = parse_count(sp_grid, "grid");
                if (!(ext > 0) || g < 2) throw ArgumentError("need extent > 0 and grid >= 2", "grid");
                FnPtr f = make_fn(spec);
                std::string s = "x,y,region\n";
                for (std::uint64_t i = 1; i <= g; ++i)
                    for (std::uint64_t j = 0; j < g; ++j) {
                        double x = ext * double(i) / double(g);
                        double y = -ext + 2 * ext * double(j) / double(g - 1);
                        s += num(x) + "," + num(y) + "," + region_name(classify_point(*f, cplx(x, y))) + "\n";
                    }
                emit(sp_regions, s, out);
            }
            return kOk;
        };
    });

    // factor
    Common fa;
    std::string fa_method = "bd", fa_side = "plus", fa_xi1, fa_xi2, fa_tau = "0";
    auto* factor = app.add_subcommand("factor", "ratio f+(xi1)/f+(xi2) of Wiener-Hopf factors of tau + f");
    add_common(factor, fa);
    factor->add_option("--method", fa_method, "bd, spine or phi");
    factor->add_option("--side", fa_side, "plus or minus");
    factor->add_option("--xi1", fa_xi1)->required();
    factor->add_option("--xi2", fa_xi2)->required();
    factor->add_option("--tau", fa_tau);
    factor->callback([&] {
        action = [&] {
            RogersSpec spec = load(fa);
            WhMethod m = parse_method(fa_method);
            Side side = parse_side(fa_side);
            double x1 = parse_real(fa_xi1, "xi1"), x2 = parse_real(fa_xi2, "xi2"), tau = parse_real(fa_tau, "tau");
            if (!(x1 >= 0)) throw DomainError("xi1 must be >= 0", "xi1");
            if (!(x2 >= 0)) throw DomainError("xi2 must be >= 0", "xi2");
            if (!(tau >= 0)) throw DomainError("tau must be >= 0", "tau");
            WhSolver solver(make_fn(spec));
            FactorResult fr = solver.ratio(m, side, tau, x1, x2);
            json r = result({{"command", "factor"}, {"method", fa_method}, {"side", fa_side}, {"xi1", x1},
                             {"xi2", x2}, {"tau", tau}},
                            fr.value, {std::string("wh_ratio:") + method_name(m)}, fr.err_estimate);
            r["method"] = method_name(m);
            r["side"] = side_name(side);
            r["xi1"] = x1;
            r["xi2"] = x2;
            emit_result(fa, r, out);
            return kOk;
        };
    });

    // fluct
    auto* fluct = app.add_subcommand("fluct", "fluctuation identities over an Exp(sigma) horizon");
    fluct->require_subcommand(1);

    Common sl;
    std::string sl_sigma = "1", sl_xi, sl_side = "plus";
    auto* sup_laplace = fluct->add_subcommand("sup-laplace", "E exp(-xi sup)");
    add_common(sup_laplace, sl);
    sup_laplace->add_option("--sigma", sl_sigma);
    sup_laplace->add_option("--xi", sl_xi)->required();
    sup_laplace->add_option("--side", sl_side);
    sup_laplace->callback([&] {
        action = [&] {
            Fluctuation fl(load(sl));
            SpaceTimeQuery q{parse_real(sl_sigma, "sigma"), 0.0, parse_real(sl_xi, "xi"), parse_side(sl_side)};
            json query = {{"command", "fluct sup-laplace"}, {"sigma", q.sigma}, {"xi", q.xi}, {"side", sl_side}};
            emit_result(sl, fluct_json(query, fl.pr_laplace(q)), out);
            return kOk;
        };
    });

    Common pr;
    std::string pr_sigma = "1", pr_tau = "0", pr_xi, pr_side = "plus";
    auto* prc = fluct->add_subcommand("pr", "E exp(-xi sup - tau argmax)");
    add_common(prc, pr);
    prc->add_option("--sigma", pr_sigma);
    prc->add_option("--tau", pr_tau);
    prc->add_option("--xi", pr_xi)->required();
    prc->add_option("--side", pr_side);
    prc->callback([&] {
        action = [&] {
            Fluctuation fl(load(pr));
            SpaceTimeQuery q{parse_real(pr_sigma, "sigma"), parse_real(pr_tau, "tau"), parse_real(pr_xi, "xi"),
                             parse_side(pr_side)};
            json query = {{"command", "fluct pr"}, {"sigma", q.sigma}, {"tau", q.tau}, {"xi", q.xi},
                          {"side", pr_side}};
            emit_result(pr, fluct_json(query, fl.pr_laplace(q)), out);
            return kOk;
        };
    });

    Common st;
    std::string st_sigma = "1", st_x, st_side = "plus";
    auto* sup_tail = fluct->add_subcommand("sup-tail", "P(sup > x)");
    add_common(sup_tail, st);
    sup_tail->add_option("--sigma", st_sigma);
    sup_tail->add_option("--x", st_x)->required();
    sup_tail->add_option("--side", st_side);
    sup_tail->callback([&] {
        action = [&] {
            Fluctuation fl(load(st));
            double sigma = parse_real(st_sigma, "sigma"), x = parse_real(st_x, "x");
            json query = {{"command", "fluct sup-tail"}, {"sigma", sigma}, {"x", x}, {"side", st_side}};
            emit_result(st, fluct_json(query, fl.sup_tail(sigma, x, parse_side(st_side))), out);
            return kOk;
        };
    });

    Common kr;
    std::string kr_side = "plus", kr_method = "bd", kr_tau, kr_xi1, kr_xi2, kr_xi, kr_tau1, kr_tau2;
    auto* kappa = fluct->add_subcommand(
        "kappa-ratio", "kappa(tau, xi1)/kappa(tau, xi2) with --tau, or kappa(tau1, xi)/kappa(tau2, xi) with --xi");
    add_common(kappa, kr);
    kappa->add_option("--side", kr_side);
    kappa->add_option("--method", kr_method, "bd, spine or phi (ratio in xi)");
    auto* o_tau = kappa->add_option("--tau", kr_tau);
    auto* o_xi1 = kappa->add_option("--xi1", kr_xi1);
    auto* o_xi2 = kappa->add_option("--xi2", kr_xi2);
    auto* o_xi = kappa->add_option("--xi", kr_xi);
    auto* o_tau1 = kappa->add_option("--tau1", kr_tau1);
    auto* o_tau2 = kappa->add_option("--tau2", kr_tau2);
    o_tau->needs(o_xi1, o_xi2)->excludes(o_xi);
    o_xi->needs(o_tau1, o_tau2);
    kappa->callback([&] {
        action = [&] {
            Fluctuation fl(load(kr));
            Side side = parse_side(kr_side);
            json query = {{"command", "fluct kappa-ratio"}, {"side", kr_side}};
            FluctResult fr;
            if (!kr_tau.empty()) {
                double tau = parse_real(kr_tau, "tau"), x1 = parse_real(kr_xi1, "xi1"), x2 = parse_real(kr_xi2, "xi2");
                query.update({{"tau", tau}, {"xi1", x1}, {"xi2", x2}, {"method", kr_method}});
                fr = fl.kappa_ratio_xi(tau, x1, x2, side, parse_method(kr_method));
            } else if (!kr_xi.empty()) {
                double xi = parse_real(kr_xi, "xi"), t1 = parse_real(kr_tau1, "tau1"), t2 = parse_real(kr_tau2, "tau2");
                query.update({{"xi", xi}, {"tau1", t1}, {"tau2", t2}});
                fr = fl.kappa_ratio_tau(xi, t1, t2, side);
            } else {
                throw ArgumentError("give --tau with --xi1 --xi2, or --xi with --tau1 --tau2", "tau");
            }
            emit_result(kr, fluct_json(query, fr), out);
            return kOk;
        };
    });

    // mc
    Common mc;
    std::string mc_sigma = "1", mc_n = "200000", mc_seed = "1", mc_xi = "0.5,1,2", mc_tau = "0", mc_x,
                mc_samples;
    auto* mcc = app.add_subcommand("mc", "Monte Carlo supremum over an Exp(sigma) horizon");
    add_common(mcc, mc);
    mcc->add_option("--sigma", mc_sigma);
    mcc->add_option("--n", mc_n);
    mcc->add_option("--seed", mc_seed);
    mcc->add_option("--xi", mc_xi, "comma-separated xi values");
    mcc->add_option("--tau", mc_tau, "comma-separated tau values for the joint transform");
    mcc->add_option("--x", mc_x, "comma-separated tail levels");
    mcc->add_option("--samples-out", mc_samples, "CSV dump of the samples");
    mcc->callback([&] {
        action = [&] {
            RogersSpec spec = load(mc);
            double sigma = parse_real(mc_sigma, "sigma");
            auto n = parse_count(mc_n, "n");
            auto seed = parse_count(mc_seed, "seed");
            if (n == 0) throw ArgumentError("n must be positive", "n");
            std::vector<McQuery> qs;
            for (double xi : parse_list(mc_xi, "xi"))
                for (double tau : parse_list(mc_tau, "tau"))
                    qs.push_back(tau == 0 ? McQuery::laplace(xi) : McQuery::joint(xi, tau));
            if (!mc_x.empty())
                for (double x : parse_list(mc_x, "x")) qs.push_back(McQuery::tail(x));

            auto set = simulate_sup_samples(spec, sigma, n, seed);
            auto est = mc_estimates(set, qs);
            if (!mc_samples.empty()) {
                std::ostringstream os;
                write_samples_csv(os, set.samples);
                emit(mc_samples, os.str(), out);
            }

            static const char* kinds[] = {"laplace", "tail", "joint"};
            json vals = json::array();
            std::string csv = "kind,xi,tau,x,mean,std_error\n";
            double worst = 0;
            for (size_t i = 0; i < qs.size(); ++i) {
                const char* k = kinds[static_cast<int>(qs[i].kind)];
                vals.push_back({{"kind", k}, {"xi", qs[i].xi}, {"tau", qs[i].tau}, {"x", qs[i].x},
                                {"mean", est[i].mean}, {"std_error", est[i].std_error}});
                csv += std::string(k) + "," + num(qs[i].xi) + "," + num(qs[i].tau) + "," + num(qs[i].x) + "," +
                       num(est[i].mean) + "," + num(est[i].std_error) + "\n";
                worst = std::max(worst, est[i].std_error);
            }
            json query = {{"command", "mc"}, {"sigma", sigma}, {"n", n}, {"seed", seed}};
            json r = result(query, vals, {"simulate_sup_samples", "mc_estimates"}, worst);
            emit(mc.out_path, mc.format == "csv" ? csv : dump_json(r), out);
            return kOk;
        };
    });

    // verify
    Common ve;
    std::string ve_suite, ve_tol, ve_n = "200000", ve_seed = "1";
    auto* verify = app.add_subcommand("verify", "run a verification suite; exit 1 on failures");
    add_common(verify, ve);
    verify->add_option("--suite", ve_suite, "core, spine, wh, fluct or mc")
        ->required()
        ->check(CLI::IsMember({"core", "spine", "wh", "fluct", "mc"}));
    verify->add_option("--tol", ve_tol);
    verify->add_option("--n", ve_n, "sample count for the mc suite");
    verify->add_option("--seed", ve_seed);
    verify->callback([&] {
        action = [&] {
            RogersSpec spec = load(ve);
            SuiteOptions opt;
            if (!ve_tol.empty()) {
                opt.tol = parse_real(ve_tol, "tol");
                if (!(*opt.tol >= 0)) throw ArgumentError("tol must be >= 0", "tol");
            }
            opt.mc_n = parse_count(ve_n, "n");
            opt.seed = parse_count(ve_seed, "seed");
            if (opt.mc_n < 2) throw ArgumentError("n must be at least 2", "n");
            VerifyReport rep = run_suite(ve_suite, spec, opt);
            emit(ve.out_path, dump_json(rep.to_json()), out);
            return rep.passed() ? kOk : kFailed;
        };
    });

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        err << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        err << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        std::smatch m;
        std::string msg = e.what(), field;
        if (std::regex_search(msg, m, std::regex("--([a-z0-9-]+)"))) field = m[1];
        emit_error(out, "argument_error", msg, field);
        return kBadInput;
    }

    try {
        return action();
    } catch (const Error& e) {
        emit_error(out, e.code(), e.what(), e.field());
        return exit_code(e);
    } catch (const std::exception& e) {
        emit_error(out, "internal_error", e.what(), "");
        return kFailed;
    }
}

}  // namespace rogers::cli
