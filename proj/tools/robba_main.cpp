// Command-line front end for the exact nonarchimedean series kernel:
// parses element expressions, dispatches to the kernel, emits JSON/TSV/SVG.

#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "robba/config.hpp"
#include "robba/json_io.hpp"
#include "robba/newton.hpp"
#include "robba/points.hpp"
#include "robba/tate.hpp"

using namespace robba;
using nlohmann::json;

namespace {

std::string read_arg(const std::string& s) {
    if (s != "-") return s;
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
}

std::string slurp_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::InvalidArgument, "cannot open file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void emit(const json& doc) { std::cout << doc.dump() << "\n"; }

json error_doc(const Error& e) {
    return json{{"error", {{"code", error_code_name(e.code())}, {"message", e.what()}}}};
}

json norm_doc(const NormExponent& e) {
    return json{{"exponent", e.value.str()}, {"reliable", e.reliable()}};
}

// Raw string options holding exact rationals until parsing finishes.
struct RawConfig {
    SessionConfig cfg;
    std::string r = "1", s = "1/2", prec_t = "96", stop = "24", residual = "10";
    std::vector<std::string> rho;

    void finish() {
        cfg.r = parse_rat(r);
        cfg.s = parse_rat(s);
        cfg.prec_t = parse_rat(prec_t);
        cfg.stop_exponent = parse_rat(stop);
        cfg.residual_exponent = parse_rat(residual);
        cfg.rho_log.clear();
        for (const auto& w : rho) cfg.rho_log.push_back(parse_rat(w));
    }
};

GeneratorFile load_generators(const std::string& path, const SessionConfig& cfg) {
    json j = json::parse(slurp_file(path));
    return generators_from_json(j, cfg.field(), cfg.prec_t);
}

std::string tsv_polygon(const NewtonPolygon& np) {
    std::string out;
    for (const auto& seg : np.segments)
        out += std::to_string(seg.slope.num()) + "\t" + std::to_string(seg.slope.den()) + "\t" +
               std::to_string(seg.multiplicity) + "\n";
    return out;
}

void write_svg(const std::string& path, const WittSeries& x) {
    auto verts = hull_vertices(x);
    auto pts = x.norm_points();
    double minx = 0, maxx = 1, miny = 0, maxy = 1;
    auto fx = [](const WittSeries::NormPoint& p) { return (double)p.n; };
    auto fy = [](const WittSeries::NormPoint& p) {
        return (double)p.v.num() / (double)p.v.den();
    };
    for (const auto& p : pts) {
        minx = std::min(minx, fx(p));
        maxx = std::max(maxx, fx(p));
        miny = std::min(miny, fy(p));
        maxy = std::max(maxy, fy(p));
    }
    const double W = 420, H = 320, pad = 30;
    double sx = (W - 2 * pad) / std::max(1.0, maxx - minx);
    double sy = (H - 2 * pad) / std::max(1.0, maxy - miny);
    auto px = [&](double X) { return pad + (X - minx) * sx; };
    auto py = [&](double Y) { return H - pad - (Y - miny) * sy; };

    std::ofstream out(path);
    if (!out) fail(ErrorCode::InvalidArgument, "cannot write " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\">\n";
    out << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" points=\"";
    for (const auto& v : verts) out << px(fx(v)) << "," << py(fy(v)) << " ";
    out << "\"/>\n";
    for (const auto& p : pts)
        out << "<circle cx=\"" << px(fx(p)) << "\" cy=\"" << py(fy(p))
            << "\" r=\"3\" fill=\"steelblue\"/>\n";
    out << "</svg>\n";
}

// Bounded worker pool preserving input order (multi-input norm).
std::vector<json> pooled(const std::vector<std::function<json()>>& jobs) {
    std::vector<json> results(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());
    std::mutex mu;
    size_t next = 0;
    auto worker = [&] {
        while (true) {
            size_t i;
            {
                std::lock_guard<std::mutex> lock(mu);
                if (next >= jobs.size()) return;
                i = next++;
            }
            try {
                results[i] = jobs[i]();
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    size_t nthreads = std::min<size_t>(jobs.size(), 4);
    std::vector<std::thread> threads;
    for (size_t i = 0; i < nthreads; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact arithmetic in extended Robba rings: Gauss norms, Newton polygons, "
                 "Euclidean division, Groebner-style reduction, and point geometry"};
    app.require_subcommand(1);
    app.set_config("--config");

    RawConfig raw;
    app.add_option("--p", raw.cfg.p, "characteristic p (prime)")->envname("ROBBA_P");
    app.add_option("--q-degree", raw.cfg.q_degree, "extension degree f, q = p^f")
        ->envname("ROBBA_Q_DEGREE");
    app.add_option("--r", raw.r, "outer radius exponent r")->envname("ROBBA_R");
    app.add_option("--s", raw.s, "inner radius exponent s")->envname("ROBBA_S");
    app.add_option("--rho", raw.rho, "Tate radii as p-exponents (repeat per variable)")
        ->envname("ROBBA_RHO");
    app.add_option("--prec-t", raw.prec_t, "Hahn working precision")->envname("ROBBA_PREC_T");
    app.add_option("--prec-pi", raw.cfg.prec_pi, "pi precision cap")->envname("ROBBA_PREC_PI");
    app.add_option("--denom-cap", raw.cfg.denom_cap, "exponent denominator cap (power of p)")
        ->envname("ROBBA_DENOM_CAP");
    app.add_option("--stop-exponent", raw.stop, "stop exponent for divisions")
        ->envname("ROBBA_STOP_EXPONENT");
    app.add_option("--residual-exponent", raw.residual, "verification tolerance exponent")
        ->envname("ROBBA_RESIDUAL_EXPONENT");
    bool want_json = false, want_tsv = false;
    app.add_flag("--json", want_json, "force JSON output");
    app.add_flag("--tsv", want_tsv, "force TSV output (polygon)");
    std::string svg_out;
    app.add_option("--svg", svg_out, "write an SVG rendering (polygon)");

    int exit_code = 0;
    json output;
    std::string text_output;

    // norm [--t RAT] (ELT | --batch FILE): batch lines run on a worker pool.
    auto* cmd_norm = app.add_subcommand("norm", "Gauss norm exponent at radius t");
    std::string norm_t, norm_elt, norm_batch;
    cmd_norm->add_option("--t", norm_t, "radius t (defaults to r)");
    cmd_norm->add_option("element", norm_elt, "element expression, - for stdin");
    cmd_norm->add_option("--batch", norm_batch, "file with one element per line");
    cmd_norm->callback([&] {
        raw.finish();
        Rat t = norm_t.empty() ? raw.cfg.r : parse_rat(norm_t);
        ParseContext ctx = raw.cfg.parse_context();
        if (norm_batch.empty()) {
            if (norm_elt.empty())
                fail(ErrorCode::InvalidArgument, "norm needs an element or --batch");
            output = norm_doc(parse_witt(read_arg(norm_elt), ctx).gauss_norm(t));
            return;
        }
        std::istringstream lines(slurp_file(norm_batch));
        std::vector<std::function<json()>> jobs;
        std::string line;
        while (std::getline(lines, line)) {
            if (line.empty()) continue;
            jobs.push_back(
                [line, t, ctx] { return norm_doc(parse_witt(line, ctx).gauss_norm(t)); });
        }
        output = json(pooled(jobs));
    });

    auto* cmd_polygon = app.add_subcommand("polygon", "Newton polygon over (0, r]");
    std::string poly_elt;
    bool poly_full = false;
    cmd_polygon->add_option("element", poly_elt, "element expression, - for stdin")->required();
    cmd_polygon->add_flag("--all-slopes", poly_full, "window (0, inf) instead of (0, r]");
    cmd_polygon->callback([&] {
        raw.finish();
        WittSeries x = parse_witt(read_arg(poly_elt), raw.cfg.parse_context());
        Window w = poly_full ? Window::upto(ExtRat::infinity()) : Window::upto(ExtRat(raw.cfg.r));
        NewtonPolygon np = polygon(x, w);
        if (!svg_out.empty()) write_svg(svg_out, x);
        if (want_json) {
            json segs = json::array();
            for (const auto& s : np.segments)
                segs.push_back({{"slope", s.slope.str()}, {"multiplicity", s.multiplicity}});
            output = json{{"segments", segs}};
        } else {
            text_output = tsv_polygon(np);
            if (text_output.empty()) text_output = "\n";
        }
    });

    auto* cmd_divide = app.add_subcommand("divide", "Euclidean division y = z*x + w at radius r");
    std::string div_y, div_x;
    cmd_divide->add_option("y", div_y, "dividend")->required();
    cmd_divide->add_option("x", div_x, "divisor")->required();
    cmd_divide->callback([&] {
        raw.finish();
        ParseContext ctx = raw.cfg.parse_context();
        WittSeries y = parse_witt(read_arg(div_y), ctx);
        WittSeries x = parse_witt(read_arg(div_x), ctx);
        DivisionResult d = divide(y, x, raw.cfg.r, raw.cfg.stop_exponent, raw.cfg.div_options());
        output = json{{"quotient", d.quotient.str()},
                      {"remainder", d.remainder.str()},
                      {"residual_exponent", d.residual_exponent.str()},
                      {"eps_exponent", d.eps_gap.str()},
                      {"status", div_status_name(d.status)}};
        if (d.status == DivStatus::PrecisionExhausted) exit_code = 1;
    });

    auto* cmd_gcd = app.add_subcommand("gcd", "gcd with Bezout certificate at radius r");
    std::string gcd_x, gcd_y;
    cmd_gcd->add_option("x", gcd_x)->required();
    cmd_gcd->add_option("y", gcd_y)->required();
    cmd_gcd->callback([&] {
        raw.finish();
        ParseContext ctx = raw.cfg.parse_context();
        WittSeries x = parse_witt(read_arg(gcd_x), ctx);
        WittSeries y = parse_witt(read_arg(gcd_y), ctx);
        GcdResult g = gcd_bezout(x, y, raw.cfg.r, raw.cfg.stop_exponent, raw.cfg.div_options());
        output = json{{"gcd", g.g.str()},
                      {"a", g.a.str()},
                      {"b", g.b.str()},
                      {"bezout_residual_exponent", g.bezout_residual.str()}};
    });

    auto* cmd_invert = app.add_subcommand("invert", "invert a unit of B^[s,r]");
    std::string inv_x, inv_target;
    cmd_invert->add_option("x", inv_x)->required();
    cmd_invert->add_option("--target", inv_target, "residual exponent target");
    cmd_invert->callback([&] {
        raw.finish();
        ParseContext ctx = raw.cfg.parse_context();
        WittSeries x = parse_witt(read_arg(inv_x), ctx);
        Rat target = inv_target.empty() ? raw.cfg.residual_exponent : parse_rat(inv_target);
        WittSeries inv = invert_unit(x, raw.cfg.interval(), target, raw.cfg.div_options());
        ExtRat res = (x * inv - WittSeries::one(ctx.field))
                         .interval_norm(raw.cfg.interval())
                         .lower_bound;
        output = json{{"inverse", inv.str()}, {"residual_exponent", res.str()}};
    });

    auto* cmd_reduce = app.add_subcommand("reduce", "Groebner-style reduction against generators");
    std::string red_gens, red_elt;
    cmd_reduce->add_option("--gens", red_gens, "generator JSON file")->required();
    cmd_reduce->add_option("element", red_elt)->required();
    cmd_reduce->callback([&] {
        raw.finish();
        GeneratorFile gf = load_generators(red_gens, raw.cfg);
        SessionConfig cfg = raw.cfg;
        cfg.rho_log = gf.radii_log;
        cfg.r = gf.r;
        ParseContext ctx = cfg.parse_context();
        ParsedElement e = parse_element(read_arg(red_elt), ctx);
        TateSeries y = e.tate ? *e.tate
                              : TateSeries::monomial(gf.radii_log, gf.r, *e.witt,
                                                     MultiIndex(gf.nvars, 0));
        TateOptions topts;
        topts.div = cfg.div_options();
        ReduceResult rr = reduce(y, gf.generators, cfg.stop_exponent, topts);
        json cof = json::array();
        for (const auto& a : rr.cofactors) cof.push_back(element_str(a));
        output = json{{"cofactors", cof}, {"remainder", element_str(rr.remainder)}};
    });

    auto* cmd_member = app.add_subcommand("member", "ideal membership with certificate");
    std::string mem_gens, mem_elt, mem_target;
    cmd_member->add_option("--gens", mem_gens, "generator JSON file")->required();
    cmd_member->add_option("--target", mem_target, "certificate residual exponent");
    cmd_member->add_option("element", mem_elt)->required();
    cmd_member->callback([&] {
        raw.finish();
        GeneratorFile gf = load_generators(mem_gens, raw.cfg);
        SessionConfig cfg = raw.cfg;
        cfg.rho_log = gf.radii_log;
        cfg.r = gf.r;
        ParseContext ctx = cfg.parse_context();
        ParsedElement e = parse_element(read_arg(mem_elt), ctx);
        TateSeries y = e.tate ? *e.tate
                              : TateSeries::monomial(gf.radii_log, gf.r, *e.witt,
                                                     MultiIndex(gf.nvars, 0));
        Rat target = mem_target.empty() ? cfg.stop_exponent : parse_rat(mem_target);
        TateOptions topts;
        topts.div = cfg.div_options();
        MembershipResult mr = membership(y, gf.generators, target, topts);
        if (mr.member) {
            json cert = json::array(), rounds = json::array();
            for (const auto& a : mr.certificate) cert.push_back(element_str(a));
            for (const auto& ex : mr.round_exponents) rounds.push_back(ex.str());
            output = json{{"member", true},
                          {"certificate", cert},
                          {"rounds", rounds},
                          {"eps_exponent", mr.eps_gap.str()}};
        } else {
            output = json{{"member", false}, {"residual", element_str(mr.residual)}};
            exit_code = 1;
        }
    });

    auto* cmd_complete = app.add_subcommand("complete", "S-pair/gcd-pair completion");
    std::string comp_gens;
    long long comp_rounds = 256;
    cmd_complete->add_option("--gens", comp_gens, "generator JSON file")->required();
    cmd_complete->add_option("--rounds", comp_rounds, "pair budget");
    cmd_complete->callback([&] {
        raw.finish();
        GeneratorFile gf = load_generators(comp_gens, raw.cfg);
        SessionConfig cfg = raw.cfg;
        cfg.rho_log = gf.radii_log;
        cfg.r = gf.r;
        TateOptions topts;
        topts.div = cfg.div_options();
        CompletionResult cr = strong_complete(gf.generators, comp_rounds, topts);
        json gens = json::array();
        for (const auto& g : cr.generators) gens.push_back(element_str(g));
        output = json{{"generators", gens},
                      {"complete", cr.complete},
                      {"pairs", cr.pairs_processed}};
    });

    auto* cmd_eval = app.add_subcommand("eval", "evaluate at the point cut out by pi - [u]");
    std::string eval_x, eval_at;
    cmd_eval->add_option("x", eval_x)->required();
    cmd_eval->add_option("--at", eval_at, "the element u (Hahn expression)")->required();
    cmd_eval->callback([&] {
        raw.finish();
        ParseContext ctx = raw.cfg.parse_context();
        WittSeries x = parse_witt(read_arg(eval_x), ctx);
        HahnSeries u = parse_hahn(eval_at, ctx);
        PrimitiveDeg1 z = primitive_check(
            WittSeries::pi_power(ctx.field, 1) - WittSeries::teichmuller(u), raw.cfg.prec_t);
        output = json{{"value", eval_at_primitive(x, z, raw.cfg.prec_t).str()}};
    });

    auto* cmd_semi = app.add_subcommand("seminorm", "evaluation seminorm exponent");
    std::string semi_x, semi_at;
    cmd_semi->add_option("x", semi_x)->required();
    cmd_semi->add_option("--at", semi_at)->required();
    cmd_semi->callback([&] {
        raw.finish();
        ParseContext ctx = raw.cfg.parse_context();
        WittSeries x = parse_witt(read_arg(semi_x), ctx);
        HahnSeries u = parse_hahn(semi_at, ctx);
        PrimitiveDeg1 z = primitive_check(
            WittSeries::pi_power(ctx.field, 1) - WittSeries::teichmuller(u), raw.cfg.prec_t);
        output = norm_doc(point_seminorm(x, z, raw.cfg.prec_t));
    });

    auto* cmd_hom = app.add_subcommand("homotopy", "homotopy seminorm on a factored element");
    std::string hom_x, hom_at, hom_rho = "inf";
    cmd_hom->add_option("factored", hom_x, "factored element JSON (inline, @file, or -)")
        ->required();
    cmd_hom->add_option("--at", hom_at, "center u (Hahn expression)")->required();
    cmd_hom->add_option("--rho-exp", hom_rho, "rho as a p-exponent; inf means rho = 0");
    cmd_hom->callback([&] {
        raw.finish();
        ParseContext ctx = raw.cfg.parse_context();
        std::string src = hom_x;
        if (!src.empty() && src[0] == '@')
            src = slurp_file(src.substr(1));
        else
            src = read_arg(src);
        FactoredElement fe = factored_from_json(json::parse(src), ctx);
        HahnSeries u = parse_hahn(hom_at, ctx);
        Valuation vu = u.valuation();
        if (!vu.exact || vu.bound.is_infinite() || !(vu.bound > ExtRat(Rat(0))))
            fail(ErrorCode::NotPrimitive, "center must have positive finite valuation");
        PrimitiveDeg1 center{u, Rat(1) / vu.bound.finite()};
        PointSpec spec{center, parse_extrat(hom_rho)};
        output = norm_doc(homotopy_seminorm(fe, spec));
    });

    auto* cmd_join = app.add_subcommand("join", "join radius of two same-slope centers");
    std::string join1, join2;
    cmd_join->add_option("--z1", join1)->required();
    cmd_join->add_option("--z2", join2)->required();
    cmd_join->callback([&] {
        raw.finish();
        ParseContext ctx = raw.cfg.parse_context();
        auto mk = [&](const std::string& s) {
            HahnSeries u = parse_hahn(s, ctx);
            Valuation v = u.valuation();
            if (!v.exact || v.bound.is_infinite() || !(v.bound > ExtRat(Rat(0))))
                fail(ErrorCode::NotPrimitive, "center must have positive finite valuation");
            return PrimitiveDeg1{u, Rat(1) / v.bound.finite()};
        };
        output = json{{"rho_exponent", join_radius(mk(join1), mk(join2)).str()}};
    });

    auto* cmd_factor = app.add_subcommand("factor", "slope factorization into primitive factors");
    std::string fac_x;
    cmd_factor->add_option("x", fac_x)->required();
    cmd_factor->callback([&] {
        raw.finish();
        ParseContext ctx = raw.cfg.parse_context();
        WittSeries x = parse_witt(read_arg(fac_x), ctx);
        FactorOptions fopts;
        fopts.work_prec = raw.cfg.prec_t;
        fopts.residual_target = raw.cfg.residual_exponent;
        FactoredElement fe = factor_primitive(x, raw.cfg.interval(), fopts);
        output = factored_to_json(fe);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const Error& e) {
        emit(error_doc(e));
        return e.code() == ErrorCode::SyntaxError ? 2 : 1;
    } catch (const nlohmann::json::exception& e) {
        emit(json{{"error", {{"code", "SyntaxError"}, {"message", e.what()}}}});
        return 2;
    } catch (const std::exception& e) {
        emit(json{{"error", {{"code", "Internal"}, {"message", e.what()}}}});
        return 1;
    }

    if (!text_output.empty())
        std::cout << text_output;
    else if (!output.is_null())
        emit(output);
    return exit_code;
}
