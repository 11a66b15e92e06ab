#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include "qiso/errors.hpp"
#include "qiso/families.hpp"
#include "qiso/fraenkel.hpp"
#include "qiso/json_io.hpp"
#include "qiso/special.hpp"
#include "qiso/svg.hpp"
#include "qiso/symmetrize.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr double kPi = std::numbers::pi;

using qiso::json;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

// Options shared by every verb.
struct Common {
    bool as_json = false;
    std::string svg_path;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    double tol = 1e-8;
    int starts = 24;
    int grid = 50;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_flag("--json", c.as_json, "emit a machine-readable JSON document");
    cmd->add_option("--svg", c.svg_path, "write an SVG rendering to this path");
    cmd->add_option("--seed", c.seed, "random seed for seeded commands");
    cmd->add_option("--threads", c.threads, "worker threads (0 = all cores)");
    cmd->add_option("--tol", c.tol, "value tolerance for near-tie reporting (default 1e-8)");
    cmd->add_option("--starts", c.starts, "multistart descents kept in the asymmetry search");
    cmd->add_option("--grid", c.grid, "grid resolution for scans and lattices");
}

qiso::SearchConfig search_config(const Common& c) {
    qiso::SearchConfig cfg;
    cfg.max_descents = c.starts;
    cfg.value_tol_factor = c.tol * 10.0;
    cfg.threads = c.threads;
    return cfg;
}

// FNV-1a over the command line and any input files, for the run record.
struct Hasher {
    std::uint64_t h = 1469598103934665603ull;
    void feed(const std::string& s) {
        for (unsigned char ch : s) {
            h ^= ch;
            h *= 1099511628211ull;
        }
    }
};

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

json run_record(const Hasher& hash, std::uint64_t seed) {
    return {{"version", kVersion}, {"inputs_hash", hex64(hash.h)}, {"seed", seed}};
}

void write_svg(const std::string& path, const qiso::ArcRegion& region,
               const qiso::SvgAnnotations& ann) {
    std::ofstream out(path);
    if (!out) throw qiso::domain_error("cannot write SVG file: " + path);
    out << qiso::render_svg(region, ann);
}

qiso::SvgAnnotations annotate(const qiso::ArcRegion& region, const std::vector<qiso::Vec2>& centers,
                              double radius, bool axes = false) {
    qiso::SvgAnnotations ann;
    for (const auto& c : centers) {
        ann.balls.push_back({c, radius});
        try {
            for (const auto& cr : qiso::circle_boundary_intersections(region, {c, radius}))
                ann.points.push_back(cr.p);
        } catch (const qiso::transversality_error&) {
        }
        if (axes) {
            const double ext = 1.6 * radius;
            ann.axes.push_back({c - qiso::Vec2(ext, 0), c + qiso::Vec2(ext, 0)});
            ann.axes.push_back({c - qiso::Vec2(0, ext), c + qiso::Vec2(0, ext)});
        }
    }
    return ann;
}

void emit(const Common& c, const json& doc, const std::string& human) {
    if (c.as_json)
        std::cout << doc.dump(2) << "\n";
    else
        std::cout << human;
}

std::string family_table(const qiso::FamilyReport& rep) {
    std::string s;
    s += "  area      " + num(rep.area) + "\n";
    s += "  perimeter " + num(rep.perim) + "\n";
    s += "  delta     " + num(rep.delta) + "\n";
    s += "  lambda    " + num(rep.lambda) + "\n";
    s += "  F         " + num(rep.value) + "\n";
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantitative isoperimetric quantities for arc-bounded planar regions"};
    app.require_subcommand(1);

    Hasher hash;
    for (int i = 1; i < argc; ++i) {
        // thread count may not influence outputs, so it is not an input
        const std::string arg = argv[i];
        if (arg == "--threads" || arg.rfind("--threads=", 0) == 0) {
            if (arg == "--threads" && i + 1 < argc) ++i;
            continue;
        }
        hash.feed(arg);
    }

    Common common;
    std::string shape_path, emit_shape, out_path, lemma = "L413";
    double alpha = 0, theta = 0, x0 = -1, eta1 = 0, eta2 = 0, eps = 0;
    int order = 2, count = 1000;
    bool nonconnected = false;

    auto* metrics = app.add_subcommand("metrics", "area, perimeter, deficit and asymmetry of a shape");
    metrics->add_option("--shape", shape_path, "shape JSON file")->required();
    metrics->add_option("--emit-shape", emit_shape, "write the parsed shape back as JSON");
    add_common(metrics, common);

    auto* asym = app.add_subcommand("asymmetry", "Fraenkel asymmetry and every optimal ball center");
    asym->add_option("--shape", shape_path, "shape JSON file")->required();
    add_common(asym, common);

    auto* sym = app.add_subcommand("symmetrize", "four-arc rearrangement of a shape");
    sym->add_option("--shape", shape_path, "shape JSON file")->required();
    sym->add_option("--out", out_path, "write the symmetrized shape JSON here");
    add_common(sym, common);

    auto* mask = app.add_subcommand("mask", "three-parameter mask family");
    auto* mask_eval = mask->add_subcommand("eval", "closed-form metrics at given parameters");
    mask_eval->add_option("--alpha", alpha, "cap opening angle")->required();
    mask_eval->add_option("--theta", theta, "bump chord angle")->required();
    mask_eval->add_option("--x0", x0, "ball center offset (default: solve area = pi)");
    add_common(mask_eval, common);
    auto* mask_opt = mask->add_subcommand("optimize", "minimize the functional over the family");
    add_common(mask_opt, common);
    mask->require_subcommand(1);

    auto* oval = app.add_subcommand("oval", "two-cap oval family");
    auto* oval_eval = oval->add_subcommand("eval", "closed-form metrics at given parameters");
    oval_eval->add_option("--eta1", eta1, "outer cap half-angle")->required();
    oval_eval->add_option("--eta2", eta2, "inner cap half-angle")->required();
    oval_eval->add_option("--eps", eps, "cap area (|region D ball| = 4 eps)")->required();
    add_common(oval_eval, common);
    oval->require_subcommand(1);

    auto* rotsym = app.add_subcommand("rotsym", "N-fold one-ball candidate family");
    auto* rotsym_eval = rotsym->add_subcommand("eval", "closed forms and optimality diagnostics");
    rotsym_eval->add_option("--n", order, "symmetry order")->required();
    rotsym_eval->add_option("--theta", theta, "bump chord angle")->required();
    rotsym_eval->add_option("--alpha", alpha, "arc opening angle")->required();
    rotsym_eval->add_flag("--nonconnected", nonconnected, "add the far ball component");
    add_common(rotsym_eval, common);
    rotsym->require_subcommand(1);

    auto* stadium = app.add_subcommand("stadium", "stadium family (convex minimizer)");
    auto* stadium_opt = stadium->add_subcommand("optimize", "minimize the functional over stadiums");
    add_common(stadium_opt, common);
    stadium->require_subcommand(1);

    auto* scan = app.add_subcommand("scan", "grid scan of an exclusion-lemma region");
    scan->add_option("--lemma", lemma, "lemma id (or 'all')")->required();
    add_common(scan, common);

    auto* soak = app.add_subcommand("soak", "random-shape sweep of the functional");
    soak->add_option("--n", count, "number of shapes");
    add_common(soak, common);

    auto* render = app.add_subcommand("render", "render a shape JSON to SVG");
    render->add_option("--shape", shape_path, "shape JSON file")->required();
    add_common(render, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const auto started = std::chrono::steady_clock::now();
    try {
        if (!shape_path.empty()) {
            std::ifstream in(shape_path);
            if (in) hash.feed(std::string(std::istreambuf_iterator<char>(in), {}));
        }
        const json record = run_record(hash, common.seed);

        if (*metrics || *asym) {
            const auto region = qiso::load_region(shape_path);
            const auto bad = qiso::validate(region);
            if (!bad.empty()) throw qiso::domain_error("invalid shape: " + bad.front());
            const double a = qiso::area(region), p = qiso::perimeter(region);
            const double d = qiso::deficit(region);
            const auto res = qiso::optimal_balls(region, search_config(common));
            json doc{{"area", a},   {"perimeter", p},       {"delta", d},
                     {"lambda", res.lambda}, {"asymmetry", qiso::to_json(res)}, {"run", record}};
            std::string human;
            human += "area       " + num(a) + "\n";
            human += "perimeter  " + num(p) + "\n";
            human += "delta      " + num(d) + "\n";
            human += "lambda     " + num(res.lambda) + "\n";
            if (res.lambda > 1e-6) {
                const double f = d / (res.lambda * res.lambda);
                doc["value"] = f;
                human += "F          " + num(f) + "\n";
            } else {
                doc["value"] = nullptr;
                human += "F          undefined (near-ball)\n";
            }
            for (const auto& c : res.optimal_centers)
                human += "center     (" + num(c.x()) + ", " + num(c.y()) + ")\n";
            if (*metrics && !emit_shape.empty()) qiso::save_region(region, emit_shape);
            if (!common.svg_path.empty())
                write_svg(common.svg_path, region,
                          annotate(region, res.optimal_centers, qiso::matched_radius(region)));
            emit(common, doc, human);
        } else if (*sym) {
            const auto region = qiso::load_region(shape_path);
            const auto s = qiso::symmetrize(region, search_config(common));
            json doc{{"eta_out", s.eta_out},     {"eta_in", s.eta_in},
                     {"theta_out", s.theta_out}, {"theta_in", s.theta_in},
                     {"ball", {{"center", {s.ball.center.x(), s.ball.center.y()}}, {"radius", s.ball.radius}}},
                     {"area", qiso::area(s.region)},
                     {"symm_diff", qiso::symm_diff_area(s.region, s.ball)},
                     {"shape", qiso::region_to_json(s.region)},
                     {"run", record}};
            std::string human;
            human += "eta_out    " + num(s.eta_out) + "\n";
            human += "theta_out  " + num(s.theta_out) + "\n";
            human += "eta_in     " + num(s.eta_in) + "\n";
            human += "theta_in   " + num(s.theta_in) + "\n";
            human += "area       " + num(qiso::area(s.region)) + "\n";
            human += "symm diff  " + num(qiso::symm_diff_area(s.region, s.ball)) + "\n";
            if (!out_path.empty()) qiso::save_region(s.region, out_path);
            if (!common.svg_path.empty())
                write_svg(common.svg_path, s.region,
                          annotate(s.region, {s.ball.center}, s.ball.radius, true));
            emit(common, doc, human);
        } else if (*mask_eval) {
            if (x0 < 0.0) x0 = qiso::mask_x0_from_area(alpha, theta);
            const qiso::MaskParams p{alpha, theta, x0};
            const auto rep = qiso::mask_metrics(p);
            json doc{{"alpha", alpha}, {"theta", theta}, {"x0", x0},
                     {"report", qiso::to_json(rep)}, {"run", record}};
            std::string human = "x0         " + num(x0) + "\n" + family_table(rep);
            human += "  R1 R2 R3  " + num(rep.r0) + "  " + num(rep.r1) + "  " + num(*rep.r2) + "\n";
            if (!common.svg_path.empty()) {
                const auto region = qiso::mask_construct(p);
                write_svg(common.svg_path, region,
                          annotate(region, {{x0, 0.0}, {-x0, 0.0}}, 1.0, true));
            }
            emit(common, doc, human);
        } else if (*mask_opt) {
            const auto opt = qiso::mask_optimize(common.grid >= 4 ? std::min(common.grid, 32) : 16);
            json doc{{"alpha", opt.params.alpha},
                     {"theta", opt.params.theta},
                     {"x0", opt.params.x0},
                     {"c_star", 1.0 / opt.report.value},
                     {"report", qiso::to_json(opt.report)},
                     {"run", record}};
            std::string human;
            human += "alpha      " + num(opt.params.alpha) + "\n";
            human += "theta      " + num(opt.params.theta) + "\n";
            human += "x0         " + num(opt.params.x0) + "\n";
            human += "F          " + num(opt.report.value) + "\n";
            human += "c*         " + num(1.0 / opt.report.value) + "\n";
            if (!common.svg_path.empty()) {
                const auto region = qiso::mask_construct(opt.params);
                write_svg(common.svg_path, region,
                          annotate(region, {{opt.params.x0, 0.0}, {-opt.params.x0, 0.0}}, 1.0, true));
            }
            emit(common, doc, human);
        } else if (*oval_eval) {
            const qiso::OvalParams p{eta1, eta2, eps};
            const auto rep = qiso::oval_metrics(p);
            json doc{{"eta1", eta1}, {"eta2", eta2}, {"eps", eps},
                     {"report", qiso::to_json(rep)}, {"run", record}};
            if (!common.svg_path.empty()) {
                const auto region = qiso::oval_construct(p);
                write_svg(common.svg_path, region, annotate(region, {{0.0, 0.0}}, 1.0, true));
            }
            emit(common, doc, family_table(rep));
        } else if (*rotsym_eval) {
            const qiso::RotSymParams p{order, theta, alpha, !nonconnected};
            const auto rep = qiso::rotsym_metrics(p);
            const auto cond = qiso::condition_check(rep, p);
            json jc{{"balance", cond.balance},
                    {"curvature", cond.curvature},
                    {"below_threshold", cond.below_threshold},
                    {"satisfied", cond.satisfied}};
            if (cond.q) jc["q"] = *cond.q;
            if (cond.phi) jc["phi"] = *cond.phi;
            json doc{{"n", order}, {"theta", theta}, {"alpha", alpha},
                     {"connected", !nonconnected}, {"report", qiso::to_json(rep)},
                     {"conditions", jc}, {"run", record}};
            std::string human = family_table(rep);
            human += "  balance residual   " + num(cond.balance) + "\n";
            human += "  curvature residual " + num(cond.curvature) + "\n";
            if (cond.q) human += "  Q                  " + num(*cond.q) + "\n";
            if (cond.phi) human += "  Phi                " + num(*cond.phi) + "\n";
            if (!common.svg_path.empty()) {
                const auto region = qiso::rotsym_construct(p);
                write_svg(common.svg_path, region, annotate(region, {{0.0, 0.0}}, 1.0));
            }
            emit(common, doc, human);
        } else if (*stadium_opt) {
            const auto st = qiso::stadium_optimize();
            json doc{{"aspect", st.aspect},         {"half_length", st.half_length},
                     {"cap_radius", st.cap_radius}, {"delta", st.delta},
                     {"lambda", st.lambda},         {"value", st.value},
                     {"run", record}};
            std::string human;
            human += "aspect     " + num(st.aspect) + "\n";
            human += "L, r       " + num(st.half_length) + ", " + num(st.cap_radius) + "\n";
            human += "delta      " + num(st.delta) + "\n";
            human += "lambda     " + num(st.lambda) + "\n";
            human += "F          " + num(st.value) + "\n";
            if (!common.svg_path.empty()) {
                const auto region = qiso::stadium_construct(st.aspect);
                write_svg(common.svg_path, region, annotate(region, {{0.0, 0.0}}, 1.0, true));
            }
            emit(common, doc, human);
        } else if (*scan) {
            std::vector<std::string> ids =
                lemma == "all" ? qiso::lemma_ids() : std::vector<std::string>{lemma};
            json docs = json::array();
            std::string human;
            bool all_pass = true;
            for (const auto& id : ids) {
                const auto rep = qiso::lemma_scan(id, common.grid, common.threads);
                docs.push_back(qiso::to_json(rep));
                all_pass = all_pass && rep.passed;
                human += (rep.passed ? "PASS " : "FAIL ") + id + "  worst margin " +
                         num(rep.worst_margin) + " at N=" + std::to_string(rep.worst_n) +
                         " theta=" + num(rep.worst_theta) + " alpha=" + num(rep.worst_alpha) +
                         "  (" + std::to_string(rep.points) + " points)\n";
            }
            json doc{{"scans", docs}, {"run", record}};
            emit(common, doc, human);
            if (!all_pass) return 1;
        } else if (*soak) {
            const auto rep = qiso::soak_random(count, common.seed, search_config(common), common.threads);
            json doc = qiso::to_json(rep);
            doc["run"] = record;
            std::string human;
            human += std::string(rep.passed ? "PASS" : "FAIL") + " soak n=" + std::to_string(rep.n) +
                     " seed=" + std::to_string(rep.seed) + "\n";
            human += "min F      " + num(rep.min_value) + " (" + rep.min_kind + ", index " +
                     std::to_string(rep.min_index) + ")\n";
            human += "max l^2/d  " + num(rep.worst_ratio) + "\n";
            human += "anomalies  " + std::to_string(rep.anomalies.size()) + "\n";
            emit(common, doc, human);
            if (!rep.passed) return 1;
        } else if (*render) {
            const auto region = qiso::load_region(shape_path);
            const auto res = qiso::optimal_balls(region, search_config(common));
            const std::string path = common.svg_path.empty() ? shape_path + ".svg" : common.svg_path;
            write_svg(path, region, annotate(region, res.optimal_centers, qiso::matched_radius(region)));
            json doc{{"svg", path}, {"lambda", res.lambda}, {"run", record}};
            emit(common, doc, "wrote " + path + "\n");
        }

        if (!common.as_json) {
            const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started);
            std::cerr << "(" << num(elapsed.count()) << " s)\n";
        }
    } catch (const qiso::numeric_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    } catch (const qiso::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
