#include "qiso/json_io.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "qiso/errors.hpp"

namespace qiso {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

json point_json(const Vec2& p) { return json::array({p.x(), p.y()}); }

Vec2 point_from(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw domain_error("shape json: point must be [x, y]");
    return Vec2(j[0].get<double>(), j[1].get<double>());
}
}  // namespace

json region_to_json(const ArcRegion& region) {
    json loops = json::array();
    for (const auto& loop : region.loops) {
        json edges = json::array();
        for (const auto& e : loop) {
            if (e.kind == Edge::Kind::segment) {
                edges.push_back({{"type", "segment"}, {"from", point_json(e.a)}, {"to", point_json(e.b)}});
            } else {
                edges.push_back({{"type", "arc"},
                                 {"center", point_json(e.center)},
                                 {"radius", e.radius},
                                 {"start", e.start},
                                 {"end", e.start + e.sweep},
                                 {"ccw", e.sweep > 0.0}});
            }
        }
        loops.push_back(std::move(edges));
    }
    return json{{"loops", std::move(loops)}};
}

ArcRegion region_from_json(const json& j) {
    if (!j.is_object() || !j.contains("loops") || !j["loops"].is_array())
        throw domain_error("shape json: expected {\"loops\": [[edge, ...], ...]}");
    ArcRegion region;
    for (const auto& jl : j["loops"]) {
        if (!jl.is_array()) throw domain_error("shape json: each loop must be an array of edges");
        Loop loop;
        for (const auto& je : jl) {
            const std::string type = je.value("type", "");
            if (type == "segment") {
                loop.push_back(Edge::segment(point_from(je.at("from")), point_from(je.at("to"))));
            } else if (type == "arc") {
                const double radius = je.at("radius").get<double>();
                if (!(radius > 0.0)) throw domain_error("shape json: arc radius must be positive");
                const double start = je.at("start").get<double>();
                const double end = je.at("end").get<double>();
                const bool ccw = je.value("ccw", true);
                double sweep = ccw ? end - start : -(start - end);
                sweep = std::fmod(sweep, kTwoPi);
                if (ccw) {
                    if (sweep <= 1e-15) sweep += kTwoPi;
                } else {
                    if (sweep >= -1e-15) sweep -= kTwoPi;
                }
                loop.push_back(Edge::arc(point_from(je.at("center")), radius, start, sweep));
            } else {
                throw domain_error("shape json: edge type must be \"arc\" or \"segment\"");
            }
        }
        region.loops.push_back(std::move(loop));
    }
    if (region.loops.empty()) throw domain_error("shape json: no loops");
    return region;
}

ArcRegion load_region(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw domain_error("cannot open shape file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw domain_error("shape json parse error in " + path + ": " + e.what());
    }
    return region_from_json(j);
}

void save_region(const ArcRegion& region, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw domain_error("cannot write shape file: " + path);
    out << region_to_json(region).dump(2) << "\n";
}

json to_json(const AsymmetryResult& r) {
    json centers = json::array();
    for (const auto& c : r.optimal_centers) centers.push_back(point_json(c));
    return {{"lambda", r.lambda}, {"optimal_centers", centers}, {"psi_at_optimum", r.psi_at_optimum}};
}

json to_json(const FunctionalResult& r) {
    return {{"delta", r.delta}, {"lambda", r.lambda}, {"value", r.value}};
}

json to_json(const FamilyReport& r) {
    json j{{"r0", r.r0},       {"r1", r.r1},     {"a0", r.a0},        {"a1", r.a1},
           {"area", r.area},   {"perim", r.perim}, {"delta", r.delta}, {"lambda", r.lambda},
           {"value", r.value}};
    if (r.r2) j["r2"] = *r.r2;
    if (r.r3) j["r3"] = *r.r3;
    if (r.q) j["q"] = *r.q;
    if (r.phi) j["phi"] = *r.phi;
    return j;
}

json to_json(const Decomposition& d) {
    return {{"gamma_in", d.gamma_in},     {"gamma_out", d.gamma_out},
            {"gamma_shared", d.gamma_shared}, {"area_out", d.area_out},
            {"area_in", d.area_in},
            {"ball", {{"center", point_json(d.ball.center)}, {"radius", d.ball.radius}}}};
}

json to_json(const ScanReport& r) {
    json fails = json::array();
    for (const auto& f : r.failures)
        fails.push_back({{"n", f.n}, {"theta", f.theta}, {"alpha", f.alpha}, {"margin", f.margin}});
    return {{"lemma_id", r.lemma},
            {"grid", r.grid},
            {"points", r.points},
            {"worst_margin", r.worst_margin},
            {"worst_at", {{"n", r.worst_n}, {"theta", r.worst_theta}, {"alpha", r.worst_alpha}}},
            {"failures", fails},
            {"passed", r.passed}};
}

json to_json(const SoakReport& r) {
    json anomalies = json::array();
    for (const auto& s : r.anomalies)
        anomalies.push_back({{"index", s.index},
                             {"kind", s.kind},
                             {"value", s.value},
                             {"delta", s.delta},
                             {"lambda", s.lambda}});
    return {{"n", r.n},
            {"seed", r.seed},
            {"min_value", r.min_value},
            {"min_index", r.min_index},
            {"min_kind", r.min_kind},
            {"worst_lambda_sq_over_delta", r.worst_ratio},
            {"anomalies", anomalies},
            {"passed", r.passed}};
}

}  // namespace qiso
