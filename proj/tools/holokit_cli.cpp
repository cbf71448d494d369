// Command line front end: experiment drivers and report emission.
//
// Exit codes: 0 success, 2 precondition or invariant failure, 3 budget
// exhausted. All emitted floats use 17 significant digits and runs are
// byte-identical for identical config and seed.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "holokit/boundary.hpp"
#include "holokit/closed_forms.hpp"
#include "holokit/fridman.hpp"
#include "holokit/metrics.hpp"
#include "holokit/scaling.hpp"

using namespace holokit;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "holokit-0.1.0";

struct BudgetExhausted {
    std::string where;
};

struct Driver {
    std::string kind;
    Domain domain;
    bool haveDomain = false;
    std::vector<Point> points;  // --point, repeatable
    Point dir;
    // sequence spec
    std::string seqMode = "normal";
    double seqD0 = 0.1;
    int seqCount = 6;
    double seqMix = 0.5;
    bool haveSeq = false;
    std::string model = "ball";
    double radius = 1.0;
    MetricConfig cfg;
    double budgetSeconds = 0.0;  // 0 = unlimited
    std::string outDir = ".";
    std::chrono::steady_clock::time_point start =
        std::chrono::steady_clock::now();
    json echo;  // config echo for the summary

    double elapsed() const {
        return std::chrono::duration<double>(
                   std::chrono::steady_clock::now() - start)
            .count();
    }
    void checkBudget(const std::string& where) const {
        if (budgetSeconds > 0.0 && elapsed() > budgetSeconds)
            throw BudgetExhausted{where};
    }
};

Point parsePointList(const std::string& s) {
    std::vector<double> vals;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            vals.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw Error("bad number in point spec: " + item);
        }
    }
    if (vals.empty() || vals.size() % 2 != 0)
        throw Error("point spec needs re,im pairs");
    Point p(vals.size() / 2);
    for (size_t i = 0; i < p.size(); ++i)
        p[i] = cplx(vals[2 * i], vals[2 * i + 1]);
    return p;
}

Point pointFromJson(const json& j) {
    Point p;
    for (const auto& c : j) {
        if (!c.is_array() || c.size() != 2)
            throw Error("config point entries must be [re, im] pairs");
        p.emplace_back(c[0].get<double>(), c[1].get<double>());
    }
    if (p.empty()) throw Error("empty point in config");
    return p;
}

json pointToJson(const Point& p) {
    json j = json::array();
    for (const auto& c : p) j.push_back({c.real(), c.imag()});
    return j;
}

/// Inward unit normal (negative gradient direction) at a boundary point.
Point inwardNormal(const Domain& d, const Point& base) {
    const Point g = wirtingerGradient(d, base);
    double ng = 0.0;
    for (const auto& x : g) ng += std::norm(x);
    ng = std::sqrt(ng);
    if (ng < 1e-14) throw Error("degenerate gradient at the base point");
    Point n(g.size());
    // real gradient of rho is 2 conj(d rho / dz)
    for (size_t i = 0; i < g.size(); ++i) n[i] = -std::conj(g[i]) / ng;
    return n;
}

std::vector<Point> buildSequence(const Driver& drv) {
    if (drv.points.empty())
        throw Error("sequence needs a base boundary point (--point)");
    const Point& base = drv.points[0];
    if (std::abs(evalRho(drv.domain, base)) > 1e-8)
        throw Error("sequence base point is not on the boundary");
    const Point n = inwardNormal(drv.domain, base);
    Point t;
    if (!drv.dir.empty()) {
        t = drv.dir;
    } else {
        // default tangential direction: first coordinate, orthogonalized
        t = Point(base.size(), cplx(0, 0));
        t[0] = cplx(1, 0);
        cplx overlap(0, 0);
        for (size_t i = 0; i < t.size(); ++i)
            overlap += t[i] * std::conj(n[i]);
        for (size_t i = 0; i < t.size(); ++i) t[i] -= overlap * n[i];
    }
    double nt = 0.0;
    for (const auto& x : t) nt += std::norm(x);
    nt = std::sqrt(nt);
    const bool mix = drv.seqMode == "tangential-mix";
    if (mix && nt < 1e-12)
        throw Error("tangential direction degenerates at the base point");

    std::vector<Point> seq;
    double dj = drv.seqD0;
    for (int j = 0; j < drv.seqCount; ++j, dj *= 0.5) {
        Point p(base.size());
        for (size_t i = 0; i < base.size(); ++i) {
            p[i] = base[i] + dj * n[i];
            if (mix)
                p[i] += drv.seqMix * std::sqrt(dj) * t[i] / nt;
        }
        if (evalRho(drv.domain, p) >= 0.0)
            throw Error("sequence point escapes the domain; shrink d0 or "
                        "the tangential mix");
        seq.push_back(p);
    }
    return seq;
}

void writeFile(const std::string& path, const std::string& text) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(parent, ec);
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open output file " + path);
    os << text;
    if (!os) throw Error("write failed for " + path);
}

std::string boundLabel(BoundKind k) { return to_string(k); }

void emitSummary(const Driver& drv, const json& results, bool partial) {
    // manual rendering keeps float formatting pinned to 17 digits
    std::ostringstream os;
    os << "{\n  \"version\": \"" << kVersion << "\",\n  \"kind\": \""
       << drv.kind << "\",\n  \"seed\": " << drv.cfg.seed
       << ",\n  \"partial\": " << (partial ? "true" : "false")
       << ",\n  \"config\": " << drv.echo.dump()
       << ",\n  \"results\": " << results.dump() << "\n}\n";
    writeFile(drv.outDir + "/" + drv.kind + "_summary.json", os.str());
}

json num(double x) { return json(fmt17(x)); }  // strings keep digits stable

int runMetric(Driver& drv) {
    if (drv.points.empty() || drv.dir.empty())
        throw Error("metric needs --point and --dir");
    const Point& p = drv.points[0];
    if (evalRho(drv.domain, p) >= 0.0)
        throw Error("metric point is not inside the domain");
    auto up = kobayashiInfEstimate(drv.domain, p, drv.dir, drv.cfg);
    drv.checkBudget("metric");
    auto lo = caratheodoryInfLower(drv.domain, p, drv.dir, drv.cfg);
    std::ostringstream csv;
    csv << "quantity,value,bound\n";
    csv << "kobayashi_inf," << fmt17(up.value) << ','
        << boundLabel(up.boundKind) << '\n';
    csv << "caratheodory_inf," << fmt17(lo.value) << ','
        << boundLabel(lo.boundKind) << '\n';
    writeFile(drv.outDir + "/metric_report.csv", csv.str());
    json res;
    res["kobayashi_inf"] = num(up.value);
    res["caratheodory_inf"] = num(lo.value);
    res["ordering_ok"] = lo.value <= up.value * (1.0 + 1e-9);
    emitSummary(drv, res, false);
    return 0;
}

int runDistance(Driver& drv) {
    if (drv.points.size() < 2)
        throw Error("distance needs two --point arguments");
    auto est = kobayashiDistanceEstimate(drv.domain, drv.points[0],
                                         drv.points[1], drv.cfg);
    drv.checkBudget("distance");
    std::ostringstream csv;
    csv << "quantity,value,bound\n";
    csv << "kobayashi_distance," << fmt17(est.value) << ','
        << boundLabel(est.boundKind) << '\n';
    writeFile(drv.outDir + "/distance_report.csv", csv.str());
    json res;
    res["kobayashi_distance"] = num(est.value);
    res["segments"] = est.perSegment.size();
    emitSummary(drv, res, false);
    return 0;
}

int runScale(Driver& drv) {
    const auto seq = buildSequence(drv);
    ScalingRun run;
    run.base = drv.domain;
    run.boundaryPoint = drv.points[0];
    std::ostringstream csv;
    csv << "j,d,center_last,image_last,scale_last\n";
    std::vector<CatlinEntry> centries;
    const bool finiteType =
        drv.domain.classTag == DomainClass::FiniteType2D;
    int j = 0;
    for (const auto& p : seq) {
        drv.checkBudget("scale step");
        ScalingEntry e;
        if (finiteType) {
            auto ce = catlinScaledDomain(
                drv.domain, p, drv.domain.declaredType.value_or(2), j);
            centries.push_back(ce);
            e = ce.entry;
        } else {
            e = spscScaledDomain(drv.domain, p, j);
        }
        csv << e.j << ',' << fmt17(boundaryDistance(drv.domain, p).distance)
            << ',' << fmt17(std::abs(e.center.back())) << ','
            << fmt17(std::abs(e.image.back())) << ','
            << fmt17(e.scales.back()) << '\n';
        run.entries.push_back(std::move(e));
        ++j;
    }
    json res;
    if (finiteType && centries.size() >= 3) {
        const ZZbarPoly lim = limitPolynomial(centries);
        Domain limitDom;
        limitDom.n = drv.domain.n;
        limitDom.rho = ZZbarPoly::twoRe(PolyZ::variable(drv.domain.n,
                                                        drv.domain.n - 1)) +
                       lim;
        limitDom.classTag = DomainClass::PolynomialModel;
        limitDom.basePoint = Point(drv.domain.n, cplx(0, 0));
        limitDom.basePoint.back() = cplx(-1, 0);
        run.limitModel = limitDom;
        res["limit_terms"] = lim.terms().size();
    }
    writeFile(drv.outDir + "/scale_report.csv", csv.str());
    writeFile(drv.outDir + "/scale_run.json", scalingRunToJson(run));
    res["steps"] = run.entries.size();
    emitSummary(drv, res, false);
    return 0;
}

int runSandwich(Driver& drv) {
    const auto seq = buildSequence(drv);
    auto fit = sandwichConstants(drv.domain, seq, drv.radius, 8, drv.cfg);
    drv.checkBudget("sandwich");
    writeFile(drv.outDir + "/sandwich_report.csv", residualCsv(fit.rows));
    double cmin = 1e300, cmax = 0.0;
    for (const auto& r : fit.rows) {
        cmin = std::min(cmin, r.rhs);
        cmax = std::max(cmax, r.rhs);
    }
    json res;
    res["c1"] = num(fit.c1);
    res["c2"] = num(fit.c2);
    res["law"] = fit.law;
    res["stability_ratio"] = num(cmax / cmin);
    emitSummary(drv, res, false);
    return 0;
}

int runHerbort(Driver& drv) {
    const auto seq = buildSequence(drv);
    // seeded near-boundary pairs around the sequence points
    std::mt19937_64 rng(drv.cfg.seed + 23);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::pair<Point, Point>> pairs;
    for (const auto& p : seq) {
        const double h = boundaryDistance(drv.domain, p).distance;
        for (int rep = 0; rep < 2 && pairs.size() < 20; ++rep) {
            Point a = p, b = p;
            for (size_t i = 0; i < p.size(); ++i) {
                a[i] += 0.5 * h * cplx(u(rng), u(rng));
                b[i] += 0.5 * h * cplx(u(rng), u(rng));
            }
            if (evalRho(drv.domain, a) < 0.0 &&
                evalRho(drv.domain, b) < 0.0)
                pairs.emplace_back(a, b);
        }
    }
    while (pairs.size() < 10) pairs.push_back(pairs.back());
    drv.checkBudget("herbort pair generation");
    auto fit = herbortSandwichFit(drv.domain, pairs, 0, drv.cfg);
    writeFile(drv.outDir + "/herbort_report.csv", residualCsv(fit.rows));
    json res;
    res["cstar"] = num(fit.cstar);
    res["pairs"] = fit.rows.size();
    emitSummary(drv, res, false);
    return 0;
}

int runFridman(Driver& drv) {
    const auto seq = buildSequence(drv);
    auto rows =
        fridmanBoundaryExperiment(drv.domain, seq, drv.model, drv.cfg);
    // wall times are measured but kept out of the CSV so reruns stay
    // byte-identical
    json res;
    double wall = 0.0;
    for (auto& r : rows) {
        wall += r.wallSeconds;
        r.wallSeconds = 0.0;
    }
    for (const auto& r : rows)
        if (!r.error.empty())
            throw Error("fridman row " + std::to_string(r.j) +
                        " failed: " + r.error);
    writeFile(drv.outDir + "/fridman_report.csv", fridmanRowsCsv(rows));
    auto cert = fridmanZeroCert(drv.domain, seq.front(), drv.model);
    res["rows"] = rows.size();
    res["last_upper"] = num(rows.back().upper);
    res["zero_certified"] = cert.certified;
    if (!cert.certified) res["zero_refusal"] = cert.reason;
    std::cerr << "fridman wall time " << wall << " s\n";
    emitSummary(drv, res, false);
    return 0;
}

int runStability(Driver& drv) {
    // perturbed-family distance bounds: one shared constant across sizes
    if (!drv.haveDomain) drv.domain = presetPerturbedBall(4, 0.05);
    std::ostringstream csv;
    csv << "k,quantity,lhs,mid,rhs\n";
    json res;
    const double C = 2.5;
    std::vector<int> ks = {4, 16, 64};
    bool ok = true;
    for (const int k : ks) {
        drv.checkBudget("stability family member");
        Domain d = presetPerturbedBall(k, 0.05);
        Point a = {cplx(0, 0), cplx(1.0 - drv.seqD0, 0)};
        Point b = {cplx(0.5, 0), cplx(0, 0)};
        const auto est = kobayashiDistanceEstimate(d, a, b, drv.cfg);
        const auto bounds = frBounds(d, a, b, C);
        ok = ok && bounds.first <= est.value + 1e-9 &&
             est.value <= bounds.second + 1e-9;
        csv << k << ",log_bounds," << fmt17(bounds.first) << ','
            << fmt17(est.value) << ',' << fmt17(bounds.second) << '\n';
    }
    writeFile(drv.outDir + "/stability_report.csv", csv.str());
    res["constant"] = num(C);
    res["within_bounds"] = ok;
    emitSummary(drv, res, false);
    if (!ok) throw Error("distance escapes the two-sided log bounds");
    return 0;
}

int runCorner(Driver& drv) {
    // corner renormalization on a product polyhedron piece
    const int n = drv.domain.n;
    if (!closed::modelForDomain(drv.domain) ||
        *closed::modelForDomain(drv.domain) != closed::ModelKind::Polydisc)
        throw Error("corner experiment expects the polydisc preset");
    PolyhedronSpec spec;
    spec.z0 = Point(n, cplx(1, 0));
    for (int i = 0; i < n; ++i)
        spec.generators.push_back(PolyZ::variable(n, i));
    std::ostringstream csv;
    csv << "j,d,image_norm,member\n";
    double dj = drv.seqD0;
    bool allMember = true;
    for (int j = 0; j < drv.seqCount; ++j, dj *= 0.5) {
        drv.checkBudget("corner step");
        Point zk(n, cplx(1.0 - dj, 0));
        const CornerMap cm = polyhedronCornerMaps(spec, zk);
        const Point img = cm.apply(zk);
        double norm = 0.0;
        bool member = true;
        for (const auto& x : img) norm = std::max(norm, std::abs(x));
        const Point w = cm.generatorTarget(img);
        for (const auto& x : w) member = member && std::abs(x) < 1.0;
        allMember = allMember && member;
        csv << j << ',' << fmt17(dj) << ',' << fmt17(norm) << ','
            << (member ? 1 : 0) << '\n';
    }
    writeFile(drv.outDir + "/corner_report.csv", csv.str());
    json res;
    res["members_ok"] = allMember;
    emitSummary(drv, res, false);
    if (!allMember) throw Error("corner image escapes the polydisc");
    return 0;
}

int runValidate(Driver& drv) {
    drv.domain.validate();
    json res;
    res["valid"] = true;
    res["class"] = to_string(drv.domain.classTag);
    res["n"] = drv.domain.n;
    emitSummary(drv, res, false);
    return 0;
}

void applyConfig(Driver& drv, const json& cfg) {
    if (cfg.contains("kind")) drv.kind = cfg["kind"].get<std::string>();
    if (cfg.contains("domain")) {
        const auto& d = cfg["domain"];
        drv.domain = d.is_string()
                         ? parseDomainSpec(d.get<std::string>())
                         : domainFromJson(d.dump());
        drv.haveDomain = true;
    }
    if (cfg.contains("point")) {
        drv.points.clear();
        const auto& pts = cfg["point"];
        if (!pts.empty() && pts[0].is_array() && !pts[0].empty() &&
            pts[0][0].is_array())
            for (const auto& p : pts) drv.points.push_back(pointFromJson(p));
        else
            drv.points.push_back(pointFromJson(pts));
    }
    if (cfg.contains("dir")) drv.dir = pointFromJson(cfg["dir"]);
    if (cfg.contains("seq")) {
        const auto& s = cfg["seq"];
        if (s.contains("base")) {
            drv.points.clear();
            drv.points.push_back(pointFromJson(s["base"]));
        }
        if (s.contains("mode")) drv.seqMode = s["mode"].get<std::string>();
        if (s.contains("d0")) drv.seqD0 = s["d0"].get<double>();
        if (s.contains("count")) drv.seqCount = s["count"].get<int>();
        if (s.contains("mix")) drv.seqMix = s["mix"].get<double>();
        drv.haveSeq = true;
    }
    if (cfg.contains("estimator")) {
        const auto& e = cfg["estimator"];
        if (e.contains("N")) drv.cfg.N = e["N"].get<int>();
        if (e.contains("M")) drv.cfg.M = e["M"].get<int>();
        if (e.contains("searchM")) drv.cfg.searchM = e["searchM"].get<int>();
        if (e.contains("eta")) drv.cfg.eta = e["eta"].get<double>();
        if (e.contains("iterations"))
            drv.cfg.iterations = e["iterations"].get<int>();
        if (e.contains("seed")) drv.cfg.seed = e["seed"].get<unsigned>();
        if (e.contains("closed_form"))
            drv.cfg.preferClosedForm = e["closed_form"].get<bool>();
    }
    if (cfg.contains("model")) drv.model = cfg["model"].get<std::string>();
    if (cfg.contains("R")) drv.radius = cfg["R"].get<double>();
    if (cfg.contains("budget")) drv.budgetSeconds = cfg["budget"].get<double>();
    if (cfg.contains("out")) drv.outDir = cfg["out"].get<std::string>();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"invariant-metric and scaling experiment driver"};
    app.require_subcommand(1);

    std::string configPath, domainSpec, dirSpec, seqSpec, outDir;
    std::vector<std::string> pointSpecs;
    unsigned seed = 0;
    bool haveSeed = false;
    double budget = 0.0;
    std::string model;

    Driver drv;

    const std::vector<std::string> verbs = {
        "metric",  "distance", "scale",  "sandwich", "herbort",
        "fridman", "stability", "corner", "validate"};
    for (const auto& v : verbs) {
        auto* sub = app.add_subcommand(v);
        sub->add_option("--config", configPath, "JSON experiment config");
        sub->add_option("--domain", domainSpec,
                        "preset string or domain JSON file");
        sub->add_option("--point", pointSpecs,
                        "interior or boundary point as re,im,...");
        sub->add_option("--dir", dirSpec, "direction as re,im,...");
        sub->add_option("--seq", seqSpec,
                        "sequence spec mode:d0:count (mode normal or "
                        "tangential-mix)");
        sub->add_option("--seed", seed, "estimator seed")
            ->each([&](const std::string&) { haveSeed = true; });
        sub->add_option("--out", outDir, "output directory");
        sub->add_option("--budget", budget, "wall-clock budget in seconds");
        sub->add_option("--model", model, "fridman model: ball or polydisc");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        drv.kind = app.get_subcommands().front()->get_name();
        // experiment verbs default to the probe-grade search budget; a
        // config file can still override any of these
        if (drv.kind == "sandwich" || drv.kind == "herbort" ||
            drv.kind == "fridman" || drv.kind == "stability") {
            drv.cfg.N = 4;
            drv.cfg.iterations = 120;
            drv.cfg.searchM = 32;
            drv.cfg.M = 96;
        }
        if (drv.kind == "fridman") drv.cfg.preferClosedForm = true;
        if (!configPath.empty()) {
            std::ifstream is(configPath);
            if (!is) throw Error("cannot read config " + configPath);
            json cfg;
            try {
                cfg = json::parse(is);
            } catch (const json::parse_error& e) {
                throw Error(std::string("config parse error at byte ") +
                            std::to_string(e.byte) + ": " + e.what());
            }
            drv.echo = cfg;
            applyConfig(drv, cfg);
        }
        if (!domainSpec.empty()) {
            if (domainSpec.find('{') == std::string::npos &&
                domainSpec.rfind("preset:", 0) != 0 &&
                domainSpec.find(':') == std::string::npos) {
                // treat as a file path holding domain JSON
                std::ifstream is(domainSpec);
                if (is) {
                    std::stringstream ss;
                    ss << is.rdbuf();
                    drv.domain = parseDomainSpec(ss.str());
                } else {
                    drv.domain = parseDomainSpec(domainSpec);
                }
            } else {
                drv.domain = parseDomainSpec(domainSpec);
            }
            drv.haveDomain = true;
            drv.echo["domain"] = domainSpec;
        }
        for (const auto& ps : pointSpecs) {
            drv.points.push_back(parsePointList(ps));
            drv.echo["point"].push_back(ps);
        }
        if (!dirSpec.empty()) {
            drv.dir = parsePointList(dirSpec);
            drv.echo["dir"] = dirSpec;
        }
        if (!seqSpec.empty()) {
            std::stringstream ss(seqSpec);
            std::string mode, d0s, counts;
            if (!std::getline(ss, mode, ':') ||
                !std::getline(ss, d0s, ':') || !std::getline(ss, counts))
                throw Error("sequence spec must be mode:d0:count");
            drv.seqMode = mode;
            drv.seqD0 = std::stod(d0s);
            drv.seqCount = std::stoi(counts);
            drv.haveSeq = true;
            drv.echo["seq"] = seqSpec;
        }
        if (drv.seqMode != "normal" && drv.seqMode != "tangential-mix")
            throw Error("approach mode must be normal or tangential-mix");
        if (haveSeed) {
            drv.cfg.seed = seed;
            drv.echo["seed"] = seed;
        }
        if (budget > 0.0) drv.budgetSeconds = budget;
        if (!outDir.empty()) drv.outDir = outDir;
        if (!model.empty()) drv.model = model;
        if (drv.seqD0 <= 0.0 || drv.seqCount <= 0 || drv.seqCount > 64)
            throw Error("sequence parameters out of range");

        if (const char* threads = std::getenv("HOLOKIT_THREADS")) {
            const int t = std::atoi(threads);
            if (t < 1) throw Error("HOLOKIT_THREADS must be >= 1");
            // evaluation is sequential today; the cap is honored as 1
        }

        if (!drv.haveDomain && drv.kind != "stability")
            throw Error("--domain is required");
        if (drv.domain.n == 0 && drv.kind != "stability")
            throw Error("empty domain");

        if (drv.kind == "metric") return runMetric(drv);
        if (drv.kind == "distance") return runDistance(drv);
        if (drv.kind == "scale") return runScale(drv);
        if (drv.kind == "sandwich") return runSandwich(drv);
        if (drv.kind == "herbort") return runHerbort(drv);
        if (drv.kind == "fridman") return runFridman(drv);
        if (drv.kind == "stability") return runStability(drv);
        if (drv.kind == "corner") return runCorner(drv);
        if (drv.kind == "validate") return runValidate(drv);
        throw Error("unknown verb " + drv.kind);
    } catch (const BudgetExhausted& b) {
        std::cerr << "budget exhausted during " << b.where << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
