#include "spectral/certify.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "spectral/json_io.hpp"

namespace spectral {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string read_text(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw FormatError("cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw FormatError("cannot write " + path);
    f << text;
    if (!f) throw FormatError("write failed for " + path);
}

std::string resolve(const std::string& base, const std::string& p) {
    if (p.empty() || fs::path(p).is_absolute()) return p;
    return (fs::path(base) / p).string();
}

FourierSeq resized(const FourierSeq& u, int N) {
    GridSpec g = u.grid();
    g.N = N;
    FourierSeq out(g, u.sector(), N);
    for (const auto& n : out.indices()) {
        long p = u.position(n);
        if (p >= 0) out.set(n, u.coeffs()[p]);
    }
    return out;
}

bool unbounded_below(const ModelDescriptor& model) { return essential_spectrum(model).unbounded_below(); }

json essential_to_json(const EssentialSpectrum& es) {
    json pieces = json::array();
    for (const auto& p : es.pieces)
        pieces.push_back({{"lo", p.lo ? to_json(*p.lo) : json(nullptr)}, {"hi", p.hi ? to_json(*p.hi) : json(nullptr)}});
    return {{"pieces", pieces}, {"note", "null marks an infinite end"}};
}

int worker_cap() {
    const char* v = std::getenv("SPECTRAL_MAX_WORKERS");
    if (!v) return 1;
    int n = std::atoi(v);
    return n < 1 ? 1 : n;
}

}  // namespace

JordanDomain default_domain(const ModelDescriptor& model, const FourierSeq& U0, const Interval& r0, double delta0) {
    EssentialSpectrum es = essential_spectrum(model);
    JordanDomain J;
    Interval d0(delta0);
    if (es.unbounded_below()) {
        double lo = (-d0).lo();
        double edge = es.edge().hi();
        if (!(lo > edge)) lo = (Interval(edge) + d0).hi();
        double hi = spectrum_upper_bound(model, U0, r0).hi();
        if (!(hi > lo)) hi = lo + delta0;
        J.re = Interval(lo, hi);
    } else {
        double hi = (es.edge() - d0).lo();
        double lo = spectrum_lower_bound(model, U0, r0).lo();
        if (!(lo < hi)) lo = hi - delta0;
        J.re = Interval(lo, hi);
    }
    return J;
}

ComplexBox default_shift(const ModelDescriptor& model, const FourierSeq& U0, const Interval& r0, double margin) {
    if (unbounded_below(model)) return ComplexBox(-(Interval(spectrum_upper_bound(model, U0, r0).hi()) + Interval(margin)));
    return ComplexBox(-(Interval(spectrum_lower_bound(model, U0, r0).lo()) - Interval(margin)));
}

SectorRun certify_sector(const ModelDescriptor& model, const FourierSeq& U0, const Interval& r0, const Sector& sector,
                         const PipelineOptions& opt) {
    SectorRun run;
    Jacobian jac = assemble_jacobian(model, U0, sector);
    JordanDomain J = opt.J ? JordanDomain{*opt.J} : default_domain(model, U0, r0, opt.delta0);
    ComplexBox t = opt.t ? *opt.t : default_shift(model, U0, r0, opt.t_margin);
    CertifyOptions co{opt.self_adjoint_path, opt.invariance_dim};
    const bool below = unbounded_below(model);
    const int passes = opt.two_pass ? 2 : 1;
    for (int p = 0; p < passes; ++p) {
        PseudoDiag pd = build_pseudo_diag(jac, t);
        DiskSet disks = gershgorin_radii(pd, jac);
        HomotopyBounds hb = compute_bounds(model, U0, r0, jac, pd, J);
        J.delta = Interval(hb.dist_rho.lo());
        SectorCertificate sc = certify(model, jac, pd, disks, hb, J, co);
        run.passes.push_back({t, sc.spectral_upper, sc.spectral_lower});
        run.cert = sc;
        // second pass: move t next to the certified part of the spectrum and
        // cut J at half the margin; pass one showed nothing lies beyond
        const Interval half(opt.two_pass_margin / 2);
        if (below) {
            t = ComplexBox(-(Interval(sc.spectral_upper.hi()) + Interval(opt.two_pass_margin)));
            double cut = (Interval(sc.spectral_upper.hi()) + half).hi();
            if (cut < J.re.hi() && cut > J.re.lo()) J.re = Interval(J.re.lo(), cut);
        } else {
            t = ComplexBox(-(Interval(sc.spectral_lower.lo()) - Interval(opt.two_pass_margin)));
            double cut = (Interval(sc.spectral_lower.lo()) - half).lo();
            if (cut > J.re.lo() && cut < J.re.hi()) J.re = Interval(cut, J.re.hi());
        }
    }
    return run;
}

SolutionInput read_solution(const std::string& path) {
    json j = json::parse(read_text(path));
    std::string base = fs::path(path).parent_path().string();
    SolutionInput s;
    if (j.contains("sequence")) {
        const json& q = j.at("sequence");
        s.U0 = q.is_string() ? read_seq_file(resolve(base, q.get<std::string>())) : seq_from_json(q.dump());
    } else if (j.contains("csv")) {
        const json& g = j.at("grid");
        GridSpec grid{g.value("m", 1), g.at("N").get<int>(), g.at("d").get<double>()};
        s.U0 = read_seq_csv(resolve(base, j.at("csv").get<std::string>()), grid,
                            Sector::parse(j.value("sector", grid.m == 1 ? "c" : "cc"), grid.m));
    } else {
        throw FormatError("solution file needs 'sequence' or 'csv'");
    }
    if (j.contains("r0")) s.r0 = interval_from_json(j.at("r0"));
    if (j.contains("invariance_dim")) {
        const json& k = j.at("invariance_dim");
        if (k.is_object())
            for (auto it = k.begin(); it != k.end(); ++it) s.invariance_per_sector[it.key()] = it.value().get<int>();
        else
            s.invariance_dim = k.get<int>();
    }
    if (j.contains("sectors")) s.sectors = j.at("sectors").get<std::vector<std::string>>();
    if (j.contains("equivalent_sectors"))
        s.equivalent_sectors = j.at("equivalent_sectors").get<std::map<std::string, std::string>>();
    return s;
}

FourierSeq make_seed(const SeedSpec& s, const GridSpec& grid, const Sector& sector) {
    grid.validate();
    if (s.kind == "file") {
        FourierSeq u = read_seq_file(s.file);
        if (u.grid().m != grid.m) throw GridMismatch("seed file dimension differs");
        return resized(u.with_grid({grid.m, u.grid().N, grid.d}), grid.N);
    }
    FourierSeq u(grid, sector, grid.N);
    const double d = grid.d;
    for (const auto& n : u.indices()) {
        double v = 1.0;
        for (int a = 0; a < grid.m; ++a) {
            double k = M_PI * n[a] / d;
            if (s.kind == "gaussian") {
                v *= std::sqrt(2.0 * M_PI) * s.width / (2.0 * d) * std::exp(-k * k * s.width * s.width / 2.0);
            } else if (s.kind == "sech2") {
                double b = s.width;
                v *= (k == 0.0) ? 2.0 / b / (2.0 * d) : (M_PI * k / (b * b * std::sinh(M_PI * k / (2.0 * b)))) / (2.0 * d);
            } else {
                throw FormatError("unknown seed kind " + s.kind);
            }
        }
        u.set(n, Interval(s.amplitude * v));
    }
    return u;
}

RunConfig read_run_config(const std::string& path) {
    json j = json::parse(read_text(path));
    RunConfig c;
    c.base_dir = fs::path(path).parent_path().string();
    c.mode = j.value("mode", "certify");
    c.model_file = resolve(c.base_dir, j.value("model", ""));
    c.solution_file = resolve(c.base_dir, j.value("solution", ""));
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        if (g.contains("N")) c.N = g.at("N").get<int>();
        if (g.contains("d")) c.d = g.at("d").get<double>();
        if (g.contains("m")) c.m = g.at("m").get<int>();
    }
    c.sector = j.value("sector", c.sector);
    if (j.contains("seed")) {
        const json& s = j.at("seed");
        c.seed.kind = s.value("kind", c.seed.kind);
        c.seed.amplitude = s.value("amplitude", c.seed.amplitude);
        c.seed.width = s.value("width", c.seed.width);
        c.seed.file = resolve(c.base_dir, s.value("file", ""));
    }
    if (j.contains("newton")) {
        c.newton.tol = j.at("newton").value("tol", c.newton.tol);
        c.newton.max_iter = j.at("newton").value("max_iter", c.newton.max_iter);
    }
    PipelineOptions& p = c.pipeline;
    p.delta0 = j.value("delta0", p.delta0);
    if (j.contains("t")) p.t = complex_from_json(j.at("t"));
    if (j.contains("J")) p.J = interval_from_json(j.at("J"));
    p.two_pass = j.value("two_pass", p.two_pass);
    p.t_margin = j.value("t_margin", p.t_margin);
    p.two_pass_margin = j.value("two_pass_margin", p.two_pass_margin);
    p.self_adjoint_path = j.value("self_adjoint_path", p.self_adjoint_path);
    if (j.contains("sectors")) c.sectors = j.at("sectors").get<std::vector<std::string>>();
    c.output = resolve(c.base_dir, j.value("output", c.output));
    if (j.contains("plot_output")) c.plot_output = resolve(c.base_dir, j.at("plot_output").get<std::string>());
    return c;
}

int exit_code_for(const std::string& kind) {
    if (kind == "FormatError" || kind == "GridMismatch" || kind == "io") return kExitIo;
    if (kind == "ConditionViolated") return kExitCondition;
    if (kind == "SingularityUnverified" || kind == "DegenerateEigenbasis") return kExitSingular;
    if (kind == "InvalidParameter" || kind == "usage") return kExitUsage;
    return kExitCertification;
}

std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

std::string plot_csv(const std::vector<SectorRun>& runs) {
    std::ostringstream os;
    os << "sector,n1,n2,region,center_re,center_im,radius\n";
    os.precision(17);
    for (const auto& r : runs) {
        for (const auto& d : r.cert.inflated.disks) {
            os << r.cert.sector << ',' << d.index[0] << ',' << d.index[1] << ',' << (d.region == 0 ? "inner" : "ring")
               << ',' << d.center.re.mid() << ',' << d.center.im.mid() << ',' << d.radius.hi() << '\n';
        }
    }
    return os.str();
}

namespace {

json model_snapshot(const ModelDescriptor& model) { return json::parse(model_to_json(model)); }

json run_certify(const RunConfig& cfg, const ModelDescriptor& model, std::vector<SectorRun>& runs) {
    SolutionInput sol = read_solution(cfg.solution_file);
    if (!sol.r0) throw InvalidParameter("certify mode needs r0 in the solution file");
    FourierSeq U0 = sol.U0;
    if (cfg.d) U0 = U0.with_grid({U0.grid().m, U0.grid().N, *cfg.d});
    if (cfg.N) U0 = resized(U0, *cfg.N);
    if (U0.grid().m != model.m) throw GridMismatch("solution dimension differs from the model");
    std::vector<std::string> sectors = cfg.sectors;
    if (sectors.empty()) sectors = sol.sectors;
    if (sectors.empty()) sectors = model.sectors;
    if (sectors.empty()) sectors = {U0.sector().name()};
    // sectors declared equivalent reuse the run of their partner
    std::vector<std::string> todo;
    for (const auto& s : sectors)
        if (!sol.equivalent_sectors.count(s)) todo.push_back(s);
    std::map<std::string, SectorRun> done;
    const int cap = worker_cap();
    for (size_t i = 0; i < todo.size(); i += cap) {
        std::vector<std::pair<std::string, std::future<SectorRun>>> batch;
        for (size_t k = i; k < std::min(todo.size(), i + cap); ++k) {
            PipelineOptions opt = cfg.pipeline;
            const std::string& name = todo[k];
            opt.invariance_dim = sol.invariance_per_sector.count(name) ? std::optional<int>(sol.invariance_per_sector.at(name))
                                                                       : std::nullopt;
            Sector sec = Sector::parse(name, U0.grid().m);
            batch.emplace_back(name, std::async(cap > 1 ? std::launch::async : std::launch::deferred,
                                                [&model, U0, r0 = *sol.r0, sec, opt] {
                                                    return certify_sector(model, U0, r0, sec, opt);
                                                }));
        }
        for (auto& [name, fut] : batch) done[name] = fut.get();
    }
    json sec_docs = json::array();
    int positive = 0, negative = 0, straddling = 0;
    for (const auto& s : sectors) {
        std::string src = sol.equivalent_sectors.count(s) ? sol.equivalent_sectors.at(s) : s;
        if (!done.count(src)) throw InvalidParameter("sector " + s + " is declared equivalent to " + src + " which is not run");
        SectorRun r = done.at(src);
        json doc = sector_to_json(r.cert);
        doc["sector"] = s;
        if (src != s) doc["mirrors"] = src;
        json passes = json::array();
        for (const auto& p : r.passes)
            passes.push_back({{"t", to_json(p.t)}, {"spectral_upper", to_json(p.spectral_upper)},
                              {"spectral_lower", to_json(p.spectral_lower)}});
        doc["passes"] = passes;
        sec_docs.push_back(doc);
        positive += r.cert.positive;
        negative += r.cert.negative;
        straddling += r.cert.straddling;
        r.cert.sector = s;
        runs.push_back(r);
    }
    int zero_total = 0;
    for (const auto& r : runs)
        for (const auto& c : r.cert.clusters) zero_total += c.zero_eigenvalues;
    if (sol.invariance_dim) {
        if (*sol.invariance_dim > straddling)
            throw KernelMismatch("declared invariance dimension " + std::to_string(*sol.invariance_dim) + " exceeds the " +
                                 std::to_string(straddling) + " eigenvalues in clusters containing 0");
        zero_total = *sol.invariance_dim;
    }
    json verdict = {{"unstable_directions", positive},
                    {"negative_in_J", negative},
                    {"contains_zero_candidates", straddling - zero_total},
                    {"zero_eigenvalues", zero_total}};
    verdict["stability"] = positive > 0 ? "unstable" : (straddling - zero_total > 0 ? "undecided" : "no_unstable_eigenvalue_in_J");
    json radial = {{"applies", false}};
    for (const auto& r : runs) {
        if (r.cert.sector != "ss") continue;
        bool zero_in_J = r.cert.J.re.lo() < 0.0 && r.cert.J.re.hi() > 0.0;
        bool kernel_trivial = zero_in_J && r.cert.straddling == 0;
        radial = {{"applies", kernel_trivial},
                  {"reason", kernel_trivial ? "0 lies in J and no ss cluster contains 0, so the ss kernel is trivial"
                                            : "the ss kernel is not certified trivial"},
                  {"precondition", "model invariant under rotations and translations, solution nonzero and even"}};
    }
    json doc = {{"schema", "spectral-certificate"},
                {"version", 1},
                {"tool", {{"name", "certify"}, {"version", kToolVersion}}},
                {"ok", true},
                {"model", model_snapshot(model)},
                {"grid", {{"m", U0.grid().m}, {"N", U0.grid().N}, {"d", endpoint_json(U0.grid().d)}}},
                {"r0", to_json(*sol.r0)},
                {"essential_spectrum", essential_to_json(essential_spectrum(model))},
                {"sectors", sec_docs},
                {"union", {{"positive", positive},
                           {"negative", negative},
                           {"contains_zero", straddling},
                           {"rule", "the spectrum is the union of the sector spectra"}}},
                {"verdict", verdict},
                {"radial_symmetry", radial},
                {"annotations", json::array({"the same localization applies at each periodic solution of the branch "
                                             "obtained by restricting to Omega_d"})},
                {"provenance", {{"model_file", cfg.model_file}, {"solution_file", cfg.solution_file}}}};
    return doc;
}

json run_gershgorin(const RunConfig& cfg, const ModelDescriptor& model, std::vector<SectorRun>& runs) {
    SolutionInput sol = read_solution(cfg.solution_file);
    FourierSeq U0 = sol.U0;
    if (cfg.d) U0 = U0.with_grid({U0.grid().m, U0.grid().N, *cfg.d});
    if (cfg.N) U0 = resized(U0, *cfg.N);
    std::vector<std::string> sectors = cfg.sectors.empty() ? sol.sectors : cfg.sectors;
    if (sectors.empty()) sectors = {U0.sector().name()};
    json out = json::array();
    Interval r0 = sol.r0 ? *sol.r0 : Interval(0.0);
    for (const auto& s : sectors) {
        Jacobian jac = assemble_jacobian(model, U0, Sector::parse(s, U0.grid().m));
        std::optional<ComplexBox> t = cfg.pipeline.t;
        if (!t) {
            try {
                t = default_shift(model, U0, r0, cfg.pipeline.t_margin);
            } catch (const Error&) {
            }
        }
        PseudoDiag pd = build_pseudo_diag(jac, t);
        DiskSet ds = cluster_disks(gershgorin_radii(pd, jac));
        json d = disks_to_json(ds);
        d["sector"] = s;
        d["t"] = to_json(pd.t);
        out.push_back(d);
        SectorRun r;
        r.cert.sector = s;
        r.cert.inflated = ds;
        runs.push_back(r);
    }
    return {{"schema", "spectral-disk-sets"}, {"version", 1}, {"ok", true}, {"sectors", out}};
}

json run_newton(const RunConfig& cfg, const ModelDescriptor& model) {
    GridSpec g{cfg.m.value_or(model.m), cfg.N.value_or(32), cfg.d.value_or(20.0)};
    Sector sec = Sector::parse(cfg.sector, g.m);
    FourierSeq seed = make_seed(cfg.seed, g, sec);
    NewtonResult r = newton_solve(model, seed, cfg.newton);
    json seq = json::parse(seq_to_json(r.U0));
    return {{"schema", "spectral-newton"},
            {"version", 1},
            {"ok", true},
            {"iterations", r.iterations},
            {"residual", endpoint_json(r.residual)},
            {"residual_enclosure", to_json(r.residual_enclosure)},
            {"certified", false},
            {"sequence", seq}};
}

}  // namespace

RunResult run(const RunConfig& cfg) {
    RunResult res;
    auto t0 = std::chrono::steady_clock::now();
    std::vector<SectorRun> runs;
    try {
        ModelDescriptor model = read_model_file(cfg.model_file);
        if (cfg.mode == "essential-spectrum") {
            res.document = {{"schema", "spectral-essential-spectrum"},
                            {"version", 1},
                            {"ok", true},
                            {"model", model_snapshot(model)},
                            {"range", essential_to_json(essential_spectrum(model))}};
        } else if (cfg.mode == "certify") {
            res.document = run_certify(cfg, model, runs);
        } else if (cfg.mode == "gershgorin-only") {
            res.document = run_gershgorin(cfg, model, runs);
        } else if (cfg.mode == "newton") {
            res.document = run_newton(cfg, model);
        } else {
            throw InvalidParameter("unknown mode " + cfg.mode);
        }
    } catch (const Error& e) {
        res.exit_code = exit_code_for(e.kind());
        res.message = e.what();
        res.document = {{"ok", false}, {"mode", cfg.mode}, {"error", {{"kind", e.kind()}, {"message", e.what()}}}};
    } catch (const json::exception& e) {
        res.exit_code = kExitIo;
        res.message = e.what();
        res.document = {{"ok", false}, {"mode", cfg.mode}, {"error", {{"kind", "FormatError"}, {"message", e.what()}}}};
    }
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    try {
        write_text(cfg.output, canonical_dump(res.document));
        write_text(cfg.output + ".timing.json", canonical_dump(json{{"wall_seconds", res.wall_seconds}}));
        if (cfg.plot_output && !runs.empty()) write_text(*cfg.plot_output, plot_csv(runs));
    } catch (const Error& e) {
        if (res.exit_code == kExitOk) res.exit_code = kExitIo;
        res.message += std::string(res.message.empty() ? "" : "; ") + e.what();
    }
    return res;
}

}  // namespace spectral
