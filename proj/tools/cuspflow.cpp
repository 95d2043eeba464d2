// cuspflow: batch experiments on cusp excursions of geodesics, exact cusp
// enumeration, nested-ball dimension bounds, and self-similar coverings for
// the modular (and optionally Gaussian) lattice.

#include "cuspflow/cantor.hpp"
#include "cuspflow/config.hpp"
#include "cuspflow/counting.hpp"
#include "cuspflow/covering.hpp"
#include "cuspflow/excursion.hpp"
#include "cuspflow/io.hpp"
#include "cuspflow/lattice.hpp"
#include "cuspflow/parallel.hpp"
#include "cuspflow/product.hpp"
#include "cuspflow/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <random>

using namespace cuspflow;

namespace {

constexpr int kExitInvariant = 1;
constexpr int kExitConfig = 2;
constexpr int kExitBudget = 3;

struct Output {
    std::string path;  // empty = stdout
    OutputFormat format = OutputFormat::Csv;

    void table(const io::Table& t) const {
        std::ostream* os = &std::cout;
        std::ofstream f;
        if (!path.empty()) {
            f.open(path);
            if (!f) throw std::invalid_argument("cannot open output file " + path);
            os = &f;
        }
        if (format == OutputFormat::Csv) t.write_csv(*os);
        else t.write_json(*os);
    }
};

BigRat require_rat(const std::string& s, const char* what) {
    auto r = parse_rational(s);
    if (!r) throw std::invalid_argument(std::string("cannot parse ") + what + ": " + s);
    return *r;
}

excursion::Direction require_dir(const std::string& s, const char* what) {
    auto d = excursion::parse_direction(s);
    if (!d) throw std::invalid_argument(std::string("cannot parse ") + what + ": " + s);
    return *d;
}

lattice::Cusp require_cusp(const std::string& s, const char* what) {
    BigRat r = require_rat(s, what);
    return lattice::canonical(numerator(r), denominator(r));
}

nlohmann::json tree_json(const cantor::CantorNode& n) {
    nlohmann::json j;
    j["level"] = n.level;
    j["center"] = rat_string(n.center);
    j["radius"] = rat_string(n.radius);
    if (n.cusp) j["cusp"] = n.cusp->str();
    if (n.intermediate) j["intermediate"] = n.intermediate->str();
    j["height"] = n.height.str();
    if (n.family) {
        j["family_count"] = n.family->count;
        j["family_log_measure"] = n.family->log_measure;
        j["family_exact"] = n.family->exact;
    }
    auto arr = nlohmann::json::array();
    for (const auto& ch : n.children) arr.push_back(tree_json(ch));
    j["children"] = std::move(arr);
    return j;
}

nlohmann::json node_json(const covering::CoverNode& nd) {
    nlohmann::json j;
    auto arr = nlohmann::json::array();
    for (const auto& c : nd.cusps) arr.push_back(c.str());
    j["cusps"] = std::move(arr);
    j["i"] = nd.i + 1;
    j["j"] = nd.j + 1;
    j["diam"] = fmt_double(std::exp(nd.log_diam()));
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cusp excursion and dimension-bound experiments"};
    app.require_subcommand(1);

    std::string config_path, out_path, format = "csv";
    uint64_t seed = 1;
    int workers = 0;
    app.add_option("--config", config_path, "flat key=value configuration file");
    app.add_option("--out", out_path, "output file (default stdout)");
    app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed", seed, "experiment seed");
    app.add_option("--workers", workers, "worker threads (CUSPFLOW_WORKERS overrides)");

    // -- targets ---------------------------------------------------------------
    auto* targets = app.add_subcommand("targets", "dimension targets for given k and n");
    int tk = 2, tn = 2;
    targets->add_option("--k", tk, "number of factors")->required();
    targets->add_option("--n", tn, "hyperbolic dimension")->required();

    // -- spectrum ----------------------------------------------------------------
    auto* spectrum = app.add_subcommand("spectrum", "cusp spectrum of a direction");
    std::string sx = "golden", stheta = "1", sh_max = "1000000";
    bool s_enum = false;
    spectrum->add_option("--x", sx, "direction: p/q, decimal, golden, sqrt2m1, pi3, e2");
    spectrum->add_option("--theta", stheta, "entry threshold (rational, >= 1 for the CF route)");
    spectrum->add_option("--h-max", sh_max, "height budget");
    spectrum->add_flag("--enumerate", s_enum, "use the enumeration route");

    // -- count ---------------------------------------------------------------------
    auto* count = app.add_subcommand("count", "annulus counts against t (growth experiment)");
    std::string ca = "0/1";
    double cA1 = 1, cA2 = 4, cA3 = 1, ct_min = 4, ct_max = 14, ct_step = 1;
    std::string cmodel = "modular";
    count->add_option("--a", ca, "center cusp p/q");
    count->add_option("--A1", cA1);
    count->add_option("--A2", cA2);
    count->add_option("--A3", cA3);
    count->add_option("--t-min", ct_min);
    count->add_option("--t-max", ct_max);
    count->add_option("--t-step", ct_step);
    count->add_option("--model", cmodel, "modular | gaussian")
        ->check(CLI::IsMember({"modular", "gaussian"}));

    // -- net -------------------------------------------------------------------------
    auto* net = app.add_subcommand("net", "covering/packing net of cusps");
    std::string nlo = "0", nhi = "1", nN = "400", nc = "3/2", ncp = "1/4";
    net->add_option("--lo", nlo);
    net->add_option("--hi", nhi);
    net->add_option("--N", nN, "height bound");
    net->add_option("--c", nc, "covering constant");
    net->add_option("--c-prime", ncp, "packing constant");

    // -- witness ------------------------------------------------------------------------
    auto* witness = app.add_subcommand("witness", "height-bounded cusp near a direction");
    std::string wx = "pi3", wX = "10000";
    witness->add_option("--x", wx);
    witness->add_option("--X", wX, "height bound");

    // -- cantor -----------------------------------------------------------------------
    auto* cantor_cmd = app.add_subcommand("cantor", "nested-ball trees and the bound report");
    std::string kind = "steep", kroot = "2/5", kprev = "1/2", kdelta = "1", keps = "1/4";
    int kdepth = 4;
    double kbase_log_h = 15.0;
    std::string dump_tree;
    cantor_cmd->add_option("--kind", kind)->check(CLI::IsMember({"steep", "slice"}));
    cantor_cmd->add_option("--root", kroot, "root cusp (steep)");
    cantor_cmd->add_option("--prev", kprev, "Farey partner of the root (steep)");
    cantor_cmd->add_option("--delta", kdelta, "height-law exponent offset");
    cantor_cmd->add_option("--eps", keps, "ball constant");
    cantor_cmd->add_option("--depth", kdepth);
    cantor_cmd->add_option("--base-log-height", kbase_log_h, "base root log-height (slice)");
    cantor_cmd->add_option("--dump-tree", dump_tree, "write the tree as JSON to this file");

    // -- cover ---------------------------------------------------------------------------
    auto* cover = app.add_subcommand("cover", "self-similar covering sums and chains");
    std::string cmode = "sum", cdelta = "1/4", ccusps = "1/3,0/1", cconst = "2";
    double cs = 1.5;
    std::string ctrunc = "10000";
    int cdepth = 8;
    double cbase_log_h = 60.0;
    cover->add_option("--mode", cmode)->check(CLI::IsMember({"sum", "crossing", "chain"}));
    cover->add_option("--delta", cdelta);
    cover->add_option("--s", cs, "exponent for mode=sum");
    cover->add_option("--node", ccusps, "comma-separated cusps of the seed node (i=1, j=2)");
    cover->add_option("--c", cconst, "ball constant");
    cover->add_option("--truncation", ctrunc, "height cap");
    cover->add_option("--depth", cdepth, "pipeline depth for mode=chain");
    cover->add_option("--base-log-height", cbase_log_h, "pipeline base height for mode=chain");

    // -- classify ----------------------------------------------------------------------------
    auto* classify = app.add_subcommand("classify", "finite-horizon divergence surrogate");
    std::string clx1 = "golden", clx2 = "sqrt2m1", cldelta = "1/4";
    double clwindow = 20;
    bool cl_pipeline = false, cl_trace = false;
    int cldepth = 8;
    double clbase = 60.0;
    classify->add_option("--x1", clx1);
    classify->add_option("--x2", clx2);
    classify->add_option("--delta", cldelta);
    classify->add_option("--t-window", clwindow);
    classify->add_flag("--pipeline", cl_pipeline, "build the pair by the slice pipeline");
    classify->add_flag("--trace", cl_trace, "emit the minima trace instead of one row");
    classify->add_option("--depth", cldepth, "pipeline depth");
    classify->add_option("--base-log-height", clbase, "pipeline base log-height");

    // -- dimbox ------------------------------------------------------------------------------
    auto* dimbox = app.add_subcommand("dimbox", "box-counting slope of built-in point sets");
    std::string dset = "segment";
    int ddepth = 10;
    dimbox->add_option("--set", dset)
        ->check(CLI::IsMember({"segment", "cantor3", "product", "sing2"}));
    dimbox->add_option("--depth", ddepth);

    // -- verify ------------------------------------------------------------------------------
    auto* verify_cmd = app.add_subcommand("verify", "run the module invariant suites");
    bool vfull = false;
    verify_cmd->add_flag("--full", vfull, "acceptance-scale budgets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        ExperimentConfig cfg;
        if (!config_path.empty()) cfg = load_config_file(config_path, cfg);
        cfg.seed = seed;
        if (workers > 0) cfg.workers = workers;
        if (format == "json") cfg.format = OutputFormat::Json;
        cfg.validate();
        Output out{out_path, cfg.format};
        const int nworkers = parallel::resolve_workers(cfg.workers);

        if (*targets) {
            double base = tk * (tn - 1) - (tn - 1) / 2.0;
            double full = tk * (2 * tn - 1) - (tn - 1) / 2.0;
            io::Table t({"k", "n", "base_target", "full_target"});
            t.add_row({std::to_string(tk), std::to_string(tn), fmt_double(base),
                       fmt_double(full)});
            out.table(t);
        } else if (*spectrum) {
            excursion::Direction x = require_dir(sx, "--x");
            BigRat theta = require_rat(stheta, "--theta");
            BigInt h_max(sh_max);
            auto spec = s_enum ? excursion::spectrum_by_enumeration(x, theta, h_max)
                               : excursion::spectrum(x, theta, h_max);
            io::Table t({"p", "q", "t_enter", "t_peak", "t_exit", "peak"});
            for (auto& row : excursion::spectrum_rows(spec)) t.add_row(row);
            out.table(t);
            if (spec.truncated) std::cerr << "note: spectrum truncated by precision budget\n";
        } else if (*count) {
            io::Table t({"t", "count", "log_count"});
            std::vector<double> grid;
            for (double tv = ct_min; tv <= ct_max + 1e-9; tv += ct_step) grid.push_back(tv);
            if (cmodel == "modular") {
                lattice::ModularModel model;
                lattice::Cusp a = require_cusp(ca, "--a");
                for (double tv : grid) {
                    BigInt c = counting::count_annulus(model, a, cA1, cA2, cA3, tv);
                    t.add_row({fmt_double(tv), c.str(),
                               fmt_double(c == 0 ? 0.0 : log_big(c))});
                }
                auto fit = counting::growth_exponent(model, a, cA1, cA2, cA3, grid);
                std::cerr << "slope=" << fmt_double(fit.slope)
                          << " min_count_over_rate=" << fmt_double(fit.min_count_over_rate)
                          << "\n";
            } else {
                lattice::GaussianModel model;
                lattice::GaussCusp zero{{BigInt(0), BigInt(0)}, {BigInt(1), BigInt(0)}};
                for (double tv : grid) {
                    BigInt c = counting::count_annulus_gauss(model, zero, cA1, cA2, cA3, tv);
                    t.add_row({fmt_double(tv), c.str(),
                               fmt_double(c == 0 ? 0.0 : log_big(c))});
                }
            }
            out.table(t);
        } else if (*net) {
            lattice::ModularModel model;
            auto built = counting::build_net(model, {require_rat(nlo, "--lo"), require_rat(nhi, "--hi")},
                                             BigInt(nN), require_rat(nc, "--c"),
                                             require_rat(ncp, "--c-prime"));
            io::Table t({"p", "q", "location"});
            for (const auto& m : built.members)
                t.add_row({m.num.str(), m.den.str(), rat_string(m.location())});
            out.table(t);
            std::cerr << "members=" << built.members.size()
                      << " covering_verified=" << (built.covering_verified ? "yes" : "no") << "\n";
        } else if (*witness) {
            excursion::Direction x = require_dir(wx, "--x");
            BigInt X(wX);
            lattice::Cusp w = counting::dirichlet_witness(x, X);
            io::Table t({"p", "q", "height"});
            t.add_row({w.num.str(), w.den.str(), w.height().str()});
            out.table(t);
        } else if (*cantor_cmd) {
            cantor::CantorNode tree;
            if (kind == "steep") {
                cantor::SteepParams P;
                P.delta = require_rat(kdelta, "--delta");
                P.eps = require_rat(keps, "--eps");
                P.depth = kdepth;
                tree = cantor::build_steep_tree(require_cusp(kroot, "--root"),
                                                require_cusp(kprev, "--prev"), P);
            } else {
                cantor::SeparatedPairParams pp;
                pp.delta = require_rat(kdelta, "--delta");
                pp.eps = require_rat(keps, "--eps");
                pp.depth = kdepth + 1;
                pp.base_log_height = kbase_log_h;
                tree = cantor::build_separated_pair(pp).slice_path;
            }
            auto rep = cantor::evaluate_bound(tree);
            io::Table t({"j", "d_j", "delta_j", "s_j"});
            for (auto& row : rep.csv_rows()) t.add_row(row);
            out.table(t);
            if (!dump_tree.empty()) {
                std::ofstream f(dump_tree);
                f << tree_json(tree).dump(1) << "\n";
            }
        } else if (*cover) {
            BigRat delta = require_rat(cdelta, "--delta");
            covering::Truncation tr;
            tr.height_cap = BigInt(ctrunc);
            if (cmode == "chain") {
                cantor::SeparatedPairParams pp;
                pp.delta = delta;
                pp.depth = cdepth;
                pp.base_log_height = cbase_log_h;
                auto pair = cantor::build_separated_pair(pp);
                auto ts = product::compute_spectra(pair.tuple);
                auto rep = covering::chain_extract(pair.tuple, ts, delta, pair.horizon,
                                                   require_rat(cconst, "--c"));
                nlohmann::json j;
                j["chain"] = nlohmann::json::array();
                for (const auto& nd : rep.chain) j["chain"].push_back(node_json(nd));
                j["contraction"] = rep.contraction;
                j["violations"] = rep.violations;
                j["ok"] = rep.ok();
                std::cout << j.dump(1) << "\n";
                if (!rep.ok()) return kExitInvariant;
            } else {
                auto pos = ccusps.find(',');
                if (pos == std::string::npos)
                    throw std::invalid_argument("--node needs two comma-separated cusps");
                auto node = covering::make_node({require_cusp(ccusps.substr(0, pos), "--node"),
                                                 require_cusp(ccusps.substr(pos + 1), "--node")},
                                                0, 1, delta, require_rat(cconst, "--c"));
                if (cmode == "sum") {
                    auto sum = covering::covering_sum(node, cs, delta, tr);
                    io::Table t({"s", "sum", "terms", "truncated"});
                    t.add_row({fmt_double(cs), fmt_double(sum.sum), std::to_string(sum.terms),
                               sum.truncated ? "1" : "0"});
                    out.table(t);
                } else {
                    double star = covering::covering_crossing(node, delta, tr);
                    io::Table t({"s_star", "truncation"});
                    t.add_row({fmt_double(star), ctrunc});
                    out.table(t);
                }
            }
        } else if (*classify) {
            product::DirectionTuple xs;
            double window = clwindow;
            if (cl_pipeline) {
                cantor::SeparatedPairParams pp;
                pp.delta = require_rat(cldelta, "--delta");
                pp.depth = cldepth;
                pp.base_log_height = clbase;
                auto pair = cantor::build_separated_pair(pp);
                xs = pair.tuple;
                window = pair.horizon;
            } else {
                xs.components = {require_dir(clx1, "--x1"), require_dir(clx2, "--x2")};
                xs.h_max = BigInt(1) << 48;
            }
            auto ts = product::compute_spectra(xs);
            if (cl_trace) {
                auto trace = product::minima_trace(ts, window);
                io::Table t({"t", "value", "from", "to", "cusp_from", "cusp_to"});
                for (auto& row : product::trace_rows(trace)) t.add_row(row);
                out.table(t);
            } else {
                auto cls = product::classify(ts, require_rat(cldelta, "--delta"), window);
                io::Table t({"classification", "t_window"});
                t.add_row({product::to_string(cls), fmt_double(window)});
                out.table(t);
            }
        } else if (*dimbox) {
            std::vector<std::vector<double>> pts;
            std::vector<double> scales;
            std::mt19937_64 gen(cfg.seed);
            if (dset == "segment") {
                for (int i = 0; i < 5000; ++i) pts.push_back({i / 5000.0, 0.5});
                for (int k = 4; k <= 9; ++k) scales.push_back(std::pow(2.0, -k));
            } else if (dset == "cantor3") {
                int depth = std::min(ddepth, 14);
                for (int i = 0; i < (1 << depth); ++i) {
                    double x = 0, p = 1;
                    for (int b = 0; b < depth; ++b) {
                        p /= 3;
                        if (i & (1 << b)) x += 2 * p;
                    }
                    pts.push_back({x});
                }
                for (int k = 2; k <= std::min(8, depth - 2); ++k)
                    scales.push_back(std::pow(3.0, -k));
            } else if (dset == "product") {
                int depth = 10;
                std::uniform_int_distribution<int> bit(0, 1);
                for (int i = 0; i < 20000; ++i) {
                    double x = 0, p = 1;
                    for (int b = 0; b < depth; ++b) {
                        p /= 3;
                        if (bit(gen)) x += 2 * p;
                    }
                    double y = std::uniform_real_distribution<double>(0, 1)(gen);
                    pts.push_back({x, y});
                }
                for (int k = 2; k <= 6; ++k) scales.push_back(std::pow(3.0, -k));
            } else {  // sing2
                cantor::SteepParams P;
                P.delta = BigRat(1);
                P.depth = 2;
                P.branch_cap = 64;
                P.recurse_cap = 64;
                auto tree = cantor::build_steep_tree(lattice::Cusp{1, 2}, lattice::Cusp{0, 1}, P);
                std::vector<double> xs1;
                std::vector<const cantor::CantorNode*> stack{&tree};
                while (!stack.empty()) {
                    const auto* nd = stack.back();
                    stack.pop_back();
                    if (nd->children.empty())
                        xs1.push_back(nd->center.convert_to<double>());
                    for (const auto& ch : nd->children) stack.push_back(&ch);
                }
                lattice::ModularModel model;
                auto netE = counting::build_net(model, {BigRat(0), BigRat(1)}, BigInt(1) << 22);
                for (double x1 : xs1)
                    for (const auto& m : netE.members)
                        pts.push_back({x1, m.location().convert_to<double>()});
                for (int k = 4; k <= 10; ++k) scales.push_back(std::pow(2.0, -k));
            }
            auto fit = product::box_count_dimension(pts, scales);
            io::Table t({"scale", "count"});
            for (size_t i = 0; i < scales.size(); ++i)
                t.add_row({fmt_double(scales[i]), std::to_string(fit.counts[i])});
            out.table(t);
            std::cerr << "slope=" << fmt_double(fit.slope)
                      << " max_residual=" << fmt_double(fit.max_residual) << "\n";
        } else if (*verify_cmd) {
            verify::Options vo;
            vo.full = vfull;
            vo.seed = cfg.seed;
            auto results = verify::run_all(vo);
            int failures = 0;
            for (const auto& r : results) {
                std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name;
                if (!r.detail.empty()) std::cout << "  (" << r.detail << ")";
                std::cout << "\n";
                if (!r.passed) ++failures;
            }
            std::cout << (failures == 0 ? "verify: all checks passed\n"
                                        : "verify: " + std::to_string(failures) + " failures\n");
            if (failures > 0) return kExitInvariant;
        }
        (void)nworkers;
        return 0;
    } catch (const counting::BudgetExceeded& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvariant;
    }
}
