#include "mlab/cli_app.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "mlab/common.hpp"
#include "mlab/hyperbolicity.hpp"
#include "mlab/io.hpp"

namespace mlab::cli {

namespace {

Json matrix_json(std::span<const double> m, int rows, int cols) {
    Json out = Json::array();
    for (int r = 0; r < rows; ++r) {
        Json row = Json::array();
        for (int c = 0; c < cols; ++c) row.push_back(m[static_cast<std::size_t>(r) * cols + c]);
        out.push_back(std::move(row));
    }
    return out;
}

Json pairs_json(const std::vector<std::pair<int, int>>& pairs) {
    Json out = Json::array();
    for (auto [a, b] : pairs) out.push_back(Json::array({a, b}));
    return out;
}

std::vector<int> parse_index_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            fail(errc::usage_error, "bad index '" + tok + "'");
        }
    }
    return out;
}

struct Emitter {
    std::ostream* out;
    std::ostream* err;
    bool quiet = false;
    std::string out_path;

    void record(const Json& j) const {
        if (!out_path.empty()) write_json_file(out_path, j);
        *out << j.dump() << '\n';
    }
    void note(const std::string& line) const {
        if (!quiet) *err << "# " << line << '\n';
    }
};

struct GhbFlags {
    bool exact = false;
    bool heuristic = false;
    long long budget = 20000;
    int restarts = 5;
    std::uint64_t seed = kDefaultSeed;
    int cap = 14;
};

void run_ghb(const Emitter& em, const GhbFlags& f, const std::string& fx,
             const std::string& fy) {
    const LoadedSpace lx = load_space_file(fx);
    const LoadedSpace ly = load_space_file(fy);
    const bool want_exact =
        f.exact || (!f.heuristic && lx.space.n + ly.space.n <= f.cap);
    GhbBracket b;
    if (want_exact) {
        b = ghb_exact(lx.space, ly.space, f.cap);
    } else {
        HeuristicOptions opt;
        opt.budget = f.budget;
        opt.restarts = f.restarts;
        opt.seed = f.seed;
        if (lx.cloud && ly.cloud) alignment_hint(*lx.cloud, *ly.cloud, opt.hint_xy, opt.hint_yx);
        b = ghb_heuristic(lx.space, ly.space, opt);
    }
    Json j;
    j["kind"] = "ghb_bracket";
    j["version"] = 1;
    j["lower"] = b.lower;
    j["upper"] = b.upper;
    j["method"] = b.method == BracketMethod::exact ? "exact" : "heuristic";
    j["witness"] = pairs_json(b.witness.pairs);
    em.record(j);
    // the point estimate stays out of the machine record; brackets only
    em.note("d_GHB in [" + std::to_string(b.lower) + ", " + std::to_string(b.upper) +
            "], bracket midpoint " + std::to_string((b.lower + b.upper) / 2.0));
}

int dispatch(int argc, const char* const* argv, const Emitter& base_em) {
    CLI::App app{"finite marked-metric-space toolkit"};
    app.set_help_flag("--help", "print help");  // frees -h for the --h mesh option
    app.require_subcommand(1);

    Emitter em = base_em;
    int threads = 0;
    app.add_option("--threads", threads, "worker threads (default: hardware)");
    app.add_flag("--quiet", em.quiet, "suppress human-readable notes");

    std::function<void()> action;

    // validate
    auto* validate = app.add_subcommand("validate", "check metric axioms of a space file");
    {
        auto file = std::make_shared<std::string>();
        validate->add_option("file", *file)->required();
        validate->add_option("--out", em.out_path, "also write the record to a file");
        validate->callback([&em, file, &action] {
            action = [&em, file] {
                const Json j = load_json_file(*file);
                Json rec;
                rec["kind"] = "validation";
                rec["version"] = 1;
                std::vector<MetricViolation> violations;
                int n = 0;
                if (j.value("kind", "") == "point_cloud") {
                    const PointCloud cloud = point_cloud_from_json(j);
                    n = cloud.size();  // Euclidean input, axioms hold by construction
                } else {
                    RawMarkedSpace raw = marked_space_raw_from_json(j);
                    n = raw.n;
                    ValidationOutcome v =
                        validate_space(raw.n, raw.dist, std::move(raw.boundary), std::move(raw.labels));
                    violations = std::move(v.violations);
                }
                rec["n"] = n;
                rec["valid"] = violations.empty();
                if (!violations.empty()) {
                    Json list = Json::array();
                    for (const auto& v : violations) {
                        Json item;
                        item["error"] = errc_name(v.kind);
                        Json w = Json::array({v.i, v.j});
                        if (v.k >= 0) w.push_back(v.k);
                        item["witness"] = std::move(w);
                        item["value"] = v.detail;
                        list.push_back(std::move(item));
                    }
                    rec["violations"] = std::move(list);
                }
                em.record(rec);
                if (!rec["valid"].get<bool>()) fail(errc::spec_invalid, "space fails metric axioms");
            };
        });
    }

    // hausdorff
    auto* hd = app.add_subcommand("hausdorff", "Hausdorff distance between index subsets");
    {
        struct Args {
            std::string file, a, b, ba, bb;
        };
        auto args = std::make_shared<Args>();
        hd->add_option("file", args->file)->required();
        hd->add_option("--a", args->a, "comma-separated indices of A")->required();
        hd->add_option("--b", args->b, "comma-separated indices of B")->required();
        hd->add_option("--boundary-a", args->ba, "boundary part of A (with-boundary variant)");
        hd->add_option("--boundary-b", args->bb, "boundary part of B (with-boundary variant)");
        hd->add_option("--out", em.out_path);
        hd->callback([&em, args, &action] {
            action = [&em, args] {
                const LoadedSpace ls = load_space_file(args->file);
                Json rec;
                rec["version"] = 1;
                if (args->ba.empty() != args->bb.empty())
                    fail(errc::usage_error, "--boundary-a and --boundary-b come together");
                if (args->ba.empty()) {
                    const PointSubset a{&ls.space, parse_index_list(args->a)};
                    const PointSubset b{&ls.space, parse_index_list(args->b)};
                    rec["kind"] = "hausdorff";
                    rec["value"] = hausdorff(a, b);
                } else {
                    const MarkedSubspace x1{&ls.space, parse_index_list(args->a),
                                            parse_index_list(args->ba)};
                    const MarkedSubspace x2{&ls.space, parse_index_list(args->b),
                                            parse_index_list(args->bb)};
                    rec["kind"] = "hausdorff_with_boundary";
                    rec["value"] = hausdorff_with_boundary(x1, x2);
                }
                em.record(rec);
            };
        });
    }

    // ghb
    auto* ghb = app.add_subcommand("ghb", "Gromov-Hausdorff-with-boundary bracket");
    {
        auto flags = std::make_shared<GhbFlags>();
        auto files = std::make_shared<std::vector<std::string>>();
        ghb->add_flag("--exact", flags->exact, "exact branch-and-bound search");
        ghb->add_flag("--heuristic", flags->heuristic, "annealed upper bound");
        ghb->add_option("--budget", flags->budget, "total annealing iterations");
        ghb->add_option("--restarts", flags->restarts);
        ghb->add_option("--seed", flags->seed);
        ghb->add_option("--cap", flags->cap, "exact-size cap on |X|+|Y|");
        ghb->add_option("files", *files, "two space files")->expected(2);
        ghb->add_option("--out", em.out_path);
        ghb->callback([&em, flags, files, &action] {
            action = [&em, flags, files] {
                if (flags->exact && flags->heuristic)
                    fail(errc::usage_error, "--exact and --heuristic are exclusive");
                run_ghb(em, *flags, files->at(0), files->at(1));
            };
        });
    }

    // delta
    auto* delta = app.add_subcommand("delta", "four-point hyperbolicity constant");
    {
        auto file = std::make_shared<std::string>();
        delta->add_option("file", *file)->required();
        delta->add_option("--out", em.out_path);
        delta->callback([&em, file, &action] {
            action = [&em, file] {
                const LoadedSpace ls = load_space_file(*file);
                const HyperbolicityReport hr = four_point_delta(ls.space);
                Json rec;
                rec["kind"] = "hyperbolicity";
                rec["version"] = 1;
                rec["delta"] = hr.delta;
                rec["witness"] =
                    Json::array({hr.witness[0], hr.witness[1], hr.witness[2], hr.witness[3]});
                rec["quadruples_scanned"] = hr.quadruples_scanned;
                em.record(rec);
            };
        });
    }

    // visual
    auto* visual = app.add_subcommand("visual", "visual metric on the designated boundary");
    {
        struct Args {
            std::string file;
            double eps = 0.0;
            int base = 0;
            double delta = -1.0;
        };
        auto args = std::make_shared<Args>();
        visual->add_option("file", args->file)->required();
        visual->add_option("--eps", args->eps)->required();
        visual->add_option("--base", args->base)->required();
        visual->add_option("--delta", args->delta, "skip the delta measurement");
        visual->add_option("--out", em.out_path);
        visual->callback([&em, args, &action] {
            action = [&em, args] {
                const LoadedSpace ls = load_space_file(args->file);
                const VisualMetricResult vm =
                    visual_metric(ls.space, args->base, args->eps, args->delta);
                Json rec;
                rec["kind"] = "visual_metric";
                rec["version"] = 1;
                rec["base"] = args->base;
                rec["eps"] = args->eps;
                rec["boundary"] = vm.boundary_ids;
                rec["matrix"] = matrix_json(vm.matrix, static_cast<int>(vm.boundary_ids.size()),
                                            static_cast<int>(vm.boundary_ids.size()));
                if (!vm.warning.empty()) rec["warning"] = vm.warning;
                em.record(rec);
            };
        });
    }

    // starlike
    auto* starlike = app.add_subcommand("starlike", "rough-starlikeness constant");
    {
        struct Args {
            std::string file, targets;
            int base = 0;
        };
        auto args = std::make_shared<Args>();
        starlike->add_option("file", args->file)->required();
        starlike->add_option("--base", args->base)->required();
        starlike->add_option("--targets", args->targets, "comma-separated ray targets");
        starlike->add_option("--out", em.out_path);
        starlike->callback([&em, args, &action] {
            action = [&em, args] {
                const LoadedSpace ls = load_space_file(args->file);
                const std::vector<int> targets = parse_index_list(args->targets);
                const StarlikeResult sr = rough_starlike_constant(ls.space, args->base, targets);
                Json rec;
                rec["kind"] = "starlike";
                rec["version"] = 1;
                rec["base"] = args->base;
                rec["M"] = sr.M;
                rec["witness"] = sr.witness;
                rec["targets"] = sr.targets;
                em.record(rec);
            };
        });
    }

    // conformal commands share the cloud+h preamble
    struct ConformalArgs {
        std::string file;
        double h = 0.0;
        double eps = 0.0;
        double R = 0.0;
        int base = -1;  // cloud index; -1 = deepest interior node
        double delta = -1.0;
    };
    auto conformal_graph = [](const ConformalArgs& a) {
        return build_domain_graph(load_point_cloud_file(a.file), a.h);
    };
    auto resolve_base = [](const DomainGraph& g, int base) {
        return base < 0 ? g.deepest_node() : base;
    };

    auto* qh = app.add_subcommand("qh", "quasihyperbolic metric of a point cloud");
    qh->set_help_flag("--help", "print help");
    {
        auto args = std::make_shared<ConformalArgs>();
        qh->add_option("file", args->file)->required();
        qh->add_option("--h", args->h, "connection radius")->required();
        qh->add_option("--out", em.out_path);
        qh->callback([&em, args, conformal_graph, &action] {
            action = [&em, args, conformal_graph] {
                const DomainGraph g = conformal_graph(*args);
                const std::vector<double> k = quasihyperbolic_metric(g);
                Json rec;
                rec["kind"] = "quasihyperbolic";
                rec["version"] = 1;
                rec["interior_nodes"] = g.interior_nodes;
                rec["matrix"] = matrix_json(k, g.interior_count(), g.interior_count());
                em.record(rec);
            };
        });
    }

    auto* unif = app.add_subcommand("uniformize", "uniformization metric of a point cloud");
    unif->set_help_flag("--help", "print help");
    {
        auto args = std::make_shared<ConformalArgs>();
        unif->add_option("file", args->file)->required();
        unif->add_option("--eps", args->eps)->required();
        unif->add_option("--h", args->h)->required();
        unif->add_option("--base", args->base, "base cloud index (default: deepest)");
        unif->add_option("--delta", args->delta, "skip the delta measurement");
        unif->add_option("--out", em.out_path);
        unif->callback([&em, args, conformal_graph, resolve_base, &action] {
            action = [&em, args, conformal_graph, resolve_base] {
                const DomainGraph g = conformal_graph(*args);
                const int base = resolve_base(g, args->base);
                std::optional<double> hint;
                if (args->delta >= 0) hint = args->delta;
                const UniformizeResult u = uniformize(g, base, args->eps, hint);
                Json rec;
                rec["kind"] = "uniformize";
                rec["version"] = 1;
                rec["base"] = base;
                rec["eps"] = args->eps;
                rec["diameter"] = u.diameter;
                rec["interior_nodes"] = g.interior_nodes;
                rec["matrix"] = matrix_json(u.matrix, g.interior_count(), g.interior_count());
                if (!u.warning.empty()) rec["warning"] = u.warning;
                em.record(rec);
            };
        });
    }

    auto* unity = app.add_subcommand("uniformity", "uniformity-constant estimate");
    unity->set_help_flag("--help", "print help");
    {
        auto args = std::make_shared<ConformalArgs>();
        unity->add_option("file", args->file)->required();
        unity->add_option("--h", args->h)->required();
        unity->add_option("--out", em.out_path);
        unity->callback([&em, args, conformal_graph, &action] {
            action = [&em, args, conformal_graph] {
                const DomainGraph g = conformal_graph(*args);
                const UniformityEstimate ue = estimate_uniformity_constant(g);
                Json rec;
                rec["kind"] = "uniformity";
                rec["version"] = 1;
                rec["A"] = ue.A;
                rec["worst_pair"] = Json::array({ue.worst_from, ue.worst_to});
                rec["exact"] = ue.exact;
                em.record(rec);
            };
        });
    }

    auto* clear = app.add_subcommand("clearance", "quasihyperbolic ball clearance bound");
    clear->set_help_flag("--help", "print help");
    {
        auto args = std::make_shared<ConformalArgs>();
        clear->add_option("file", args->file)->required();
        clear->add_option("--R", args->R)->required();
        clear->add_option("--h", args->h)->required();
        clear->add_option("--base", args->base, "base cloud index (default: deepest)");
        clear->add_option("--out", em.out_path);
        clear->callback([&em, args, conformal_graph, resolve_base, &action] {
            action = [&em, args, conformal_graph, resolve_base] {
                const DomainGraph g = conformal_graph(*args);
                const int base = resolve_base(g, args->base);
                const ClearanceResult cr = qh_ball_clearance(g, base, args->R);
                Json rec;
                rec["kind"] = "clearance";
                rec["version"] = 1;
                rec["base"] = base;
                rec["R"] = args->R;
                rec["c"] = cr.c;
                rec["inclusion_holds"] = cr.inclusion_holds;
                rec["violations"] = cr.violations;
                em.record(rec);
            };
        });
    }

    // lab
    auto* lab = app.add_subcommand("lab", "domain-sequence experiments");
    lab->require_subcommand(1);
    {
        struct GenArgs {
            std::string family, variant = "mid", out;
            int index = 0;
            double mesh = 0.125, param = 0.0;
        };
        auto gen_args = std::make_shared<GenArgs>();
        auto* gen = lab->add_subcommand("gen", "emit one family member as a point cloud file");
        gen->add_option("--family", gen_args->family)->required();
        gen->add_option("--index", gen_args->index);
        gen->add_option("--mesh", gen_args->mesh);
        gen->add_option("--param", gen_args->param);
        gen->add_option("--variant", gen_args->variant);
        gen->add_option("--out", gen_args->out)->required();
        gen->callback([&em, gen_args, &action] {
            action = [&em, gen_args] {
                DomainSequenceSpec spec;
                spec.family = family_from_name(gen_args->family);
                spec.index_lo = spec.index_hi = gen_args->index;
                spec.meshes = {gen_args->mesh};
                spec.param = gen_args->param;
                spec.variant = gen_args->variant;
                const PointCloud cloud = generate_member(spec, gen_args->index);
                write_json_file(gen_args->out, point_cloud_to_json(cloud));
                int interior = 0;
                for (char b : cloud.boundary) interior += (b == 0);
                Json rec;
                rec["kind"] = "generated";
                rec["version"] = 1;
                rec["path"] = gen_args->out;
                rec["points"] = cloud.size();
                rec["interior"] = interior;
                rec["boundary"] = cloud.size() - interior;
                em.record(rec);
            };
        });

        struct RunArgs {
            std::string experiment, family, indices = "0..3", meshes, variant = "mid", table;
            double param = 0.0;
            long long budget = 20000;
            int restarts = 5;
            std::uint64_t seed = kDefaultSeed;
        };
        auto run_args = std::make_shared<RunArgs>();
        auto* runc = lab->add_subcommand("run", "run a convergence experiment");
        runc->add_option("--experiment", run_args->experiment)->required();
        runc->add_option("--family", run_args->family)->required();
        runc->add_option("--indices", run_args->indices, "inclusive range a..b");
        runc->add_option("--mesh-schedule", run_args->meshes, "comma-separated, one or per-index")
            ->required();
        runc->add_option("--param", run_args->param);
        runc->add_option("--variant", run_args->variant);
        runc->add_option("--budget", run_args->budget);
        runc->add_option("--restarts", run_args->restarts);
        runc->add_option("--seed", run_args->seed);
        runc->add_option("--table", run_args->table, "also emit a flat TSV, one row per index");
        runc->add_option("--out", em.out_path, "write the report to a file as well");
        runc->callback([&em, run_args, &action] {
            action = [&em, run_args] {
                DomainSequenceSpec spec;
                spec.family = family_from_name(run_args->family);
                const auto dots = run_args->indices.find("..");
                if (dots == std::string::npos)
                    fail(errc::usage_error, "--indices must look like a..b");
                try {
                    spec.index_lo = std::stoi(run_args->indices.substr(0, dots));
                    spec.index_hi = std::stoi(run_args->indices.substr(dots + 2));
                } catch (const std::exception&) {
                    fail(errc::usage_error, "--indices must look like a..b");
                }
                std::stringstream ss(run_args->meshes);
                std::string tok;
                while (std::getline(ss, tok, ',')) {
                    if (tok.empty()) continue;
                    try {
                        spec.meshes.push_back(std::stod(tok));
                    } catch (const std::exception&) {
                        fail(errc::usage_error, "bad mesh '" + tok + "'");
                    }
                }
                spec.param = run_args->param;
                spec.variant = run_args->variant;
                LabOptions opt;
                opt.seed = run_args->seed;
                opt.budget = run_args->budget;
                opt.restarts = run_args->restarts;
                const ExperimentReport rep =
                    run_experiment(spec, theorem_from_name(run_args->experiment), opt);
                em.record(experiment_report_to_json(rep));
                if (!run_args->table.empty()) {
                    std::ofstream table(run_args->table);
                    if (!table) fail(errc::file_not_found, "cannot write " + run_args->table);
                    std::vector<std::string> columns;  // union, first-appearance order
                    for (const auto& step : rep.steps)
                        for (const auto& [key, value] : step.values)
                            if (std::find(columns.begin(), columns.end(), key) == columns.end())
                                columns.push_back(key);
                    table << "index";
                    for (const auto& c : columns) table << '\t' << c;
                    table << '\n';
                    for (const auto& step : rep.steps) {
                        table << step.index;
                        for (const auto& c : columns) {
                            table << '\t';
                            for (const auto& [key, value] : step.values)
                                if (key == c) {
                                    table << Json(value).dump();
                                    break;
                                }
                        }
                        table << '\n';
                    }
                }
                em.note("lab run " + rep.experiment + " finished in " +
                        std::to_string(rep.runtime_seconds) + " s");
            };
        });
    }

    // let --quiet/--threads appear after the subcommand
    std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* a) {
        for (CLI::App* sub : a->get_subcommands([](const CLI::App*) { return true; })) {
            sub->fallthrough();
            enable_fallthrough(sub);
        }
    };
    enable_fallthrough(&app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            std::stringstream help;
            help << app.help();
            *base_em.err << help.str();
            return 0;
        }
        *base_em.err << "usage error: " << e.what() << '\n';
        return 2;
    }
    if (threads > 0) set_thread_request(threads);

    try {
        action();
    } catch (const Error& e) {
        Json rec;
        rec["kind"] = "error";
        rec["code"] = errc_name(e.code());
        rec["detail"] = e.what();
        *base_em.out << rec.dump() << '\n';
        *base_em.err << e.what() << '\n';
        return e.code() == errc::usage_error ? 2 : 1;
    } catch (const std::exception& e) {
        *base_em.err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Emitter em;
    em.out = &out;
    em.err = &err;
    return dispatch(argc, argv, em);
}

}  // namespace mlab::cli
