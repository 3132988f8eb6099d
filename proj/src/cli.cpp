#include "maxgraph/cli.hpp"

#include "maxgraph/catalog.hpp"
#include "maxgraph/completeness.hpp"
#include "maxgraph/duality.hpp"
#include "maxgraph/expr.hpp"
#include "maxgraph/parallel.hpp"
#include "maxgraph/scene.hpp"
#include "maxgraph/serialize.hpp"
#include "maxgraph/solver.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace maxgraph::cli {

namespace {

using serialize::Json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Point parse_point(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw UsageError("expected a point as x1,x2, got '" + text + "'");
    try {
        std::size_t used1 = 0, used2 = 0;
        const std::string a = text.substr(0, comma), b = text.substr(comma + 1);
        const double x1 = std::stod(a, &used1), x2 = std::stod(b, &used2);
        if (used1 != a.size() || used2 != b.size()) throw std::invalid_argument(text);
        return {x1, x2};
    } catch (const std::logic_error&) {
        throw UsageError("expected a point as x1,x2, got '" + text + "'");
    }
}

// Written next to the target and renamed, so readers never see a partial file.
void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw ValidationError("cannot write '" + path + "'");
        f << content;
        if (!f) throw ValidationError("cannot write '" + path + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw ValidationError("cannot write '" + path + "'");
    }
}

struct Output {
    std::string path;
    std::string format;  // csv | json, empty = by extension

    bool json(bool default_json = false) const {
        if (!format.empty()) return format == "json";
        if (path.empty()) return default_json;
        return std::filesystem::path(path).extension() == ".json";
    }
};

std::string grid_text(const Grid2D& g, bool as_json) {
    if (as_json) return serialize::grid_to_json(g).dump(2) + "\n";
    std::ostringstream s;
    g.write_csv(s);
    return s.str();
}

void emit(std::ostream& out, const std::string& path, const std::string& text) {
    if (path.empty()) {
        out << text;
    } else {
        write_atomic(path, text);
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Geometry of spacelike and minimal graphs over conformal surfaces"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    std::string scene_path, field, grid, curve, problem, basepoint, point, kind = "auto",
                direction = "min-to-max";
    Output output;
    double tol = -1.0;
    double eps_space = 1e-6;
    int max_iter = 50;
    bool as_json = false;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--scene", scene_path, "Scene file (JSON)")->required();
    };
    auto outputs = [&](CLI::App* sub) {
        sub->add_option("--out", output.path, "Output file; stdout when omitted");
        sub->add_option("--format", output.format, "csv or json (default: by --out extension)")
            ->check(CLI::IsMember({"csv", "json"}));
    };

    auto* residual = app.add_subcommand("residual", "Minimal/Maximal operator residual on a grid");
    common(residual);
    residual->add_option("--field", field)->required();
    residual->add_option("--grid", grid)->required();
    residual->add_option("--kind", kind, "minimal, maximal or auto (by signature)")
        ->check(CLI::IsMember({"auto", "minimal", "maximal"}));
    outputs(residual);

    auto* invariants = app.add_subcommand("invariants", "Point reports of the Lorentzian identity suite");
    common(invariants);
    invariants->add_option("--field", field)->required();
    auto* at_point = invariants->add_option("--point", point, "x1,x2");
    auto* at_grid = invariants->add_option("--grid", grid);
    at_point->excludes(at_grid);
    invariants->add_option("--out", output.path);

    auto* dualize = app.add_subcommand("dualize", "Reconstruct the dual potential on a grid");
    common(dualize);
    dualize->add_option("--field", field)->required();
    dualize->add_option("--grid", grid)->required();
    dualize->add_option("--basepoint", basepoint, "x1,x2")->required();
    dualize->add_option("--direction", direction)->check(CLI::IsMember({"min-to-max", "max-to-min"}));
    dualize->add_option("--tol", tol, "Closedness certification threshold (default 1e-8)");
    outputs(dualize);

    auto* length = app.add_subcommand("length", "Induced length of a scene curve");
    common(length);
    length->add_option("--curve", curve)->required();
    length->add_option("--tol", tol, "Quadrature tolerance (default 1e-9)");
    length->add_flag("--json", as_json, "Print the full result as JSON");

    auto* scan = app.add_subcommand("scan", "Infimum of the induced-to-base metric ratio over a grid");
    common(scan);
    scan->add_option("--field", field)->required();
    scan->add_option("--grid", grid)->required();

    auto* solve = app.add_subcommand("solve", "Newton solve of a scene Dirichlet problem");
    common(solve);
    solve->add_option("--problem", problem)->required();
    solve->add_option("--tol", tol, "Newton residual tolerance (default 1e-10)");
    solve->add_option("--eps-space", eps_space, "Lorentzian spacelike margin floor");
    solve->add_option("--max-iter", max_iter);
    outputs(solve);

    std::string catalog_action, catalog_name;
    auto* catalog_cmd = app.add_subcommand("catalog", "List or export built-in examples");
    catalog_cmd->add_option("action", catalog_action, "list or export")
        ->required()
        ->check(CLI::IsMember({"list", "export"}));
    catalog_cmd->add_option("name", catalog_name);

    auto* sample = app.add_subcommand("grid", "Sample a field on a grid");
    common(sample);
    sample->add_option("--field", field)->required();
    sample->add_option("--grid", grid)->required();
    outputs(sample);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (catalog_cmd->parsed()) {
            if (catalog_action == "list") {
                for (const auto& n : catalog::names()) {
                    const auto e = catalog::get_example(n);
                    out << n << "\t" << e.description << "\n";
                }
            } else {
                if (catalog_name.empty()) throw UsageError("catalog export needs a name");
                out << serialize::catalog_snippet(catalog::get_example(catalog_name)).dump(2) << "\n";
            }
            return 0;
        }

        const scene::Scene sc = scene::Scene::load(scene_path);

        if (residual->parsed()) {
            const auto& spec = sc.grid(grid);
            const ScalarField u = sc.field(field).u;
            const bool maximal = kind == "maximal" ||
                                 (kind == "auto" && sc.signature == graph::Signature::Lorentzian);
            const Grid2D g = Grid2D::sample(spec, [&](const Point& p) {
                return maximal ? graph::residual_maximal(u, sc.metric, p)
                               : graph::residual_minimal(u, sc.metric, p);
            });
            emit(out, output.path, grid_text(g, output.json()));
        } else if (invariants->parsed()) {
            const auto s = sc.surface(field);
            Json doc;
            if (!point.empty()) {
                doc = serialize::to_json(graph::invariant_report(s, parse_point(point)));
            } else {
                if (grid.empty()) throw UsageError("invariants needs --point or --grid");
                const auto& spec = sc.grid(grid);
                std::vector<Json> reports(spec.size());
                parallel_for(spec.size(), [&](std::size_t k) {
                    reports[k] = serialize::to_json(
                        graph::invariant_report(s, spec.node(k % spec.nx, k / spec.nx)));
                });
                doc = Json(reports);
            }
            emit(out, output.path, doc.dump(2) + "\n");
        } else if (dualize->parsed()) {
            duality::Options opts;
            opts.direction = direction == "min-to-max" ? duality::Direction::MinimalToMaximal
                                                       : duality::Direction::MaximalToMinimal;
            if (tol > 0) opts.closed_tol = tol;
            const auto& spec = sc.grid(grid);
            const auto r = duality::reconstruct_dual(sc.field(field).u, sc.metric, spec,
                                                     parse_point(basepoint), opts);
            Json diag = serialize::to_json(r);
            diag["roundtrip_err"] = duality::roundtrip_check(sc.field(field).u, sc.metric, spec, r);
            if (!output.path.empty()) write_atomic(output.path, grid_text(r.values, output.json()));
            out << diag.dump(2) << "\n";
        } else if (length->parsed()) {
            const auto& c = sc.curve(curve);
            completeness::LengthOptions opts;
            if (tol > 0) opts.tol = tol;
            const auto r = completeness::curve_length(sc.surface(c.field), c.curve, opts);
            if (as_json) {
                out << serialize::to_json(r).dump(2) << "\n";
            } else {
                char line[64];
                std::snprintf(line, sizeof line, "%s%.7f\n", r.converged ? "" : ">= ", r.length);
                out << line;
            }
        } else if (scan->parsed()) {
            const auto& spec = sc.grid(grid);
            std::vector<Point> samples;
            for (int j = 0; j < spec.ny; ++j)
                for (int i = 0; i < spec.nx; ++i) samples.push_back(spec.node(i, j));
            const auto r = completeness::metric_ratio_scan(sc.surface(field), sc.metric, samples);
            out << serialize::to_json(r).dump(2) << "\n";
        } else if (solve->parsed()) {
            auto p = sc.dirichlet(problem);
            p.eps_space = eps_space;
            p.max_iterations = max_iter;
            const auto sol = solver::solve_dirichlet(p, tol > 0 ? tol : 1e-10);
            Json rep = serialize::to_json(sol.report);
            if (const auto& exact = sc.problem(problem).exact) {
                const ScalarField ref = sc.field(*exact).u;
                double e = 0.0;
                for (int j = 0; j < p.grid.ny; ++j)
                    for (int i = 0; i < p.grid.nx; ++i)
                        e = std::max(e, std::abs(sol.u.at(i, j) - ref.value(p.grid.node(i, j))));
                rep["sup_error"] = e;
            }
            if (!output.path.empty()) write_atomic(output.path, grid_text(sol.u, output.json()));
            out << rep.dump(2) << "\n";
        } else if (sample->parsed()) {
            const ScalarField u = sc.field(field).u;
            const Grid2D g = Grid2D::sample(sc.grid(grid), [&](const Point& p) { return u.value(p); });
            emit(out, output.path, grid_text(g, output.json()));
        }
        return 0;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace maxgraph::cli
