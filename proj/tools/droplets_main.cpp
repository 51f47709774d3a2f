// Command-line front end: shape generation, deterministic flow runs,
// stochastic lattice runs, flow-vs-droplet comparison experiments and report
// re-aggregation. Exit codes: 0 success, 2 config error, 3 runtime failure.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "droplets/config.hpp"
#include "droplets/flow.hpp"
#include "droplets/glauber.hpp"
#include "droplets/harness.hpp"
#include "droplets/io.hpp"

namespace fs = std::filesystem;
using namespace droplets;

namespace {

struct CommonFlags {
    std::string config_path;
    std::string shape;
    std::size_t samples = 0;
    std::string anisotropy;
    double omega = -1.0;
    double constant = -1.0;
    std::string checkpoints;
    std::string out;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "key=value config file");
    cmd->add_option("--shape", f.shape, "disk:r | ellipse:a,b | star:R,eps,m | poly:file");
    cmd->add_option("--n", f.samples, "marker count");
    cmd->add_option("--anisotropy", f.anisotropy, "exact | mollified | constant");
    cmd->add_option("--omega", f.omega, "mollification width");
    cmd->add_option("--constant", f.constant, "constant-mode speed");
    cmd->add_option("--checkpoints", f.checkpoints, "comma list of diffusive times");
    cmd->add_option("--out", f.out, "output directory");
}

// file values first, then flag overrides
Config resolve(const CommonFlags& f) {
    Config c = f.config_path.empty() ? Config{} : Config::from_file(f.config_path);
    if (!f.shape.empty()) c.shape = f.shape;
    if (f.samples > 0) c.samples = f.samples;
    if (!f.anisotropy.empty()) c.anisotropy_kind = f.anisotropy;
    if (f.omega >= 0.0) c.omega = f.omega;
    if (f.constant >= 0.0) c.constant = f.constant;
    if (!f.checkpoints.empty()) c.checkpoints = parse_double_list(f.checkpoints);
    if (!f.out.empty()) c.out_dir = f.out;
    return c;
}

void echo_config(const Config& c, const std::string& path) {
    write_key_values(path, c.to_key_values());
}

int cmd_shapes(const Config& c) {
    fs::create_directories(c.out_dir);
    MarkerCurve curve = c.shape_spec().make_curve();
    std::string path = c.out_dir + "/shape.curve";
    write_curve_snapshot(path, curve, 0.0);
    echo_config(c, c.out_dir + "/config.echo");
    std::cout << "wrote " << path << " (" << curve.size() << " markers, area "
              << curve.area() << ")\n";
    return 0;
}

int cmd_flow(const Config& c) {
    fs::create_directories(c.out_dir);
    FlowParams params;
    params.omega = c.omega;
    Trajectory traj = run_to_shrink(c.shape_spec(), c.profile(), params,
                                    c.checkpoints);
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        const auto& s = traj.snapshots[i];
        if (!s.curve) continue;
        write_curve_snapshot(c.out_dir + "/curve_" + std::to_string(i) + ".curve",
                             *s.curve, s.t);
    }
    KeyValueMap meta;
    meta["profile"] = c.anisotropy_kind;
    meta["omega"] = format_double(traj.omega);
    meta["samples"] = std::to_string(traj.samples);
    meta["dt_policy"] = "explicit, dt = 0.4 * min(ds)^2 / a_max";
    meta["T_observed"] = format_double(traj.t_observed);
    meta["X.x"] = format_double(traj.center.x);
    meta["X.y"] = format_double(traj.center.y);
    meta["total_integral"] = format_double(traj.total_integral);
    write_key_values(c.out_dir + "/metadata.txt", meta);
    echo_config(c, c.out_dir + "/config.echo");
    std::cout << "T_observed = " << traj.t_observed << ", X = (" << traj.center.x
              << ", " << traj.center.y << ")\n";
    return 0;
}

int cmd_glauber(const Config& c) {
    fs::create_directories(c.out_dir);
    Region initial = Region::from_curve(c.shape_spec().make_curve());
    SpinLattice lat = SpinLattice::init_from_region(c.L, initial, c.margin);
    RngStream rng(c.seed, 0);
    double l2 = double(c.L) * double(c.L);
    for (std::size_t i = 0; i < c.checkpoints.size(); ++i) {
        lat.advance(rng, c.checkpoints[i] * l2);
        write_cell_union(c.out_dir + "/droplet_" + std::to_string(i) + ".cells",
                         lat.droplet());
    }
    double area0 = initial.area_estimate();
    double death = lat.death_time(rng, 10.0 * l2 * (area0 / 2.0 + 1.0));
    KeyValueMap meta;
    meta["L"] = std::to_string(c.L);
    meta["seed"] = std::to_string(c.seed);
    meta["death_time_micro"] = format_double(death);
    meta["death_time_diffusive"] = format_double(death / l2);
    write_key_values(c.out_dir + "/metadata.txt", meta);
    echo_config(c, c.out_dir + "/config.echo");
    std::cout << "death_time / L^2 = " << death / l2 << "\n";
    return 0;
}

int cmd_compare(const Config& c, bool emit_plot_data) {
    fs::create_directories(c.out_dir);
    ComparisonReport report = run_experiment(c.plan());
    std::string base = c.out_dir + "/report_" + report.hash;
    {
        std::ofstream f(base + ".csv");
        f << report.to_csv();
    }
    {
        std::ofstream f(base + ".json");
        f << report.to_json() << "\n";
    }
    if (emit_plot_data) {
        ShapeSpec fshape = c.shape_spec();
        fshape.samples = c.flow_samples;
        FlowParams params;
        params.omega = c.omega;
        Trajectory traj = run_to_shrink(fshape, c.profile(), params, c.checkpoints);
        for (std::size_t i = 0; i < traj.snapshots.size(); ++i)
            if (traj.snapshots[i].curve)
                write_curve_snapshot(c.out_dir + "/plot_boundary_" +
                                         std::to_string(i) + ".curve",
                                     *traj.snapshots[i].curve,
                                     traj.snapshots[i].t);
    }
    echo_config(c, c.out_dir + "/config.echo");
    for (const auto& a : report.aggregates)
        std::cout << "L=" << a.L << " seed_pass=" << a.seed_pass_fraction
                  << " mean_hausdorff=" << a.mean_hausdorff
                  << " death_err=" << a.death_time_error << "\n";
    return 0;
}

int cmd_report(const std::string& csv_path, double t_expected,
               const std::string& out_dir) {
    fs::create_directories(out_dir);
    std::ifstream f(csv_path);
    if (!f) throw std::runtime_error("cannot open " + csv_path);
    std::string csv((std::istreambuf_iterator<char>(f)),
                    std::istreambuf_iterator<char>());
    auto rows = rows_from_csv(csv);
    auto aggs = aggregate_rows(rows, t_expected);
    std::ofstream o(out_dir + "/reaggregated.json");
    o << "{\n  \"t_expected\": " << format_double(t_expected)
      << ",\n  \"aggregates\": [\n";
    for (std::size_t i = 0; i < aggs.size(); ++i) {
        const auto& a = aggs[i];
        o << "    {\"L\": " << a.L
          << ", \"seed_pass_fraction\": " << format_double(a.seed_pass_fraction)
          << ", \"mean_hausdorff\": " << format_double(a.mean_hausdorff)
          << ", \"mean_death_time\": " << format_double(a.mean_death_time)
          << ", \"death_time_error\": " << format_double(a.death_time_error) << "}"
          << (i + 1 < aggs.size() ? "," : "") << "\n";
    }
    o << "  ]\n}\n";
    std::cout << "wrote " << out_dir << "/reaggregated.json\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ising droplet vs anisotropic curve-shortening flow"};
    app.require_subcommand(1);

    CommonFlags shapes_f, flow_f, glauber_f, compare_f;
    auto* shapes_cmd = app.add_subcommand("shapes", "generate a shape boundary file");
    add_common(shapes_cmd, shapes_f);
    auto* flow_cmd = app.add_subcommand("flow", "run the deterministic flow to shrink");
    add_common(flow_cmd, flow_f);

    auto* glauber_cmd = app.add_subcommand("glauber", "run the stochastic lattice");
    add_common(glauber_cmd, glauber_f);
    int gl_L = 0;
    uint64_t gl_seed = uint64_t(-1);
    int gl_margin = -1;
    glauber_cmd->add_option("--L", gl_L, "lattice scale (>= 16)");
    glauber_cmd->add_option("--seed", gl_seed, "rng seed");
    glauber_cmd->add_option("--margin", gl_margin, "window margin in sites");

    auto* compare_cmd = app.add_subcommand("compare", "flow vs droplet experiment");
    add_common(compare_cmd, compare_f);
    std::string cmp_Ls;
    int cmp_seeds = 0;
    double cmp_eta = -1.0;
    uint64_t cmp_seed = uint64_t(-1);
    bool emit_plot_data = false;
    compare_cmd->add_option("--L", cmp_Ls, "comma list of lattice scales");
    compare_cmd->add_option("--seeds", cmp_seeds, "replicas per L");
    compare_cmd->add_option("--eta", cmp_eta, "sandwich margin");
    compare_cmd->add_option("--seed", cmp_seed, "base rng seed");
    compare_cmd->add_flag("--emit-plot-data", emit_plot_data,
                          "also write per-checkpoint boundary polylines");

    auto* report_cmd = app.add_subcommand("report", "re-aggregate an existing CSV");
    std::string report_csv, report_out = "out";
    double report_t = 0.0;
    report_cmd->add_option("--csv", report_csv, "rows CSV")->required();
    report_cmd->add_option("--t-expected", report_t, "flow shrink time");
    report_cmd->add_option("--out", report_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (shapes_cmd->parsed()) return cmd_shapes(resolve(shapes_f));
        if (flow_cmd->parsed()) return cmd_flow(resolve(flow_f));
        if (glauber_cmd->parsed()) {
            Config c = resolve(glauber_f);
            if (gl_L > 0) c.L = gl_L;
            if (gl_seed != uint64_t(-1)) c.seed = gl_seed;
            if (gl_margin >= 0) c.margin = gl_margin;
            if (c.L < 16) throw ConfigError("glauber.L must be >= 16");
            return cmd_glauber(c);
        }
        if (compare_cmd->parsed()) {
            Config c = resolve(compare_f);
            if (!cmp_Ls.empty()) c.Ls = parse_int_list(cmp_Ls);
            if (cmp_seeds > 0) c.seeds = cmp_seeds;
            if (cmp_eta >= 0.0) c.eta = cmp_eta;
            if (cmp_seed != uint64_t(-1)) c.seed = cmp_seed;
            if (c.Ls.empty()) throw ConfigError("compare.L list must not be empty");
            return cmd_compare(c, emit_plot_data);
        }
        if (report_cmd->parsed()) return cmd_report(report_csv, report_t, report_out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "runtime failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
