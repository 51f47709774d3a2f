#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <doctest.h>

#include "droplets/config.hpp"
#include "droplets/harness.hpp"
#include "droplets/io.hpp"
#include "droplets/shapes.hpp"

using namespace droplets;
namespace fs = std::filesystem;

namespace {

struct TmpDir {
    fs::path path;
    TmpDir() {
        path = fs::temp_directory_path() /
               ("droplets_test_" + std::to_string(std::rand()));
        fs::create_directories(path);
    }
    ~TmpDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

ExperimentPlan small_plan() {
    ExperimentPlan plan;
    plan.shape = ShapeSpec::disk(0.35, {}, 256);
    plan.Ls = {32, 64};
    plan.seeds = 3;
    plan.base_seed = 17;
    plan.eta = 0.08;
    plan.checkpoints = {0.05, 0.1};
    plan.flow_samples = 256;
    return plan;
}

} // namespace

TEST_CASE("double formatting round-trips exactly") {
    for (double v : {0.1, 1.0 / 3.0, 2.5e-17, -3.14159265358979, 1e300, 0.0})
        CHECK(parse_double(format_double(v)) == v);
}

TEST_CASE("curve snapshot files round-trip bit-exactly") {
    TmpDir tmp;
    MarkerCurve c = ShapeSpec::star(0.5, 0.2, 6, {0.1, -0.2}, 128).make_curve();
    write_curve_snapshot(tmp.file("a.curve"), c, 0.0625);
    CurveSnapshot snap = read_curve_snapshot(tmp.file("a.curve"));
    CHECK(snap.time == 0.0625);
    REQUIRE(snap.points.size() == c.size());
    auto th = c.tangent_angle();
    auto k = c.curvature();
    for (std::size_t i = 0; i < c.size(); ++i) {
        CHECK(snap.points[i].x == c.points()[i].x);
        CHECK(snap.points[i].y == c.points()[i].y);
        CHECK(snap.theta[i] == th[i]);
        CHECK(snap.k[i] == k[i]);
    }
    CHECK_THROWS(read_curve_snapshot(tmp.file("missing.curve")));
}

TEST_CASE("cell union files round-trip") {
    TmpDir tmp;
    Region reg = Region::cell_union(64, {{3, 4}, {-2, 7}, {3, 5}});
    write_cell_union(tmp.file("d.cells"), reg);
    Region back = read_cell_union(tmp.file("d.cells"));
    CHECK(hausdorff(reg, back) == 0.0);
    CHECK(back.contains({3.0 / 64, 4.0 / 64}));
    CHECK_FALSE(back.contains({0.0, 0.0}));
}

TEST_CASE("key-value files round-trip and sort their keys") {
    TmpDir tmp;
    KeyValueMap kv{{"zeta", "1"}, {"alpha", format_double(0.1)}, {"mid", "x y"}};
    write_key_values(tmp.file("m.txt"), kv);
    CHECK(read_key_values(tmp.file("m.txt")) == kv);
}

TEST_CASE("config files parse, echo and reject junk") {
    TmpDir tmp;
    Config c;
    c.shape = "star:0.5,0.2,6";
    c.Ls = {64, 128};
    c.eta = 0.07;
    c.checkpoints = {0.1, 0.2};
    write_key_values(tmp.file("run.cfg"), c.to_key_values());
    Config back = Config::from_file(tmp.file("run.cfg"));
    CHECK(back.to_key_values() == c.to_key_values());
    CHECK(back.shape_spec().kind == ShapeSpec::Kind::Star);
    CHECK(back.plan().eta == 0.07);

    KeyValueMap bad{{"no.such.key", "1"}};
    CHECK_THROWS_AS(Config::from_key_values(bad), ConfigError);
    KeyValueMap badval{{"compare.eta", "soon"}};
    CHECK_THROWS_AS(Config::from_key_values(badval), ConfigError);
    CHECK_THROWS_AS(Config::from_file(tmp.file("absent.cfg")), ConfigError);
}

TEST_CASE("list parsing") {
    CHECK(parse_double_list("0.1, 0.2,0.3") == std::vector<double>{0.1, 0.2, 0.3});
    CHECK(parse_int_list("64,128") == std::vector<int>{64, 128});
    CHECK_THROWS(parse_int_list("64,twelve"));
}

TEST_CASE("plan validation rejects inconsistent requests") {
    ExperimentPlan p = small_plan();
    CHECK_NOTHROW(p.validate());
    p.Ls = {};
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = small_plan();
    p.Ls = {8};
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = small_plan();
    p.seeds = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = small_plan();
    p.checkpoints = {0.2, 0.1}; // unsorted
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = small_plan();
    p.eta = -0.1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("experiment reports are deterministic and self-consistent") {
    ExperimentPlan plan = small_plan();
    ComparisonReport r1 = run_experiment(plan);
    ComparisonReport r2 = run_experiment(plan);
    CHECK(r1.to_csv() == r2.to_csv());
    CHECK(r1.to_json() == r2.to_json());
    CHECK(r1.hash == config_hash(plan.canonical()));

    // rows: one per (L, seed, checkpoint)
    CHECK(r1.rows.size() == plan.Ls.size() * plan.seeds * plan.checkpoints.size());
    CHECK(r1.aggregates.size() == plan.Ls.size());
    CHECK(r1.aggregates[0].L == 32);
    CHECK(r1.aggregates[1].L == 64);
    CHECK(r1.t_expected == doctest::Approx(0.35 * 0.35 * 3.14159265 / 2).epsilon(1e-2));
    for (const auto& agg : r1.aggregates) {
        CHECK(agg.seed_pass_fraction >= 0.0);
        CHECK(agg.seed_pass_fraction <= 1.0);
        CHECK(agg.mean_death_time > 0.5 * r1.t_expected);
        CHECK(agg.mean_death_time < 2.0 * r1.t_expected);
    }

    // a different base seed changes the rows but not the flow side
    ExperimentPlan other = plan;
    other.base_seed = 99;
    ComparisonReport r3 = run_experiment(other);
    CHECK(r3.t_expected == r1.t_expected);
    CHECK(r3.to_csv() != r1.to_csv());
}

TEST_CASE("csv round-trip reproduces the aggregates") {
    ComparisonReport r = run_experiment(small_plan());
    std::vector<CheckpointRow> rows = rows_from_csv(r.to_csv());
    REQUIRE(rows.size() == r.rows.size());
    std::vector<LAggregate> agg = aggregate_rows(rows, r.t_expected);
    REQUIRE(agg.size() == r.aggregates.size());
    for (std::size_t i = 0; i < agg.size(); ++i) {
        CHECK(agg[i].L == r.aggregates[i].L);
        CHECK(agg[i].seed_pass_fraction == r.aggregates[i].seed_pass_fraction);
        CHECK(agg[i].row_pass_fraction == r.aggregates[i].row_pass_fraction);
        CHECK(agg[i].mean_hausdorff ==
              doctest::Approx(r.aggregates[i].mean_hausdorff).epsilon(1e-12));
        CHECK(agg[i].mean_death_time ==
              doctest::Approx(r.aggregates[i].mean_death_time).epsilon(1e-12));
    }
}

TEST_CASE("convergence table orders by L and needs two of them") {
    ComparisonReport r = run_experiment(small_plan());
    ConvergenceTable tab = convergence_table(r);
    REQUIRE(tab.rows.size() == 2);
    CHECK(tab.rows[0].L == 32);
    CHECK(tab.rows[1].L == 64);
    CHECK(tab.rows[0].mean_max_hausdorff > 0.0);

    ExperimentPlan single = small_plan();
    single.Ls = {32};
    ComparisonReport rs = run_experiment(single);
    CHECK_THROWS_AS(convergence_table(rs), std::invalid_argument);
}
