#include "droplets/harness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "droplets/glauber.hpp"
#include "droplets/io.hpp"
#include "droplets/region.hpp"
#include "droplets/rng.hpp"

namespace droplets {

void ExperimentPlan::validate() const {
    if (Ls.empty()) throw std::invalid_argument("plan needs at least one L");
    for (int L : Ls)
        if (L < 16) throw std::invalid_argument("L must be >= 16");
    if (seeds < 1) throw std::invalid_argument("plan needs at least one seed");
    if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
    for (double t : checkpoints)
        if (t < 0.0) throw std::invalid_argument("checkpoints must be >= 0");
    if (!std::is_sorted(checkpoints.begin(), checkpoints.end()))
        throw std::invalid_argument("checkpoints must be sorted");
    if (flow_samples < 16) throw std::invalid_argument("flow_samples too small");
}

AnisotropyProfile ExperimentPlan::profile() const {
    switch (profile_kind) {
    case AnisotropyKind::Exact:
        return AnisotropyProfile::exact();
    case AnisotropyKind::Mollified:
        return AnisotropyProfile::mollified(omega);
    case AnisotropyKind::Constant:
        return AnisotropyProfile::constant(constant);
    }
    return AnisotropyProfile::exact();
}

std::string ExperimentPlan::canonical() const {
    std::ostringstream os;
    os << "shape=" << shape.describe() << ";samples=" << shape.samples
       << ";profile=" << int(profile_kind) << ";omega=" << format_double(omega)
       << ";constant=" << format_double(constant) << ";L=";
    for (int L : Ls) os << L << ",";
    os << ";seeds=" << seeds << ";base_seed=" << base_seed
       << ";eta=" << format_double(eta) << ";checkpoints=";
    for (double t : checkpoints) os << format_double(t) << ",";
    os << ";flow_samples=" << flow_samples << ";margin=" << window_margin;
    return os.str();
}

ComparisonReport run_experiment(const ExperimentPlan& plan) {
    plan.validate();

    ComparisonReport report;
    report.plan = plan;
    report.hash = config_hash(plan.canonical());

    // deterministic flow, computed once and shared across replicas
    ShapeSpec flow_shape = plan.shape;
    flow_shape.samples = plan.flow_samples;
    FlowParams fp;
    fp.omega = plan.omega;
    Trajectory traj =
        run_to_shrink(flow_shape, plan.profile(), fp, plan.checkpoints);
    report.t_expected = traj.t_observed;

    // eroded/dilated flow domains per checkpoint, shared read-only
    const std::size_t ncp = plan.checkpoints.size();
    std::vector<Region> d_inner, d_outer, d_exact;
    d_inner.reserve(ncp);
    d_outer.reserve(ncp);
    d_exact.reserve(ncp);
    for (std::size_t c = 0; c < ncp; ++c) {
        Region dom = snapshot_domain(traj.snapshots[c]);
        d_exact.push_back(dom);
        d_inner.push_back(dilate_erode(dom, -plan.eta));
        d_outer.push_back(dilate_erode(dom, +plan.eta));
    }

    const std::size_t nl = plan.Ls.size();
    const std::size_t per_pair = std::max<std::size_t>(ncp, 1);
    report.rows.assign(nl * std::size_t(plan.seeds) * per_pair, CheckpointRow{});

    Region initial = Region::from_curve(plan.shape.make_curve());

#pragma omp parallel for collapse(2) schedule(dynamic)
    for (long li = 0; li < long(nl); ++li) {
        for (long s = 0; s < long(plan.seeds); ++s) {
            int L = plan.Ls[std::size_t(li)];
            RngStream rng(plan.base_seed,
                          uint64_t(li) * uint64_t(plan.seeds) + uint64_t(s));
            SpinLattice lat =
                SpinLattice::init_from_region(L, initial, plan.window_margin);
            std::size_t base =
                (std::size_t(li) * std::size_t(plan.seeds) + std::size_t(s)) * per_pair;

            for (std::size_t c = 0; c < ncp; ++c) {
                CheckpointRow& row = report.rows[base + c];
                row.L = L;
                row.seed_index = int(s);
                row.t = plan.checkpoints[c];
                lat.advance(rng, plan.checkpoints[c] * double(L) * double(L));
                Region drop = lat.droplet();
                row.droplet_empty = drop.is_empty();
                if (!row.droplet_empty) {
                    row.hausdorff = hausdorff(drop, d_exact[c]);
                    row.outer_ok = inclusion_check(drop, d_outer[c]).holds;
                } else {
                    row.hausdorff = -1.0;
                    row.outer_ok = true; // empty set is inside anything
                }
                row.inner_ok = inclusion_check(d_inner[c], drop).holds;
            }

            double cap = 10.0 * double(L) * double(L) * (report.t_expected + 1.0);
            double death = lat.death_time(rng, cap) / (double(L) * double(L));
            if (ncp == 0) {
                CheckpointRow& row = report.rows[base];
                row.L = L;
                row.seed_index = int(s);
                row.t = -1.0;
                row.hausdorff = -1.0;
                row.inner_ok = row.outer_ok = true;
                row.droplet_empty = true;
            }
            for (std::size_t c = 0; c < per_pair; ++c)
                report.rows[base + c].death_time_diffusive = death;
        }
    }

    report.aggregates = aggregate_rows(report.rows, report.t_expected);
    return report;
}

std::vector<LAggregate> aggregate_rows(const std::vector<CheckpointRow>& rows,
                                       double t_expected) {
    std::vector<int> ls;
    for (const auto& r : rows)
        if (std::find(ls.begin(), ls.end(), r.L) == ls.end()) ls.push_back(r.L);
    std::sort(ls.begin(), ls.end());

    std::vector<LAggregate> out;
    for (int L : ls) {
        LAggregate agg;
        agg.L = L;
        std::size_t nrows = 0, npass = 0, nh = 0;
        double hsum = 0.0;
        // per-seed all-checkpoints pass
        std::vector<int> seen, failed;
        double dsum = 0.0;
        std::vector<int> death_seen;
        for (const auto& r : rows) {
            if (r.L != L) continue;
            ++nrows;
            bool pass = r.inner_ok && r.outer_ok;
            if (pass) ++npass;
            if (r.hausdorff >= 0.0) {
                hsum += r.hausdorff;
                ++nh;
            }
            if (std::find(seen.begin(), seen.end(), r.seed_index) == seen.end())
                seen.push_back(r.seed_index);
            if (!pass &&
                std::find(failed.begin(), failed.end(), r.seed_index) == failed.end())
                failed.push_back(r.seed_index);
            if (std::find(death_seen.begin(), death_seen.end(), r.seed_index) ==
                death_seen.end()) {
                death_seen.push_back(r.seed_index);
                dsum += r.death_time_diffusive;
            }
        }
        agg.row_pass_fraction = nrows ? double(npass) / double(nrows) : 1.0;
        agg.seed_pass_fraction =
            seen.empty() ? 1.0
                         : double(seen.size() - failed.size()) / double(seen.size());
        agg.mean_hausdorff = nh ? hsum / double(nh) : 0.0;
        agg.mean_death_time = death_seen.empty() ? 0.0 : dsum / double(death_seen.size());
        agg.death_time_error = std::abs(agg.mean_death_time - t_expected);
        out.push_back(agg);
    }
    return out;
}

std::string ComparisonReport::to_csv() const {
    std::ostringstream os;
    os << "L,seed,t,hausdorff,inner_ok,outer_ok,droplet_empty,death_time\n";
    for (const auto& r : rows)
        os << r.L << ',' << r.seed_index << ',' << format_double(r.t) << ','
           << format_double(r.hausdorff) << ',' << int(r.inner_ok) << ','
           << int(r.outer_ok) << ',' << int(r.droplet_empty) << ','
           << format_double(r.death_time_diffusive) << '\n';
    return os.str();
}

std::vector<CheckpointRow> rows_from_csv(const std::string& csv) {
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line); // header
    std::vector<CheckpointRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::string tok;
        std::vector<std::string> f;
        while (std::getline(ls, tok, ',')) f.push_back(tok);
        if (f.size() != 8) throw std::runtime_error("bad CSV row: " + line);
        CheckpointRow r;
        r.L = std::stoi(f[0]);
        r.seed_index = std::stoi(f[1]);
        r.t = parse_double(f[2]);
        r.hausdorff = parse_double(f[3]);
        r.inner_ok = f[4] == "1";
        r.outer_ok = f[5] == "1";
        r.droplet_empty = f[6] == "1";
        r.death_time_diffusive = parse_double(f[7]);
        rows.push_back(r);
    }
    return rows;
}

std::string ComparisonReport::to_json() const {
    nlohmann::json j;
    j["config"] = plan.canonical();
    j["config_hash"] = hash;
    j["t_expected"] = t_expected;
    j["whp_threshold"] = plan.whp_threshold;
    for (const auto& a : aggregates) {
        nlohmann::json ja;
        ja["L"] = a.L;
        ja["seed_pass_fraction"] = a.seed_pass_fraction;
        ja["row_pass_fraction"] = a.row_pass_fraction;
        ja["mean_hausdorff"] = a.mean_hausdorff;
        ja["mean_death_time"] = a.mean_death_time;
        ja["death_time_error"] = a.death_time_error;
        j["aggregates"].push_back(ja);
    }
    return j.dump(2);
}

ConvergenceTable convergence_table(const ComparisonReport& report) {
    std::vector<int> ls;
    for (const auto& a : report.aggregates) ls.push_back(a.L);
    if (ls.size() < 2)
        throw std::invalid_argument("convergence table needs >= 2 values of L");

    ConvergenceTable table;
    for (int L : ls) {
        ConvergenceRow row;
        row.L = L;
        // mean over seeds of the max-over-checkpoints hausdorff
        std::vector<double> seed_max;
        std::vector<int> seed_ids;
        for (const auto& r : report.rows) {
            if (r.L != L || r.hausdorff < 0.0) continue;
            auto it = std::find(seed_ids.begin(), seed_ids.end(), r.seed_index);
            if (it == seed_ids.end()) {
                seed_ids.push_back(r.seed_index);
                seed_max.push_back(r.hausdorff);
            } else {
                std::size_t k = std::size_t(it - seed_ids.begin());
                seed_max[k] = std::max(seed_max[k], r.hausdorff);
            }
        }
        double sum = 0.0;
        for (double v : seed_max) sum += v;
        row.mean_max_hausdorff = seed_max.empty() ? 0.0 : sum / double(seed_max.size());
        for (const auto& a : report.aggregates)
            if (a.L == L) row.death_time_error = a.death_time_error;
        table.rows.push_back(row);
    }
    table.hausdorff_monotone = true;
    for (std::size_t i = 1; i < table.rows.size(); ++i)
        if (table.rows[i].mean_max_hausdorff > table.rows[i - 1].mean_max_hausdorff)
            table.hausdorff_monotone = false;
    return table;
}

} // namespace droplets
