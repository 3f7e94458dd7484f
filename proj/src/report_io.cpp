#include "leo/simulator.hpp"

#include <json.hpp>

#include <charconv>
#include <ostream>
#include <string>

namespace leo::sim {

namespace {

// to_chars ignores the stream's locale, so no grouping or ',' decimals.
template <typename T>
std::string num(T v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

nlohmann::ordered_json breakdown_json(const offload::DelayBreakdown& b) {
    return {{"isl_tx_s", b.isl_tx}, {"sgl_tx_s", b.sgl_tx}, {"compute_s", b.compute}};
}

}  // namespace

void write_tasks_csv(std::ostream& out, const MetricsReport& report) {
    out << "task_id,gen_time_s,src_lat_deg,src_lon_deg,destination,N_bits,C_gflo,N_out_bits,scheme,"
           "compute_node,compute_site,isl_tx_s,sgl_tx_s,compute_s,overall_delay_s\n";
    for (const auto& [task, plan] : report.records) {
        out << num(task.id) << ',' << num(task.gen_time) << ',' << num(task.source.lat_deg) << ','
            << num(task.source.lon_deg) << ',' << num(task.destination) << ',' << num(task.data_in_bits) << ','
            << num(task.compute_gflo) << ',' << num(task.data_out_bits) << ',' << offload::to_string(plan.scheme)
            << ',' << num(plan.compute_node) << ',' << offload::to_string(plan.site) << ',' << num(plan.breakdown.isl_tx)
            << ',' << num(plan.breakdown.sgl_tx) << ',' << num(plan.breakdown.compute) << ','
            << num(plan.overall_delay) << '\n';
    }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "N_bits,C_gflo,scheme,mean_delay_s,argmin_scheme,ground_share,onehop_share,beyond_share,dropped\n";
    for (const auto& r : rows) {
        out << num(r.n_bits) << ',' << num(r.c_gflo) << ',' << offload::to_string(r.scheme) << ','
            << num(r.mean_delay_s) << ',' << offload::to_string(r.argmin) << ',' << num(r.site_share[0]) << ','
            << num(r.site_share[1]) << ',' << num(r.site_share[2]) << ',' << num(r.dropped) << '\n';
    }
}

void write_table_csv(std::ostream& out, const std::vector<PlatformRow>& rows) {
    out << "capability_gflops,impr_vs_ground_pct,impr_vs_onehop_pct,adaptive_s,ground_s,onehop_s\n";
    for (const auto& r : rows) {
        out << num(r.capability_gflops) << ',' << num(r.impr_vs_ground_pct()) << ',' << num(r.impr_vs_onehop_pct())
            << ',' << num(r.adaptive_s) << ',' << num(r.ground_s) << ',' << num(r.onehop_s) << '\n';
    }
}

void write_report_json(std::ostream& out, const MetricsReport& report) {
    nlohmann::ordered_json j;
    j["scheme"] = offload::to_string(report.scheme);
    j["num_tasks"] = report.num_tasks();
    j["completed"] = report.records.size();
    j["dropped"] = report.dropped;
    j["mean_delay_s"] = report.mean_delay_s;
    j["mean_breakdown"] = breakdown_json(report.mean_breakdown);
    j["site_counts"] = {{"ground", report.site_counts[0]},
                        {"onehop", report.site_counts[1]},
                        {"beyond", report.site_counts[2]}};
    auto& tasks = j["tasks"] = nlohmann::ordered_json::array();
    for (const auto& [task, plan] : report.records) {
        tasks.push_back({{"task_id", task.id},
                         {"gen_time_s", task.gen_time},
                         {"source", {{"lat_deg", task.source.lat_deg}, {"lon_deg", task.source.lon_deg}}},
                         {"destination", task.destination},
                         {"compute_node", plan.compute_node},
                         {"compute_site", offload::to_string(plan.site)},
                         {"path_hops", plan.path.num_edges()},
                         {"breakdown", breakdown_json(plan.breakdown)},
                         {"overall_delay_s", plan.overall_delay}});
    }
    out << j.dump(2) << '\n';
}

}  // namespace leo::sim
