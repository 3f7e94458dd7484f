#include "leo/cli.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace leo::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr double kGbps = 1e9;

// Walks one JSON object, remembering which keys were consumed so anything
// left over can be reported as unknown.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(where() + ": expected an object");
    }

    [[nodiscard]] bool has(const char* key) const { return j_.contains(key); }

    template <typename T>
    void read(const char* key, T& dst) {
        const json* v = take(key);
        if (!v) return;
        if constexpr (std::is_same_v<T, bool>) {
            if (!v->is_boolean()) fail(key, "expected true or false");
            dst = v->get<bool>();
        } else if constexpr (std::is_integral_v<T>) {
            if (!v->is_number_integer()) fail(key, "expected an integer");
            if constexpr (std::is_unsigned_v<T>) {
                if (v->is_number_unsigned()) {
                    dst = v->get<T>();
                } else {
                    fail(key, "expected a nonnegative integer");
                }
            } else {
                dst = v->get<T>();
            }
        } else {
            if (!v->is_number()) fail(key, "expected a number");
            dst = v->get<double>();
        }
    }

    // `key` is in display units (value * scale = internal); `base_key` gives
    // the internal unit directly, for values no display decimal can hit.
    void read_scaled(const char* key, const char* base_key, double& dst, double scale) {
        if (has(key) && has(base_key)) fail(key, (std::string("conflicts with ") + where(base_key)).c_str());
        if (has(base_key)) {
            read(base_key, dst);
        } else if (has(key)) {
            double value = 0.0;
            read(key, value);
            dst = value * scale;
        }
    }

    void read_scheme(const char* key, offload::Scheme& dst) {
        const json* v = take(key);
        if (!v) return;
        if (!v->is_string()) fail(key, "expected a string");
        const auto s = offload::parse_scheme(v->get<std::string>());
        if (!s) fail(key, "expected adaptive, ground or onehop");
        dst = *s;
    }

    template <typename T, typename Fn>
    void read_list(const char* key, std::vector<T>& dst, Fn parse_item) {
        const json* v = take(key);
        if (!v) return;
        if (!v->is_array()) fail(key, "expected an array");
        dst.clear();
        for (std::size_t i = 0; i < v->size(); ++i) {
            Section item((*v)[i], where(key) + "[" + std::to_string(i) + "]");
            T out{};
            parse_item(item, out);
            item.finish();
            dst.push_back(out);
        }
    }

    template <typename Fn>
    void read_section(const char* key, Fn parse) {
        const json* v = take(key);
        if (!v) return;
        Section sub(*v, where(key));
        parse(sub);
        sub.finish();
    }

    void finish() const {
        for (const auto& [key, value] : j_.items()) {
            if (!seen_.count(key)) throw ConfigError("unknown key '" + where(key.c_str()) + "'");
        }
    }

private:
    const json* take(const char* key) {
        seen_.insert(key);
        const auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    [[noreturn]] void fail(const char* key, const std::string& what) const {
        throw ConfigError(where(key) + ": " + what);
    }

    [[nodiscard]] std::string where() const { return path_.empty() ? "<root>" : path_; }
    [[nodiscard]] std::string where(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

// Writes value / scale under `key` if multiplying back reproduces `value`
// exactly (an ulp of nudging allowed), else the raw value under `base_key`.
void put_scaled(ordered_json& j, const char* key, const char* base_key, double value, double scale) {
    const double x = value / scale;
    for (double candidate : {x, std::nextafter(x, -INFINITY), std::nextafter(x, INFINITY)}) {
        if (candidate * scale == value) {
            j[key] = candidate;
            return;
        }
    }
    j[base_key] = value;
}

// Validation errors use internal field names; report the file key instead.
std::string file_key(const std::string& message) {
    static const std::pair<const char*, const char*> names[] = {
        {"num_planes", "constellation.num_planes"},
        {"sats_per_plane", "constellation.sats_per_plane"},
        {"altitude_km", "constellation.altitude_km"},
        {"polar_cutoff_lat_deg", "constellation.polar_cutoff_lat_deg"},
        {"min_elevation_deg", "constellation.min_elevation_deg"},
        {"epoch_s", "constellation.epoch_s"},
        {"isl_rate_bps", "links.isl_rate_gbps"},
        {"sgl_rate_bps", "links.sgl_rate_gbps"},
        {"source_range_km", "links.source_range_km"},
        {"compute_gflops", "compute.capability_gflops"},
        {"background_load", "compute.background_load"},
        {"workload.data_in", "workload.data_in_gb"},
        {"workload.data_out", "workload.data_out_bits"},
    };
    for (const auto& [from, to] : names) {
        const auto n = std::char_traits<char>::length(from);
        if (message.compare(0, n, from) == 0 && (message[n] == ':' || message[n] == '[')) {
            return to + message.substr(n);
        }
    }
    return message;
}

}  // namespace

sim::Scenario parse_scenario(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }

    auto s = sim::default_scenario();
    Section top(root, "");
    top.read_section("constellation", [&](Section& c) {
        auto& cfg = s.network.constellation;
        c.read("num_planes", cfg.num_planes);
        c.read("sats_per_plane", cfg.sats_per_plane);
        c.read("altitude_km", cfg.altitude_km);
        c.read("polar_cutoff_lat_deg", cfg.polar_cutoff_lat_deg);
        c.read("min_elevation_deg", cfg.min_elevation_deg);
        c.read("epoch_s", cfg.epoch_s);
    });
    top.read_section("links", [&](Section& l) {
        l.read_scaled("isl_rate_gbps", "isl_rate_bps", s.network.isl_rate_bps, kGbps);
        l.read_scaled("sgl_rate_gbps", "sgl_rate_bps", s.network.sgl_rate_bps, kGbps);
        l.read("source_range_km", s.network.source_range_km);
    });
    top.read_section("compute", [&](Section& c) {
        c.read("capability_gflops", s.network.compute_gflops);
        c.read_list("background_load", s.network.background_load, [](Section& b, offload::BackgroundLoad& out) {
            b.read("lat_deg", out.lat_deg);
            b.read("lon_deg", out.lon_deg);
            b.read("radius_km", out.radius_km);
            b.read("utilization", out.utilization);
        });
    });
    top.read_list("ground_sites", s.network.ground_sites, [](Section& g, orbit::GroundNode& out) {
        g.read("lat_deg", out.lat_deg);
        g.read("lon_deg", out.lon_deg);
    });
    top.read_section("workload", [&](Section& w) {
        auto& wl = s.workload;
        w.read("arrival_rate", wl.arrival_rate);
        w.read("rate_unit_s", wl.rate_unit_s);
        w.read_list("regions", wl.regions, [](Section& r, sim::Region& out) {
            r.read("lat_min_deg", out.lat_min_deg);
            r.read("lat_max_deg", out.lat_max_deg);
            r.read("lon_min_deg", out.lon_min_deg);
            r.read("lon_max_deg", out.lon_max_deg);
            r.read("weight", out.weight);
        });
        w.read_scaled("data_in_gb", "data_in_bits", wl.data_in_bits, sim::kBitsPerGB);
        w.read("compute_gflo", wl.compute_gflo);
        w.read("data_out_bits", wl.data_out_bits);
        w.read("source_altitude_km", wl.source_altitude_km);
        w.read_list("probes", wl.probes, [](Section& p, sim::ProbeTask& out) {
            p.read("lat_deg", out.lat_deg);
            p.read("lon_deg", out.lon_deg);
            p.read("destination", out.destination);
            p.read("gen_time_s", out.gen_time_s);
        });
    });
    top.read_section("simulation", [&](Section& sim) {
        sim.read_scheme("scheme", s.scheme);
        sim.read("horizon_s", s.horizon_s);
        sim.read("seed", s.seed);
    });
    top.read_section("toggles", [&](Section& t) {
        t.read("propagation_delay", s.network.propagation_delay);
        t.read("earth_rotation", s.network.constellation.earth_rotation);
    });
    top.finish();

    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(file_key(e.what()));
    }
    return s;
}

sim::Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read scenario file '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario(text.str());
}

std::string dump_scenario(const sim::Scenario& s) {
    const auto& n = s.network;
    const auto& c = n.constellation;
    const auto& w = s.workload;
    ordered_json j;
    j["constellation"] = {{"num_planes", c.num_planes},
                          {"sats_per_plane", c.sats_per_plane},
                          {"altitude_km", c.altitude_km},
                          {"polar_cutoff_lat_deg", c.polar_cutoff_lat_deg},
                          {"min_elevation_deg", c.min_elevation_deg},
                          {"epoch_s", c.epoch_s}};
    auto& links = j["links"] = ordered_json::object();
    put_scaled(links, "isl_rate_gbps", "isl_rate_bps", n.isl_rate_bps, kGbps);
    put_scaled(links, "sgl_rate_gbps", "sgl_rate_bps", n.sgl_rate_bps, kGbps);
    links["source_range_km"] = n.source_range_km;
    auto loads = ordered_json::array();
    for (const auto& b : n.background_load) {
        loads.push_back(
            {{"lat_deg", b.lat_deg}, {"lon_deg", b.lon_deg}, {"radius_km", b.radius_km}, {"utilization", b.utilization}});
    }
    j["compute"] = {{"capability_gflops", n.compute_gflops}, {"background_load", loads}};
    auto sites = ordered_json::array();
    for (const auto& g : n.ground_sites) sites.push_back({{"lat_deg", g.lat_deg}, {"lon_deg", g.lon_deg}});
    j["ground_sites"] = sites;

    auto regions = ordered_json::array();
    for (const auto& r : w.regions) {
        regions.push_back({{"lat_min_deg", r.lat_min_deg},
                           {"lat_max_deg", r.lat_max_deg},
                           {"lon_min_deg", r.lon_min_deg},
                           {"lon_max_deg", r.lon_max_deg},
                           {"weight", r.weight}});
    }
    auto probes = ordered_json::array();
    for (const auto& p : w.probes) {
        probes.push_back({{"lat_deg", p.lat_deg},
                          {"lon_deg", p.lon_deg},
                          {"destination", p.destination},
                          {"gen_time_s", p.gen_time_s}});
    }
    auto& wl = j["workload"] = {{"arrival_rate", w.arrival_rate}, {"rate_unit_s", w.rate_unit_s}, {"regions", regions}};
    put_scaled(wl, "data_in_gb", "data_in_bits", w.data_in_bits, sim::kBitsPerGB);
    wl["compute_gflo"] = w.compute_gflo;
    wl["data_out_bits"] = w.data_out_bits;
    wl["source_altitude_km"] = w.source_altitude_km;
    wl["probes"] = probes;
    j["simulation"] = {{"scheme", offload::to_string(s.scheme)}, {"horizon_s", s.horizon_s}, {"seed", s.seed}};
    j["toggles"] = {{"propagation_delay", n.propagation_delay}, {"earth_rotation", c.earth_rotation}};
    return j.dump(2) + "\n";
}

std::vector<double> parse_grid(std::string_view spec) {
    auto number = [&](std::string_view text) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
            throw ConfigError("grid '" + std::string(spec) + "': '" + std::string(text) + "' is not a number");
        }
        return v;
    };
    auto split = [](std::string_view text, char sep) {
        std::vector<std::string_view> parts;
        std::size_t start = 0;
        for (;;) {
            const auto pos = text.find(sep, start);
            parts.push_back(text.substr(start, pos - start));
            if (pos == std::string_view::npos) break;
            start = pos + 1;
        }
        return parts;
    };

    if (spec.find(':') == std::string_view::npos) {
        std::vector<double> out;
        for (auto part : split(spec, ',')) out.push_back(number(part));
        return out;
    }
    const auto parts = split(spec, ':');
    const bool log = parts.size() == 4 && parts[3] == "log";
    if (parts.size() != 3 && !log) throw ConfigError("grid '" + std::string(spec) + "': expected lo:hi:count[:log]");
    const double lo = number(parts[0]);
    const double hi = number(parts[1]);
    const double count = number(parts[2]);
    if (count < 1 || count != std::floor(count) || count > 1e6) {
        throw ConfigError("grid '" + std::string(spec) + "': count must be a positive integer");
    }
    if (log && !(lo > 0.0 && hi > 0.0)) throw ConfigError("grid '" + std::string(spec) + "': log grid needs lo, hi > 0");
    const int k = static_cast<int>(count);
    std::vector<double> out;
    for (int i = 0; i < k; ++i) {
        const double f = k == 1 ? 0.0 : static_cast<double>(i) / (k - 1);
        out.push_back(log ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f);
    }
    if (k > 1) out.back() = hi;
    return out;
}

std::vector<sim::Scheme> parse_scheme_list(std::string_view spec) {
    std::vector<sim::Scheme> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = spec.find(',', start);
        const auto name = spec.substr(start, pos - start);
        const auto s = offload::parse_scheme(name);
        if (!s) throw ConfigError("unknown scheme '" + std::string(name) + "'");
        out.push_back(*s);
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace leo::cli
